// Copyright 2026 The mmfd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmfd/features.hpp"

#include <algorithm>
#include <cmath>

#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"
#include "strings.hpp"

namespace mmfd {
namespace {

// Seeded uniform [-1, 1] matrix, row-major rows x cols.
std::vector<double> projection_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t salt) {
  std::vector<double> m(rows * cols);
  const std::uint64_t base = splitmix64(seed ^ salt);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = 2.0 * unit_interval(splitmix64(base + (static_cast<std::uint64_t>(i) + 1) * kGoldenGamma)) - 1.0;
  }
  return m;
}

constexpr std::uint64_t kHistogramSalt = 0x68697374ULL;
constexpr std::uint64_t kMeanPixelSalt = 0x6d65616eULL;

void require_dim(std::size_t dim) {
  if (dim == 0) throw ConfigError("encoder output_dim must be positive");
}

}  // namespace

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::Text: return "Text";
    case Modality::Image: return "Image";
    case Modality::Social: return "Social";
  }
  return "Text";
}

HashTextEncoder::HashTextEncoder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) { require_dim(dim); }

std::vector<double> HashTextEncoder::encode(std::string_view text) const {
  std::vector<double> out(dim_, 0.0);
  const auto tokens = detail::split_whitespace(text);
  if (tokens.empty()) return out;
  for (auto token : tokens) {
    const std::uint64_t h = fnv1a64(token) ^ seed_;
    for (std::size_t j = 0; j < dim_; ++j) {
      out[j] += 2.0 * unit_interval(splitmix64(h + (static_cast<std::uint64_t>(j) + 1) * kGoldenGamma)) - 1.0;
    }
  }
  for (auto& v : out) v /= static_cast<double>(tokens.size());
  return out;
}

HistogramImageEncoder::HistogramImageEncoder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), projection_(projection_matrix(dim, 3 * kBinsPerChannel, seed, kHistogramSalt)) {
  require_dim(dim);
}

std::vector<double> HistogramImageEncoder::encode(const RgbImage& image) const {
  constexpr std::size_t kFeatures = 3 * kBinsPerChannel;
  std::vector<double> hist(kFeatures, 0.0);
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    for (std::size_t c = 0; c < 3; ++c) hist[c * kBinsPerChannel + px[i + c] * kBinsPerChannel / 256] += 1.0;
  }
  const double n = static_cast<double>(image.width() * image.height());
  for (auto& h : hist) h /= n;
  std::vector<double> out(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kFeatures; ++k) acc += projection_[j * kFeatures + k] * hist[k];
    out[j] = acc;
  }
  return out;
}

MeanPixelImageEncoder::MeanPixelImageEncoder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), projection_(projection_matrix(dim, 3, seed, kMeanPixelSalt)) {
  require_dim(dim);
}

std::vector<double> MeanPixelImageEncoder::encode(const RgbImage& image) const {
  double mean[3] = {0.0, 0.0, 0.0};
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    for (std::size_t c = 0; c < 3; ++c) mean[c] += px[i + c];
  }
  const double n = static_cast<double>(image.width() * image.height()) * 255.0;
  for (auto& m : mean) m /= n;
  std::vector<double> out(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    out[j] = projection_[j * 3] * mean[0] + projection_[j * 3 + 1] * mean[1] + projection_[j * 3 + 2] * mean[2];
  }
  return out;
}

EncoderRegistry EncoderRegistry::with_defaults() {
  EncoderRegistry r;
  r.register_text("hash", [](std::size_t dim, std::uint64_t seed) {
    return std::make_shared<const HashTextEncoder>(dim, seed);
  });
  r.register_image("histogram", [](std::size_t dim, std::uint64_t seed) {
    return std::make_shared<const HistogramImageEncoder>(dim, seed);
  });
  r.register_image("mean-pixel", [](std::size_t dim, std::uint64_t seed) {
    return std::make_shared<const MeanPixelImageEncoder>(dim, seed);
  });
  return r;
}

void EncoderRegistry::register_text(const std::string& name, TextFactory factory) {
  if (!text_.emplace(name, std::move(factory)).second) throw DuplicateName("text encoder already registered: " + name);
}

void EncoderRegistry::register_image(const std::string& name, ImageFactory factory) {
  if (!image_.emplace(name, std::move(factory)).second) {
    throw DuplicateName("image encoder already registered: " + name);
  }
}

std::shared_ptr<const TextEncoder> EncoderRegistry::make_text(const std::string& name, std::size_t dim,
                                                              std::uint64_t seed) const {
  auto it = text_.find(name);
  if (it == text_.end()) throw NotRegistered("unknown text encoder: " + name);
  return it->second(dim, seed);
}

std::shared_ptr<const ImageEncoder> EncoderRegistry::make_image(const std::string& name, std::size_t dim,
                                                                std::uint64_t seed) const {
  auto it = image_.find(name);
  if (it == image_.end()) throw NotRegistered("unknown image encoder: " + name);
  return it->second(dim, seed);
}

std::vector<double> encode_text(std::string_view cleaned_text, const TextEncoder& encoder) {
  std::vector<double> v;
  try {
    v = encoder.encode(cleaned_text);
  } catch (const std::exception& e) {
    throw EncoderFailure("text encoder '" + encoder.name() + "' failed: " + e.what());
  }
  if (v.size() != encoder.output_dim()) throw EncoderFailure("text encoder '" + encoder.name() + "' returned wrong length");
  for (double x : v) {
    if (!std::isfinite(x)) throw EncoderFailure("text encoder '" + encoder.name() + "' returned a non-finite value");
  }
  return v;
}

std::vector<double> encode_image(const RgbImage& image, const ImageEncoder& encoder) {
  std::vector<double> v;
  try {
    v = encoder.encode(image);
  } catch (const std::exception& e) {
    throw EncoderFailure("image encoder '" + encoder.name() + "' failed: " + e.what());
  }
  if (v.size() != encoder.output_dim()) {
    throw EncoderFailure("image encoder '" + encoder.name() + "' returned wrong length");
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw EncoderFailure("image encoder '" + encoder.name() + "' returned a non-finite value");
  }
  return v;
}

std::string compose_text_input(std::string_view cleaned_text, std::string_view cleaned_ocr_text) {
  std::string out(cleaned_text);
  if (!cleaned_ocr_text.empty()) {
    if (!out.empty()) out += ' ';
    out += "<ocr> ";
    out += cleaned_ocr_text;
  }
  return out;
}

// ---------------------------------------------------------------------------

SocialVectorSchema::SocialVectorSchema(std::vector<SocialField> fields, int version)
    : fields_(std::move(fields)), version_(version) {
  for (const auto& f : fields_) {
    if (f.width == 0) throw SchemaMismatch("social field '" + f.name + "' has zero width");
    total_dim_ += f.width;
  }
}

const SocialVectorSchema& SocialVectorSchema::standard() {
  static const SocialVectorSchema schema(
      {
          {"retweet_count", SocialFieldKind::Numeric, 1},
          {"favourite_count", SocialFieldKind::Numeric, 1},
          {"retweeted", SocialFieldKind::Boolean, 1},
          {"followers_count", SocialFieldKind::Numeric, 1},
          {"favorites_count", SocialFieldKind::Numeric, 1},
          {"friends_count", SocialFieldKind::Numeric, 1},
          {"verified", SocialFieldKind::Boolean, 1},
          {"statuses_count", SocialFieldKind::Numeric, 1},
          {"gender", SocialFieldKind::OneHot, 3},
          {"bot_score", SocialFieldKind::Numeric, 1},
          {"bot_score_present", SocialFieldKind::Boolean, 1},
          {"popular", SocialFieldKind::Boolean, 1},
          {"account_age_days", SocialFieldKind::Numeric, 1},
          {"object_text_similarity", SocialFieldKind::Numeric, 1},
          {"object_text_similarity_present", SocialFieldKind::Boolean, 1},
      },
      kVersion);
  return schema;
}

std::size_t SocialVectorSchema::offset_of(std::string_view name) const {
  std::size_t offset = 0;
  for (const auto& f : fields_) {
    if (f.name == name) return offset;
    offset += f.width;
  }
  throw SchemaMismatch("social schema has no field '" + std::string(name) + "'");
}

bool SocialVectorSchema::is_numeric_column(std::size_t column) const {
  std::size_t offset = 0;
  for (const auto& f : fields_) {
    if (column < offset + f.width) return f.kind == SocialFieldKind::Numeric;
    offset += f.width;
  }
  throw SchemaMismatch("column " + std::to_string(column) + " outside social schema");
}

std::vector<double> build_social_vector(const TweetRecord& rec, const EnrichmentRecord& enr,
                                        const SocialVectorSchema& schema) {
  if (!(schema == SocialVectorSchema::standard())) {
    throw SchemaMismatch("social vector builder supports only the standard schema v" +
                         std::to_string(SocialVectorSchema::kVersion));
  }
  if (rec.tweet_id != enr.tweet_id) {
    throw SchemaMismatch("record '" + rec.tweet_id + "' paired with enrichment '" + enr.tweet_id + "'");
  }
  auto flag = [](bool b) { return b ? 1.0 : 0.0; };
  std::vector<double> v;
  v.reserve(schema.total_dim());
  v.push_back(static_cast<double>(rec.retweet_count));
  v.push_back(static_cast<double>(rec.favourite_count));
  v.push_back(flag(rec.retweeted));
  v.push_back(static_cast<double>(rec.user.followers_count));
  v.push_back(static_cast<double>(rec.user.favorites_count));
  v.push_back(static_cast<double>(rec.user.friends_count));
  v.push_back(flag(rec.user.verified));
  v.push_back(static_cast<double>(rec.user.statuses_count));
  v.push_back(flag(enr.gender == Gender::Male));
  v.push_back(flag(enr.gender == Gender::Female));
  v.push_back(flag(enr.gender == Gender::Undetermined));
  v.push_back(enr.bot_score.value_or(0.0));
  v.push_back(flag(enr.bot_score.has_value()));
  v.push_back(flag(enr.popular));
  v.push_back(static_cast<double>(enr.account_age_days));
  v.push_back(enr.object_text_similarity.value_or(0.0));
  v.push_back(flag(enr.object_text_similarity.has_value()));
  return v;
}

Normalizer::Normalizer(std::size_t dim, std::vector<Range> ranges) : dim_(dim), ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (r.column >= dim_) throw SchemaMismatch("normalizer range outside vector");
  }
}

const Normalizer::Range* Normalizer::range_for(std::size_t column) const {
  for (const auto& r : ranges_) {
    if (r.column == column) return &r;
  }
  return nullptr;
}

nlohmann::json Normalizer::to_json() const {
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& r : ranges_) {
    ranges.push_back({{"column", r.column}, {"min", r.min}, {"max", r.max}, {"constant", r.constant}});
  }
  return {{"dim", dim_}, {"ranges", std::move(ranges)}};
}

Normalizer Normalizer::from_json(const nlohmann::json& doc) {
  std::vector<Range> ranges;
  for (const auto& r : doc.at("ranges")) {
    ranges.push_back({r.at("column").get<std::size_t>(), r.at("min").get<double>(), r.at("max").get<double>(),
                      r.at("constant").get<bool>()});
  }
  return Normalizer(doc.at("dim").get<std::size_t>(), std::move(ranges));
}

Normalizer fit_normalizer(std::span<const std::vector<double>> training_vectors, const SocialVectorSchema& schema) {
  if (training_vectors.empty()) throw EmptyTraining("cannot fit a normalizer on zero vectors");
  const std::size_t dim = schema.total_dim();
  std::vector<Normalizer::Range> ranges;
  for (std::size_t col = 0; col < dim; ++col) {
    if (!schema.is_numeric_column(col)) continue;
    Normalizer::Range r{col, 0.0, 0.0, false};
    bool first = true;
    for (const auto& v : training_vectors) {
      if (v.size() != dim) throw SchemaMismatch("training vector length does not match the social schema");
      r.min = first ? v[col] : std::min(r.min, v[col]);
      r.max = first ? v[col] : std::max(r.max, v[col]);
      first = false;
    }
    r.constant = r.min == r.max;
    ranges.push_back(r);
  }
  return Normalizer(dim, std::move(ranges));
}

std::vector<double> apply_normalizer(const Normalizer& normalizer, std::span<const double> raw) {
  if (raw.size() != normalizer.dim()) throw SchemaMismatch("vector length does not match the normalizer");
  std::vector<double> out(raw.begin(), raw.end());
  for (const auto& r : normalizer.ranges()) {
    if (r.constant) {
      out[r.column] = 0.0;
    } else {
      out[r.column] = std::clamp((raw[r.column] - r.min) / (r.max - r.min), 0.0, 1.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool ModalityMask::has(Modality m) const noexcept {
  switch (m) {
    case Modality::Text: return text;
    case Modality::Image: return image;
    case Modality::Social: return social;
  }
  return false;
}

std::size_t FusionDims::width(Modality m) const noexcept {
  switch (m) {
    case Modality::Text: return text;
    case Modality::Image: return image;
    case Modality::Social: return social;
  }
  return 0;
}

std::size_t FusionDims::offset(Modality m) const noexcept {
  switch (m) {
    case Modality::Text: return 0;
    case Modality::Image: return text;
    case Modality::Social: return text + image;
  }
  return 0;
}

std::span<const double> FeatureBundle::block(Modality m, const FusionDims& dims) const {
  if (fusion_vec.size() != dims.total()) throw DimensionMismatch("fusion vector does not match dims");
  return std::span<const double>(fusion_vec).subspan(dims.offset(m), dims.width(m));
}

FeatureBundle assemble_fusion(std::string tweet_id, std::optional<std::vector<double>> text_vec,
                              std::optional<std::vector<double>> image_vec,
                              std::optional<std::vector<double>> social_vec, const FusionDims& dims) {
  FeatureBundle b;
  b.tweet_id = std::move(tweet_id);
  b.fusion_vec.assign(dims.total(), 0.0);
  auto place = [&](const std::optional<std::vector<double>>& v, Modality m) {
    if (!v) return false;
    if (v->size() != dims.width(m)) {
      throw DimensionMismatch(std::string(to_string(m)) + " vector has length " + std::to_string(v->size()) +
                              ", expected " + std::to_string(dims.width(m)));
    }
    std::copy(v->begin(), v->end(), b.fusion_vec.begin() + static_cast<std::ptrdiff_t>(dims.offset(m)));
    return true;
  };
  b.modality_mask.text = place(text_vec, Modality::Text);
  b.modality_mask.image = place(image_vec, Modality::Image);
  b.modality_mask.social = place(social_vec, Modality::Social);
  b.text_vec = std::move(text_vec);
  b.image_vec = std::move(image_vec);
  b.social_vec = std::move(social_vec);
  return b;
}

}  // namespace mmfd
