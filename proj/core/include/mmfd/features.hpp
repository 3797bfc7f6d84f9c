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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfd/corpus.hpp"
#include "mmfd/encoders.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/image.hpp"

namespace mmfd {

/// Encoder output with its length checked; encoder errors become
/// EncoderFailure. An empty string yields the encoder's null vector.
std::vector<double> encode_text(std::string_view cleaned_text, const TextEncoder& encoder);
std::vector<double> encode_image(const RgbImage& image, const ImageEncoder& encoder);

/// Text seen by the text encoder: the cleaned tweet text, followed by
/// " <ocr> " and the cleaned OCR text when there is any.
std::string compose_text_input(std::string_view cleaned_text, std::string_view cleaned_ocr_text);

// ---------------------------------------------------------------------------
// Social vector

enum class SocialFieldKind { Numeric, Boolean, OneHot };

struct SocialField {
  std::string name;
  SocialFieldKind kind;
  std::size_t width;

  bool operator==(const SocialField&) const = default;
};

class SocialVectorSchema {
 public:
  static constexpr int kVersion = 1;

  SocialVectorSchema(std::vector<SocialField> fields, int version);

  /// The 17-column layout:
  ///   retweet_count, favourite_count, retweeted, followers_count,
  ///   favorites_count, friends_count, verified, statuses_count,
  ///   gender (male, female, undetermined), bot_score, bot_score_present,
  ///   popular, account_age_days, object_text_similarity,
  ///   object_text_similarity_present
  static const SocialVectorSchema& standard();

  std::span<const SocialField> fields() const noexcept { return fields_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  int version() const noexcept { return version_; }

  /// First column of a field; throws SchemaMismatch for unknown names.
  std::size_t offset_of(std::string_view name) const;
  bool is_numeric_column(std::size_t column) const;

  bool operator==(const SocialVectorSchema& other) const {
    return version_ == other.version_ && fields_ == other.fields_;
  }

 private:
  std::vector<SocialField> fields_;
  std::size_t total_dim_ = 0;
  int version_;
};

/// Raw (unnormalised) social vector in schema order. Throws SchemaMismatch
/// for a non-standard schema or mismatched record ids.
std::vector<double> build_social_vector(const TweetRecord& record, const EnrichmentRecord& enrichment,
                                        const SocialVectorSchema& schema);

/// Per-numeric-column min-max scaling fitted on training vectors.
class Normalizer {
 public:
  struct Range {
    std::size_t column = 0;
    double min = 0.0;
    double max = 0.0;
    bool constant = false;

    bool operator==(const Range&) const = default;
  };

  Normalizer() = default;
  Normalizer(std::size_t dim, std::vector<Range> ranges);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Range> ranges() const noexcept { return ranges_; }
  bool empty() const noexcept { return dim_ == 0; }
  const Range* range_for(std::size_t column) const;

  nlohmann::json to_json() const;
  static Normalizer from_json(const nlohmann::json& document);

  bool operator==(const Normalizer&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Range> ranges_;
};

/// Throws EmptyTraining for no vectors, SchemaMismatch for a wrong length.
Normalizer fit_normalizer(std::span<const std::vector<double>> training_vectors, const SocialVectorSchema& schema);

/// (x - min) / (max - min) clamped to [0, 1]; constant columns map to 0;
/// non-numeric columns pass through. Throws SchemaMismatch.
std::vector<double> apply_normalizer(const Normalizer& normalizer, std::span<const double> raw);

// ---------------------------------------------------------------------------
// Early fusion

struct ModalityMask {
  bool text = false;
  bool image = false;
  bool social = false;

  bool has(Modality m) const noexcept;
  bool any() const noexcept { return text || image || social; }
  bool operator==(const ModalityMask&) const = default;
};

struct FusionDims {
  std::size_t text = 768;
  std::size_t image = 512;
  std::size_t social = 17;

  std::size_t total() const noexcept { return text + image + social; }
  std::size_t width(Modality m) const noexcept;
  /// Block order is text, image, social.
  std::size_t offset(Modality m) const noexcept;

  bool operator==(const FusionDims&) const = default;
};

struct FeatureBundle {
  std::string tweet_id;
  std::optional<std::vector<double>> text_vec;
  std::optional<std::vector<double>> image_vec;
  std::optional<std::vector<double>> social_vec;
  ModalityMask modality_mask;
  std::vector<double> fusion_vec;

  std::span<const double> block(Modality m, const FusionDims& dims) const;
  bool operator==(const FeatureBundle&) const = default;
};

/// [text | image | social], absent blocks zero-filled. Throws
/// DimensionMismatch when a present vector has the wrong length.
FeatureBundle assemble_fusion(std::string tweet_id, std::optional<std::vector<double>> text_vec,
                              std::optional<std::vector<double>> image_vec,
                              std::optional<std::vector<double>> social_vec, const FusionDims& dims);

// ---------------------------------------------------------------------------
// Feature store
//
// Binary layout, little-endian:
//   "MMFDFS01"                      8-byte magic
//   u32 header_length, header       JSON: schema_version, dims [t, i, s],
//                                   text_encoder, image_encoder, count
//   per record:
//     u32 id_length, id bytes
//     u8  mask (bit 0 text, bit 1 image, bit 2 social)
//     f64 x dims.total()            fusion vector

struct FeatureStoreHeader {
  int schema_version = SocialVectorSchema::kVersion;
  FusionDims dims;
  std::string text_encoder;
  std::string image_encoder;

  bool operator==(const FeatureStoreHeader&) const = default;
};

struct FeatureStore {
  FeatureStoreHeader header;
  std::vector<FeatureBundle> bundles;
};

void save_feature_store(const FeatureStore& store, const std::filesystem::path& path);
FeatureStore load_feature_store(const std::filesystem::path& path);

}  // namespace mmfd
