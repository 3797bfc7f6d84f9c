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

#include <gtest/gtest.h>

#include <sstream>

#include "mmfd/error.hpp"
#include "mmfd/features.hpp"
#include "mmfd/rng.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

// Written out longhand from the encoder's documented definition.
std::vector<double> hash_oracle(const std::string& text, std::size_t dim, std::uint64_t seed) {
  std::vector<double> sum(dim, 0.0);
  std::istringstream in(text);
  std::string token;
  int count = 0;
  while (in >> token) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : token) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= seed;
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint64_t z = h + (j + 1) * 0x9E3779B97F4A7C15ULL;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      z ^= z >> 31;
      sum[j] += 2.0 * (static_cast<double>(z >> 11) / 9007199254740992.0) - 1.0;
    }
    ++count;
  }
  if (count > 0)
    for (auto& v : sum) v /= count;
  return sum;
}

TEST(HashEncoder, MatchesDefinition) {
  for (const std::string text : {"vaccine safe", "one", "a b a", "  spaced\tout\nwords ", "caf\xc3\xa9 hoax"}) {
    for (std::uint64_t seed : {0ULL, 7ULL}) {
      const HashTextEncoder encoder(24, seed);
      const auto got = encoder.encode(text);
      const auto want = hash_oracle(text, 24, seed);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], want[j], 1e-15) << text;
    }
  }
  EXPECT_EQ(HashTextEncoder(8).encode(""), std::vector<double>(8, 0.0));
}

TEST(ImageEncoders, MeanPixelBlackIsZero) {
  const MeanPixelImageEncoder encoder(16, 3);
  EXPECT_EQ(encoder.encode(RgbImage::filled(5, 5, {0, 0, 0})), std::vector<double>(16, 0.0));
  const auto white = encoder.encode(RgbImage::filled(5, 5, {255, 255, 255}));
  EXPECT_NE(white, std::vector<double>(16, 0.0));
  // Linear in the channel means.
  const auto grey = encoder.encode(RgbImage::filled(5, 5, {51, 51, 51}));
  for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(grey[j], 0.2 * white[j], 1e-12);
}

TEST(ImageEncoders, HistogramDeterministicAndSized) {
  const HistogramImageEncoder a(32, 9), b(32, 9), c(32, 10);
  const auto img = RgbImage::filled(6, 4, {10, 200, 90});
  EXPECT_EQ(a.encode(img).size(), 32u);
  EXPECT_EQ(a.encode(img), b.encode(img));
  EXPECT_NE(a.encode(img), c.encode(img));
}

TEST(ImageEncoders, Registry) {
  const auto registry = EncoderRegistry::with_defaults();
  EXPECT_EQ(registry.make_text("hash", 12)->output_dim(), 12u);
  EXPECT_EQ(registry.make_image("histogram", 8)->name(), "histogram");
  EXPECT_EQ(registry.make_image("mean-pixel", 8)->name(), "mean-pixel");
  EXPECT_THROW(registry.make_text("bert", 768), Error);
}

TEST(EncodeHelpers, CheckLengthsAndWrapFailures) {
  class Wrong final : public TextEncoder {
   public:
    std::string name() const override { return "wrong"; }
    std::size_t output_dim() const override { return 4; }
    std::vector<double> encode(std::string_view) const override { return {1, 2}; }
  };
  class Boom final : public TextEncoder {
   public:
    std::string name() const override { return "boom"; }
    std::size_t output_dim() const override { return 4; }
    std::vector<double> encode(std::string_view) const override { throw std::runtime_error("x"); }
  };
  EXPECT_THROW(encode_text("x", Wrong{}), EncoderFailure);
  EXPECT_THROW(encode_text("x", Boom{}), EncoderFailure);
  EXPECT_EQ(encode_text("", HashTextEncoder(4)), std::vector<double>(4, 0.0));
  EXPECT_EQ(compose_text_input("water safe", ""), "water safe");
  EXPECT_EQ(compose_text_input("water safe", "vote"), "water safe <ocr> vote");
}

TEST(SocialVector, StandardLayout) {
  const auto& schema = SocialVectorSchema::standard();
  EXPECT_EQ(schema.total_dim(), 17u);
  EXPECT_EQ(schema.offset_of("gender"), 8u);
  EXPECT_EQ(schema.offset_of("bot_score"), 11u);
  EXPECT_THROW(schema.offset_of("nope"), SchemaMismatch);

  const auto record = testing::make_tweet("t");
  EnrichmentRecord e;
  e.tweet_id = "t";
  e.account_age_days = 2000;
  e.popular = true;
  e.gender = Gender::Female;
  e.bot_score = 1.5;
  const auto v = build_social_vector(record, e, schema);
  const std::vector<double> want{10, 20, 0, 100, 7, 50, 1, 1000, 0, 1, 0, 1.5, 1, 1, 2000, 0, 0};
  EXPECT_EQ(v, want);

  e.tweet_id = "other";
  EXPECT_THROW(build_social_vector(record, e, schema), SchemaMismatch);
}

std::vector<std::vector<double>> random_social(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(17);
    for (std::size_t c = 0; c < 17; ++c) v[c] = rng.uniform(-50.0, 5000.0);
    for (std::size_t c : {2, 6, 8, 9, 10, 12, 13, 16}) v[c] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    out.push_back(std::move(v));
  }
  return out;
}

TEST(Normalizer, TrainingValuesLandInUnitInterval) {
  const auto& schema = SocialVectorSchema::standard();
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto train = random_social(rng, 2 + rng.below(30));
    const auto norm = fit_normalizer(train, schema);
    for (const auto& v : train) {
      const auto x = apply_normalizer(norm, v);
      for (std::size_t c = 0; c < 17; ++c) {
        EXPECT_GE(x[c], 0.0);
        EXPECT_LE(x[c], 1.0);
        if (!schema.is_numeric_column(c)) EXPECT_EQ(x[c], v[c]);
      }
    }
  }
}

TEST(Normalizer, ConstantClampAndErrors) {
  const auto& schema = SocialVectorSchema::standard();
  std::vector<std::vector<double>> train(3, std::vector<double>(17, 0.0));
  train[0][0] = 10;
  train[1][0] = 20;
  train[2][0] = 30;
  for (auto& v : train) v[3] = 5;
  const auto norm = fit_normalizer(train, schema);
  std::vector<double> probe(17, 0.0);
  probe[0] = 25;
  probe[3] = 5;
  EXPECT_DOUBLE_EQ(apply_normalizer(norm, probe)[0], 0.75);
  EXPECT_EQ(apply_normalizer(norm, probe)[3], 0.0);
  probe[0] = 100;
  EXPECT_EQ(apply_normalizer(norm, probe)[0], 1.0);
  probe[0] = -100;
  EXPECT_EQ(apply_normalizer(norm, probe)[0], 0.0);
  EXPECT_THROW(fit_normalizer({}, schema), EmptyTraining);
  EXPECT_THROW(apply_normalizer(norm, std::vector<double>(3)), SchemaMismatch);
  EXPECT_EQ(Normalizer::from_json(norm.to_json()), norm);
}

TEST(Fusion, RandomDimsAndMasks) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const FusionDims dims{1 + rng.below(20), 1 + rng.below(20), 1 + rng.below(20)};
    auto block = [&](std::size_t n) -> std::optional<std::vector<double>> {
      if (rng.bernoulli(0.5)) return std::nullopt;
      std::vector<double> v(n);
      for (auto& x : v) x = rng.uniform(-1, 1);
      return v;
    };
    const auto t = block(dims.text), i = block(dims.image), s = block(dims.social);
    const auto b = assemble_fusion("id", t, i, s, dims);
    ASSERT_EQ(b.fusion_vec.size(), dims.total());
    EXPECT_EQ(b.modality_mask.text, t.has_value());
    EXPECT_EQ(b.modality_mask.image, i.has_value());
    EXPECT_EQ(b.modality_mask.social, s.has_value());
    const std::pair<Modality, const std::optional<std::vector<double>>*> parts[] = {
        {Modality::Text, &t}, {Modality::Image, &i}, {Modality::Social, &s}};
    for (const auto& [m, vec] : parts) {
      const auto got = b.block(m, dims);
      ASSERT_EQ(got.size(), dims.width(m));
      for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(got[k], *vec ? (**vec)[k] : 0.0);
    }
  }
}

TEST(Fusion, WrongLengthThrows) {
  const FusionDims dims{4, 3, 2};
  EXPECT_THROW(assemble_fusion("x", std::vector<double>(5), std::nullopt, std::nullopt, dims), DimensionMismatch);
  EXPECT_EQ(dims.offset(Modality::Social), 7u);
}

TEST(FeatureStore, RoundTrip) {
  testing::TempDir dir;
  const FusionDims dims{3, 2, 17};
  FeatureStore store;
  store.header = {SocialVectorSchema::kVersion, dims, "hash", "histogram"};
  store.bundles.push_back(assemble_fusion("a", std::vector<double>{1, 2, 3}, std::nullopt,
                                          std::vector<double>(17, 0.5), dims));
  store.bundles.push_back(assemble_fusion("b\xc3\xa9", std::nullopt, std::vector<double>{-1e300, 0.1},
                                          std::vector<double>(17, 1.0), dims));
  save_feature_store(store, dir / "f.bin");
  const auto back = load_feature_store(dir / "f.bin");
  EXPECT_EQ(back.header, store.header);
  ASSERT_EQ(back.bundles.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back.bundles[k].tweet_id, store.bundles[k].tweet_id);
    EXPECT_EQ(back.bundles[k].modality_mask, store.bundles[k].modality_mask);
    EXPECT_EQ(back.bundles[k].fusion_vec, store.bundles[k].fusion_vec);
  }
  testing::write_text(dir / "bad.bin", "NOTMAGIC");
  EXPECT_THROW(load_feature_store(dir / "bad.bin"), Error);
}

}  // namespace
}  // namespace mmfd
