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
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mmfd/image.hpp"

namespace mmfd {

enum class Modality { Text, Image, Social };

std::string_view to_string(Modality m) noexcept;

/// Encoder slot shared by bundled stubs and external adapters. Encoders must
/// be deterministic and safe to call concurrently.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual std::string name() const = 0;
  virtual Modality modality() const = 0;
  virtual std::size_t output_dim() const = 0;
};

class TextEncoder : public Encoder {
 public:
  Modality modality() const final { return Modality::Text; }
  virtual std::vector<double> encode(std::string_view text) const = 0;
};

class ImageEncoder : public Encoder {
 public:
  Modality modality() const final { return Modality::Image; }
  virtual std::vector<double> encode(const RgbImage& image) const = 0;
};

/// Seeded hash projection with mean pooling over whitespace tokens.
///
/// Token t contributes the vector v with
///   h   = fnv1a64(t) XOR seed
///   v_j = 2 * unit(splitmix64(h + (j + 1) * 0x9E3779B97F4A7C15)) - 1
/// where unit(x) = (x >> 11) * 2^-53 and arithmetic is modulo 2^64. The
/// output is the mean of the token vectors; no tokens gives all zeros.
class HashTextEncoder final : public TextEncoder {
 public:
  HashTextEncoder(std::size_t dim, std::uint64_t seed = 0);

  std::string name() const override { return "hash"; }
  std::size_t output_dim() const override { return dim_; }
  std::vector<double> encode(std::string_view text) const override;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Normalised per-channel histograms (8 bins each) projected through a
/// seeded uniform [-1, 1] matrix.
class HistogramImageEncoder final : public ImageEncoder {
 public:
  static constexpr std::size_t kBinsPerChannel = 8;

  HistogramImageEncoder(std::size_t dim, std::uint64_t seed = 0);

  std::string name() const override { return "histogram"; }
  std::size_t output_dim() const override { return dim_; }
  std::vector<double> encode(const RgbImage& image) const override;

 private:
  std::size_t dim_;
  std::vector<double> projection_;  // dim x (3 * bins)
};

/// Channel means scaled to [0, 1] and projected through a seeded uniform
/// [-1, 1] matrix without bias, so an all-black image maps to zeros.
class MeanPixelImageEncoder final : public ImageEncoder {
 public:
  MeanPixelImageEncoder(std::size_t dim, std::uint64_t seed = 0);

  std::string name() const override { return "mean-pixel"; }
  std::size_t output_dim() const override { return dim_; }
  std::vector<double> encode(const RgbImage& image) const override;

 private:
  std::size_t dim_;
  std::vector<double> projection_;  // dim x 3
};

/// Name -> factory registry for encoders. External adapters register here.
class EncoderRegistry {
 public:
  using TextFactory = std::function<std::shared_ptr<const TextEncoder>(std::size_t dim, std::uint64_t seed)>;
  using ImageFactory = std::function<std::shared_ptr<const ImageEncoder>(std::size_t dim, std::uint64_t seed)>;

  /// Registers "hash", "histogram" and "mean-pixel".
  static EncoderRegistry with_defaults();

  void register_text(const std::string& name, TextFactory factory);
  void register_image(const std::string& name, ImageFactory factory);

  std::shared_ptr<const TextEncoder> make_text(const std::string& name, std::size_t dim,
                                               std::uint64_t seed = 0) const;
  std::shared_ptr<const ImageEncoder> make_image(const std::string& name, std::size_t dim,
                                                 std::uint64_t seed = 0) const;

 private:
  std::map<std::string, TextFactory> text_;
  std::map<std::string, ImageFactory> image_;
};

}  // namespace mmfd
