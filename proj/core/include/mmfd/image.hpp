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
#include <span>
#include <vector>

namespace mmfd {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// Row-major 8-bit RGB raster; the buffer always holds width*height*3 bytes.
class RgbImage {
 public:
  /// Throws std::invalid_argument on zero dimensions or a wrong buffer size.
  RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  static RgbImage filled(std::size_t width, std::size_t height, Rgb colour);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  Rgb at(std::size_t x, std::size_t y) const noexcept {
    const std::size_t i = (y * width_ + x) * 3;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(std::size_t x, std::size_t y, Rgb c) noexcept {
    const std::size_t i = (y * width_ + x) * 3;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

/// Decodes PNG, JPEG or binary/ASCII PNM (P2, P3, P5, P6) into RGB. Grey is
/// replicated across channels and alpha is dropped. Throws UnreadableImage.
RgbImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG with 1 (grey), 2 (grey+alpha), 3 (RGB) or 4 (RGBA)
/// interleaved channels.
void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height, int channels,
               std::span<const std::uint8_t> data);

void save_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace mmfd
