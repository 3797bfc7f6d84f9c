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

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <jpeglib.h>
#include <png.h>

#include "mmfd/error.hpp"
#include "mmfd/image.hpp"

namespace mmfd {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableImage("cannot open image: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw UnreadableImage("corrupt PNG " + path.string() + ": " + image.message);
  }
  // Read as RGBA so alpha can be dropped rather than composited.
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    png_image_free(&image);
    throw UnreadableImage("corrupt PNG " + path.string() + ": " + image.message);
  }
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  std::vector<std::uint8_t> rgb(n * 3);
  for (std::size_t i = 0; i < n; ++i) std::memcpy(&rgb[i * 3], &rgba[i * 4], 3);
  return RgbImage(image.width, image.height, std::move(rgb));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  // Everything touched after setjmp is either POD or allocated before it.
  std::vector<std::uint8_t> rgb;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw UnreadableImage("corrupt JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const std::size_t width = cinfo.output_width;
  const std::size_t height = cinfo.output_height;
  rgb.resize(width * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = &rgb[static_cast<std::size_t>(cinfo.output_scanline) * width * 3];
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return RgbImage(width, height, std::move(rgb));
}

class PnmReader {
 public:
  PnmReader(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) : bytes_(bytes), path_(path) {}

  RgbImage decode() {
    const char kind = static_cast<char>(bytes_.at(1));
    pos_ = 2;
    const auto width = next_number();
    const auto height = next_number();
    const auto maxval = next_number();
    if (width == 0 || height == 0 || maxval == 0 || maxval > 255) fail("unsupported PNM header");
    const bool binary = kind == '5' || kind == '6';
    const bool grey = kind == '5' || kind == '2';
    if (binary) ++pos_;  // single whitespace after maxval
    const std::size_t n = width * height;
    std::vector<std::uint8_t> rgb(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < (grey ? 1 : 3); ++c) {
        std::size_t v = binary ? next_byte() : next_number();
        if (v > maxval) fail("sample exceeds maxval");
        auto scaled = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
        if (grey) {
          rgb[i * 3] = rgb[i * 3 + 1] = rgb[i * 3 + 2] = scaled;
        } else {
          rgb[i * 3 + static_cast<std::size_t>(c)] = scaled;
        }
      }
    }
    return RgbImage(width, height, std::move(rgb));
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { throw UnreadableImage("corrupt PNM " + path_.string() + ": " + why); }

  std::size_t next_byte() {
    if (pos_ >= bytes_.size()) fail("truncated data");
    return bytes_[pos_++];
  }

  std::size_t next_number() {
    for (;;) {
      if (pos_ >= bytes_.size()) fail("truncated header");
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) fail("number too large");
    }
    if (digits == 0) fail("expected a number");
    return value;
  }

  const std::vector<std::uint8_t>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

}  // namespace

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) throw std::invalid_argument("image dimensions must be positive");
  if (pixels_.size() != width_ * height_ * 3) throw std::invalid_argument("pixel buffer must hold width*height*3 bytes");
}

RgbImage RgbImage::filled(std::size_t width, std::size_t height, Rgb colour) {
  std::vector<std::uint8_t> px(width * height * 3);
  for (std::size_t i = 0; i < width * height; ++i) {
    px[i * 3] = colour.r;
    px[i * 3 + 1] = colour.g;
    px[i * 3 + 2] = colour.b;
  }
  return RgbImage(width, height, std::move(px));
}

RgbImage load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw UnreadableImage("no such image: " + path.string());
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes, path);
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) return decode_jpeg(bytes, path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '5' || bytes[1] == '6')) {
    try {
      return PnmReader(bytes, path).decode();
    } catch (const std::out_of_range&) {
      throw UnreadableImage("corrupt PNM " + path.string());
    }
  }
  throw UnreadableImage("unrecognised image format: " + path.string());
}

void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height, int channels,
               std::span<const std::uint8_t> data) {
  static constexpr png_uint_32 kFormats[] = {PNG_FORMAT_GRAY, PNG_FORMAT_GA, PNG_FORMAT_RGB, PNG_FORMAT_RGBA};
  if (channels < 1 || channels > 4) throw std::invalid_argument("PNG channel count must be 1..4");
  if (data.size() != width * height * static_cast<std::size_t>(channels)) {
    throw std::invalid_argument("PNG data size does not match dimensions");
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = kFormats[channels - 1];
  if (!png_image_write_to_file(&image, path.c_str(), 0, data.data(), 0, nullptr)) {
    throw Error("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void save_png(const RgbImage& image, const std::filesystem::path& path) {
  write_png(path, image.width(), image.height(), 3, image.pixels());
}

}  // namespace mmfd
