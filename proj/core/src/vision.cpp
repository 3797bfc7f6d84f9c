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

#include "mmfd/vision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "font.hpp"
#include "mmfd/error.hpp"
#include "mmfd/textprep.hpp"

namespace mmfd {
namespace {

using detail::Glyph;
using detail::kGlyphAdvance;
using detail::kGlyphHeight;
using detail::kGlyphWidth;
using detail::kLineAdvance;

constexpr std::size_t kWordGapUnits = 6;

bool is_ink(Rgb c) noexcept { return (299 * c.r + 587 * c.g + 114 * c.b) < 128 * 1000; }

class InkMask {
 public:
  explicit InkMask(const RgbImage& image) : width_(image.width()), height_(image.height()), ink_(width_ * height_) {
    for (std::size_t y = 0; y < height_; ++y) {
      for (std::size_t x = 0; x < width_; ++x) ink_[y * width_ + x] = is_ink(image.at(x, y));
    }
  }

  bool operator()(std::size_t x, std::size_t y) const noexcept { return ink_[y * width_ + x] != 0; }
  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool any() const noexcept { return std::find(ink_.begin(), ink_.end(), 1) != ink_.end(); }

  // gcd of every maximal horizontal and vertical ink run.
  std::size_t unit() const {
    std::size_t g = 0;
    for (std::size_t y = 0; y < height_; ++y) {
      std::size_t run = 0;
      for (std::size_t x = 0; x <= width_; ++x) {
        if (x < width_ && (*this)(x, y)) {
          ++run;
        } else if (run) {
          g = std::gcd(g, run);
          run = 0;
        }
      }
    }
    for (std::size_t x = 0; x < width_; ++x) {
      std::size_t run = 0;
      for (std::size_t y = 0; y <= height_; ++y) {
        if (y < height_ && (*this)(x, y)) {
          ++run;
        } else if (run) {
          g = std::gcd(g, run);
          run = 0;
        }
      }
    }
    return g;
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> ink_;
};

struct Span {
  std::size_t begin;
  std::size_t end;  // exclusive
};

// Ink extent of a glyph's columns; nullopt for the space glyph.
std::optional<Span> glyph_columns(const Glyph& g) {
  std::optional<Span> cols;
  for (std::size_t c = 0; c < kGlyphWidth; ++c) {
    for (std::size_t r = 0; r < kGlyphHeight; ++r) {
      if (g.ink(c, r)) {
        if (!cols) cols = Span{c, c + 1};
        cols->end = c + 1;
      }
    }
  }
  return cols;
}

std::optional<char> match_glyph(const std::vector<std::vector<bool>>& cells, std::size_t w, std::size_t h) {
  for (const auto& g : detail::font_glyphs()) {
    auto cols = glyph_columns(g);
    if (!cols || cols->end - cols->begin != w) continue;
    for (std::size_t off = 0; off + h <= kGlyphHeight; ++off) {
      bool ok = true;
      for (std::size_t r = 0; r < kGlyphHeight && ok; ++r) {
        for (std::size_t c = 0; c < w && ok; ++c) {
          const bool expected = g.ink(cols->begin + c, r);
          const bool inside = r >= off && r < off + h;
          ok = inside ? cells[r - off][c] == expected : !expected;
        }
      }
      if (ok) return g.ch;
    }
  }
  return std::nullopt;
}

std::string read_line(const InkMask& ink, Span rows, std::size_t unit) {
  const std::size_t h = (rows.end - rows.begin + unit / 2) / unit;
  if (h == 0 || h > kGlyphHeight) return {};

  std::vector<Span> blobs;
  std::optional<std::size_t> start;
  for (std::size_t x = 0; x <= ink.width(); ++x) {
    bool column_ink = false;
    if (x < ink.width()) {
      for (std::size_t y = rows.begin; y < rows.end && !column_ink; ++y) column_ink = ink(x, y);
    }
    if (column_ink && !start) start = x;
    if (!column_ink && start) {
      blobs.push_back({*start, x});
      start.reset();
    }
  }

  std::string out;
  std::optional<std::size_t> previous_end;
  for (const auto& blob : blobs) {
    const std::size_t w = (blob.end - blob.begin + unit / 2) / unit;
    if (w == 0 || w > kGlyphWidth) {
      previous_end = blob.end;
      continue;
    }
    std::vector<std::vector<bool>> cells(h, std::vector<bool>(w));
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const std::size_t x = std::min(blob.begin + c * unit + unit / 2, ink.width() - 1);
        const std::size_t y = std::min(rows.begin + r * unit + unit / 2, ink.height() - 1);
        cells[r][c] = ink(x, y);
      }
    }
    auto ch = match_glyph(cells, w, h);
    if (!ch) {
      previous_end = blob.end;
      continue;
    }
    if (previous_end && (blob.begin - *previous_end) / unit >= kWordGapUnits && !out.empty()) out += ' ';
    out += *ch;
    previous_end = blob.end;
  }
  return out;
}

}  // namespace

std::string TemplateOcrEngine::recognize(const RgbImage& image) const {
  const InkMask ink(image);
  if (!ink.any()) return {};
  const std::size_t unit = ink.unit();
  if (unit == 0) return {};

  // Row bands separated by at least two blank units are separate lines;
  // glyph-internal blank rows are a single unit tall.
  std::vector<Span> lines;
  std::optional<std::size_t> band_start;
  std::size_t last_ink_row = 0;
  for (std::size_t y = 0; y < ink.height(); ++y) {
    bool row_ink = false;
    for (std::size_t x = 0; x < ink.width() && !row_ink; ++x) row_ink = ink(x, y);
    if (!row_ink) continue;
    if (band_start && y - last_ink_row - 1 >= 2 * unit) {
      lines.push_back({*band_start, last_ink_row + 1});
      band_start.reset();
    }
    if (!band_start) band_start = y;
    last_ink_row = y;
  }
  if (band_start) lines.push_back({*band_start, last_ink_row + 1});

  std::string text;
  for (const auto& line : lines) {
    auto piece = read_line(ink, line, unit);
    if (piece.empty()) continue;
    if (!text.empty()) text += ' ';
    text += piece;
  }
  return text;
}

std::string extract_ocr_text(const RgbImage& image, const OcrEngine& engine) {
  try {
    return normalize_whitespace(engine.recognize(image));
  } catch (const std::exception& e) {
    spdlog::warn("OCR engine '{}' failed: {}", engine.id(), e.what());
    return {};
  }
}

std::string_view font_alphabet() noexcept {
  static const std::string alphabet = [] {
    std::string s;
    for (const auto& g : detail::font_glyphs()) s += g.ch;
    return s;
  }();
  return alphabet;
}

void draw_text(RgbImage& image, std::size_t x, std::size_t y, std::string_view text, std::size_t scale, Rgb ink) {
  if (scale == 0) throw std::invalid_argument("text scale must be positive");
  std::size_t col = 0;
  std::size_t line = 0;
  for (char ch : text) {
    if (ch == '\n') {
      ++line;
      col = 0;
      continue;
    }
    const Glyph* g = detail::find_glyph(ch);
    if (!g) throw std::invalid_argument(std::string("character not in font: '") + ch + "'");
    const std::size_t gx = x + col * kGlyphAdvance * scale;
    const std::size_t gy = y + line * kLineAdvance * scale;
    for (std::size_t r = 0; r < kGlyphHeight; ++r) {
      for (std::size_t c = 0; c < kGlyphWidth; ++c) {
        if (!g->ink(c, r)) continue;
        for (std::size_t dy = 0; dy < scale; ++dy) {
          for (std::size_t dx = 0; dx < scale; ++dx) {
            const std::size_t px = gx + c * scale + dx;
            const std::size_t py = gy + r * scale + dy;
            if (px < image.width() && py < image.height()) image.set(px, py, ink);
          }
        }
      }
    }
    ++col;
  }
}

RgbImage render_text(std::string_view text, const RenderOptions& options) {
  if (options.scale == 0) throw std::invalid_argument("text scale must be positive");
  std::size_t lines = 1;
  std::size_t longest = 0;
  std::size_t current = 0;
  for (char ch : text) {
    if (ch == '\n') {
      ++lines;
      current = 0;
      continue;
    }
    if (!detail::find_glyph(ch)) throw std::invalid_argument(std::string("character not in font: '") + ch + "'");
    longest = std::max(longest, ++current);
  }
  longest = std::max<std::size_t>(longest, 1);
  const std::size_t width = 2 * options.margin + options.scale * (longest * kGlyphAdvance - 1);
  const std::size_t height = 2 * options.margin + options.scale * (lines * kLineAdvance - 3);
  RgbImage image = RgbImage::filled(width, height, options.paper);
  draw_text(image, options.margin, options.margin, text, options.scale, options.ink);
  return image;
}

// ---------------------------------------------------------------------------

namespace {

struct NamedColour {
  const char* name;
  Rgb rgb;
};

constexpr NamedColour kPalette[] = {
    {"red", {220, 40, 40}},     {"orange", {245, 140, 30}}, {"yellow", {240, 220, 40}},
    {"green", {40, 170, 60}},   {"blue", {40, 80, 220}},    {"purple", {140, 60, 180}},
    {"brown", {120, 80, 40}},   {"gray", {128, 128, 128}},  {"black", {20, 20, 20}},
};

}  // namespace

PaletteObjectDetector::PaletteObjectDetector(double min_share) : min_share_(min_share) {
  for (const auto& c : kPalette) vocabulary_.emplace_back(c.name);
}

std::vector<DetectedObject> PaletteObjectDetector::detect(const RgbImage& image) const {
  std::vector<std::size_t> counts(std::size(kPalette), 0);
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      const Rgb p = image.at(x, y);
      if (p.r >= 230 && p.g >= 230 && p.b >= 230) continue;
      std::size_t best = 0;
      long best_d = -1;
      for (std::size_t i = 0; i < std::size(kPalette); ++i) {
        const long dr = long{p.r} - kPalette[i].rgb.r;
        const long dg = long{p.g} - kPalette[i].rgb.g;
        const long db = long{p.b} - kPalette[i].rgb.b;
        const long d = dr * dr + dg * dg + db * db;
        if (best_d < 0 || d < best_d) {
          best_d = d;
          best = i;
        }
      }
      ++counts[best];
    }
  }
  const double total = static_cast<double>(image.width() * image.height());
  std::vector<DetectedObject> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double share = static_cast<double>(counts[i]) / total;
    if (counts[i] > 0 && share >= min_share_) out.push_back({kPalette[i].name, share});
  }
  return out;
}

FixedObjectDetector::FixedObjectDetector(std::vector<DetectedObject> detections, std::vector<std::string> vocabulary)
    : detections_(std::move(detections)), vocabulary_(std::move(vocabulary)) {
  if (vocabulary_.empty()) {
    for (const auto& d : detections_) vocabulary_.push_back(d.label);
  }
}

std::vector<DetectedObject> detect_objects(const RgbImage& image, const ObjectDetector& detector) {
  std::vector<DetectedObject> found;
  try {
    found = detector.detect(image);
  } catch (const std::exception& e) {
    throw EngineFailure("object detector '" + detector.id() + "' failed: " + e.what());
  }
  const auto& vocab = detector.vocabulary();
  for (const auto& d : found) {
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw EngineFailure("object detector '" + detector.id() + "' emitted confidence " +
                          std::to_string(d.confidence) + " for '" + d.label + "'");
    }
    if (std::find(vocab.begin(), vocab.end(), d.label) == vocab.end()) {
      throw EngineFailure("object detector '" + detector.id() + "' emitted label outside its vocabulary: '" +
                          d.label + "'");
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const DetectedObject& a, const DetectedObject& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.label < b.label;
  });
  return found;
}

std::vector<DetectedObject> detect_objects_or_empty(const RgbImage& image, const ObjectDetector& detector) {
  try {
    return detect_objects(image, detector);
  } catch (const EngineFailure& e) {
    spdlog::warn("{}", e.what());
    return {};
  }
}

std::optional<double> cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("cosine of vectors with different lengths");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double object_text_similarity(std::span<const std::string> labels, std::string_view caption,
                              const TextEncoder& encoder) {
  if (labels.empty()) throw EncoderFailure("no object labels to compare");
  if (caption.empty()) throw EncoderFailure("empty caption");
  std::vector<double> mean(encoder.output_dim(), 0.0);
  std::vector<double> caption_vec;
  try {
    for (const auto& label : labels) {
      auto v = encoder.encode(label);
      if (v.size() != mean.size()) throw EncoderFailure("encoder returned wrong dimension");
      for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
    }
    caption_vec = encoder.encode(caption);
  } catch (const EncoderFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw EncoderFailure(std::string("text encoder failed: ") + e.what());
  }
  if (caption_vec.size() != mean.size()) throw EncoderFailure("encoder returned wrong dimension");
  for (auto& m : mean) m /= static_cast<double>(labels.size());
  auto cos = cosine_similarity(mean, caption_vec);
  if (!cos) throw EncoderFailure("zero-norm embedding");
  return *cos;
}

}  // namespace mmfd
