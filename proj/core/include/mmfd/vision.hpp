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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmfd/encoders.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/image.hpp"

namespace mmfd {

// ---------------------------------------------------------------------------
// OCR

class OcrEngine {
 public:
  virtual ~OcrEngine() = default;
  virtual std::string id() const = 0;
  /// May throw; must return the same text for the same pixels.
  virtual std::string recognize(const RgbImage& image) const = 0;
};

/// Reads text drawn with the bundled 5x7 bitmap font at any integer scale.
/// Ink is any pixel with luma below 128; unmatched blobs are skipped.
class TemplateOcrEngine final : public OcrEngine {
 public:
  std::string id() const override { return "template"; }
  std::string recognize(const RgbImage& image) const override;
};

class NullOcrEngine final : public OcrEngine {
 public:
  std::string id() const override { return "none"; }
  std::string recognize(const RgbImage&) const override { return {}; }
};

/// Whitespace-normalised OCR text; engine failures yield "" and a warning.
std::string extract_ocr_text(const RgbImage& image, const OcrEngine& engine);

/// Characters the bundled font can draw: space, A-Z, 0-9 and . , ! ? - : ' / ( ) +
std::string_view font_alphabet() noexcept;

struct RenderOptions {
  std::size_t scale = 2;
  std::size_t margin = 4;
  Rgb ink{0, 0, 0};
  Rgb paper{255, 255, 255};
};

/// Renders text (lower case is drawn upper case; '\n' starts a new line).
/// Throws std::invalid_argument for characters outside font_alphabet().
RgbImage render_text(std::string_view text, const RenderOptions& options = {});

/// Draws text into an existing image with its top-left corner at (x, y);
/// pixels falling outside the image are clipped.
void draw_text(RgbImage& image, std::size_t x, std::size_t y, std::string_view text, std::size_t scale, Rgb ink);

// ---------------------------------------------------------------------------
// Object detection

class ObjectDetector {
 public:
  virtual ~ObjectDetector() = default;
  virtual std::string id() const = 0;
  virtual const std::vector<std::string>& vocabulary() const = 0;
  virtual std::vector<DetectedObject> detect(const RgbImage& image) const = 0;
};

/// Labels the dominant named colours of an image. Near-white pixels (every
/// channel >= 230) are background; a colour is reported when it covers at
/// least min_share of the image, with that share as confidence.
class PaletteObjectDetector final : public ObjectDetector {
 public:
  explicit PaletteObjectDetector(double min_share = 0.05);

  std::string id() const override { return "palette"; }
  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  std::vector<DetectedObject> detect(const RgbImage& image) const override;

 private:
  double min_share_;
  std::vector<std::string> vocabulary_;
};

/// Returns the same detections for every image.
class FixedObjectDetector final : public ObjectDetector {
 public:
  explicit FixedObjectDetector(std::vector<DetectedObject> detections, std::vector<std::string> vocabulary = {});

  std::string id() const override { return "fixed"; }
  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  std::vector<DetectedObject> detect(const RgbImage&) const override { return detections_; }

 private:
  std::vector<DetectedObject> detections_;
  std::vector<std::string> vocabulary_;
};

class NullObjectDetector final : public ObjectDetector {
 public:
  std::string id() const override { return "none"; }
  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  std::vector<DetectedObject> detect(const RgbImage&) const override { return {}; }

 private:
  std::vector<std::string> vocabulary_;
};

/// Detections sorted by descending confidence (ties by label). Throws
/// EngineFailure when the detector throws, emits a label outside its
/// vocabulary, or a confidence outside [0, 1].
std::vector<DetectedObject> detect_objects(const RgbImage& image, const ObjectDetector& detector);

/// detect_objects with failures degraded to an empty list and a warning.
std::vector<DetectedObject> detect_objects_or_empty(const RgbImage& image, const ObjectDetector& detector);

// ---------------------------------------------------------------------------
// Object / caption agreement

/// Cosine of two equal-length vectors; nullopt when either has zero norm.
std::optional<double> cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Cosine between the mean label embedding and the caption embedding, both
/// from the same text encoder. Throws EncoderFailure on empty inputs, a
/// zero-norm embedding or an encoder error.
double object_text_similarity(std::span<const std::string> labels, std::string_view caption,
                              const TextEncoder& encoder);

}  // namespace mmfd
