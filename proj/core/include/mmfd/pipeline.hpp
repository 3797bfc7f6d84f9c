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
#include <span>
#include <vector>

#include "mmfd/corpus.hpp"
#include "mmfd/encoders.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/features.hpp"
#include "mmfd/textprep.hpp"
#include "mmfd/vision.hpp"

namespace mmfd {

/// Adapters used while enriching. Null pointers switch a stage off: no
/// translator keeps the original text, no OCR engine or detector leaves
/// those outputs empty, no similarity encoder leaves the similarity absent,
/// no bot client leaves bot scores absent.
struct EnrichmentContext {
  const GenderDictionary* genders = nullptr;
  const StopwordList* stopwords = nullptr;
  Translator* translator = nullptr;
  TranslationCache* translation_cache = nullptr;
  const OcrEngine* ocr = nullptr;
  const ObjectDetector* detector = nullptr;
  const TextEncoder* similarity_encoder = nullptr;
  BotScoreClient* bot = nullptr;
  UtcDate reference_date = kDefaultReferenceDate;
  /// Image and bot-score work runs on this many threads.
  std::size_t threads = 1;
};

struct EnrichmentSummary {
  std::size_t records = 0;
  std::size_t translated = 0;
  std::size_t with_media = 0;
  std::size_t unreadable_images = 0;
  std::size_t ocr_text = 0;
  std::size_t with_objects = 0;
  std::size_t with_similarity = 0;
  std::size_t bot_scores = 0;
};

struct EnrichmentRun {
  std::vector<EnrichmentRecord> records;  // dataset order
  EnrichmentSummary summary;
};

/// Runs translation, cleaning, OCR, object detection, similarity and the
/// account features for every record. Per-record adapter failures degrade;
/// FutureAccount propagates.
EnrichmentRun enrich_dataset(const Dataset& dataset, const EnrichmentContext& context);

struct FeatureContext {
  const TextEncoder* text_encoder = nullptr;
  const ImageEncoder* image_encoder = nullptr;
  const StopwordList* stopwords = nullptr;
  const SocialVectorSchema* schema = &SocialVectorSchema::standard();
  std::size_t threads = 1;

  /// Block widths implied by the encoders and schema.
  FusionDims dims() const;
};

/// Text is present when the composed text input is non-empty, image when
/// the media file decodes, social always. Throws CoverageGap and
/// EncoderFailure.
std::vector<FeatureBundle> build_feature_bundles(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments,
                                                 const FeatureContext& context);

}  // namespace mmfd
