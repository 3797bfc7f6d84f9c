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

#include "mmfd/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "mmfd/error.hpp"

namespace mmfd {
namespace {

// Runs body(i) for i in [0, n); the first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body body) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

std::optional<RgbImage> try_load(const TweetRecord& record) {
  if (!record.media_path) return std::nullopt;
  try {
    return load_image(*record.media_path);
  } catch (const UnreadableImage& e) {
    spdlog::warn("record '{}': {}", record.tweet_id, e.what());
    return std::nullopt;
  }
}

}  // namespace

EnrichmentRun enrich_dataset(const Dataset& dataset, const EnrichmentContext& context) {
  if (!context.genders || !context.stopwords) throw ConfigError("enrichment needs a gender dictionary and stopwords");
  const auto records = dataset.records();
  EnrichmentRun run;
  run.summary.records = records.size();

  // Translators are not required to be thread-safe, so text runs serially.
  std::vector<TextOutputs> texts(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i].record;
    std::string translated = r.text;
    if (context.translator && r.language != "en") {
      translated = translate_to_english(r.text, r.language, *context.translator, context.translation_cache);
      if (translated != r.text) ++run.summary.translated;
    }
    texts[i].cleaned_text = clean_text(translated, *context.stopwords);
    texts[i].translated_text = std::move(translated);
  }

  run.records.resize(records.size());
  std::atomic<std::size_t> media{0}, unreadable{0};
  parallel_for(records.size(), context.threads, [&](std::size_t i) {
    const auto& r = records[i].record;
    VisionOutputs vision;
    if (r.media_path) ++media;
    if (auto image = try_load(r)) {
      if (context.ocr) vision.ocr_text = extract_ocr_text(*image, *context.ocr);
      if (context.detector) vision.detected_objects = detect_objects_or_empty(*image, *context.detector);
    } else if (r.media_path) {
      ++unreadable;
    }
    if (context.similarity_encoder && !vision.detected_objects.empty() && !texts[i].cleaned_text.empty()) {
      std::vector<std::string> labels;
      for (const auto& o : vision.detected_objects) labels.push_back(o.label);
      try {
        vision.object_text_similarity =
            object_text_similarity(labels, texts[i].cleaned_text, *context.similarity_encoder);
      } catch (const EncoderFailure& e) {
        spdlog::warn("record '{}': similarity unavailable: {}", r.tweet_id, e.what());
      }
    }
    run.records[i] = enrich(r, *context.genders, context.bot, vision, texts[i], context.reference_date);
  });

  run.summary.with_media = media;
  run.summary.unreadable_images = unreadable;
  for (const auto& e : run.records) {
    run.summary.ocr_text += !e.ocr_text.empty();
    run.summary.with_objects += !e.detected_objects.empty();
    run.summary.with_similarity += e.object_text_similarity.has_value();
    run.summary.bot_scores += e.bot_score.has_value();
  }
  return run;
}

FusionDims FeatureContext::dims() const {
  if (!text_encoder || !image_encoder || !schema) throw ConfigError("feature context is incomplete");
  return FusionDims{text_encoder->output_dim(), image_encoder->output_dim(), schema->total_dim()};
}

std::vector<FeatureBundle> build_feature_bundles(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments,
                                                 const FeatureContext& context) {
  if (!context.stopwords) throw ConfigError("feature context needs stopwords");
  const FusionDims dims = context.dims();
  std::unordered_map<std::string_view, const EnrichmentRecord*> by_id;
  for (const auto& e : enrichments) by_id.emplace(e.tweet_id, &e);

  const auto records = dataset.records();
  std::vector<FeatureBundle> bundles(records.size());
  parallel_for(records.size(), context.threads, [&](std::size_t i) {
    const auto& r = records[i].record;
    auto it = by_id.find(r.tweet_id);
    if (it == by_id.end()) throw CoverageGap(r.tweet_id);
    const auto& e = *it->second;

    std::optional<std::vector<double>> text_vec;
    const auto input = compose_text_input(e.cleaned_text, clean_text(e.ocr_text, *context.stopwords));
    if (!input.empty()) text_vec = encode_text(input, *context.text_encoder);

    std::optional<std::vector<double>> image_vec;
    if (auto image = try_load(r)) image_vec = encode_image(*image, *context.image_encoder);

    auto social = build_social_vector(r, e, *context.schema);
    bundles[i] = assemble_fusion(r.tweet_id, std::move(text_vec), std::move(image_vec), std::move(social), dims);
  });
  return bundles;
}

}  // namespace mmfd
