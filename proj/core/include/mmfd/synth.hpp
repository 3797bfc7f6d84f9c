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
#include <vector>

#include "mmfd/corpus.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/propagation.hpp"
#include "mmfd/rng.hpp"

namespace mmfd {

// ---------------------------------------------------------------------------
// Labelled benchmark corpus
//
// Each record draws three independent standard-normal latents, one per
// modality. The records with the lowest latent sums are labelled Other, the
// rest Misinformation, so no single modality (or pair) determines the label.
//   text:   the share of "claim" words among a fixed number of content
//           words tracks the text latent
//   image:  the share of pixels in one of two colours tracks the image latent
//   social: the author's status count tracks the social latent
// Everything else (filler words, other counts, dates) is noise.

struct SyntheticCorpusOptions {
  std::size_t misinformation = 1273;
  std::size_t other = 256;
  std::uint64_t seed = 2022;
  std::size_t image_side = 24;
  /// Share of records written in Spanish (translated back word by word).
  double spanish_share = 0.16;
  /// Share of records without an image.
  double missing_image_share = 0.0;
};

struct SyntheticCorpus {
  std::filesystem::path manifest;
  std::filesystem::path translations;  // `lang TAB word TAB english`
  std::filesystem::path genders;       // `name TAB gender`
  std::size_t records = 0;
};

/// Writes manifest.jsonl, images/*.png, translations.tsv and genders.tsv
/// under `directory`.
SyntheticCorpus write_synthetic_corpus(const std::filesystem::path& directory,
                                       const SyntheticCorpusOptions& options = {});

// ---------------------------------------------------------------------------
// Propagation fixture

/// Aggregates one class of the fixture must hit exactly.
struct PropagationTargets {
  std::size_t tweets = 0;
  std::size_t accounts = 0;
  std::size_t verified = 0;
  std::size_t popular = 0;
  std::int64_t mean_retweet = 0;
  std::int64_t mean_favourite = 0;
  std::size_t hashtags = 0;
  std::size_t mentions = 0;
  GenderTriple gender;
};

/// The descriptive-analysis targets of the misinformation and other
/// classes of the reference corpus.
PropagationTargets reference_misinformation_targets();
PropagationTargets reference_other_targets();

/// Random consistent targets for property tests.
PropagationTargets random_propagation_targets(Rng& rng);

/// Fixture plus the generator's own account of what it built. Later
/// snapshots of an account deliberately disagree with its first one on
/// verified and popularity flags.
struct PropagationFixture {
  Dataset dataset;
  std::vector<EnrichmentRecord> enrichments;
  ClassAggregates expected_misinformation;
  ClassAggregates expected_other;
};

/// Throws ConfigError for inconsistent targets (e.g. more accounts than
/// tweets, gender triple not summing to accounts).
PropagationFixture make_propagation_fixture(const PropagationTargets& misinformation, const PropagationTargets& other,
                                            std::uint64_t seed);

}  // namespace mmfd
