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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfd/corpus.hpp"
#include "mmfd/evaluation.hpp"
#include "mmfd/models.hpp"

namespace mmfd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitInputError = 2;

struct EncoderChoice {
  std::string name;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
};

struct BotClientConfig {
  bool enabled = false;
  std::string endpoint;
  std::optional<std::filesystem::path> cache_file;
  double max_requests_per_second = 0.0;
  std::chrono::milliseconds timeout{10000};
};

/// Everything a pipeline run needs. Relative paths in the config file are
/// resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path output_dir = "mmfd-out";
  UtcDate reference_date = kDefaultReferenceDate;
  std::optional<std::filesystem::path> verdict_aliases;
  std::optional<std::filesystem::path> gender_dictionary;
  std::optional<std::filesystem::path> stopwords;

  std::string ocr = "template";         // template | none
  std::string detector = "palette";     // palette | none
  std::string translator = "none";      // dictionary | none
  std::optional<std::filesystem::path> translation_dictionary;
  std::optional<std::filesystem::path> translation_cache;
  BotClientConfig bot;

  EncoderChoice text_encoder{"hash", 768, 0};
  EncoderChoice image_encoder{"histogram", 512, 0};

  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  /// Extra seeds for the mean and range summary; empty for a single run.
  std::vector<std::uint64_t> extra_seeds;
  Averaging averaging = Averaging::Macro;
  HyperParams hyperparams;
  /// Empty means the default fifteen-spec matrix.
  std::vector<ExperimentSpec> experiments;
  std::size_t threads = 1;

  /// Throws ConfigError.
  void validate() const;

  std::filesystem::path dataset_path() const { return output_dir / "dataset.jsonl"; }
  std::filesystem::path enrichment_path() const { return output_dir / "enrichments.jsonl"; }
  std::filesystem::path feature_store_path() const { return output_dir / "features.bin"; }
};

/// Throws ConfigError.
PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

/// Loads the manifest, writes the validated dataset and the rejects file,
/// prints "N records (a misinformation / b other)".
int cmd_ingest(const PipelineConfig& config, std::ostream& out);

/// Enriches the ingested dataset and prints a degradation summary.
int cmd_enrich(const PipelineConfig& config, std::ostream& out);

/// Encodes features, runs the experiment matrix, writes metric and
/// propagation reports. Returns kExitPartialFailure if any spec failed.
int cmd_run(const PipelineConfig& config, std::ostream& out);

/// Writes a synthetic corpus and a config that points at it.
int cmd_synth(const std::filesystem::path& directory, std::uint64_t seed, std::ostream& out);

/// Full command-line entry point; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmfd::cli
