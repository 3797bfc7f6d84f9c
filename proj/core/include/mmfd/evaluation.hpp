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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mmfd/corpus.hpp"
#include "mmfd/features.hpp"
#include "mmfd/models.hpp"

namespace mmfd {

/// Positive class is Misinformation.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Macro is the reporting default; Binary scores the positive class only.
enum class Averaging { Macro, Binary };

std::string_view to_string(Averaging a) noexcept;
std::optional<Averaging> averaging_from_string(std::string_view name);

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging averaging = Averaging::Macro;

  bool operator==(const MetricSet&) const = default;
};

/// Throws LengthMismatch for unequal or empty inputs.
ConfusionCounts confusion(std::span<const BinaryLabel> labels, std::span<const BinaryLabel> preds);

/// Per-class precision and recall use 0 for 0/0. Throws EmptyEvaluation.
MetricSet metrics(const ConfusionCounts& c, Averaging averaging = Averaging::Macro);

struct ExperimentResult {
  std::string spec_name;
  std::vector<Modality> modalities;
  std::vector<std::string> backend_combo;
  MetricSet metrics;
  ConfusionCounts counts;
  std::uint64_t seed = 0;
  std::uint64_t split_fingerprint = 0;
  std::chrono::duration<double> wallclock{};
};

struct ExperimentFailure {
  std::string spec_name;
  std::string error;
};

struct MatrixRun {
  std::uint64_t seed = 0;
  std::uint64_t split_fingerprint = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// In spec order, failed specs omitted.
  std::vector<ExperimentResult> results;
  std::vector<ExperimentFailure> failures;
};

struct MatrixOptions {
  double test_fraction = 0.2;
  /// Drives the shared split and every spec's training seed.
  std::uint64_t seed = 42;
  Averaging averaging = Averaging::Macro;
  /// Specs trained concurrently; results do not depend on it.
  std::size_t threads = 1;
};

/// Order-independent hash of the test-set ids.
std::uint64_t split_fingerprint(const Dataset& test);

/// One shared stratified split; each spec is trained on the train side and
/// scored on the test side. Spec-level errors are recorded as failures.
/// Throws dataset-level errors (InsufficientClassSize, CoverageGap when a
/// record has no bundle).
MatrixRun run_experiment_matrix(std::span<const ExperimentSpec> specs, const Dataset& dataset,
                                std::span<const FeatureBundle> bundles, const FusionDims& dims,
                                const BackendRegistry& registry, const MatrixOptions& options = {});

/// Six unimodal, five bimodal and four trimodal specs.
std::vector<ExperimentSpec> default_experiment_matrix(const HyperParams& hyper = {});

/// A JSON array of specs, or an object with an "experiments" array.
/// Throws ConfigError.
std::vector<ExperimentSpec> load_experiment_specs(const std::filesystem::path& path, const HyperParams& defaults = {});
std::vector<ExperimentSpec> experiment_specs_from_json(const nlohmann::json& doc, const HyperParams& defaults = {});

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { TableText, Delimited };

std::optional<ReportFormat> report_format_from_string(std::string_view name);

/// Round-half-even on the shortest decimal that round-trips the value, so
/// 0.595 prints as "0.60" and 0.585 as "0.58".
std::string format_metric(double value, int decimals = 2);

/// Unimodal, bimodal and trimodal sections with columns Modalities, Model,
/// Accuracy, Precision, Recall, F1. Failures are listed after the sections.
std::string render_report(std::span<const ExperimentResult> results, ReportFormat format,
                          std::span<const ExperimentFailure> failures = {});

/// Mean and range of each metric over the seeds a spec was run with.
struct SeedSummary {
  std::string spec_name;
  std::vector<Modality> modalities;
  std::vector<std::string> backend_combo;
  std::size_t runs = 0;
  MetricSet mean;
  MetricSet min;
  MetricSet max;
};

std::vector<SeedSummary> summarize_seeds(std::span<const MatrixRun> runs);
std::string render_seed_summary(std::span<const SeedSummary> summaries, ReportFormat format);

}  // namespace mmfd
