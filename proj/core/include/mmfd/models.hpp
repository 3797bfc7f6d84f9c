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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfd/corpus.hpp"
#include "mmfd/encoders.hpp"
#include "mmfd/features.hpp"
#include "mmfd/time.hpp"

namespace mmfd {

struct HyperParams {
  std::size_t batch_size = 32;
  std::string optimizer = "adam";  // adam | sgd
  double learning_rate = 0.1;
  std::string loss = "categorical_cross_entropy";
  std::size_t epochs = 50;
  std::optional<std::size_t> early_stop_patience = 5;
  /// Inverse-frequency class weights in the loss.
  bool class_weighting = true;
  /// Hidden width of the "mlp" backend.
  std::size_t hidden_units = 16;

  /// Throws ConfigError.
  void validate() const;
  bool operator==(const HyperParams&) const = default;
};

struct ExperimentSpec {
  std::string name;
  std::vector<Modality> modalities;
  std::vector<std::string> backend_combo;
  HyperParams hyperparams;
  std::uint64_t seed = 0;

  bool selects(Modality m) const noexcept;
  /// "Text+Image+Social" in canonical order.
  std::string modality_label() const;
  /// "linear+mlp".
  std::string backend_label() const;

  bool operator==(const ExperimentSpec&) const = default;
};

nlohmann::json to_json(const HyperParams& h);
HyperParams hyperparams_from_json(const nlohmann::json& doc, const HyperParams& defaults = {});
nlohmann::json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc, const HyperParams& defaults = {});
std::optional<Modality> modality_from_string(std::string_view name);

/// Rows of a design matrix with binary targets (1 = misinformation) and
/// per-row loss weights.
struct TrainingData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> features;  // row-major
  std::vector<int> targets;
  std::vector<double> weights;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * cols, cols);
  }
};

/// A trainable binary classifier over fixed-length inputs.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string backend() const = 0;
  virtual std::size_t input_dim() const = 0;
  /// Returns the per-epoch training loss. Throws NonFiniteLoss.
  virtual std::vector<double> fit(const TrainingData& data, const HyperParams& hyper, std::uint64_t seed) = 0;
  /// Logit of misinformation over other.
  virtual double decision_score(std::span<const double> x) const = 0;
  double probability(std::span<const double> x) const;
  virtual std::vector<std::uint8_t> parameters() const = 0;
  virtual void load_parameters(std::span<const std::uint8_t> blob) = 0;
};

using BackendFactory = std::function<std::unique_ptr<Classifier>(std::size_t input_dim, const HyperParams& hyper)>;

class BackendRegistry {
 public:
  /// "linear" (softmax regression) and "mlp" (one tanh hidden layer).
  static BackendRegistry with_defaults();

  /// Throws DuplicateName.
  void register_backend(const std::string& name, BackendFactory factory);
  /// Throws NotRegistered.
  const BackendFactory& resolve(const std::string& name) const;
  bool contains(const std::string& name) const { return factories_.count(name) != 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, BackendFactory> factories_;
};

struct LabeledBundle {
  FeatureBundle bundle;
  BinaryLabel label = BinaryLabel::Other;
};

/// Fitted ensemble of the spec's backends. Immutable once trained.
struct TrainedModel {
  ExperimentSpec spec;
  FusionDims dims;
  int schema_version = SocialVectorSchema::kVersion;
  Normalizer normalizer;
  /// Concatenation of u32 length-prefixed member parameter blobs.
  std::vector<std::uint8_t> parameters;
  UtcInstant fitted_at{};
  /// Loss history of the first member; all members in member_histories.
  std::vector<double> training_history;
  std::vector<std::vector<double>> member_histories;
  std::vector<std::shared_ptr<const Classifier>> members;
};

/// Input the backends see: selected blocks in text, image, social order,
/// with the social block min-max normalised.
std::vector<double> model_input(const TrainedModel& model, const FeatureBundle& bundle);

/// Throws NotRegistered, InsufficientData, DimensionMismatch, NonFiniteLoss,
/// ConfigError.
TrainedModel train(const ExperimentSpec& spec, std::span<const LabeledBundle> training, const FusionDims& dims,
                   const BackendRegistry& registry,
                   const SocialVectorSchema& schema = SocialVectorSchema::standard());

struct Prediction {
  double probability = 0.0;
  BinaryLabel label = BinaryLabel::Other;
};

/// Probability >= 0.5 is Misinformation.
constexpr BinaryLabel label_for_probability(double probability) noexcept {
  return probability >= 0.5 ? BinaryLabel::Misinformation : BinaryLabel::Other;
}

/// Throws DimensionMismatch.
Prediction predict(const TrainedModel& model, const FeatureBundle& bundle);

/// JSON document with header fields (format, schema_version, spec, seed,
/// fitted_at) and hex-encoded member parameters.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path, const BackendRegistry& registry);

}  // namespace mmfd
