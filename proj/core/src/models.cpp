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

#include "mmfd/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "classifiers.hpp"
#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"

namespace mmfd {
namespace {

constexpr Modality kCanonicalOrder[] = {Modality::Text, Modality::Image, Modality::Social};
constexpr std::string_view kModelFormat = "mmfd-model/1";

std::uint64_t member_seed(std::uint64_t seed, std::size_t index) {
  return index == 0 ? seed : splitmix64(seed + index * kGoldenGamma);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("model file has invalid hex parameters");
  };
  if (hex.size() % 2) throw Error("model file has odd-length hex parameters");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

void append_blob(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> blob) {
  const auto n = static_cast<std::uint32_t>(blob.size());
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(n >> (8 * b)));
  out.insert(out.end(), blob.begin(), blob.end());
}

std::vector<std::span<const std::uint8_t>> split_blobs(std::span<const std::uint8_t> all) {
  std::vector<std::span<const std::uint8_t>> out;
  std::size_t pos = 0;
  while (pos < all.size()) {
    if (all.size() - pos < 4) throw Error("truncated model parameters");
    std::uint32_t n = 0;
    for (int b = 3; b >= 0; --b) n = (n << 8) | all[pos + static_cast<std::size_t>(b)];
    pos += 4;
    if (all.size() - pos < n) throw Error("truncated model parameters");
    out.push_back(all.subspan(pos, n));
    pos += n;
  }
  return out;
}

std::size_t input_width(const ExperimentSpec& spec, const FusionDims& dims) {
  std::size_t w = 0;
  for (Modality m : kCanonicalOrder)
    if (spec.selects(m)) w += dims.width(m);
  return w;
}

void validate_spec(const ExperimentSpec& spec, const BackendRegistry& registry) {
  if (spec.modalities.empty()) throw ConfigError("experiment '" + spec.name + "' selects no modality");
  if (spec.backend_combo.empty()) throw ConfigError("experiment '" + spec.name + "' names no backend");
  for (const auto& name : spec.backend_combo) registry.resolve(name);
  spec.hyperparams.validate();
}

// Social vectors with the social modality present, for fitting the normaliser.
std::vector<std::vector<double>> present_social_blocks(std::span<const LabeledBundle> training, const FusionDims& dims) {
  std::vector<std::vector<double>> out;
  for (const auto& lb : training) {
    if (!lb.bundle.modality_mask.social) continue;
    auto block = lb.bundle.block(Modality::Social, dims);
    out.emplace_back(block.begin(), block.end());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void HyperParams::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (optimizer != "adam" && optimizer != "sgd") throw ConfigError("unknown optimizer '" + optimizer + "'");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
  if (loss != "categorical_cross_entropy") throw ConfigError("unknown loss '" + loss + "'");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (early_stop_patience && *early_stop_patience == 0) throw ConfigError("early_stop_patience must be positive");
  if (hidden_units == 0) throw ConfigError("hidden_units must be positive");
}

bool ExperimentSpec::selects(Modality m) const noexcept {
  return std::find(modalities.begin(), modalities.end(), m) != modalities.end();
}

std::string ExperimentSpec::modality_label() const {
  std::string out;
  for (Modality m : kCanonicalOrder) {
    if (!selects(m)) continue;
    if (!out.empty()) out += '+';
    out += to_string(m);
  }
  return out;
}

std::string ExperimentSpec::backend_label() const {
  std::string out;
  for (const auto& b : backend_combo) {
    if (!out.empty()) out += '+';
    out += b;
  }
  return out;
}

std::optional<Modality> modality_from_string(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  if (lower == "text") return Modality::Text;
  if (lower == "image") return Modality::Image;
  if (lower == "social") return Modality::Social;
  return std::nullopt;
}

nlohmann::json to_json(const HyperParams& h) {
  nlohmann::json doc = {{"batch_size", h.batch_size},   {"optimizer", h.optimizer},
                        {"learning_rate", h.learning_rate}, {"loss", h.loss},
                        {"epochs", h.epochs},           {"class_weighting", h.class_weighting},
                        {"hidden_units", h.hidden_units}};
  doc["early_stop_patience"] = h.early_stop_patience ? nlohmann::json(*h.early_stop_patience) : nlohmann::json();
  return doc;
}

HyperParams hyperparams_from_json(const nlohmann::json& doc, const HyperParams& defaults) {
  if (!doc.is_object()) throw ConfigError("hyperparams must be an object");
  HyperParams h = defaults;
  try {
    if (doc.contains("batch_size")) h.batch_size = doc.at("batch_size").get<std::size_t>();
    if (doc.contains("optimizer")) h.optimizer = doc.at("optimizer").get<std::string>();
    if (doc.contains("learning_rate")) h.learning_rate = doc.at("learning_rate").get<double>();
    if (doc.contains("loss")) h.loss = doc.at("loss").get<std::string>();
    if (doc.contains("epochs")) h.epochs = doc.at("epochs").get<std::size_t>();
    if (doc.contains("early_stop_patience")) {
      const auto& p = doc.at("early_stop_patience");
      h.early_stop_patience = p.is_null() ? std::nullopt : std::optional<std::size_t>(p.get<std::size_t>());
    }
    if (doc.contains("class_weighting")) h.class_weighting = doc.at("class_weighting").get<bool>();
    if (doc.contains("hidden_units")) h.hidden_units = doc.at("hidden_units").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid hyperparams: ") + e.what());
  }
  h.validate();
  return h;
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json mods = nlohmann::json::array();
  for (Modality m : spec.modalities) mods.push_back(std::string(to_string(m)));
  return {{"name", spec.name},
          {"modalities", mods},
          {"backend_combo", spec.backend_combo},
          {"hyperparams", to_json(spec.hyperparams)},
          {"seed", spec.seed}};
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc, const HyperParams& defaults) {
  if (!doc.is_object()) throw ConfigError("experiment spec must be an object");
  ExperimentSpec spec;
  try {
    spec.name = doc.at("name").get<std::string>();
    for (const auto& m : doc.at("modalities")) {
      auto parsed = modality_from_string(m.get<std::string>());
      if (!parsed) throw ConfigError("unknown modality '" + m.get<std::string>() + "'");
      if (!spec.selects(*parsed)) spec.modalities.push_back(*parsed);
    }
    spec.backend_combo = doc.at("backend_combo").get<std::vector<std::string>>();
    spec.hyperparams = doc.contains("hyperparams") ? hyperparams_from_json(doc.at("hyperparams"), defaults) : defaults;
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment spec: ") + e.what());
  }
  std::sort(spec.modalities.begin(), spec.modalities.end());
  if (spec.modalities.empty()) throw ConfigError("experiment '" + spec.name + "' selects no modality");
  if (spec.backend_combo.empty()) throw ConfigError("experiment '" + spec.name + "' names no backend");
  return spec;
}

// ---------------------------------------------------------------------------

double Classifier::probability(std::span<const double> x) const {
  const double z = decision_score(x);
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

BackendRegistry BackendRegistry::with_defaults() {
  BackendRegistry registry;
  registry.register_backend("linear", [](std::size_t dim, const HyperParams&) {
    return detail::make_dense_network("linear", dim, 0);
  });
  registry.register_backend("mlp", [](std::size_t dim, const HyperParams& hyper) {
    return detail::make_dense_network("mlp", dim, hyper.hidden_units);
  });
  return registry;
}

void BackendRegistry::register_backend(const std::string& name, BackendFactory factory) {
  if (name.empty()) throw ConfigError("backend name must not be empty");
  if (!factory) throw ConfigError("backend factory for '" + name + "' is empty");
  if (!factories_.emplace(name, std::move(factory)).second) throw DuplicateName("backend '" + name + "' already registered");
}

const BackendFactory& BackendRegistry::resolve(const std::string& name) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw NotRegistered("backend '" + name + "' is not registered");
  return it->second;
}

std::vector<std::string> BackendRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> model_input(const TrainedModel& model, const FeatureBundle& bundle) {
  if (bundle.fusion_vec.size() != model.dims.total())
    throw DimensionMismatch("fusion vector of '" + bundle.tweet_id + "' has length " +
                            std::to_string(bundle.fusion_vec.size()) + ", model expects " +
                            std::to_string(model.dims.total()));
  std::vector<double> out;
  out.reserve(input_width(model.spec, model.dims));
  for (Modality m : kCanonicalOrder) {
    if (!model.spec.selects(m)) continue;
    auto block = bundle.block(m, model.dims);
    if (m == Modality::Social && bundle.modality_mask.social && !model.normalizer.empty()) {
      auto scaled = apply_normalizer(model.normalizer, block);
      out.insert(out.end(), scaled.begin(), scaled.end());
    } else {
      out.insert(out.end(), block.begin(), block.end());
    }
  }
  return out;
}

TrainedModel train(const ExperimentSpec& spec, std::span<const LabeledBundle> training, const FusionDims& dims,
                   const BackendRegistry& registry, const SocialVectorSchema& schema) {
  validate_spec(spec, registry);
  std::size_t positives = 0;
  for (const auto& lb : training) positives += lb.label == BinaryLabel::Misinformation;
  const std::size_t negatives = training.size() - positives;
  if (positives < 2 || negatives < 2)
    throw InsufficientData("training needs at least 2 examples per class (got " + std::to_string(positives) + "/" +
                           std::to_string(negatives) + ")");
  if (spec.selects(Modality::Social) && dims.social != schema.total_dim())
    throw DimensionMismatch("social block width " + std::to_string(dims.social) + " does not match schema width " +
                            std::to_string(schema.total_dim()));

  TrainedModel model;
  model.spec = spec;
  model.dims = dims;
  model.schema_version = schema.version();
  if (spec.selects(Modality::Social)) {
    auto social = present_social_blocks(training, dims);
    if (!social.empty()) model.normalizer = fit_normalizer(social, schema);
  }

  TrainingData data;
  data.rows = training.size();
  data.cols = input_width(spec, dims);
  data.features.reserve(data.rows * data.cols);
  const double n = static_cast<double>(training.size());
  const double w_pos = spec.hyperparams.class_weighting ? n / (2.0 * static_cast<double>(positives)) : 1.0;
  const double w_neg = spec.hyperparams.class_weighting ? n / (2.0 * static_cast<double>(negatives)) : 1.0;
  for (const auto& lb : training) {
    auto x = model_input(model, lb.bundle);
    data.features.insert(data.features.end(), x.begin(), x.end());
    const bool pos = lb.label == BinaryLabel::Misinformation;
    data.targets.push_back(pos ? 1 : 0);
    data.weights.push_back(pos ? w_pos : w_neg);
  }

  for (std::size_t i = 0; i < spec.backend_combo.size(); ++i) {
    auto member = registry.resolve(spec.backend_combo[i])(data.cols, spec.hyperparams);
    model.member_histories.push_back(member->fit(data, spec.hyperparams, member_seed(spec.seed, i)));
    append_blob(model.parameters, member->parameters());
    model.members.push_back(std::move(member));
  }
  model.training_history = model.member_histories.front();
  model.fitted_at = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return model;
}

Prediction predict(const TrainedModel& model, const FeatureBundle& bundle) {
  if (model.members.empty()) throw Error("model has no fitted members");
  const auto x = model_input(model, bundle);
  double sum = 0.0;
  for (const auto& member : model.members) sum += member->probability(x);
  Prediction p;
  p.probability = std::clamp(sum / static_cast<double>(model.members.size()), 0.0, 1.0);
  p.label = label_for_probability(p.probability);
  return p;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  nlohmann::json members = nlohmann::json::array();
  const auto blobs = split_blobs(model.parameters);
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    members.push_back({{"backend", model.spec.backend_combo.at(i)},
                       {"parameters", to_hex(blobs[i])},
                       {"history", i < model.member_histories.size() ? model.member_histories[i] : std::vector<double>{}}});
  }
  nlohmann::json doc = {{"format", kModelFormat},
                        {"schema_version", model.schema_version},
                        {"spec", to_json(model.spec)},
                        {"seed", model.spec.seed},
                        {"fitted_at", format_utc_timestamp(model.fitted_at)},
                        {"dims", {model.dims.text, model.dims.image, model.dims.social}},
                        {"normalizer", model.normalizer.to_json()},
                        {"members", members}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw Error("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path, const BackendRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file " + path.string());
  TrainedModel model;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("format").get<std::string>() != kModelFormat) throw Error("unsupported model format in " + path.string());
    model.schema_version = doc.at("schema_version").get<int>();
    if (model.schema_version != SocialVectorSchema::kVersion)
      throw SchemaMismatch("model schema version " + std::to_string(model.schema_version) + " is not supported");
    model.spec = experiment_spec_from_json(doc.at("spec"));
    const auto& dims = doc.at("dims");
    model.dims = FusionDims{dims.at(0).get<std::size_t>(), dims.at(1).get<std::size_t>(), dims.at(2).get<std::size_t>()};
    model.normalizer = Normalizer::from_json(doc.at("normalizer"));
    auto fitted = parse_utc_timestamp(doc.at("fitted_at").get<std::string>());
    if (!fitted) throw Error("model file has an invalid fitted_at");
    model.fitted_at = *fitted;
    const auto& members = doc.at("members");
    if (members.size() != model.spec.backend_combo.size()) throw Error("model member count does not match its spec");
    const std::size_t width = input_width(model.spec, model.dims);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto backend = members[i].at("backend").get<std::string>();
      if (backend != model.spec.backend_combo[i]) throw Error("model member backend does not match its spec");
      auto member = registry.resolve(backend)(width, model.spec.hyperparams);
      const auto blob = from_hex(members[i].at("parameters").get<std::string>());
      member->load_parameters(blob);
      append_blob(model.parameters, blob);
      model.member_histories.push_back(members[i].value("history", std::vector<double>{}));
      model.members.push_back(std::move(member));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed model file " + path.string() + ": " + e.what());
  }
  if (!model.member_histories.empty()) model.training_history = model.member_histories.front();
  return model;
}

}  // namespace mmfd
