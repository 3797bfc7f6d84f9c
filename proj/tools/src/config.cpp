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

#include <fstream>
#include <set>

#include "mmfd/cli.hpp"
#include "mmfd/encoders.hpp"
#include "mmfd/error.hpp"

namespace mmfd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::optional<fs::path> optional_path(const json& doc, const char* key, const fs::path& base) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return resolve(base, doc.at(key).get<std::string>());
}

EncoderChoice encoder_from_json(const json& doc, EncoderChoice fallback, const std::string& where) {
  reject_unknown(doc, {"name", "dim", "seed"}, where);
  if (doc.contains("name")) fallback.name = doc.at("name").get<std::string>();
  if (doc.contains("dim")) fallback.dim = doc.at("dim").get<std::size_t>();
  if (doc.contains("seed")) fallback.seed = doc.at("seed").get<std::uint64_t>();
  return fallback;
}

json optional_path_json(const std::optional<fs::path>& p) { return p ? json(p->string()) : json(); }

}  // namespace

void PipelineConfig::validate() const {
  if (manifest.empty()) throw ConfigError("config names no manifest");
  if (output_dir.empty()) throw ConfigError("config names no output directory");
  if (ocr != "template" && ocr != "none") throw ConfigError("unknown ocr adapter '" + ocr + "'");
  if (detector != "palette" && detector != "none") throw ConfigError("unknown detector adapter '" + detector + "'");
  if (translator != "dictionary" && translator != "none")
    throw ConfigError("unknown translator adapter '" + translator + "'");
  if (translator == "dictionary" && !translation_dictionary)
    throw ConfigError("the dictionary translator needs translation_dictionary");
  if (bot.enabled && bot.endpoint.empty()) throw ConfigError("bot client enabled without an endpoint");
  if (bot.max_requests_per_second < 0) throw ConfigError("max_requests_per_second must not be negative");
  const auto registry = EncoderRegistry::with_defaults();
  if (text_encoder.dim == 0 || image_encoder.dim == 0) throw ConfigError("encoder dims must be positive");
  try {
    registry.make_text(text_encoder.name, text_encoder.dim, text_encoder.seed);
    registry.make_image(image_encoder.name, image_encoder.dim, image_encoder.seed);
  } catch (const NotRegistered& e) {
    throw ConfigError(e.what());
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
  if (threads == 0) throw ConfigError("threads must be positive");
  hyperparams.validate();
  // Unknown backends are left to the matrix, which records them as failed
  // experiments rather than rejecting the whole run.
  for (const auto& spec : experiments) {
    if (spec.modalities.empty()) throw ConfigError("experiment '" + spec.name + "' selects no modality");
  }
}

PipelineConfig config_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig c;
  try {
    reject_unknown(doc,
                   {"manifest", "output_dir", "reference_date", "verdict_aliases", "gender_dictionary", "stopwords",
                    "adapters", "encoders", "split", "averaging", "hyperparams", "experiments", "threads"},
                   "config");
    if (doc.contains("manifest")) c.manifest = resolve(base_dir, doc.at("manifest").get<std::string>());
    if (doc.contains("output_dir")) c.output_dir = resolve(base_dir, doc.at("output_dir").get<std::string>());
    if (doc.contains("reference_date")) {
      auto date = parse_utc_date(doc.at("reference_date").get<std::string>());
      if (!date) throw ConfigError("reference_date is not a date");
      c.reference_date = *date;
    }
    c.verdict_aliases = optional_path(doc, "verdict_aliases", base_dir);
    c.gender_dictionary = optional_path(doc, "gender_dictionary", base_dir);
    c.stopwords = optional_path(doc, "stopwords", base_dir);

    if (doc.contains("adapters")) {
      const auto& a = doc.at("adapters");
      reject_unknown(a, {"ocr", "detector", "translator", "translation_dictionary", "translation_cache", "bot"},
                     "adapters");
      c.ocr = a.value("ocr", c.ocr);
      c.detector = a.value("detector", c.detector);
      c.translator = a.value("translator", c.translator);
      c.translation_dictionary = optional_path(a, "translation_dictionary", base_dir);
      c.translation_cache = optional_path(a, "translation_cache", base_dir);
      if (a.contains("bot")) {
        const auto& b = a.at("bot");
        reject_unknown(b, {"enabled", "endpoint", "cache_file", "max_requests_per_second", "timeout_ms"}, "adapters.bot");
        c.bot.enabled = b.value("enabled", false);
        c.bot.endpoint = b.value("endpoint", std::string());
        c.bot.cache_file = optional_path(b, "cache_file", base_dir);
        c.bot.max_requests_per_second = b.value("max_requests_per_second", 0.0);
        c.bot.timeout = std::chrono::milliseconds(b.value("timeout_ms", 10000));
      }
    }
    if (doc.contains("encoders")) {
      const auto& e = doc.at("encoders");
      reject_unknown(e, {"text", "image"}, "encoders");
      if (e.contains("text")) c.text_encoder = encoder_from_json(e.at("text"), c.text_encoder, "encoders.text");
      if (e.contains("image")) c.image_encoder = encoder_from_json(e.at("image"), c.image_encoder, "encoders.image");
    }
    if (doc.contains("split")) {
      const auto& s = doc.at("split");
      reject_unknown(s, {"test_fraction", "seed", "extra_seeds"}, "split");
      c.test_fraction = s.value("test_fraction", c.test_fraction);
      c.seed = s.value("seed", c.seed);
      c.extra_seeds = s.value("extra_seeds", std::vector<std::uint64_t>{});
    }
    if (doc.contains("averaging")) {
      auto a = averaging_from_string(doc.at("averaging").get<std::string>());
      if (!a) throw ConfigError("averaging must be macro or binary");
      c.averaging = *a;
    }
    if (doc.contains("hyperparams")) c.hyperparams = hyperparams_from_json(doc.at("hyperparams"));
    if (doc.contains("experiments")) {
      const auto& e = doc.at("experiments");
      if (e.is_string()) {
        if (e.get<std::string>() != "default")
          c.experiments = load_experiment_specs(resolve(base_dir, e.get<std::string>()), c.hyperparams);
      } else {
        c.experiments = experiment_specs_from_json(e, c.hyperparams);
      }
    }
    if (doc.contains("threads")) c.threads = doc.at("threads").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc, fs::absolute(path).parent_path());
}

json to_json(const PipelineConfig& c) {
  json experiments = json::array();
  for (const auto& s : c.experiments) experiments.push_back(mmfd::to_json(s));
  return {
      {"manifest", c.manifest.string()},
      {"output_dir", c.output_dir.string()},
      {"reference_date", format_utc_date(c.reference_date)},
      {"verdict_aliases", optional_path_json(c.verdict_aliases)},
      {"gender_dictionary", optional_path_json(c.gender_dictionary)},
      {"stopwords", optional_path_json(c.stopwords)},
      {"adapters",
       {{"ocr", c.ocr},
        {"detector", c.detector},
        {"translator", c.translator},
        {"translation_dictionary", optional_path_json(c.translation_dictionary)},
        {"translation_cache", optional_path_json(c.translation_cache)},
        {"bot",
         {{"enabled", c.bot.enabled},
          {"endpoint", c.bot.endpoint},
          {"cache_file", optional_path_json(c.bot.cache_file)},
          {"max_requests_per_second", c.bot.max_requests_per_second},
          {"timeout_ms", c.bot.timeout.count()}}}}},
      {"encoders",
       {{"text", {{"name", c.text_encoder.name}, {"dim", c.text_encoder.dim}, {"seed", c.text_encoder.seed}}},
        {"image", {{"name", c.image_encoder.name}, {"dim", c.image_encoder.dim}, {"seed", c.image_encoder.seed}}}}},
      {"split", {{"test_fraction", c.test_fraction}, {"seed", c.seed}, {"extra_seeds", c.extra_seeds}}},
      {"averaging", std::string(to_string(c.averaging))},
      {"hyperparams", mmfd::to_json(c.hyperparams)},
      {"experiments", c.experiments.empty() ? json("default") : experiments},
      {"threads", c.threads},
  };
}

}  // namespace mmfd::cli
