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

#include "mmfd/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"

namespace mmfd {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

ExperimentSpec make_spec(std::string name, std::vector<Modality> modalities, std::vector<std::string> combo,
                         const HyperParams& hyper) {
  ExperimentSpec spec;
  spec.name = std::move(name);
  spec.modalities = std::move(modalities);
  spec.backend_combo = std::move(combo);
  spec.hyperparams = hyper;
  return spec;
}

const char* section_title(std::size_t modality_count) {
  switch (modality_count) {
    case 1: return "Unimodal";
    case 2: return "Bimodal";
    default: return "Trimodal";
  }
}

std::string modality_label(std::span<const Modality> modalities) {
  ExperimentSpec tmp;
  tmp.modalities.assign(modalities.begin(), modalities.end());
  return tmp.modality_label();
}

std::string backend_label(std::span<const std::string> combo) {
  std::string out;
  for (const auto& b : combo) {
    if (!out.empty()) out += '+';
    out += b;
  }
  return out;
}

// Delimited cells are quoted only when they contain the delimiter or quotes.
std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct Row {
  std::string modalities;
  std::string model;
  MetricSet metrics;
};

std::vector<std::string> metric_cells(const MetricSet& m) {
  return {format_metric(m.accuracy), format_metric(m.precision), format_metric(m.recall), format_metric(m.f1)};
}

}  // namespace

std::string_view to_string(Averaging a) noexcept { return a == Averaging::Macro ? "macro" : "binary"; }

std::optional<Averaging> averaging_from_string(std::string_view name) {
  if (name == "macro") return Averaging::Macro;
  if (name == "binary") return Averaging::Binary;
  return std::nullopt;
}

ConfusionCounts confusion(std::span<const BinaryLabel> labels, std::span<const BinaryLabel> preds) {
  if (labels.size() != preds.size())
    throw LengthMismatch("labels and predictions differ in length (" + std::to_string(labels.size()) + " vs " +
                         std::to_string(preds.size()) + ")");
  if (labels.empty()) throw LengthMismatch("labels and predictions are empty");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == BinaryLabel::Misinformation;
    const bool predicted = preds[i] == BinaryLabel::Misinformation;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricSet metrics(const ConfusionCounts& c, Averaging averaging) {
  if (c.total() == 0) throw EmptyEvaluation("no evaluated records");
  MetricSet m;
  m.averaging = averaging;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  const double p_pos = ratio(c.tp, c.tp + c.fp);
  const double r_pos = ratio(c.tp, c.tp + c.fn);
  if (averaging == Averaging::Binary) {
    m.precision = p_pos;
    m.recall = r_pos;
    m.f1 = harmonic(p_pos, r_pos);
    return m;
  }
  const double p_neg = ratio(c.tn, c.tn + c.fn);
  const double r_neg = ratio(c.tn, c.tn + c.fp);
  m.precision = (p_pos + p_neg) / 2.0;
  m.recall = (r_pos + r_neg) / 2.0;
  m.f1 = (harmonic(p_pos, r_pos) + harmonic(p_neg, r_neg)) / 2.0;
  return m;
}

std::uint64_t split_fingerprint(const Dataset& test) {
  std::vector<std::string_view> ids;
  ids.reserve(test.size());
  for (const auto& r : test.records()) ids.push_back(r.record.tweet_id);
  std::sort(ids.begin(), ids.end());
  std::string joined;
  for (auto id : ids) {
    joined.append(id);
    joined.push_back('\n');
  }
  return fnv1a64(joined);
}

MatrixRun run_experiment_matrix(std::span<const ExperimentSpec> specs, const Dataset& dataset,
                                std::span<const FeatureBundle> bundles, const FusionDims& dims,
                                const BackendRegistry& registry, const MatrixOptions& options) {
  if (specs.empty()) throw ConfigError("experiment matrix is empty");
  std::unordered_map<std::string_view, const FeatureBundle*> by_id;
  for (const auto& b : bundles) by_id.emplace(b.tweet_id, &b);
  auto bundle_for = [&](const std::string& id) -> const FeatureBundle& {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw CoverageGap(id);
    return *it->second;
  };

  const auto split = split_dataset(dataset, options.test_fraction, options.seed);
  std::vector<LabeledBundle> training;
  training.reserve(split.train.size());
  for (const auto& r : split.train.records()) training.push_back({bundle_for(r.record.tweet_id), r.label});
  std::vector<const FeatureBundle*> test_bundles;
  std::vector<BinaryLabel> test_labels;
  for (const auto& r : split.test.records()) {
    test_bundles.push_back(&bundle_for(r.record.tweet_id));
    test_labels.push_back(r.label);
  }

  MatrixRun run;
  run.seed = options.seed;
  run.split_fingerprint = split_fingerprint(split.test);
  run.train_size = split.train.size();
  run.test_size = split.test.size();

  struct Slot {
    std::optional<ExperimentResult> result;
    std::optional<ExperimentFailure> failure;
  };
  std::vector<Slot> slots(specs.size());

  auto evaluate = [&](std::size_t i) {
    ExperimentSpec spec = specs[i];
    spec.seed = options.seed;
    const auto started = std::chrono::steady_clock::now();
    try {
      const auto model = train(spec, training, dims, registry);
      std::vector<BinaryLabel> preds;
      preds.reserve(test_bundles.size());
      for (const auto* b : test_bundles) preds.push_back(predict(model, *b).label);
      ExperimentResult result;
      result.spec_name = spec.name;
      result.modalities = spec.modalities;
      result.backend_combo = spec.backend_combo;
      result.counts = confusion(test_labels, preds);
      result.metrics = metrics(result.counts, options.averaging);
      result.seed = options.seed;
      result.split_fingerprint = run.split_fingerprint;
      result.wallclock = std::chrono::steady_clock::now() - started;
      slots[i].result = std::move(result);
    } catch (const std::exception& e) {
      spdlog::warn("experiment '{}' failed: {}", spec.name, e.what());
      slots[i].failure = ExperimentFailure{spec.name, e.what()};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, specs.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) evaluate(i);
      });
  }

  for (auto& slot : slots) {
    if (slot.result) run.results.push_back(std::move(*slot.result));
    if (slot.failure) run.failures.push_back(std::move(*slot.failure));
  }
  return run;
}

std::vector<ExperimentSpec> default_experiment_matrix(const HyperParams& hyper) {
  using M = Modality;
  return {
      make_spec("text-linear", {M::Text}, {"linear"}, hyper),
      make_spec("text-mlp", {M::Text}, {"mlp"}, hyper),
      make_spec("image-linear", {M::Image}, {"linear"}, hyper),
      make_spec("image-mlp", {M::Image}, {"mlp"}, hyper),
      make_spec("social-linear", {M::Social}, {"linear"}, hyper),
      make_spec("social-mlp", {M::Social}, {"mlp"}, hyper),
      make_spec("image-social-mlp", {M::Image, M::Social}, {"mlp"}, hyper),
      make_spec("text-social-linear-mlp", {M::Text, M::Social}, {"linear", "mlp"}, hyper),
      make_spec("text-image-linear-mlp", {M::Text, M::Image}, {"linear", "mlp"}, hyper),
      make_spec("text-image-linear", {M::Text, M::Image}, {"linear"}, hyper),
      make_spec("text-image-mlp", {M::Text, M::Image}, {"mlp"}, hyper),
      make_spec("all-mlp-linear-mlp", {M::Text, M::Image, M::Social}, {"mlp", "linear", "mlp"}, hyper),
      make_spec("all-linear", {M::Text, M::Image, M::Social}, {"linear"}, hyper),
      make_spec("all-mlp", {M::Text, M::Image, M::Social}, {"mlp"}, hyper),
      make_spec("all-linear-mlp", {M::Text, M::Image, M::Social}, {"linear", "mlp"}, hyper),
  };
}

std::vector<ExperimentSpec> experiment_specs_from_json(const nlohmann::json& doc, const HyperParams& defaults) {
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("experiments")) throw ConfigError("experiment file has no \"experiments\" array");
    list = &doc.at("experiments");
  }
  if (!list->is_array()) throw ConfigError("experiments must be an array");
  std::vector<ExperimentSpec> specs;
  for (const auto& entry : *list) specs.push_back(experiment_spec_from_json(entry, defaults));
  if (specs.empty()) throw ConfigError("experiment list is empty");
  return specs;
}

std::vector<ExperimentSpec> load_experiment_specs(const std::filesystem::path& path, const HyperParams& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read experiment file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("experiment file " + path.string() + " is not valid JSON: " + e.what());
  }
  return experiment_specs_from_json(doc, defaults);
}

// ---------------------------------------------------------------------------

std::optional<ReportFormat> report_format_from_string(std::string_view name) {
  if (name == "table-text" || name == "text") return ReportFormat::TableText;
  if (name == "delimited" || name == "csv") return ReportFormat::Delimited;
  return std::nullopt;
}

std::string format_metric(double value, int decimals) {
  if (!std::isfinite(value)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc()) return "nan";
  std::string_view text(buf, static_cast<std::size_t>(end - buf));
  const bool negative = !text.empty() && text.front() == '-';
  if (negative) text.remove_prefix(1);
  const auto dot = text.find('.');
  std::string int_part(text.substr(0, dot));
  std::string frac_part = dot == std::string_view::npos ? "" : std::string(text.substr(dot + 1));

  const auto keep = static_cast<std::size_t>(decimals);
  std::string digits = int_part + frac_part.substr(0, std::min(keep, frac_part.size()));
  digits.append(keep - std::min(keep, frac_part.size()), '0');
  bool round_up = false;
  if (frac_part.size() > keep) {
    const char first = frac_part[keep];
    const bool rest_nonzero = frac_part.find_first_not_of('0', keep + 1) != std::string::npos;
    if (first > '5' || (first == '5' && rest_nonzero)) round_up = true;
    else if (first == '5') round_up = (digits.back() - '0') % 2 == 1;
  }
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
      if (i == 0) digits.insert(digits.begin(), '1');
    }
  }
  const std::size_t int_len = digits.size() - keep;
  std::string out = negative && digits.find_first_not_of('0') != std::string::npos ? "-" : "";
  out += digits.substr(0, int_len);
  if (keep) out += '.' + digits.substr(int_len);
  return out;
}

std::string render_report(std::span<const ExperimentResult> results, ReportFormat format,
                          std::span<const ExperimentFailure> failures) {
  std::map<std::size_t, std::vector<Row>> sections;
  for (std::size_t k = 1; k <= 3; ++k) sections[k];
  for (const auto& r : results) {
    const std::size_t k = std::clamp<std::size_t>(r.modalities.size(), 1, 3);
    sections[k].push_back({modality_label(r.modalities), backend_label(r.backend_combo), r.metrics});
  }

  std::ostringstream out;
  if (format == ReportFormat::Delimited) {
    out << "section,modalities,model,accuracy,precision,recall,f1\n";
    for (const auto& [k, rows] : sections)
      for (const auto& row : rows) {
        out << section_title(k) << ',' << csv_cell(row.modalities) << ',' << csv_cell(row.model);
        for (const auto& cell : metric_cells(row.metrics)) out << ',' << cell;
        out << '\n';
      }
    for (const auto& f : failures) out << "failed," << csv_cell(f.spec_name) << ',' << csv_cell(f.error) << ",,,,\n";
    return out.str();
  }

  bool first = true;
  for (const auto& [k, rows] : sections) {
    if (!first) out << '\n';
    first = false;
    out << section_title(k) << '\n';
    out << "Modalities | Model | Accuracy | Precision | Recall | F1\n";
    for (const auto& row : rows) {
      out << row.modalities << " | " << row.model;
      for (const auto& cell : metric_cells(row.metrics)) out << " | " << cell;
      out << '\n';
    }
  }
  if (!failures.empty()) {
    out << "\nFailed\n";
    for (const auto& f : failures) out << f.spec_name << ": " << f.error << '\n';
  }
  return out.str();
}

std::vector<SeedSummary> summarize_seeds(std::span<const MatrixRun> runs) {
  std::vector<SeedSummary> out;
  std::map<std::string, std::size_t> index;
  auto fold = [](MetricSet& acc, const MetricSet& m, auto op) {
    acc.accuracy = op(acc.accuracy, m.accuracy);
    acc.precision = op(acc.precision, m.precision);
    acc.recall = op(acc.recall, m.recall);
    acc.f1 = op(acc.f1, m.f1);
  };
  for (const auto& run : runs)
    for (const auto& r : run.results) {
      auto [it, inserted] = index.emplace(r.spec_name, out.size());
      if (inserted) {
        SeedSummary s;
        s.spec_name = r.spec_name;
        s.modalities = r.modalities;
        s.backend_combo = r.backend_combo;
        s.mean = MetricSet{0, 0, 0, 0, r.metrics.averaging};
        s.min = r.metrics;
        s.max = r.metrics;
        out.push_back(std::move(s));
      }
      auto& s = out[it->second];
      ++s.runs;
      fold(s.mean, r.metrics, [](double a, double b) { return a + b; });
      fold(s.min, r.metrics, [](double a, double b) { return std::min(a, b); });
      fold(s.max, r.metrics, [](double a, double b) { return std::max(a, b); });
    }
  for (auto& s : out) {
    const double n = static_cast<double>(s.runs);
    fold(s.mean, s.mean, [n](double a, double) { return a / n; });
  }
  return out;
}

std::string render_seed_summary(std::span<const SeedSummary> summaries, ReportFormat format) {
  std::ostringstream out;
  const bool delimited = format == ReportFormat::Delimited;
  if (delimited) {
    out << "modalities,model,runs,metric,mean,min,max\n";
  } else {
    out << "Modalities | Model | Runs | Accuracy | Precision | Recall | F1\n";
  }
  for (const auto& s : summaries) {
    const auto mods = modality_label(s.modalities);
    const auto model = backend_label(s.backend_combo);
    const std::pair<const char*, double MetricSet::*> fields[] = {
        {"accuracy", &MetricSet::accuracy}, {"precision", &MetricSet::precision},
        {"recall", &MetricSet::recall}, {"f1", &MetricSet::f1}};
    if (delimited) {
      for (const auto& [name, field] : fields)
        out << csv_cell(mods) << ',' << csv_cell(model) << ',' << s.runs << ',' << name << ','
            << format_metric(s.mean.*field) << ',' << format_metric(s.min.*field) << ','
            << format_metric(s.max.*field) << '\n';
    } else {
      out << mods << " | " << model << " | " << s.runs;
      for (const auto& [name, field] : fields)
        out << " | " << format_metric(s.mean.*field) << " [" << format_metric(s.min.*field) << ", "
            << format_metric(s.max.*field) << "]";
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace mmfd
