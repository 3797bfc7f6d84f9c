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
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "mmfd/cli.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/error.hpp"
#include "mmfd/features.hpp"
#include "mmfd/pipeline.hpp"
#include "mmfd/propagation.hpp"
#include "mmfd/synth.hpp"

namespace mmfd::cli {
namespace {

namespace fs = std::filesystem;

VerdictAliasTable aliases_for(const PipelineConfig& c) {
  return c.verdict_aliases ? VerdictAliasTable::load(*c.verdict_aliases) : VerdictAliasTable::defaults();
}

StopwordList stopwords_for(const PipelineConfig& c) {
  return c.stopwords ? StopwordList::load(*c.stopwords) : StopwordList::english();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

Dataset load_ingested(const PipelineConfig& c) {
  if (!fs::exists(c.dataset_path()))
    throw Error("no ingested dataset at " + c.dataset_path().string() + "; run ingest first");
  return load_dataset(c.dataset_path(), aliases_for(c)).dataset;
}

std::string ratio_line(const char* name, std::size_t k, std::size_t n, const char* what) {
  return std::string(name) + ": " + std::to_string(k) + "/" + std::to_string(n) + " " + what + "\n";
}

}  // namespace

int cmd_ingest(const PipelineConfig& config, std::ostream& out) {
  auto loaded = load_dataset(config.manifest, aliases_for(config));
  fs::create_directories(config.output_dir);
  write_rejects(config.manifest, loaded.rejects);
  save_dataset(loaded.dataset, config.dataset_path());
  const auto& d = loaded.dataset;
  out << d.size() << " records (" << d.count(BinaryLabel::Misinformation) << " misinformation / "
      << d.count(BinaryLabel::Other) << " other)\n";
  if (!loaded.rejects.empty())
    out << loaded.rejects.size() << " rejected, see " << rejects_path_for(config.manifest).string() << "\n";
  return kExitOk;
}

int cmd_enrich(const PipelineConfig& config, std::ostream& out) {
  const Dataset dataset = load_ingested(config);
  fs::create_directories(config.output_dir);

  GenderDictionary genders;
  if (config.gender_dictionary) {
    genders = GenderDictionary::load(*config.gender_dictionary);
  } else {
    spdlog::warn("no gender dictionary configured; every account is undetermined");
  }
  const StopwordList stopwords = stopwords_for(config);

  std::optional<DictionaryTranslator> translator;
  if (config.translator == "dictionary") translator = DictionaryTranslator::load(*config.translation_dictionary);
  std::optional<TranslationCache> cache;
  if (config.translation_cache) cache.emplace(*config.translation_cache);

  TemplateOcrEngine template_ocr;
  PaletteObjectDetector palette;
  const auto encoders = EncoderRegistry::with_defaults();
  const auto similarity = encoders.make_text(config.text_encoder.name, config.text_encoder.dim, config.text_encoder.seed);

  std::optional<BotScoreClient> bot;
  if (config.bot.enabled) {
    std::shared_ptr<BotScoreTransport> transport = HttpBotScoreTransport::from_environment(config.bot.endpoint, config.bot.timeout);
    BotScoreClientOptions options;
    options.cache_file = config.bot.cache_file;
    options.max_requests_per_second = config.bot.max_requests_per_second;
    bot.emplace(std::move(transport), std::move(options));
  }

  EnrichmentContext context;
  context.genders = &genders;
  context.stopwords = &stopwords;
  context.translator = translator ? &*translator : nullptr;
  context.translation_cache = cache ? &*cache : nullptr;
  context.ocr = config.ocr == "template" ? &template_ocr : nullptr;
  context.detector = config.detector == "palette" ? &palette : nullptr;
  context.similarity_encoder = similarity.get();
  context.bot = bot ? &*bot : nullptr;
  context.reference_date = config.reference_date;
  context.threads = config.threads;

  const auto run = enrich_dataset(dataset, context);
  save_enrichments(run.records, config.enrichment_path());

  const auto& s = run.summary;
  out << s.records << " records enriched\n";
  out << ratio_line("bot_score", s.bot_scores, s.records, "fetched");
  out << ratio_line("ocr", s.ocr_text, s.records, "with text");
  out << ratio_line("objects", s.with_objects, s.records, "with detections");
  out << ratio_line("similarity", s.with_similarity, s.records, "computed");
  out << ratio_line("images", s.unreadable_images, s.with_media, "unreadable");
  out << "translated: " << s.translated << "\n";
  out << "external calls: translation=" << (translator ? translator->calls() : 0)
      << " bot=" << (bot ? bot->network_calls() : 0) << "\n";
  return kExitOk;
}

int cmd_run(const PipelineConfig& config, std::ostream& out) {
  const Dataset dataset = load_ingested(config);
  if (!fs::exists(config.enrichment_path()))
    throw Error("no enrichment store at " + config.enrichment_path().string() + "; run enrich first");
  const auto enrichments = load_enrichments(config.enrichment_path());
  fs::create_directories(config.output_dir);

  const auto encoders = EncoderRegistry::with_defaults();
  const auto text = encoders.make_text(config.text_encoder.name, config.text_encoder.dim, config.text_encoder.seed);
  const auto image =
      encoders.make_image(config.image_encoder.name, config.image_encoder.dim, config.image_encoder.seed);
  const StopwordList stopwords = stopwords_for(config);
  FeatureContext features;
  features.text_encoder = text.get();
  features.image_encoder = image.get();
  features.stopwords = &stopwords;
  features.threads = config.threads;
  FeatureStore store;
  store.header.dims = features.dims();
  store.header.text_encoder = text->name();
  store.header.image_encoder = image->name();
  store.bundles = build_feature_bundles(dataset, enrichments, features);
  save_feature_store(store, config.feature_store_path());

  const auto specs = config.experiments.empty() ? default_experiment_matrix(config.hyperparams) : config.experiments;
  const auto registry = BackendRegistry::with_defaults();
  MatrixOptions options;
  options.test_fraction = config.test_fraction;
  options.averaging = config.averaging;
  options.threads = config.threads;

  std::vector<MatrixRun> runs;
  std::vector<std::uint64_t> seeds{config.seed};
  seeds.insert(seeds.end(), config.extra_seeds.begin(), config.extra_seeds.end());
  for (auto seed : seeds) {
    options.seed = seed;
    runs.push_back(run_experiment_matrix(specs, dataset, store.bundles, store.header.dims, registry, options));
  }
  const auto& primary = runs.front();
  const auto text_report = render_report(primary.results, ReportFormat::TableText, primary.failures);
  write_file(config.output_dir / "report.txt", text_report);
  write_file(config.output_dir / "report.csv", render_report(primary.results, ReportFormat::Delimited, primary.failures));
  if (runs.size() > 1) {
    const auto summary = summarize_seeds(runs);
    write_file(config.output_dir / "seed_summary.txt", render_seed_summary(summary, ReportFormat::TableText));
    write_file(config.output_dir / "seed_summary.csv", render_seed_summary(summary, ReportFormat::Delimited));
  }
  const auto propagation = descriptive_stats(dataset, enrichments);
  write_file(config.output_dir / "propagation.txt", render_propagation_report(propagation, ReportFormat::TableText));
  write_file(config.output_dir / "propagation.csv", render_propagation_report(propagation, ReportFormat::Delimited));

  out << text_report;
  out << "\n" << primary.results.size() << " results, " << primary.failures.size() << " failed (train "
      << primary.train_size << ", test " << primary.test_size << ")\n";
  out << "reports written to " << config.output_dir.string() << "\n";
  bool failed = false;
  for (const auto& r : runs) failed = failed || !r.failures.empty();
  return failed ? kExitPartialFailure : kExitOk;
}

int cmd_synth(const fs::path& directory, std::uint64_t seed, std::ostream& out) {
  SyntheticCorpusOptions options;
  options.seed = seed;
  const auto corpus = write_synthetic_corpus(directory, options);
  const nlohmann::json config = {
      {"manifest", "manifest.jsonl"},
      {"output_dir", "out"},
      {"gender_dictionary", "genders.tsv"},
      {"adapters",
       {{"translator", "dictionary"},
        {"translation_dictionary", "translations.tsv"},
        {"translation_cache", "translation_cache.tsv"}}},
      {"encoders", {{"text", {{"name", "hash"}, {"dim", 64}}}, {"image", {{"name", "histogram"}, {"dim", 32}}}}},
      {"split", {{"test_fraction", 0.2}, {"seed", 42}}},
  };
  write_file(directory / "config.json", config.dump(2) + "\n");
  out << "wrote " << corpus.records << " records to " << directory.string() << "\n";
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimodal misinformation detection pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string manifest;
  std::string experiments;
  std::optional<double> test_fraction;
  std::optional<std::size_t> threads;
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline config (JSON)")->required();
    cmd->add_option("--seed", seed, "Split and training seed");
    cmd->add_option("--out", output_dir, "Output directory");
    cmd->add_option("--manifest", manifest, "Manifest path");
    cmd->add_option("--threads", threads, "Worker threads");
  };
  auto* ingest = app.add_subcommand("ingest", "Validate the manifest and write the dataset");
  auto* enrich = app.add_subcommand("enrich", "Derive enrichment features");
  auto* run = app.add_subcommand("run", "Encode features, run the experiment matrix, write reports");
  auto* all = app.add_subcommand("all", "ingest, enrich and run");
  for (auto* cmd : {ingest, enrich, run, all}) add_common(cmd);
  for (auto* cmd : {run, all}) {
    cmd->add_option("--experiments", experiments, "Experiment spec file (JSON)");
    cmd->add_option("--test-fraction", test_fraction, "Held-out share per class");
  }
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and config");
  std::string synth_dir;
  std::uint64_t synth_seed = 2022;
  synth->add_option("--out", synth_dir, "Target directory")->required();
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (synth->parsed()) return cmd_synth(synth_dir, synth_seed, out);
    PipelineConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!manifest.empty()) config.manifest = manifest;
    if (threads) config.threads = *threads;
    if (test_fraction) config.test_fraction = *test_fraction;
    if (!experiments.empty()) config.experiments = load_experiment_specs(experiments, config.hyperparams);
    config.validate();
    if (ingest->parsed()) return cmd_ingest(config, out);
    if (enrich->parsed()) return cmd_enrich(config, out);
    if (run->parsed()) return cmd_run(config, out);
    cmd_ingest(config, out);
    cmd_enrich(config, out);
    return cmd_run(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace mmfd::cli
