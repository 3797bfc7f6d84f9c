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

#include "mmfd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"
#include "strings.hpp"

namespace mmfd {
namespace {

using nlohmann::json;

std::string collapse_spaces(std::string_view s) {
  std::string out;
  for (auto token : detail::split_whitespace(s)) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

const json& require(const json& doc, const char* key, const std::string& id) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) throw MalformedRecord(id, std::string("missing required field '") + key + "'");
  return *it;
}

std::string require_string(const json& doc, const char* key, const std::string& id) {
  const json& v = require(doc, key, id);
  if (!v.is_string()) throw MalformedRecord(id, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::string optional_string(const json& doc, const char* key, const std::string& id, std::string fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw MalformedRecord(id, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::int64_t optional_count(const json& doc, const char* key, const std::string& id) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return 0;
  if (!it->is_number_integer()) throw MalformedRecord(id, std::string("field '") + key + "' must be an integer");
  auto value = it->get<std::int64_t>();
  if (value < 0) throw MalformedRecord(id, std::string("negative count in '") + key + "'");
  return value;
}

bool optional_bool(const json& doc, const char* key, const std::string& id) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw MalformedRecord(id, std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

UtcInstant require_instant(const json& doc, const char* key, const std::string& id) {
  auto raw = require_string(doc, key, id);
  auto parsed = parse_utc_timestamp(raw);
  if (!parsed) throw MalformedRecord(id, std::string("unparsable timestamp in '") + key + "': " + raw);
  return *parsed;
}

std::vector<std::string> optional_string_list(const json& doc, const char* key, const std::string& id) {
  std::vector<std::string> out;
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return out;
  if (!it->is_array()) throw MalformedRecord(id, std::string("field '") + key + "' must be a list");
  for (const auto& item : *it) {
    if (!item.is_string()) throw MalformedRecord(id, std::string("field '") + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(VerdictClass v) noexcept {
  switch (v) {
    case VerdictClass::False: return "false";
    case VerdictClass::True: return "true";
    case VerdictClass::PartiallyFalse: return "partially_false";
    case VerdictClass::Other: return "other";
  }
  return "other";
}

std::string_view to_string(BinaryLabel l) noexcept {
  return l == BinaryLabel::Misinformation ? "misinformation" : "other";
}

std::optional<VerdictClass> verdict_class_from_string(std::string_view name) {
  auto lowered = detail::ascii_lower(detail::trim(name));
  for (char& c : lowered) {
    if (c == ' ' || c == '-') c = '_';
  }
  if (lowered == "false") return VerdictClass::False;
  if (lowered == "true") return VerdictClass::True;
  if (lowered == "partially_false") return VerdictClass::PartiallyFalse;
  if (lowered == "other") return VerdictClass::Other;
  return std::nullopt;
}

VerdictAliasTable VerdictAliasTable::defaults() {
  VerdictAliasTable table;
  table.add("false", VerdictClass::False);
  table.add("true", VerdictClass::True);
  table.add("partially false", VerdictClass::PartiallyFalse);
  table.add("misleading", VerdictClass::PartiallyFalse);
  table.add("other", VerdictClass::Other);
  return table;
}

VerdictAliasTable VerdictAliasTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open verdict alias table: " + path.string());
  VerdictAliasTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'alias<TAB>class'");
    }
    auto cls = verdict_class_from_string(view.substr(tab + 1));
    if (!cls) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": unknown verdict class");
    table.add(view.substr(0, tab), *cls);
  }
  return table;
}

void VerdictAliasTable::add(std::string_view alias, VerdictClass cls) {
  auto key = collapse_spaces(detail::ascii_lower(alias));
  if (key.empty()) throw ConfigError("empty verdict alias");
  aliases_[key] = cls;
}

VerdictClass VerdictAliasTable::classify(std::string_view raw_verdict) const {
  auto key = collapse_spaces(detail::ascii_lower(raw_verdict));
  auto it = aliases_.find(key);
  return it == aliases_.end() ? VerdictClass::Other : it->second;
}

VerdictClass normalize_verdict(std::string_view raw_verdict, const VerdictAliasTable& aliases) {
  return aliases.classify(raw_verdict);
}

VerdictClass normalize_verdict(std::string_view raw_verdict) {
  static const VerdictAliasTable table = VerdictAliasTable::defaults();
  return table.classify(raw_verdict);
}

TweetRecord parse_tweet(const json& document) {
  if (!document.is_object()) throw MalformedRecord("", "record is not an object");
  std::string id;
  if (auto it = document.find("tweet_id"); it != document.end()) {
    if (it->is_string()) {
      id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      id = std::to_string(it->get<std::int64_t>());
    }
  }
  if (id.empty()) throw MalformedRecord("", "missing required field 'tweet_id'");

  if (auto it = document.find("schema_version"); it != document.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<int>() < 1 || it->get<int>() > kManifestSchemaVersion) {
      throw MalformedRecord(id, "unsupported schema_version");
    }
  }

  TweetRecord rec;
  rec.tweet_id = id;
  rec.text = require_string(document, "text", id);
  rec.language = detail::ascii_lower(optional_string(document, "language", id, "en"));
  if (rec.language.empty()) rec.language = "en";
  rec.created_at = require_instant(document, "created_at", id);
  rec.hashtags = optional_string_list(document, "hashtags", id);
  rec.mentions = optional_string_list(document, "mentions", id);
  if (auto media = optional_string(document, "media_path", id, ""); !media.empty()) rec.media_path = media;
  rec.retweet_count = optional_count(document, "retweet_count", id);
  rec.favourite_count = optional_count(document, "favourite_count", id);
  rec.retweeted = optional_bool(document, "retweeted", id);
  rec.raw_verdict = require_string(document, "raw_verdict", id);
  if (detail::trim(rec.raw_verdict).empty()) throw MalformedRecord(id, "empty raw_verdict");

  const json& user = require(document, "user", id);
  if (!user.is_object()) throw MalformedRecord(id, "field 'user' must be an object");
  rec.user.handle = require_string(user, "handle", id);
  rec.user.display_name = optional_string(user, "display_name", id, "");
  rec.user.followers_count = optional_count(user, "followers_count", id);
  rec.user.friends_count = optional_count(user, "friends_count", id);
  rec.user.favorites_count = optional_count(user, "favorites_count", id);
  rec.user.statuses_count = optional_count(user, "statuses_count", id);
  rec.user.verified = optional_bool(user, "verified", id);
  rec.user.account_created_at = require_instant(user, "account_created_at", id);
  if (rec.user.account_created_at > rec.created_at) {
    throw MalformedRecord(id, "account_created_at is after the tweet's created_at");
  }
  return rec;
}

json to_json(const TweetRecord& r) {
  json user = {
      {"handle", r.user.handle},
      {"display_name", r.user.display_name},
      {"followers_count", r.user.followers_count},
      {"friends_count", r.user.friends_count},
      {"favorites_count", r.user.favorites_count},
      {"statuses_count", r.user.statuses_count},
      {"verified", r.user.verified},
      {"account_created_at", format_utc_timestamp(r.user.account_created_at)},
  };
  json doc = {
      {"schema_version", kManifestSchemaVersion},
      {"tweet_id", r.tweet_id},
      {"text", r.text},
      {"language", r.language},
      {"created_at", format_utc_timestamp(r.created_at)},
      {"hashtags", r.hashtags},
      {"mentions", r.mentions},
      {"user", std::move(user)},
      {"retweet_count", r.retweet_count},
      {"favourite_count", r.favourite_count},
      {"retweeted", r.retweeted},
      {"raw_verdict", r.raw_verdict},
  };
  if (r.media_path) doc["media_path"] = r.media_path->string();
  return doc;
}

Dataset::Dataset(std::vector<LabeledRecord> records, std::filesystem::path source_manifest, int schema_version)
    : records_(std::move(records)), source_manifest_(std::move(source_manifest)), schema_version_(schema_version) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    auto [it, inserted] = index_.emplace(records_[i].record.tweet_id, i);
    if (!inserted) throw MalformedRecord(records_[i].record.tweet_id, "duplicate tweet_id");
  }
}

std::size_t Dataset::count(BinaryLabel label) const noexcept {
  std::size_t n = 0;
  for (const auto& r : records_) n += r.label == label ? 1 : 0;
  return n;
}

std::optional<std::size_t> Dataset::index_of(std::string_view tweet_id) const {
  auto it = index_.find(std::string(tweet_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<LabeledRecord> picked;
  picked.reserve(sorted.size());
  for (auto i : sorted) picked.push_back(records_.at(i));
  return Dataset(std::move(picked), source_manifest_, schema_version_);
}

LoadResult load_dataset(const std::filesystem::path& manifest_path, const VerdictAliasTable& aliases) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(manifest_path, ec)) throw ManifestNotFound(manifest_path);
  std::ifstream in(manifest_path);
  if (!in) throw ManifestNotFound(manifest_path);

  const auto base_dir = manifest_path.parent_path();
  std::vector<LabeledRecord> records;
  std::vector<RejectEntry> rejects;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string fallback_id = "<line " + std::to_string(line_no) + ">";
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      rejects.push_back({fallback_id, "not a valid JSON record"});
      continue;
    }
    try {
      TweetRecord rec = parse_tweet(doc);
      if (!seen.insert(rec.tweet_id).second) {
        rejects.push_back({rec.tweet_id, "duplicate tweet_id"});
        continue;
      }
      if (rec.media_path && rec.media_path->is_relative()) rec.media_path = base_dir / *rec.media_path;
      const BinaryLabel label = binarize_label(normalize_verdict(rec.raw_verdict, aliases));
      records.push_back({std::move(rec), label});
    } catch (const MalformedRecord& e) {
      rejects.push_back({e.tweet_id().empty() ? fallback_id : e.tweet_id(), e.reason()});
    }
  }
  for (const auto& r : rejects) spdlog::debug("rejected {}: {}", r.tweet_id, r.reason);
  if (records.empty()) throw EmptyDataset("no valid records in " + manifest_path.string());
  return {Dataset(std::move(records), manifest_path), std::move(rejects)};
}

std::filesystem::path rejects_path_for(const std::filesystem::path& manifest_path) {
  auto p = manifest_path;
  p += ".rejects";
  return p;
}

void write_rejects(const std::filesystem::path& manifest_path, std::span<const RejectEntry> rejects) {
  const auto path = rejects_path_for(manifest_path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write rejects report: " + path.string());
  for (const auto& r : rejects) {
    std::string reason = r.reason;
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    std::replace(reason.begin(), reason.end(), '\t', ' ');
    out << r.tweet_id << '\t' << reason << '\n';
  }
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write dataset: " + path.string());
  for (const auto& r : dataset.records()) {
    auto doc = to_json(r.record);
    if (r.record.media_path) doc["media_path"] = std::filesystem::absolute(*r.record.media_path).lexically_normal().string();
    out << doc.dump() << '\n';
  }
  if (!out) throw Error("failed writing dataset: " + path.string());
}

std::size_t stratified_test_count(std::size_t class_size, double test_fraction) {
  if (class_size < 2) return 0;
  // Half-up rounding; the epsilon absorbs representation error such as 5 * 0.1.
  const double exact = static_cast<double>(class_size) * test_fraction;
  auto n = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::clamp<std::size_t>(n, 1, class_size - 1);
}

DatasetSplit split_dataset(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[dataset[i].label == BinaryLabel::Misinformation ? 0 : 1].push_back(i);
  }
  for (const auto& members : by_class) {
    if (members.size() < 2) {
      throw InsufficientClassSize("stratified split needs at least 2 records per class, found " +
                                  std::to_string(members.size()));
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t n_test = stratified_test_count(members.size(), test_fraction);
    test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_idx.insert(train_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  return {dataset.subset(train_idx), dataset.subset(test_idx)};
}

}  // namespace mmfd
