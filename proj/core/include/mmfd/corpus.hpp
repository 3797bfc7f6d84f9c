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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfd/time.hpp"

namespace mmfd {

inline constexpr int kManifestSchemaVersion = 1;

struct UserSnapshot {
  std::string handle;
  std::string display_name;
  std::int64_t followers_count = 0;
  std::int64_t friends_count = 0;
  std::int64_t favorites_count = 0;
  std::int64_t statuses_count = 0;
  bool verified = false;
  UtcInstant account_created_at{};

  bool operator==(const UserSnapshot&) const = default;
};

struct TweetRecord {
  std::string tweet_id;
  std::string text;
  std::string language = "en";
  UtcInstant created_at{};
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::optional<std::filesystem::path> media_path;
  UserSnapshot user;
  std::int64_t retweet_count = 0;
  std::int64_t favourite_count = 0;
  bool retweeted = false;
  std::string raw_verdict;

  bool operator==(const TweetRecord&) const = default;
};

enum class VerdictClass { False, True, PartiallyFalse, Other };
enum class BinaryLabel { Misinformation, Other };

std::string_view to_string(VerdictClass v) noexcept;
std::string_view to_string(BinaryLabel l) noexcept;
std::optional<VerdictClass> verdict_class_from_string(std::string_view name);

/// Case-insensitive mapping from fact-checker verdict wording to the four
/// verdict classes. Unknown wording falls back to Other.
class VerdictAliasTable {
 public:
  /// false, true, partially false, misleading, other.
  static VerdictAliasTable defaults();

  /// Text file, one `alias TAB class` per line; '#' starts a comment.
  /// class is one of false / true / partially_false / other.
  static VerdictAliasTable load(const std::filesystem::path& path);

  void add(std::string_view alias, VerdictClass cls);
  VerdictClass classify(std::string_view raw_verdict) const;
  std::size_t size() const noexcept { return aliases_.size(); }

 private:
  std::unordered_map<std::string, VerdictClass> aliases_;
};

VerdictClass normalize_verdict(std::string_view raw_verdict, const VerdictAliasTable& aliases);
VerdictClass normalize_verdict(std::string_view raw_verdict);

constexpr BinaryLabel binarize_label(VerdictClass v) noexcept {
  return (v == VerdictClass::False || v == VerdictClass::PartiallyFalse) ? BinaryLabel::Misinformation
                                                                       : BinaryLabel::Other;
}

/// Validates one manifest document. Relative media paths are kept as given.
/// Throws MalformedRecord.
TweetRecord parse_tweet(const nlohmann::json& document);

nlohmann::json to_json(const TweetRecord& record);

struct LabeledRecord {
  TweetRecord record;
  BinaryLabel label = BinaryLabel::Other;
};

/// Immutable, ordered collection of labelled records with unique ids.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<LabeledRecord> records, std::filesystem::path source_manifest,
          int schema_version = kManifestSchemaVersion);

  std::span<const LabeledRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const LabeledRecord& operator[](std::size_t i) const { return records_[i]; }

  const std::filesystem::path& source_manifest() const noexcept { return source_manifest_; }
  int schema_version() const noexcept { return schema_version_; }

  std::size_t count(BinaryLabel label) const noexcept;
  std::optional<std::size_t> index_of(std::string_view tweet_id) const;

  /// Subset in the original order.
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<LabeledRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::filesystem::path source_manifest_;
  int schema_version_ = kManifestSchemaVersion;
};

struct RejectEntry {
  std::string tweet_id;
  std::string reason;
};

struct LoadResult {
  Dataset dataset;
  std::vector<RejectEntry> rejects;
};

/// Reads a line-delimited manifest. Bad lines become reject entries.
/// Throws ManifestNotFound, EmptyDataset.
LoadResult load_dataset(const std::filesystem::path& manifest_path,
                        const VerdictAliasTable& aliases = VerdictAliasTable::defaults());

std::filesystem::path rejects_path_for(const std::filesystem::path& manifest_path);

/// Writes `<manifest>.rejects`: one `tweet_id TAB reason` line per reject.
void write_rejects(const std::filesystem::path& manifest_path, std::span<const RejectEntry> rejects);

/// Writes the dataset back out in manifest format (absolute media paths).
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Test-set size for one class: round-half-up of class_size * fraction,
/// clamped to [1, class_size - 1].
std::size_t stratified_test_count(std::size_t class_size, double test_fraction);

/// Stratified, seed-deterministic partition. Throws InsufficientClassSize
/// when a class has fewer than two records.
DatasetSplit split_dataset(const Dataset& dataset, double test_fraction, std::uint64_t seed);

}  // namespace mmfd
