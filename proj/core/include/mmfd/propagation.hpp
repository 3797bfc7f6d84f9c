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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmfd/corpus.hpp"
#include "mmfd/enrichment.hpp"
#include "mmfd/evaluation.hpp"

namespace mmfd {

struct GenderTriple {
  std::size_t male = 0;
  std::size_t female = 0;
  std::size_t undetermined = 0;

  std::size_t total() const noexcept { return male + female + undetermined; }
  bool operator==(const GenderTriple&) const = default;
};

/// Tweet-level counts and means for one class; account-level rows
/// (unique accounts, verified, popular, gender) count each handle once.
struct ClassAggregates {
  BinaryLabel label = BinaryLabel::Misinformation;
  std::size_t tweets = 0;
  std::size_t unique_accounts = 0;
  std::size_t verified_accounts = 0;
  double verified_share = 0.0;  // percent of unique accounts
  std::size_t popular_accounts = 0;
  double popular_share = 0.0;
  std::int64_t total_retweets = 0;
  std::int64_t total_favourites = 0;
  double mean_retweet = 0.0;
  double mean_favourite = 0.0;
  double mean_followers = 0.0;
  double mean_friends = 0.0;
  double mean_statuses = 0.0;
  double mean_account_age = 0.0;
  std::size_t unique_hashtags = 0;
  std::size_t unique_mentions = 0;
  GenderTriple gender;

  bool operator==(const ClassAggregates&) const = default;
};

enum class Grouping { Gender, Verified, Popularity };

std::string_view to_string(Grouping g) noexcept;

struct GroupMeans {
  BinaryLabel label = BinaryLabel::Misinformation;
  std::string group;
  std::size_t tweets = 0;
  std::int64_t total_retweets = 0;
  std::int64_t total_favourites = 0;
  double mean_retweet = 0.0;
  double mean_favourite = 0.0;

  bool operator==(const GroupMeans&) const = default;
};

/// Rows for non-empty (class, group) cells only, Misinformation first.
struct DiffusionTable {
  Grouping grouping = Grouping::Gender;
  std::vector<GroupMeans> rows;

  const GroupMeans* find(BinaryLabel label, std::string_view group) const;
  bool operator==(const DiffusionTable&) const = default;
};

struct PropagationReport {
  ClassAggregates misinformation;
  ClassAggregates other;
  std::vector<DiffusionTable> diffusion;  // gender, verified, popularity

  const ClassAggregates& for_class(BinaryLabel label) const {
    return label == BinaryLabel::Misinformation ? misinformation : other;
  }
  bool operator==(const PropagationReport&) const = default;
};

/// Account attributes come from each handle's earliest tweet (ties broken
/// by tweet id), so the result does not depend on record order.
/// Throws CoverageGap for a record without an enrichment.
PropagationReport descriptive_stats(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments);

/// Grouped by the account attributes above. Throws CoverageGap.
DiffusionTable diffusion_by_group(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments,
                                  Grouping grouping);

/// Table mirroring the descriptive analysis rows plus the diffusion
/// tables; the delimited variant is long-form `section,class,group,metric,value`.
std::string render_propagation_report(const PropagationReport& report, ReportFormat format);

}  // namespace mmfd
