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

#include "mmfd/propagation.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mmfd/error.hpp"

namespace mmfd {
namespace {

struct Account {
  const TweetRecord* first = nullptr;
  const EnrichmentRecord* enrichment = nullptr;
};

bool earlier(const TweetRecord& a, const TweetRecord& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.tweet_id < b.tweet_id;
}

class Index {
 public:
  Index(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments) {
    for (const auto& e : enrichments) by_id_.emplace(e.tweet_id, &e);
    for (const auto& r : dataset.records()) {
      const auto* e = enrichment(r.record.tweet_id);
      auto& account = accounts_[r.record.user.handle];
      if (!account.first || earlier(r.record, *account.first)) account = {&r.record, e};
    }
  }

  const EnrichmentRecord* enrichment(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw CoverageGap(id);
    return it->second;
  }

  const Account& account(const std::string& handle) const { return accounts_.at(handle); }

 private:
  std::unordered_map<std::string_view, const EnrichmentRecord*> by_id_;
  std::unordered_map<std::string, Account> accounts_;
};

std::string group_of(const Account& account, Grouping grouping) {
  switch (grouping) {
    case Grouping::Gender: return std::string(to_string(account.enrichment->gender));
    case Grouping::Verified: return account.first->user.verified ? "verified" : "unverified";
    case Grouping::Popularity: return account.enrichment->popular ? "popular" : "not_popular";
  }
  return {};
}

std::vector<std::string> group_order(Grouping grouping) {
  switch (grouping) {
    case Grouping::Gender: return {"male", "female", "undetermined"};
    case Grouping::Verified: return {"verified", "unverified"};
    case Grouping::Popularity: return {"popular", "not_popular"};
  }
  return {};
}

double mean(double total, std::size_t n) { return n ? total / static_cast<double>(n) : 0.0; }

ClassAggregates aggregate(const Dataset& dataset, const Index& index, BinaryLabel label) {
  ClassAggregates a;
  a.label = label;
  double followers = 0, friends = 0, statuses = 0, age = 0;
  std::set<std::string> handles, hashtags, mentions;
  for (const auto& r : dataset.records()) {
    if (r.label != label) continue;
    const auto& t = r.record;
    const auto* e = index.enrichment(t.tweet_id);
    ++a.tweets;
    a.total_retweets += t.retweet_count;
    a.total_favourites += t.favourite_count;
    followers += static_cast<double>(t.user.followers_count);
    friends += static_cast<double>(t.user.friends_count);
    statuses += static_cast<double>(t.user.statuses_count);
    age += static_cast<double>(e->account_age_days);
    handles.insert(t.user.handle);
    hashtags.insert(t.hashtags.begin(), t.hashtags.end());
    mentions.insert(t.mentions.begin(), t.mentions.end());
  }
  a.unique_accounts = handles.size();
  for (const auto& h : handles) {
    const auto& acc = index.account(h);
    a.verified_accounts += acc.first->user.verified;
    a.popular_accounts += acc.enrichment->popular;
    switch (acc.enrichment->gender) {
      case Gender::Male: ++a.gender.male; break;
      case Gender::Female: ++a.gender.female; break;
      case Gender::Undetermined: ++a.gender.undetermined; break;
    }
  }
  a.verified_share = 100.0 * mean(static_cast<double>(a.verified_accounts), a.unique_accounts);
  a.popular_share = 100.0 * mean(static_cast<double>(a.popular_accounts), a.unique_accounts);
  a.mean_retweet = mean(static_cast<double>(a.total_retweets), a.tweets);
  a.mean_favourite = mean(static_cast<double>(a.total_favourites), a.tweets);
  a.mean_followers = mean(followers, a.tweets);
  a.mean_friends = mean(friends, a.tweets);
  a.mean_statuses = mean(statuses, a.tweets);
  a.mean_account_age = mean(age, a.tweets);
  a.unique_hashtags = hashtags.size();
  a.unique_mentions = mentions.size();
  return a;
}

DiffusionTable diffusion(const Dataset& dataset, const Index& index, Grouping grouping) {
  std::map<std::pair<int, std::string>, GroupMeans> cells;
  for (const auto& r : dataset.records()) {
    index.enrichment(r.record.tweet_id);
    const auto group = group_of(index.account(r.record.user.handle), grouping);
    auto& cell = cells[{r.label == BinaryLabel::Misinformation ? 0 : 1, group}];
    cell.label = r.label;
    cell.group = group;
    ++cell.tweets;
    cell.total_retweets += r.record.retweet_count;
    cell.total_favourites += r.record.favourite_count;
  }
  DiffusionTable table;
  table.grouping = grouping;
  for (int cls : {0, 1})
    for (const auto& g : group_order(grouping)) {
      auto it = cells.find({cls, g});
      if (it == cells.end()) continue;
      auto row = it->second;
      row.mean_retweet = mean(static_cast<double>(row.total_retweets), row.tweets);
      row.mean_favourite = mean(static_cast<double>(row.total_favourites), row.tweets);
      table.rows.push_back(std::move(row));
    }
  return table;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : "nan";
}

const char* class_key(BinaryLabel label) {
  return label == BinaryLabel::Misinformation ? "misinformation" : "other";
}

}  // namespace

std::string_view to_string(Grouping g) noexcept {
  switch (g) {
    case Grouping::Gender: return "gender";
    case Grouping::Verified: return "verified";
    case Grouping::Popularity: return "popularity";
  }
  return "unknown";
}

const GroupMeans* DiffusionTable::find(BinaryLabel label, std::string_view group) const {
  for (const auto& row : rows)
    if (row.label == label && row.group == group) return &row;
  return nullptr;
}

PropagationReport descriptive_stats(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments) {
  const Index index(dataset, enrichments);
  PropagationReport report;
  report.misinformation = aggregate(dataset, index, BinaryLabel::Misinformation);
  report.other = aggregate(dataset, index, BinaryLabel::Other);
  for (Grouping g : {Grouping::Gender, Grouping::Verified, Grouping::Popularity})
    report.diffusion.push_back(diffusion(dataset, index, g));
  return report;
}

DiffusionTable diffusion_by_group(const Dataset& dataset, std::span<const EnrichmentRecord> enrichments,
                                  Grouping grouping) {
  const Index index(dataset, enrichments);
  return diffusion(dataset, index, grouping);
}

std::string render_propagation_report(const PropagationReport& report, ReportFormat format) {
  struct Line {
    std::string label;
    std::string key;
    std::function<std::string(const ClassAggregates&, bool)> value;
  };
  auto count = [](std::size_t ClassAggregates::*f) {
    return [f](const ClassAggregates& a, bool) { return std::to_string(a.*f); };
  };
  auto real = [](double ClassAggregates::*f) {
    return [f](const ClassAggregates& a, bool delimited) {
      return delimited ? shortest(a.*f) : format_metric(a.*f, 0);
    };
  };
  auto with_share = [](std::size_t ClassAggregates::*n, double ClassAggregates::*share) {
    return [n, share](const ClassAggregates& a, bool delimited) {
      return delimited ? std::to_string(a.*n) : std::to_string(a.*n) + " (" + format_metric(a.*share, 0) + "%)";
    };
  };
  const std::vector<Line> lines = {
      {"Number of Tweets", "tweets", count(&ClassAggregates::tweets)},
      {"Unique Account", "unique_accounts", count(&ClassAggregates::unique_accounts)},
      {"Verified Account", "verified_accounts",
       with_share(&ClassAggregates::verified_accounts, &ClassAggregates::verified_share)},
      {"Popularity of Account", "popular_accounts",
       with_share(&ClassAggregates::popular_accounts, &ClassAggregates::popular_share)},
      {"Mean Retweet Count", "mean_retweet", real(&ClassAggregates::mean_retweet)},
      {"Mean Favourite Count", "mean_favourite", real(&ClassAggregates::mean_favourite)},
      {"Mean Followers Count", "mean_followers", real(&ClassAggregates::mean_followers)},
      {"Mean Friends Count", "mean_friends", real(&ClassAggregates::mean_friends)},
      {"Mean Status Count", "mean_statuses", real(&ClassAggregates::mean_statuses)},
      {"Mean Account Age (days)", "mean_account_age", real(&ClassAggregates::mean_account_age)},
      {"Unique Hashtags", "unique_hashtags", count(&ClassAggregates::unique_hashtags)},
      {"Unique Mentions", "unique_mentions", count(&ClassAggregates::unique_mentions)},
  };
  auto gender = [](const ClassAggregates& a) {
    return std::to_string(a.gender.male) + "/" + std::to_string(a.gender.female) + "/" +
           std::to_string(a.gender.undetermined);
  };

  std::ostringstream out;
  if (format == ReportFormat::Delimited) {
    out << "section,class,group,metric,value\n";
    for (const auto* a : {&report.misinformation, &report.other}) {
      for (const auto& line : lines)
        out << "summary," << class_key(a->label) << ",," << line.key << ',' << line.value(*a, true) << '\n';
      out << "summary," << class_key(a->label) << ",,verified_share," << shortest(a->verified_share) << '\n';
      out << "summary," << class_key(a->label) << ",,popular_share," << shortest(a->popular_share) << '\n';
      out << "summary," << class_key(a->label) << ",,gender_male," << a->gender.male << '\n';
      out << "summary," << class_key(a->label) << ",,gender_female," << a->gender.female << '\n';
      out << "summary," << class_key(a->label) << ",,gender_undetermined," << a->gender.undetermined << '\n';
    }
    for (const auto& table : report.diffusion)
      for (const auto& row : table.rows) {
        const std::string prefix = "diffusion_" + std::string(to_string(table.grouping)) + "," +
                                   class_key(row.label) + "," + row.group + ",";
        out << prefix << "tweets," << row.tweets << '\n';
        out << prefix << "mean_retweet," << shortest(row.mean_retweet) << '\n';
        out << prefix << "mean_favourite," << shortest(row.mean_favourite) << '\n';
      }
    return out.str();
  }

  out << "Parameter | Misinformation | Other\n";
  for (const auto& line : lines)
    out << line.label << " | " << line.value(report.misinformation, false) << " | "
        << line.value(report.other, false) << '\n';
  out << "Gender (Male/Female/Undetermined) | " << gender(report.misinformation) << " | " << gender(report.other)
      << '\n';
  for (const auto& table : report.diffusion) {
    out << "\nDiffusion by " << to_string(table.grouping) << '\n';
    out << "Class | Group | Tweets | Mean Retweet Count | Mean Favourite Count\n";
    for (const auto& row : table.rows)
      out << to_string(row.label) << " | " << row.group << " | " << row.tweets << " | "
          << format_metric(row.mean_retweet) << " | " << format_metric(row.mean_favourite) << '\n';
  }
  return out.str();
}

}  // namespace mmfd
