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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mmfd/error.hpp"
#include "mmfd/propagation.hpp"
#include "mmfd/rng.hpp"
#include "mmfd/synth.hpp"
#include "mmfd/time.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

constexpr auto M = BinaryLabel::Misinformation;
constexpr auto O = BinaryLabel::Other;

struct Row {
  std::string id;
  BinaryLabel label;
  std::string handle;
  std::string created_at;
  std::int64_t retweets;
  std::int64_t favourites;
  bool verified;
  bool popular;
  Gender gender;
  std::vector<std::string> hashtags;
};

struct Built {
  Dataset dataset;
  std::vector<EnrichmentRecord> enrichments;
};

Built build(const std::vector<Row>& rows) {
  Built b;
  std::vector<LabeledRecord> records;
  for (const auto& r : rows) {
    auto rec = testing::make_labeled(r.id, r.label);
    rec.record.user.handle = r.handle;
    rec.record.created_at = *parse_utc_timestamp(r.created_at);
    rec.record.retweet_count = r.retweets;
    rec.record.favourite_count = r.favourites;
    rec.record.user.verified = r.verified;
    rec.record.hashtags = r.hashtags;
    rec.record.mentions = {};
    records.push_back(rec);
    EnrichmentRecord e;
    e.tweet_id = r.id;
    e.popular = r.popular;
    e.gender = r.gender;
    e.account_age_days = 100;
    b.enrichments.push_back(e);
  }
  b.dataset = Dataset(std::move(records), "memory");
  return b;
}

TEST(Propagation, TwoRecords) {
  const auto b = build({
      {"1", M, "a", "2021-01-01T00:00:00Z", 10, 4, true, true, Gender::Male, {"x"}},
      {"2", O, "b", "2021-01-02T00:00:00Z", 3, 1, false, false, Gender::Female, {"x", "y"}},
  });
  const auto report = descriptive_stats(b.dataset, b.enrichments);
  EXPECT_EQ(report.misinformation.tweets, 1u);
  EXPECT_EQ(report.misinformation.verified_accounts, 1u);
  EXPECT_DOUBLE_EQ(report.misinformation.verified_share, 100.0);
  EXPECT_EQ(report.misinformation.total_retweets, 10);
  EXPECT_EQ(report.other.unique_hashtags, 2u);
  EXPECT_EQ(report.other.gender, (GenderTriple{0, 1, 0}));
  EXPECT_DOUBLE_EQ(report.other.mean_favourite, 1.0);
  EXPECT_EQ(report.diffusion.size(), 3u);
}

TEST(Propagation, HandComputedSixRecords) {
  // Account a tweets three times and is verified only on its first tweet;
  // the later snapshots must not change its account-level attributes.
  const auto b = build({
      {"1", M, "a", "2021-01-01T00:00:00Z", 10, 1, true, true, Gender::Male, {"h1"}},
      {"2", M, "a", "2021-01-05T00:00:00Z", 20, 2, false, false, Gender::Female, {"h1"}},
      {"3", M, "a", "2021-01-03T00:00:00Z", 30, 3, false, false, Gender::Female, {"h2"}},
      {"4", M, "b", "2021-01-02T00:00:00Z", 40, 4, false, false, Gender::Undetermined, {}},
      {"5", M, "c", "2021-01-02T00:00:00Z", 0, 0, false, true, Gender::Female, {}},
      {"6", O, "d", "2021-01-02T00:00:00Z", 7, 7, true, false, Gender::Male, {}},
  });
  const auto r = descriptive_stats(b.dataset, b.enrichments);
  const auto& m = r.misinformation;
  EXPECT_EQ(m.tweets, 5u);
  EXPECT_EQ(m.unique_accounts, 3u);
  EXPECT_EQ(m.verified_accounts, 1u);
  EXPECT_NEAR(m.verified_share, 100.0 / 3, 1e-12);
  EXPECT_EQ(m.popular_accounts, 2u);
  EXPECT_EQ(m.total_retweets, 100);
  EXPECT_DOUBLE_EQ(m.mean_retweet, 20.0);
  EXPECT_DOUBLE_EQ(m.mean_favourite, 2.0);
  EXPECT_EQ(m.unique_hashtags, 2u);
  EXPECT_EQ(m.gender, (GenderTriple{1, 1, 1}));

  const auto gender = diffusion_by_group(b.dataset, b.enrichments, Grouping::Gender);
  const auto* male = gender.find(M, "male");
  ASSERT_NE(male, nullptr);
  EXPECT_EQ(male->tweets, 3u);  // every tweet of account a
  EXPECT_DOUBLE_EQ(male->mean_retweet, 20.0);
  EXPECT_EQ(gender.find(O, "female"), nullptr);

  const auto verified = diffusion_by_group(b.dataset, b.enrichments, Grouping::Verified);
  EXPECT_DOUBLE_EQ(verified.find(M, "verified")->mean_retweet, 20.0);
  EXPECT_DOUBLE_EQ(verified.find(M, "unverified")->mean_retweet, 20.0);
  EXPECT_EQ(verified.find(M, "unverified")->tweets, 2u);
}

TEST(Propagation, VerifiedRatio) {
  // Verified accounts are retweeted twice as much on average.
  const auto b = build({
      {"1", M, "a", "2021-01-01T00:00:00Z", 40, 0, true, false, Gender::Male, {}},
      {"2", M, "b", "2021-01-01T00:00:00Z", 20, 0, false, false, Gender::Male, {}},
      {"3", M, "c", "2021-01-01T00:00:00Z", 20, 0, false, false, Gender::Male, {}},
      {"4", O, "d", "2021-01-01T00:00:00Z", 1, 0, false, false, Gender::Male, {}},
  });
  const auto t = diffusion_by_group(b.dataset, b.enrichments, Grouping::Verified);
  EXPECT_DOUBLE_EQ(t.find(M, "verified")->mean_retweet / t.find(M, "unverified")->mean_retweet, 2.0);
  EXPECT_EQ(t.rows.front().label, M);
}

TEST(Propagation, PermutationInvariantAndCoverage) {
  auto fixture = make_propagation_fixture(random_propagation_targets(*std::make_unique<Rng>(3)),
                                          random_propagation_targets(*std::make_unique<Rng>(4)), 8);
  const auto base = descriptive_stats(fixture.dataset, fixture.enrichments);
  std::vector<LabeledRecord> shuffled(fixture.dataset.records().begin(), fixture.dataset.records().end());
  Rng rng(1);
  rng.shuffle(std::span(shuffled));
  rng.shuffle(std::span(fixture.enrichments));
  const Dataset permuted(std::move(shuffled), "memory");
  EXPECT_EQ(descriptive_stats(permuted, fixture.enrichments), base);
  fixture.enrichments.pop_back();
  EXPECT_THROW(descriptive_stats(permuted, fixture.enrichments), CoverageGap);
}

// Counts must agree exactly; derived shares and means may differ in the
// last bit because they are computed in a different order.
void expect_matches(const ClassAggregates& got, const ClassAggregates& want) {
  EXPECT_EQ(got.label, want.label);
  EXPECT_EQ(got.tweets, want.tweets);
  EXPECT_EQ(got.unique_accounts, want.unique_accounts);
  EXPECT_EQ(got.verified_accounts, want.verified_accounts);
  EXPECT_EQ(got.popular_accounts, want.popular_accounts);
  EXPECT_EQ(got.total_retweets, want.total_retweets);
  EXPECT_EQ(got.total_favourites, want.total_favourites);
  EXPECT_EQ(got.unique_hashtags, want.unique_hashtags);
  EXPECT_EQ(got.unique_mentions, want.unique_mentions);
  EXPECT_EQ(got.gender, want.gender);
  const std::pair<double, double> reals[] = {
      {got.verified_share, want.verified_share}, {got.popular_share, want.popular_share},
      {got.mean_retweet, want.mean_retweet},     {got.mean_favourite, want.mean_favourite},
      {got.mean_followers, want.mean_followers}, {got.mean_friends, want.mean_friends},
      {got.mean_statuses, want.mean_statuses},   {got.mean_account_age, want.mean_account_age}};
  for (const auto& [g, w] : reals) EXPECT_NEAR(g, w, 1e-9 * std::max(1.0, std::abs(w)));
}

TEST(Propagation, ReferenceFixtureBookkeeping) {
  const auto f = make_propagation_fixture(reference_misinformation_targets(), reference_other_targets(), 2022);
  const auto r = descriptive_stats(f.dataset, f.enrichments);
  EXPECT_EQ(r.misinformation.tweets, 1273u);
  EXPECT_EQ(r.misinformation.unique_accounts, 1054u);
  EXPECT_EQ(r.misinformation.verified_accounts, 612u);
  EXPECT_EQ(r.misinformation.total_retweets, 1273 * 4768);
  EXPECT_EQ(r.misinformation.gender, (GenderTriple{427, 169, 458}));
  EXPECT_EQ(r.other.unique_accounts, 229u);
  expect_matches(r.misinformation, f.expected_misinformation);
  expect_matches(r.other, f.expected_other);

  const auto text = render_propagation_report(r, ReportFormat::TableText);
  EXPECT_NE(text.find("612 (58%)"), std::string::npos);
  EXPECT_NE(text.find("Number of Tweets"), std::string::npos);
  const auto csv = render_propagation_report(r, ReportFormat::Delimited);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "section,class,group,metric,value");
}

TEST(Propagation, InconsistentTargetsRejected) {
  auto bad = reference_other_targets();
  bad.accounts = bad.tweets + 1;
  EXPECT_THROW(make_propagation_fixture(reference_misinformation_targets(), bad, 1), ConfigError);
}

}  // namespace
}  // namespace mmfd
