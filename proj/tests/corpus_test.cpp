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

#include <set>

#include "mmfd/corpus.hpp"
#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"
#include "mmfd/time.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

using testing::TempDir;
using testing::tweet_json;

TEST(ParseTweet, AllFieldsPassThrough) {
  auto doc = tweet_json("t1");
  doc["media_path"] = "img/t1.png";
  const auto r = parse_tweet(doc);
  EXPECT_EQ(r.tweet_id, "t1");
  EXPECT_EQ(r.language, "en");
  EXPECT_EQ(r.hashtags, std::vector<std::string>{"health"});
  EXPECT_EQ(r.mentions, std::vector<std::string>{"who"});
  ASSERT_TRUE(r.media_path);
  EXPECT_EQ(*r.media_path, "img/t1.png");
  EXPECT_EQ(r.retweet_count, 10);
  EXPECT_EQ(r.favourite_count, 20);
  EXPECT_EQ(r.user.followers_count, 100);
  EXPECT_TRUE(r.user.verified);
  EXPECT_EQ(format_utc_timestamp(r.created_at), "2021-05-01T12:00:00Z");
  EXPECT_EQ(parse_tweet(to_json(r)), r);
}

TEST(ParseTweet, OptionalFieldsDefault) {
  auto doc = tweet_json("t1");
  doc.erase("hashtags");
  doc.erase("mentions");
  doc.erase("language");
  const auto r = parse_tweet(doc);
  EXPECT_FALSE(r.media_path);
  EXPECT_TRUE(r.hashtags.empty());
  EXPECT_TRUE(r.mentions.empty());
  EXPECT_EQ(r.language, "en");
}

TEST(ParseTweet, RejectsInvalidRecords) {
  auto negative = tweet_json("t1");
  negative["retweet_count"] = -1;
  try {
    parse_tweet(negative);
    FAIL() << "expected MalformedRecord";
  } catch (const MalformedRecord& e) {
    EXPECT_EQ(e.tweet_id(), "t1");
  }

  for (const char* field : {"text", "created_at", "user", "raw_verdict"}) {
    auto doc = tweet_json("t2");
    doc.erase(field);
    EXPECT_THROW(parse_tweet(doc), MalformedRecord) << field;
  }
  auto bad_time = tweet_json("t3");
  bad_time["created_at"] = "yesterday";
  EXPECT_THROW(parse_tweet(bad_time), MalformedRecord);

  auto account_after_tweet = tweet_json("t4");
  account_after_tweet["user"]["account_created_at"] = "2021-06-01T00:00:00Z";
  EXPECT_THROW(parse_tweet(account_after_tweet), MalformedRecord);

  auto negative_user = tweet_json("t5");
  negative_user["user"]["followers_count"] = -3;
  EXPECT_THROW(parse_tweet(negative_user), MalformedRecord);
}

TEST(Verdicts, NormalizationAndBinarization) {
  EXPECT_EQ(normalize_verdict("false"), VerdictClass::False);
  EXPECT_EQ(normalize_verdict("Partially  FALSE"), VerdictClass::PartiallyFalse);
  EXPECT_EQ(normalize_verdict("misleading"), VerdictClass::PartiallyFalse);
  EXPECT_EQ(normalize_verdict("TRUE"), VerdictClass::True);
  EXPECT_EQ(normalize_verdict("satire"), VerdictClass::Other);
  EXPECT_EQ(binarize_label(VerdictClass::False), BinaryLabel::Misinformation);
  EXPECT_EQ(binarize_label(VerdictClass::PartiallyFalse), BinaryLabel::Misinformation);
  EXPECT_EQ(binarize_label(VerdictClass::True), BinaryLabel::Other);
  EXPECT_EQ(binarize_label(VerdictClass::Other), BinaryLabel::Other);
}

TEST(Verdicts, BundledAliasFile) {
  const auto table = VerdictAliasTable::load(std::filesystem::path(MMFD_TEST_DATA_DIR) / "verdict_aliases.tsv");
  EXPECT_EQ(table.classify("Pants on Fire"), VerdictClass::False);
  EXPECT_EQ(table.classify("missing context"), VerdictClass::PartiallyFalse);
  EXPECT_EQ(table.classify("mostly true"), VerdictClass::True);
  EXPECT_EQ(table.classify("no idea"), VerdictClass::Other);
}

TEST(LoadDataset, ToleratesBadLines) {
  TempDir dir;
  std::string manifest = tweet_json("a").dump() + "\n" + tweet_json("b", "true").dump() + "\n";
  auto bad = tweet_json("c");
  bad["retweet_count"] = -1;
  manifest += bad.dump() + "\n{not json\n\n" + tweet_json("a").dump() + "\n";
  testing::write_text(dir / "m.jsonl", manifest);

  const auto result = load_dataset(dir / "m.jsonl");
  ASSERT_EQ(result.dataset.size(), 2u);
  EXPECT_EQ(result.dataset.count(BinaryLabel::Misinformation), 1u);
  EXPECT_EQ(result.dataset.count(BinaryLabel::Other), 1u);
  ASSERT_EQ(result.rejects.size(), 3u);
  EXPECT_EQ(result.rejects[0].tweet_id, "c");

  write_rejects(dir / "m.jsonl", result.rejects);
  const auto rejects = testing::read_text(rejects_path_for(dir / "m.jsonl"));
  EXPECT_EQ(rejects_path_for(dir / "m.jsonl").filename(), "m.jsonl.rejects");
  EXPECT_NE(rejects.find("c\t"), std::string::npos);

  // Reloading yields the same dataset.
  const auto again = load_dataset(dir / "m.jsonl");
  ASSERT_EQ(again.dataset.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(again.dataset[i].record, result.dataset[i].record);
}

TEST(LoadDataset, Errors) {
  TempDir dir;
  EXPECT_THROW(load_dataset(dir / "nope.jsonl"), ManifestNotFound);
  testing::write_text(dir / "empty.jsonl", "{}\n");
  EXPECT_THROW(load_dataset(dir / "empty.jsonl"), EmptyDataset);
}

TEST(LoadDataset, MediaPathsResolveAgainstManifest) {
  TempDir dir;
  auto doc = tweet_json("a");
  doc["media_path"] = "images/a.png";
  testing::write_text(dir / "m.jsonl", doc.dump() + "\n");
  const auto d = load_dataset(dir / "m.jsonl").dataset;
  EXPECT_EQ(*d[0].record.media_path, (dir.path() / "images/a.png").lexically_normal());

  save_dataset(d, dir / "copy.jsonl");
  const auto copy = load_dataset(dir / "copy.jsonl").dataset;
  EXPECT_EQ(copy[0].record, d[0].record);
}

Dataset balanced(std::size_t mis, std::size_t other) {
  std::vector<LabeledRecord> records;
  for (std::size_t i = 0; i < mis; ++i) records.push_back(testing::make_labeled("m" + std::to_string(i), BinaryLabel::Misinformation));
  for (std::size_t i = 0; i < other; ++i) records.push_back(testing::make_labeled("o" + std::to_string(i), BinaryLabel::Other));
  return Dataset(std::move(records), "memory");
}

TEST(Split, StratifiedArithmetic) {
  const auto d = balanced(5, 5);
  const auto s = split_dataset(d, 0.2, 7);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  EXPECT_EQ(s.test.count(BinaryLabel::Misinformation), 1u);
  EXPECT_EQ(s.test.count(BinaryLabel::Other), 1u);
}

TEST(Split, ReferenceScaleCounts) {
  // Oracle: half-up rounding written out independently.
  auto half_up = [](std::size_t n, double f) { return static_cast<std::size_t>(n * f + 0.5); };
  EXPECT_EQ(stratified_test_count(1273, 0.2), half_up(1273, 0.2));
  EXPECT_EQ(stratified_test_count(256, 0.2), half_up(256, 0.2));
  const auto s = split_dataset(balanced(1273, 256), 0.2, 1);
  EXPECT_EQ(s.test.size(), 306u);
  const auto mis = s.test.count(BinaryLabel::Misinformation);
  EXPECT_TRUE(mis == 255u || mis == 254u);
}

TEST(Split, PartitionAndDeterminism) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = balanced(2 + rng.below(40), 2 + rng.below(40));
    const double f = rng.uniform(0.05, 0.95);
    const auto a = split_dataset(d, f, trial);
    const auto b = split_dataset(d, f, trial);
    ASSERT_EQ(a.test.size(), b.test.size());
    for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test[i].record.tweet_id, b.test[i].record.tweet_id);

    std::set<std::string> seen;
    for (const auto& r : a.train.records()) seen.insert(r.record.tweet_id);
    for (const auto& r : a.test.records()) EXPECT_TRUE(seen.insert(r.record.tweet_id).second);
    EXPECT_EQ(seen.size(), d.size());
    for (auto label : {BinaryLabel::Misinformation, BinaryLabel::Other}) {
      const double expected = f * static_cast<double>(d.count(label));
      EXPECT_LE(std::abs(static_cast<double>(a.test.count(label)) - expected), 1.0);
    }
  }
}

TEST(Split, InsufficientClass) {
  EXPECT_THROW(split_dataset(balanced(5, 1), 0.2, 1), InsufficientClassSize);
}

TEST(Time, ParsesCommonFormats) {
  const auto iso = parse_utc_timestamp("2022-09-30T10:20:30Z");
  ASSERT_TRUE(iso);
  EXPECT_EQ(parse_utc_timestamp("2022-09-30T12:20:30+02:00"), iso);
  EXPECT_EQ(parse_utc_timestamp("2022-09-30 10:20:30"), iso);
  EXPECT_EQ(parse_utc_timestamp("Fri Sep 30 10:20:30 +0000 2022"), iso);
  EXPECT_EQ(format_utc_date(*parse_utc_date("2022-09-30")), "2022-09-30");
  EXPECT_FALSE(parse_utc_timestamp("2022-02-30T00:00:00Z"));
  EXPECT_FALSE(parse_utc_timestamp(""));
}

}  // namespace
}  // namespace mmfd
