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

#include "mmfd/rng.hpp"
#include "mmfd/time.hpp"

namespace mmfd {
namespace {

using namespace std::chrono;

TEST(Rng, ReproducibleAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
  Rng r(7);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto k = r.below(10);
    ASSERT_LT(k, 10u);
    seen.insert(k);
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Rng, NormalMoments) {
  Rng r(3);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(1);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  r.shuffle(std::span(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(Rng, HashFunctions) {
  // Published FNV-1a 64 test vectors.
  static_assert(fnv1a64("") == 0xcbf29ce484222325ULL);
  static_assert(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  static_assert(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  // SplitMix64 first output for seed 0 (state advanced by the golden gamma).
  static_assert(splitmix64(kGoldenGamma) == 0xe220a8397b1dcdafULL);
  EXPECT_EQ(unit_interval(~0ULL), 1.0 - 0x1.0p-53);
  EXPECT_EQ(unit_interval(0), 0.0);
}

TEST(Time, ParsesSupportedForms) {
  const auto base = sys_days{year{2018} / October / 10} + hours{20} + minutes{19} + seconds{24};
  EXPECT_EQ(parse_utc_timestamp("2018-10-10T20:19:24Z"), base);
  EXPECT_EQ(parse_utc_timestamp("2018-10-10 20:19:24Z"), base);
  EXPECT_EQ(parse_utc_timestamp("2018-10-10T20:19:24.999Z"), base);
  EXPECT_EQ(parse_utc_timestamp("2018-10-10T22:19:24+02:00"), base);
  EXPECT_EQ(parse_utc_timestamp("2018-10-10T18:49:24-01:30"), base);
  EXPECT_EQ(parse_utc_timestamp("Wed Oct 10 20:19:24 +0000 2018"), base);
  EXPECT_EQ(parse_utc_timestamp("2018-10-10"), UtcInstant{sys_days{year{2018} / October / 10}});
  EXPECT_FALSE(parse_utc_timestamp("2018-02-30T00:00:00Z"));
  EXPECT_FALSE(parse_utc_timestamp("yesterday"));
  EXPECT_FALSE(parse_utc_timestamp(""));
}

TEST(Time, FormatRoundTrip) {
  const auto t = sys_days{year{2022} / September / 30} + hours{1} + minutes{2} + seconds{3};
  EXPECT_EQ(format_utc_timestamp(t), "2022-09-30T01:02:03Z");
  EXPECT_EQ(parse_utc_timestamp(format_utc_timestamp(t)), t);
  EXPECT_EQ(format_utc_date(sys_days{year{2022} / September / 30}), "2022-09-30");
  EXPECT_EQ(parse_utc_date("2022-09-30"), sys_days{year{2022} / September / 30});
}

}  // namespace
}  // namespace mmfd
