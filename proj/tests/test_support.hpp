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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mmfd/corpus.hpp"

namespace mmfd::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mmfd-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// A valid manifest document; tweak fields before dumping.
inline nlohmann::json tweet_json(const std::string& id, const std::string& verdict = "false") {
  return {
      {"tweet_id", id},
      {"text", "Breaking: the water is safe https://t.co/abc #health @who"},
      {"language", "en"},
      {"created_at", "2021-05-01T12:00:00Z"},
      {"hashtags", {"health"}},
      {"mentions", {"who"}},
      {"retweet_count", 10},
      {"favourite_count", 20},
      {"retweeted", false},
      {"raw_verdict", verdict},
      {"user",
       {{"handle", "user_" + id},
        {"display_name", "Maria Lopez"},
        {"followers_count", 100},
        {"friends_count", 50},
        {"favorites_count", 7},
        {"statuses_count", 1000},
        {"verified", true},
        {"account_created_at", "2015-01-01T00:00:00Z"}}},
  };
}

inline TweetRecord make_tweet(const std::string& id, const std::string& verdict = "false") {
  return parse_tweet(tweet_json(id, verdict));
}

inline LabeledRecord make_labeled(const std::string& id, BinaryLabel label) {
  return {make_tweet(id, label == BinaryLabel::Misinformation ? "false" : "true"), label};
}

}  // namespace mmfd::testing
