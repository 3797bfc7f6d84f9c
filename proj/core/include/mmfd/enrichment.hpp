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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfd/corpus.hpp"
#include "mmfd/time.hpp"

namespace mmfd {

enum class Gender { Male, Female, Undetermined };

std::string_view to_string(Gender g) noexcept;
std::optional<Gender> gender_from_string(std::string_view name);

struct DetectedObject {
  std::string label;
  double confidence = 0.0;

  bool operator==(const DetectedObject&) const = default;
};

struct EnrichmentRecord {
  std::string tweet_id;
  std::int64_t account_age_days = 0;
  bool popular = false;
  Gender gender = Gender::Undetermined;
  std::optional<double> bot_score;
  std::string ocr_text;
  std::vector<DetectedObject> detected_objects;
  std::optional<double> object_text_similarity;
  std::string translated_text;
  std::string cleaned_text;

  bool operator==(const EnrichmentRecord&) const = default;
};

nlohmann::json to_json(const EnrichmentRecord& record);
EnrichmentRecord enrichment_from_json(const nlohmann::json& document);

/// Line-delimited enrichment store.
void save_enrichments(std::span<const EnrichmentRecord> records, const std::filesystem::path& path);
std::vector<EnrichmentRecord> load_enrichments(const std::filesystem::path& path);

inline constexpr UtcDate kDefaultReferenceDate{std::chrono::year{2022} / std::chrono::September / 30};

/// Whole calendar days (UTC) from the creation instant's date to the
/// reference date. Throws FutureAccount when creation is after the date.
std::int64_t compute_account_age(UtcInstant account_created_at, UtcDate reference_date = kDefaultReferenceDate);

/// followers / friends > 1, decided as followers > friends.
constexpr bool compute_popularity(std::int64_t followers_count, std::int64_t friends_count) noexcept {
  return followers_count > friends_count;
}

class GenderDictionary {
 public:
  void add(std::string_view first_name, Gender gender);

  /// `name TAB gender` per line, gender one of male / female.
  static GenderDictionary load(const std::filesystem::path& path);

  std::optional<Gender> find(std::string_view lowered_name) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, Gender> entries_;
};

/// First whitespace token of the display name, lower-cased, keeping only
/// letters, looked up in the dictionary. Misses are Undetermined.
Gender lookup_gender(std::string_view display_name, const GenderDictionary& dictionary);

// ---------------------------------------------------------------------------
// Bot score service.

struct BotScoreResponse {
  enum class Kind { Score, UnknownHandle, TransportError };
  Kind kind = Kind::TransportError;
  double score = 0.0;
  std::string message;
};

/// One request to the scoring service.
class BotScoreTransport {
 public:
  virtual ~BotScoreTransport() = default;
  virtual BotScoreResponse request(std::string_view handle) = 0;
};

/// HTTP transport: GET <endpoint>?handle=<handle> with header
/// `X-API-Key: <credential>`, expecting `{"score": <real>}`. 404 means the
/// service does not know the handle.
class HttpBotScoreTransport final : public BotScoreTransport {
 public:
  HttpBotScoreTransport(std::string endpoint, std::string credential,
                        std::chrono::milliseconds timeout = std::chrono::seconds(10));

  /// Reads the credential from BOT_SCORE_API_KEY (empty when unset).
  static std::unique_ptr<HttpBotScoreTransport> from_environment(
      std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(10));

  BotScoreResponse request(std::string_view handle) override;

 private:
  std::string base_;
  std::string path_;
  std::string credential_;
  std::chrono::milliseconds timeout_;
};

struct BotScoreClientOptions {
  std::chrono::seconds ttl = std::chrono::days(30);
  /// Zero disables the cap.
  double max_requests_per_second = 0.0;
  /// `handle TAB score TAB fetched_at` lines; loaded at construction and
  /// appended on every fresh fetch.
  std::optional<std::filesystem::path> cache_file;
  std::function<UtcInstant()> clock;
};

/// Cached bot-score lookups. Thread-safe; cache reads are shared and cache
/// writes are exclusive.
class BotScoreClient {
 public:
  BotScoreClient(std::shared_ptr<BotScoreTransport> transport, BotScoreClientOptions options = {});

  std::optional<double> fetch(std::string_view handle);

  std::size_t network_calls() const noexcept { return network_calls_.load(); }
  std::size_t cache_size() const;

 private:
  struct Entry {
    double score;
    UtcInstant fetched_at;
  };

  UtcInstant now() const;
  void throttle();
  std::optional<double> request_score(const std::string& handle);

  std::shared_ptr<BotScoreTransport> transport_;
  BotScoreClientOptions options_;
  mutable std::shared_mutex cache_mutex_;
  std::unordered_map<std::string, Entry> cache_;
  std::unordered_map<std::string, std::shared_future<std::optional<double>>> in_flight_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_slot_{};
  std::atomic<std::size_t> network_calls_{0};
};

std::optional<double> fetch_bot_score(std::string_view handle, BotScoreClient& client);

struct VisionOutputs {
  std::string ocr_text;
  std::vector<DetectedObject> detected_objects;
  std::optional<double> object_text_similarity;
};

struct TextOutputs {
  std::string translated_text;
  std::string cleaned_text;
};

/// Assembles the derived features of one record. Only FutureAccount
/// propagates; a missing bot client leaves bot_score absent.
EnrichmentRecord enrich(const TweetRecord& record, const GenderDictionary& dictionary, BotScoreClient* bot,
                        const VisionOutputs& vision, const TextOutputs& text,
                        UtcDate reference_date = kDefaultReferenceDate);

}  // namespace mmfd
