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

#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "mmfd/enrichment.hpp"
#include "mmfd/error.hpp"
#include "strings.hpp"

namespace mmfd {
namespace {

constexpr double kMinBotScore = 0.0;
constexpr double kMaxBotScore = 5.0;

// Splits "scheme://host[:port]/path" into "scheme://host[:port]" and "/path".
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw ConfigError("bot score endpoint needs a scheme: " + endpoint);
  auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

HttpBotScoreTransport::HttpBotScoreTransport(std::string endpoint, std::string credential,
                                             std::chrono::milliseconds timeout)
    : credential_(std::move(credential)), timeout_(timeout) {
  std::tie(base_, path_) = split_endpoint(endpoint);
}

std::unique_ptr<HttpBotScoreTransport> HttpBotScoreTransport::from_environment(std::string endpoint,
                                                                               std::chrono::milliseconds timeout) {
  const char* key = std::getenv("BOT_SCORE_API_KEY");
  return std::make_unique<HttpBotScoreTransport>(std::move(endpoint), key ? key : "", timeout);
}

BotScoreResponse HttpBotScoreTransport::request(std::string_view handle) {
  BotScoreResponse response;
  try {
    httplib::Client client(base_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    httplib::Headers headers;
    if (!credential_.empty()) headers.emplace("X-API-Key", credential_);
    httplib::Params params{{"handle", std::string(handle)}};
    auto result = client.Get(path_, params, headers);
    if (!result) {
      response.message = "transport error: " + httplib::to_string(result.error());
      return response;
    }
    if (result->status == 404) {
      response.kind = BotScoreResponse::Kind::UnknownHandle;
      return response;
    }
    if (result->status != 200) {
      response.message = "HTTP status " + std::to_string(result->status);
      return response;
    }
    auto body = nlohmann::json::parse(result->body, nullptr, false);
    if (body.is_discarded() || !body.contains("score") || !body["score"].is_number()) {
      response.message = "response has no numeric 'score'";
      return response;
    }
    response.kind = BotScoreResponse::Kind::Score;
    response.score = body["score"].get<double>();
  } catch (const std::exception& e) {
    response.kind = BotScoreResponse::Kind::TransportError;
    response.message = e.what();
  }
  return response;
}

BotScoreClient::BotScoreClient(std::shared_ptr<BotScoreTransport> transport, BotScoreClientOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!transport_) throw ConfigError("bot score client needs a transport");
  if (!options_.cache_file) return;
  std::ifstream in(*options_.cache_file);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find('\t');
    auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
    if (second == std::string::npos) continue;
    char* end = nullptr;
    const std::string score_text = line.substr(first + 1, second - first - 1);
    double score = std::strtod(score_text.c_str(), &end);
    auto fetched = parse_utc_timestamp(line.substr(second + 1));
    if (end == score_text.c_str() || !fetched || score < kMinBotScore || score > kMaxBotScore) continue;
    cache_[line.substr(0, first)] = Entry{score, *fetched};
  }
}

UtcInstant BotScoreClient::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

void BotScoreClient::throttle() {
  if (options_.max_requests_per_second <= 0.0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options_.max_requests_per_second));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(rate_mutex_);
    const auto t = std::chrono::steady_clock::now();
    slot = std::max(t, next_slot_);
    next_slot_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

std::optional<double> BotScoreClient::request_score(const std::string& key) {
  throttle();
  network_calls_.fetch_add(1);
  const BotScoreResponse response = transport_->request(key);
  switch (response.kind) {
    case BotScoreResponse::Kind::UnknownHandle:
      spdlog::info("bot score service does not know handle '{}'", key);
      return std::nullopt;
    case BotScoreResponse::Kind::TransportError:
      spdlog::warn("bot score request for '{}' failed: {}", key, response.message);
      return std::nullopt;
    case BotScoreResponse::Kind::Score:
      break;
  }
  if (!(response.score >= kMinBotScore && response.score <= kMaxBotScore)) {
    spdlog::warn("bot score {} for '{}' outside [0, 5], discarded", response.score, key);
    return std::nullopt;
  }
  return response.score;
}

std::optional<double> BotScoreClient::fetch(std::string_view handle) {
  if (handle.empty()) return std::nullopt;
  const std::string key(handle);
  {
    std::shared_lock lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end() && now() - it->second.fetched_at < options_.ttl) return it->second.score;
  }

  // Concurrent callers for one handle share a single request.
  std::promise<std::optional<double>> promise;
  std::shared_future<std::optional<double>> pending;
  {
    std::unique_lock lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end() && now() - it->second.fetched_at < options_.ttl) return it->second.score;
    if (auto fl = in_flight_.find(key); fl != in_flight_.end()) {
      pending = fl->second;
    } else {
      in_flight_.emplace(key, promise.get_future().share());
    }
  }
  if (pending.valid()) return pending.get();

  std::optional<double> score;
  try {
    score = request_score(key);
  } catch (const std::exception& e) {
    spdlog::warn("bot score request for '{}' failed: {}", key, e.what());
  }
  {
    std::unique_lock lock(cache_mutex_);
    if (score) {
      const Entry entry{*score, now()};
      cache_[key] = entry;
      if (options_.cache_file) {
        std::ofstream out(*options_.cache_file, std::ios::app);
        out << key << '\t' << nlohmann::json(entry.score).dump() << '\t' << format_utc_timestamp(entry.fetched_at)
            << '\n';
      }
    }
    in_flight_.erase(key);
  }
  promise.set_value(score);
  return score;
}

std::size_t BotScoreClient::cache_size() const {
  std::shared_lock lock(cache_mutex_);
  return cache_.size();
}

std::optional<double> fetch_bot_score(std::string_view handle, BotScoreClient& client) {
  return client.fetch(handle);
}

}  // namespace mmfd
