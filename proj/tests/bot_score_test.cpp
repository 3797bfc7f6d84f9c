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

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "mmfd/enrichment.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

using namespace std::chrono;

class CountingTransport final : public BotScoreTransport {
 public:
  BotScoreResponse request(std::string_view handle) override {
    ++calls;
    if (delay.count()) std::this_thread::sleep_for(delay);
    if (handle == "ghost") return {BotScoreResponse::Kind::UnknownHandle, 0.0, ""};
    if (handle == "down") return {BotScoreResponse::Kind::TransportError, 0.0, "unreachable"};
    if (handle == "weird") return {BotScoreResponse::Kind::Score, 6.1, ""};
    return {BotScoreResponse::Kind::Score, 4.2, ""};
  }
  std::atomic<int> calls{0};
  milliseconds delay{0};
};

struct ManualClock {
  UtcInstant now{sys_days{year{2022} / September / 30}};
  std::function<UtcInstant()> fn() {
    return [this] { return now; };
  }
};

TEST(BotScore, CacheHitsAvoidNetwork) {
  auto transport = std::make_shared<CountingTransport>();
  ManualClock clock;
  BotScoreClientOptions options;
  options.clock = clock.fn();
  BotScoreClient client(transport, options);
  EXPECT_EQ(fetch_bot_score("alice", client), 4.2);
  EXPECT_EQ(fetch_bot_score("alice", client), 4.2);
  EXPECT_EQ(transport->calls, 1);
  clock.now += days{29};
  EXPECT_EQ(fetch_bot_score("alice", client), 4.2);
  EXPECT_EQ(transport->calls, 1);
  clock.now += days{2};
  EXPECT_EQ(fetch_bot_score("alice", client), 4.2);
  EXPECT_EQ(transport->calls, 2);
  EXPECT_EQ(client.network_calls(), 2u);
}

TEST(BotScore, DegradesToAbsent) {
  auto transport = std::make_shared<CountingTransport>();
  BotScoreClient client(transport);
  EXPECT_FALSE(fetch_bot_score("weird", client));
  EXPECT_FALSE(fetch_bot_score("down", client));
  EXPECT_FALSE(fetch_bot_score("ghost", client));
  EXPECT_FALSE(fetch_bot_score("", client));
  EXPECT_EQ(client.cache_size(), 0u);
  // Failures are not cached, so they are retried.
  EXPECT_FALSE(fetch_bot_score("down", client));
  EXPECT_EQ(transport->calls, 4);
}

TEST(BotScore, PersistentCache) {
  testing::TempDir dir;
  ManualClock clock;
  BotScoreClientOptions options;
  options.cache_file = dir / "bot.tsv";
  options.clock = clock.fn();
  testing::write_text(dir / "bot.tsv", "bob\t1.5\t2022-09-29T00:00:00Z\nbroken line\nstale\t2.0\t2020-01-01T00:00:00Z\n");
  auto transport = std::make_shared<CountingTransport>();
  {
    BotScoreClient client(transport, options);
    EXPECT_EQ(client.fetch("bob"), 1.5);
    EXPECT_EQ(transport->calls, 0);
    EXPECT_EQ(client.fetch("stale"), 4.2);
    EXPECT_EQ(client.fetch("carol"), 4.2);
    EXPECT_EQ(transport->calls, 2);
  }
  BotScoreClient warm(transport, options);
  EXPECT_EQ(warm.fetch("carol"), 4.2);
  EXPECT_EQ(warm.fetch("stale"), 4.2);
  EXPECT_EQ(warm.network_calls(), 0u);
}

TEST(BotScore, ConcurrentFetchesShareOneRequest) {
  auto transport = std::make_shared<CountingTransport>();
  transport->delay = milliseconds{50};
  BotScoreClient client(transport);
  std::vector<std::jthread> threads;
  std::atomic<int> hits{0};
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&] {
      if (client.fetch("same") == 4.2) ++hits;
    });
  threads.clear();
  EXPECT_EQ(hits, 8);
  EXPECT_EQ(transport->calls, 1);
}

TEST(BotScore, RateCapSpacesRequests) {
  auto transport = std::make_shared<CountingTransport>();
  BotScoreClientOptions options;
  options.max_requests_per_second = 50.0;
  BotScoreClient client(transport, options);
  const auto start = steady_clock::now();
  for (int i = 0; i < 6; ++i) client.fetch("h" + std::to_string(i));
  EXPECT_GE(steady_clock::now() - start, milliseconds{95});
}

TEST(BotScore, HttpTransportAgainstLocalServer) {
  httplib::Server server;
  std::atomic<int> requests{0};
  std::string seen_key;
  server.Get("/score", [&](const httplib::Request& req, httplib::Response& res) {
    ++requests;
    seen_key = req.get_header_value("X-API-Key");
    const auto handle = req.get_param_value("handle");
    if (handle == "nobody") {
      res.status = 404;
      return;
    }
    res.set_content(R"({"score": 2.5})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string endpoint = "http://127.0.0.1:" + std::to_string(port) + "/score";
  HttpBotScoreTransport transport(endpoint, "secret");
  const auto ok = transport.request("alice");
  EXPECT_EQ(ok.kind, BotScoreResponse::Kind::Score);
  EXPECT_EQ(ok.score, 2.5);
  EXPECT_EQ(seen_key, "secret");
  EXPECT_EQ(transport.request("nobody").kind, BotScoreResponse::Kind::UnknownHandle);

  ::setenv("BOT_SCORE_API_KEY", "from-env", 1);
  auto env_transport = HttpBotScoreTransport::from_environment(endpoint);
  env_transport->request("alice");
  EXPECT_EQ(seen_key, "from-env");
  ::unsetenv("BOT_SCORE_API_KEY");

  server.stop();
  worker.join();

  HttpBotScoreTransport dead(endpoint, "", milliseconds{200});
  EXPECT_EQ(dead.request("alice").kind, BotScoreResponse::Kind::TransportError);
}

}  // namespace
}  // namespace mmfd
