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

#include "mmfd/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mmfd/error.hpp"
#include "mmfd/image.hpp"

namespace mmfd {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono;

struct WordPair {
  const char* en;
  const char* es;
};

// Claim words push the text latent up, counter words down.
constexpr WordPair kClaimWords[] = {{"hoax", "bulo"}, {"secret", "secreto"}};
constexpr WordPair kCounterWords[] = {{"confirmed", "confirmado"}, {"official", "oficial"}};
constexpr WordPair kFillerWords[] = {
    {"vaccine", "vacuna"},     {"election", "eleccion"}, {"government", "gobierno"}, {"doctor", "medico"},
    {"city", "ciudad"},        {"water", "agua"},        {"price", "precio"},        {"school", "escuela"},
    {"president", "presidente"}, {"virus", "virus"},     {"money", "dinero"},        {"video", "video"},
    {"photo", "foto"},         {"people", "gente"},      {"report", "informe"},      {"police", "policia"},
    {"border", "frontera"},    {"health", "salud"},      {"study", "estudio"},       {"market", "mercado"},
    {"storm", "tormenta"},     {"minister", "ministro"}, {"hospital", "hospital"},   {"country", "pais"},
    {"world", "mundo"},        {"law", "ley"},           {"energy", "energia"},      {"food", "comida"},
    {"bank", "banco"},         {"army", "ejercito"},     {"church", "iglesia"},      {"court", "tribunal"},
};
constexpr std::size_t kContentWords = 12;
constexpr std::size_t kFillerCount = 5;

constexpr const char* kHashtags[] = {"news", "covid", "breaking", "politics", "health", "viral", "truth", "world"};

constexpr const char* kMaleNames[] = {"james", "john", "robert", "michael", "david", "carlos", "jose", "ahmed",
                                      "luis", "peter", "thomas", "daniel"};
constexpr const char* kFemaleNames[] = {"mary", "patricia", "jennifer", "linda", "maria", "sarah", "fatima",
                                        "laura", "ana", "emma", "sofia", "julia"};
constexpr const char* kOtherNames[] = {"news", "daily", "the", "official", "team", "info", "world", "real"};

const char* pick(std::span<const char* const> items, Rng& rng) { return items[rng.below(items.size())]; }

std::string zero_pad(std::size_t n, int width) {
  std::string s = std::to_string(n);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

UtcInstant random_instant(Rng& rng, sys_days from, sys_days to) {
  const auto span = static_cast<std::uint64_t>((to - from).count()) * 86400;
  return UtcInstant{from} + seconds{static_cast<std::int64_t>(rng.below(span))};
}

std::int64_t log_normal_count(Rng& rng, double log_mean, double log_sd) {
  return static_cast<std::int64_t>(std::llround(std::exp(log_mean + log_sd * rng.normal())));
}

std::string display_name(Rng& rng, Gender g) {
  switch (g) {
    case Gender::Male: return std::string(pick(kMaleNames, rng)) + " " + pick(kOtherNames, rng);
    case Gender::Female: return std::string(pick(kFemaleNames, rng)) + " " + pick(kOtherNames, rng);
    case Gender::Undetermined: return std::string(pick(kOtherNames, rng)) + " " + pick(kOtherNames, rng);
  }
  return {};
}

std::string tweet_text(Rng& rng, double text_latent, bool spanish, const std::string& hashtag,
                       const std::string& mention) {
  const auto claims = static_cast<std::size_t>(
      std::clamp(std::llround(kContentWords / 2.0 + 2.5 * text_latent), 0LL, static_cast<long long>(kContentWords)));
  std::vector<std::string> words;
  auto word = [&](const WordPair& w) { return std::string(spanish ? w.es : w.en); };
  for (std::size_t i = 0; i < kContentWords; ++i) {
    const auto& pool = i < claims ? std::span<const WordPair>(kClaimWords) : std::span<const WordPair>(kCounterWords);
    words.push_back(word(pool[rng.below(pool.size())]));
  }
  for (std::size_t i = 0; i < kFillerCount; ++i) words.push_back(word(kFillerWords[rng.below(std::size(kFillerWords))]));
  rng.shuffle(std::span<std::string>(words));
  // Stopwords and links are removed by cleaning; they only add surface noise.
  if (!spanish) {
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size())), "the");
  }
  words.push_back("#" + hashtag);
  words.insert(words.begin(), "@" + mention);
  if (rng.bernoulli(0.4)) words.push_back("https://t.co/" + zero_pad(rng.below(100000), 5));
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  // Surface case varies; cleaning lower-cases.
  if (rng.bernoulli(0.3) && !out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// A pastel band covers a quarter of the image; the rest is split between
// two colours in proportion to the image latent. All colours are light
// enough that OCR sees no ink.
void write_image(const fs::path& path, Rng& rng, double image_latent, std::size_t side) {
  static constexpr Rgb kWarm{250, 150, 150};
  static constexpr Rgb kCool{150, 190, 250};
  static constexpr Rgb kBands[] = {{200, 240, 170}, {240, 220, 150}, {200, 200, 200}};
  const std::size_t total = side * side;
  const std::size_t band = total / 4;
  const double share = std::clamp(0.5 + 0.15 * image_latent, 0.0, 1.0);
  const auto warm = static_cast<std::size_t>(std::llround(share * static_cast<double>(total - band)));
  std::vector<Rgb> pixels;
  pixels.reserve(total);
  const Rgb band_colour = kBands[rng.below(std::size(kBands))];
  for (std::size_t i = 0; i < band; ++i) pixels.push_back(band_colour);
  for (std::size_t i = 0; i < warm; ++i) pixels.push_back(kWarm);
  while (pixels.size() < total) pixels.push_back(kCool);
  rng.shuffle(std::span<Rgb>(pixels.data() + band, total - band));
  auto image = RgbImage::filled(side, side, kCool);
  for (std::size_t i = 0; i < total; ++i) image.set(i % side, i / side, pixels[i]);
  save_png(image, path);
}

}  // namespace

SyntheticCorpus write_synthetic_corpus(const fs::path& directory, const SyntheticCorpusOptions& options) {
  if (options.misinformation < 2 || options.other < 2) throw ConfigError("synthetic corpus needs two records per class");
  if (options.image_side < 4) throw ConfigError("synthetic image side must be at least 4");
  fs::create_directories(directory / "images");
  Rng rng(options.seed);

  const std::size_t n = options.misinformation + options.other;
  std::vector<std::array<double, 3>> latents(n);
  for (auto& l : latents) l = {rng.normal(), rng.normal(), rng.normal()};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return latents[a][0] + latents[a][1] + latents[a][2] < latents[b][0] + latents[b][1] + latents[b][2];
  });
  std::vector<bool> is_other(n, false);
  for (std::size_t k = 0; k < options.other; ++k) is_other[order[k]] = true;

  SyntheticCorpus corpus;
  corpus.manifest = directory / "manifest.jsonl";
  corpus.translations = directory / "translations.tsv";
  corpus.genders = directory / "genders.tsv";
  corpus.records = n;

  std::ofstream manifest(corpus.manifest, std::ios::trunc);
  if (!manifest) throw Error("cannot write " + corpus.manifest.string());
  const sys_days accounts_from = year{2008} / January / 1;
  const sys_days tweets_from = year{2020} / January / 1;
  const sys_days tweets_to = year{2022} / September / 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [u_text, u_image, u_social] = latents[i];
    const bool spanish = rng.bernoulli(options.spanish_share);
    TweetRecord r;
    r.tweet_id = "syn-" + zero_pad(i + 1, 5);
    r.user.handle = "user" + zero_pad(i + 1, 5);
    const auto gender = static_cast<Gender>(rng.below(3));
    r.user.display_name = display_name(rng, gender);
    r.user.followers_count = log_normal_count(rng, 7.0, 2.0);
    r.user.friends_count = log_normal_count(rng, 6.0, 1.0);
    r.user.favorites_count = log_normal_count(rng, 8.0, 1.5);
    r.user.statuses_count = std::max<std::int64_t>(0, std::llround(40000.0 + 12000.0 * u_social));
    r.user.verified = rng.bernoulli(0.5);
    r.user.account_created_at = random_instant(rng, accounts_from, tweets_from);
    r.created_at = random_instant(rng, tweets_from, tweets_to);
    const std::string hashtag = pick(kHashtags, rng);
    const std::string mention = "user" + zero_pad(rng.below(n) + 1, 5);
    r.text = tweet_text(rng, u_text, spanish, hashtag, mention);
    r.language = spanish ? "es" : "en";
    r.hashtags = {hashtag};
    r.mentions = {mention};
    r.retweet_count = log_normal_count(rng, 6.0, 1.5);
    r.favourite_count = log_normal_count(rng, 7.0, 1.5);
    r.retweeted = rng.bernoulli(0.1);
    if (is_other[i]) {
      static constexpr const char* kOtherVerdicts[] = {"True", "Other", "Mostly true", "Satire"};
      r.raw_verdict = pick(kOtherVerdicts, rng);
    } else {
      static constexpr const char* kMisVerdicts[] = {"False", "Partially false", "Misleading", "FALSE"};
      r.raw_verdict = pick(kMisVerdicts, rng);
    }
    if (!rng.bernoulli(options.missing_image_share)) {
      const fs::path relative = fs::path("images") / (r.tweet_id + ".png");
      write_image(directory / relative, rng, u_image, options.image_side);
      r.media_path = relative;
    }
    manifest << to_json(r).dump() << '\n';
  }
  if (!manifest) throw Error("failed writing " + corpus.manifest.string());

  std::ofstream translations(corpus.translations, std::ios::trunc);
  translations << "# lang\tword\tenglish\n";
  const std::span<const WordPair> pools[] = {kClaimWords, kCounterWords, kFillerWords};
  for (const auto& pool : pools)
    for (const auto& w : pool) translations << "es\t" << w.es << '\t' << w.en << '\n';

  std::ofstream genders(corpus.genders, std::ios::trunc);
  for (const char* name : kMaleNames) genders << name << "\tmale\n";
  for (const char* name : kFemaleNames) genders << name << "\tfemale\n";
  if (!translations || !genders) throw Error("failed writing synthetic dictionaries");
  return corpus;
}

// ---------------------------------------------------------------------------

PropagationTargets reference_misinformation_targets() {
  PropagationTargets t;
  t.tweets = 1273;
  t.accounts = 1054;
  t.verified = 612;
  t.popular = 939;
  t.mean_retweet = 4768;
  t.mean_favourite = 15706;
  t.hashtags = 433;
  t.mentions = 425;
  t.gender = {427, 169, 458};
  return t;
}

PropagationTargets reference_other_targets() {
  PropagationTargets t;
  t.tweets = 256;
  t.accounts = 229;
  t.verified = 125;
  t.popular = 205;
  t.mean_retweet = 4333;
  t.mean_favourite = 10195;
  t.hashtags = 94;
  t.mentions = 84;
  t.gender = {97, 27, 105};
  return t;
}

PropagationTargets random_propagation_targets(Rng& rng) {
  PropagationTargets t;
  t.tweets = 2 + rng.below(150);
  t.accounts = 1 + rng.below(t.tweets);
  t.verified = rng.below(t.accounts + 1);
  t.popular = rng.below(t.accounts + 1);
  t.mean_retweet = static_cast<std::int64_t>(rng.below(10000));
  t.mean_favourite = static_cast<std::int64_t>(rng.below(20000));
  t.hashtags = rng.below(2 * t.tweets + 1);
  t.mentions = rng.below(2 * t.tweets + 1);
  t.gender.male = rng.below(t.accounts + 1);
  t.gender.female = rng.below(t.accounts - t.gender.male + 1);
  t.gender.undetermined = t.accounts - t.gender.male - t.gender.female;
  return t;
}

namespace {

constexpr std::size_t kMaxTagsPerTweet = 4;

void validate(const PropagationTargets& t) {
  if (t.tweets == 0 || t.accounts == 0) throw ConfigError("propagation targets need tweets and accounts");
  if (t.accounts > t.tweets) throw ConfigError("more accounts than tweets");
  if (t.verified > t.accounts || t.popular > t.accounts) throw ConfigError("flag counts exceed accounts");
  if (t.gender.total() != t.accounts) throw ConfigError("gender triple must sum to accounts");
  if (t.mean_retweet < 0 || t.mean_favourite < 0) throw ConfigError("means must be non-negative");
  if (t.hashtags > kMaxTagsPerTweet * t.tweets || t.mentions > kMaxTagsPerTweet * t.tweets)
    throw ConfigError("too many unique hashtags or mentions for the tweet count");
}

// Non-negative integers summing exactly to total, roughly proportional to
// random weights.
std::vector<std::int64_t> allocate(std::int64_t total, std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  for (auto& x : w) x = 0.1 + rng.uniform() * 1.8;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::int64_t> out(n);
  std::int64_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(total) * w[i] / sum));
    used += out[i];
  }
  for (std::size_t i = 0; used < total; i = (i + 1) % n, ++used) ++out[i];
  for (std::size_t i = 0; used > total; i = (i + 1) % n)
    if (out[i] > 0) --out[i], --used;
  return out;
}

// Every pool entry lands on at least one tweet; extras are random repeats.
std::vector<std::vector<std::string>> spread_tags(const std::string& prefix, std::size_t unique, std::size_t tweets,
                                                  Rng& rng) {
  std::vector<std::vector<std::string>> out(tweets);
  for (std::size_t k = 0; k < unique; ++k) out[k % tweets].push_back(prefix + std::to_string(k));
  if (unique == 0) return out;
  for (auto& tags : out)
    if (tags.size() < kMaxTagsPerTweet && rng.bernoulli(0.3)) {
      auto tag = prefix + std::to_string(rng.below(unique));
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(std::move(tag));
    }
  return out;
}

std::vector<bool> choose(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<bool> out(n, false);
  for (std::size_t i = 0; i < k; ++i) out[idx[i]] = true;
  return out;
}

struct ClassBuild {
  std::vector<LabeledRecord> records;
  std::vector<EnrichmentRecord> enrichments;
  ClassAggregates expected;
};

ClassBuild build_class(const PropagationTargets& t, BinaryLabel label, Rng& rng) {
  validate(t);
  const bool mis = label == BinaryLabel::Misinformation;
  const std::string prefix = mis ? "m" : "o";
  ClassBuild b;

  std::vector<std::size_t> tweets_of(t.accounts, 1);
  for (std::size_t extra = t.accounts; extra < t.tweets; ++extra) ++tweets_of[rng.below(t.accounts)];
  const auto verified = choose(t.accounts, t.verified, rng);
  const auto popular = choose(t.accounts, t.popular, rng);
  std::vector<Gender> gender(t.accounts, Gender::Undetermined);
  {
    std::vector<std::size_t> idx(t.accounts);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(idx));
    for (std::size_t i = 0; i < t.gender.male; ++i) gender[idx[i]] = Gender::Male;
    for (std::size_t i = t.gender.male; i < t.gender.male + t.gender.female; ++i) gender[idx[i]] = Gender::Female;
  }
  const auto retweets = allocate(static_cast<std::int64_t>(t.tweets) * t.mean_retweet, t.tweets, rng);
  const auto favourites = allocate(static_cast<std::int64_t>(t.tweets) * t.mean_favourite, t.tweets, rng);
  const auto hashtags = spread_tags(prefix + "tag", t.hashtags, t.tweets, rng);
  const auto mentions = spread_tags(prefix + "user", t.mentions, t.tweets, rng);

  std::int64_t followers = 0, friends = 0, statuses = 0, age = 0;
  std::size_t tweet = 0;
  const sys_days first_day = year{2020} / March / 1;
  for (std::size_t a = 0; a < t.accounts; ++a) {
    UserSnapshot user;
    user.handle = prefix + "_account_" + std::to_string(a);
    user.display_name = "account " + std::to_string(a);
    user.account_created_at = UtcInstant{sys_days{year{2009} / January / 1} + days{rng.below(3500)}};
    const UtcInstant first_tweet = UtcInstant{first_day} + minutes{rng.below(60 * 24 * 365)};
    for (std::size_t k = 0; k < tweets_of[a]; ++k, ++tweet) {
      // Later snapshots flip the account flags; only the first one counts.
      const bool later = k > 0;
      UserSnapshot snap = user;
      snap.verified = verified[a] != later;
      const bool is_popular = popular[a] != later;
      snap.friends_count = 10 + static_cast<std::int64_t>(rng.below(5000));
      snap.followers_count = is_popular ? snap.friends_count + 1 + static_cast<std::int64_t>(rng.below(2000000))
                                        : static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(snap.friends_count) + 1));
      snap.favorites_count = static_cast<std::int64_t>(rng.below(100000));
      snap.statuses_count = static_cast<std::int64_t>(rng.below(100000));

      LabeledRecord lr;
      lr.label = label;
      auto& r = lr.record;
      r.tweet_id = prefix + "-" + zero_pad(tweet + 1, 6);
      r.text = "fixture tweet " + std::to_string(tweet);
      r.created_at = first_tweet + hours{24 * k};
      r.user = snap;
      r.hashtags = hashtags[tweet];
      r.mentions = mentions[tweet];
      r.retweet_count = retweets[tweet];
      r.favourite_count = favourites[tweet];
      r.raw_verdict = mis ? "false" : "true";

      EnrichmentRecord e;
      e.tweet_id = r.tweet_id;
      e.account_age_days = compute_account_age(snap.account_created_at, kDefaultReferenceDate);
      e.popular = compute_popularity(snap.followers_count, snap.friends_count);
      e.gender = gender[a];

      followers += snap.followers_count;
      friends += snap.friends_count;
      statuses += snap.statuses_count;
      age += e.account_age_days;
      b.records.push_back(std::move(lr));
      b.enrichments.push_back(std::move(e));
    }
  }

  auto& x = b.expected;
  const auto n = static_cast<double>(t.tweets);
  x.label = label;
  x.tweets = t.tweets;
  x.unique_accounts = t.accounts;
  x.verified_accounts = t.verified;
  x.verified_share = 100.0 * static_cast<double>(t.verified) / static_cast<double>(t.accounts);
  x.popular_accounts = t.popular;
  x.popular_share = 100.0 * static_cast<double>(t.popular) / static_cast<double>(t.accounts);
  x.total_retweets = static_cast<std::int64_t>(t.tweets) * t.mean_retweet;
  x.total_favourites = static_cast<std::int64_t>(t.tweets) * t.mean_favourite;
  x.mean_retweet = static_cast<double>(t.mean_retweet);
  x.mean_favourite = static_cast<double>(t.mean_favourite);
  x.mean_followers = static_cast<double>(followers) / n;
  x.mean_friends = static_cast<double>(friends) / n;
  x.mean_statuses = static_cast<double>(statuses) / n;
  x.mean_account_age = static_cast<double>(age) / n;
  x.unique_hashtags = t.hashtags;
  x.unique_mentions = t.mentions;
  x.gender = t.gender;
  return b;
}

}  // namespace

PropagationFixture make_propagation_fixture(const PropagationTargets& misinformation, const PropagationTargets& other,
                                            std::uint64_t seed) {
  Rng rng(seed);
  auto mis = build_class(misinformation, BinaryLabel::Misinformation, rng);
  auto oth = build_class(other, BinaryLabel::Other, rng);

  std::vector<LabeledRecord> records = std::move(mis.records);
  records.insert(records.end(), std::make_move_iterator(oth.records.begin()),
                 std::make_move_iterator(oth.records.end()));
  std::vector<EnrichmentRecord> enrichments = std::move(mis.enrichments);
  enrichments.insert(enrichments.end(), std::make_move_iterator(oth.enrichments.begin()),
                     std::make_move_iterator(oth.enrichments.end()));
  rng.shuffle(std::span<LabeledRecord>(records));
  rng.shuffle(std::span<EnrichmentRecord>(enrichments));

  PropagationFixture f;
  f.dataset = Dataset(std::move(records), "propagation-fixture");
  f.enrichments = std::move(enrichments);
  f.expected_misinformation = mis.expected;
  f.expected_other = oth.expected;
  return f;
}

}  // namespace mmfd
