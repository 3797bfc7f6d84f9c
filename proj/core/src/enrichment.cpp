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

#include "mmfd/enrichment.hpp"

#include <fstream>

#include <spdlog/spdlog.h>

#include "mmfd/error.hpp"
#include "strings.hpp"

namespace mmfd {

using nlohmann::json;

std::string_view to_string(Gender g) noexcept {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::optional<Gender> gender_from_string(std::string_view name) {
  auto lowered = detail::ascii_lower(detail::trim(name));
  if (lowered == "male" || lowered == "m") return Gender::Male;
  if (lowered == "female" || lowered == "f") return Gender::Female;
  if (lowered == "undetermined" || lowered == "unknown" || lowered == "u") return Gender::Undetermined;
  return std::nullopt;
}

json to_json(const EnrichmentRecord& r) {
  json objects = json::array();
  for (const auto& o : r.detected_objects) objects.push_back({{"label", o.label}, {"confidence", o.confidence}});
  return {
      {"tweet_id", r.tweet_id},
      {"account_age_days", r.account_age_days},
      {"popular", r.popular},
      {"gender", to_string(r.gender)},
      {"bot_score", r.bot_score ? json(*r.bot_score) : json(nullptr)},
      {"ocr_text", r.ocr_text},
      {"detected_objects", std::move(objects)},
      {"object_text_similarity", r.object_text_similarity ? json(*r.object_text_similarity) : json(nullptr)},
      {"translated_text", r.translated_text},
      {"cleaned_text", r.cleaned_text},
  };
}

EnrichmentRecord enrichment_from_json(const json& doc) {
  EnrichmentRecord r;
  try {
    r.tweet_id = doc.at("tweet_id").get<std::string>();
    r.account_age_days = doc.at("account_age_days").get<std::int64_t>();
    r.popular = doc.at("popular").get<bool>();
    auto gender = gender_from_string(doc.at("gender").get<std::string>());
    if (!gender) throw Error("unknown gender value");
    r.gender = *gender;
    if (const auto& b = doc.at("bot_score"); !b.is_null()) r.bot_score = b.get<double>();
    r.ocr_text = doc.value("ocr_text", "");
    for (const auto& o : doc.value("detected_objects", json::array())) {
      r.detected_objects.push_back({o.at("label").get<std::string>(), o.at("confidence").get<double>()});
    }
    if (auto it = doc.find("object_text_similarity"); it != doc.end() && !it->is_null()) {
      r.object_text_similarity = it->get<double>();
    }
    r.translated_text = doc.value("translated_text", "");
    r.cleaned_text = doc.value("cleaned_text", "");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed enrichment record: ") + e.what());
  }
  return r;
}

void save_enrichments(std::span<const EnrichmentRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write enrichment store: " + path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw Error("failed writing enrichment store: " + path.string());
}

std::vector<EnrichmentRecord> load_enrichments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open enrichment store: " + path.string());
  std::vector<EnrichmentRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) throw Error("corrupt line in enrichment store: " + path.string());
    records.push_back(enrichment_from_json(doc));
  }
  return records;
}

std::int64_t compute_account_age(UtcInstant account_created_at, UtcDate reference_date) {
  const auto created_day = std::chrono::floor<std::chrono::days>(account_created_at);
  const auto age = (reference_date - created_day).count();
  if (age < 0) {
    throw FutureAccount("account created " + format_utc_timestamp(account_created_at) + " after reference date " +
                        format_utc_date(reference_date));
  }
  return age;
}

void GenderDictionary::add(std::string_view first_name, Gender gender) {
  auto key = detail::ascii_lower(detail::trim(first_name));
  if (key.empty()) throw ConfigError("empty name in gender dictionary");
  if (gender == Gender::Undetermined) throw ConfigError("gender dictionary entries must be male or female");
  entries_[key] = gender;
}

GenderDictionary GenderDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gender dictionary: " + path.string());
  GenderDictionary dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tab = view.find('\t');
    auto gender = tab == std::string_view::npos ? std::nullopt : gender_from_string(view.substr(tab + 1));
    if (!gender || *gender == Gender::Undetermined) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'name<TAB>male|female'");
    }
    dict.add(view.substr(0, tab), *gender);
  }
  return dict;
}

std::optional<Gender> GenderDictionary::find(std::string_view lowered_name) const {
  auto it = entries_.find(std::string(lowered_name));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Gender lookup_gender(std::string_view display_name, const GenderDictionary& dictionary) {
  auto tokens = detail::split_whitespace(display_name);
  if (tokens.empty()) return Gender::Undetermined;
  // Non-ASCII bytes are kept so UTF-8 names survive the letter filter.
  std::string key;
  for (char c : tokens.front()) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) {
      key += c;
    } else if (std::isalpha(u)) {
      key += static_cast<char>(std::tolower(u));
    }
  }
  if (key.empty()) return Gender::Undetermined;
  return dictionary.find(key).value_or(Gender::Undetermined);
}

EnrichmentRecord enrich(const TweetRecord& record, const GenderDictionary& dictionary, BotScoreClient* bot,
                        const VisionOutputs& vision, const TextOutputs& text, UtcDate reference_date) {
  EnrichmentRecord out;
  out.tweet_id = record.tweet_id;
  out.account_age_days = compute_account_age(record.user.account_created_at, reference_date);
  out.popular = compute_popularity(record.user.followers_count, record.user.friends_count);
  out.gender = lookup_gender(record.user.display_name, dictionary);
  if (bot && !record.user.handle.empty()) out.bot_score = fetch_bot_score(record.user.handle, *bot);

  out.ocr_text = vision.ocr_text;
  for (const auto& obj : vision.detected_objects) {
    if (obj.confidence >= 0.0 && obj.confidence <= 1.0) out.detected_objects.push_back(obj);
  }
  if (vision.object_text_similarity && *vision.object_text_similarity >= -1.0 &&
      *vision.object_text_similarity <= 1.0) {
    out.object_text_similarity = vision.object_text_similarity;
  }
  out.translated_text = text.translated_text;
  out.cleaned_text = text.cleaned_text;
  return out;
}

}  // namespace mmfd
