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

#include "mmfd/textprep.hpp"

#include <array>
#include <fstream>

#include <spdlog/spdlog.h>

#include "mmfd/error.hpp"
#include "strings.hpp"

namespace mmfd {
namespace {

constexpr std::array<std::string_view, 127> kEnglishStopwords = {
    "a",       "about",  "above",   "after",   "again",    "against",    "all",     "am",      "an",
    "and",     "any",    "are",     "as",      "at",       "be",         "because", "been",    "before",
    "being",   "below",  "between", "both",    "but",      "by",         "can",     "could",   "did",
    "do",      "does",   "doing",   "down",    "during",   "each",       "few",     "for",     "from",
    "further", "had",    "has",     "have",    "having",   "he",         "her",     "here",    "hers",
    "herself", "him",    "himself", "his",     "how",      "i",          "if",      "in",      "into",
    "is",      "it",     "its",     "itself",  "just",     "me",         "more",    "most",    "my",
    "myself",  "no",     "nor",     "not",     "now",      "of",         "off",     "on",      "once",
    "only",    "or",     "other",   "our",     "ours",     "ourselves",  "out",     "over",    "own",
    "same",    "she",    "should",  "so",      "some",     "such",       "than",    "that",    "the",
    "their",   "theirs", "them",    "themselves", "then",  "there",      "these",   "they",    "this",
    "those",   "through", "to",     "too",     "under",    "until",      "up",      "very",    "was",
    "we",      "were",   "what",    "when",    "where",    "which",      "while",   "who",     "whom",
    "why",     "will",   "with",    "would",   "you",      "your",       "yours",   "yourself", "yourselves",
    "rt"};

bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::string strip_sigils(std::string_view token) {
  while (!token.empty() && (token.front() == '@' || token.front() == '#')) token.remove_prefix(1);
  return std::string(token);
}

}  // namespace

StopwordList::StopwordList(std::string language, std::set<std::string> words) : language_(std::move(language)) {
  for (const auto& w : words) {
    auto lowered = detail::ascii_lower(detail::trim(w));
    if (!lowered.empty()) words_.insert(std::move(lowered));
  }
}

StopwordList StopwordList::english() {
  std::set<std::string> words(kEnglishStopwords.begin(), kEnglishStopwords.end());
  return StopwordList("en", std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path, std::string language) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stopword list: " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    words.emplace(view);
  }
  StopwordList list(std::move(language), std::move(words));
  if (list.language() == "en" && list.empty()) throw ConfigError("English stopword list is empty: " + path.string());
  return list;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.find(detail::ascii_lower(word)) != words_.end();
}

std::string DictionaryTranslator::translate(std::string_view text, std::string_view source_language) {
  ++calls_;
  const std::string lang = detail::ascii_lower(source_language);
  std::vector<std::string> out;
  for (auto token : detail::split_whitespace(text)) {
    auto it = words_.find(std::make_pair(lang, detail::ascii_lower(token)));
    out.emplace_back(it == words_.end() ? std::string(token) : it->second);
  }
  return detail::join(out, " ");
}

void DictionaryTranslator::add(std::string_view language, std::string_view word, std::string_view english) {
  words_[{detail::ascii_lower(language), detail::ascii_lower(word)}] = std::string(english);
}

DictionaryTranslator DictionaryTranslator::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open translation dictionary: " + path.string());
  DictionaryTranslator t;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty() || line.front() == '#') continue;
    auto first = line.find('\t');
    auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
    if (second == std::string::npos) throw ConfigError("malformed dictionary line in " + path.string());
    t.add(line.substr(0, first), line.substr(first + 1, second - first - 1), line.substr(second + 1));
  }
  return t;
}

TranslationCache::TranslationCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find('\t');
    auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
    if (second == std::string::npos) continue;
    entries_[{line.substr(0, first), line.substr(first + 1, second - first - 1)}] = line.substr(second + 1);
  }
}

std::optional<std::string> TranslationCache::lookup(std::string_view language, std::string_view source) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(std::make_pair(std::string(language), std::string(source)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::insert(std::string_view language, std::string_view source, std::string_view target) {
  std::lock_guard lock(mutex_);
  entries_[{std::string(language), std::string(source)}] = std::string(target);
  if (!file_) return;
  // Tabs and newlines would corrupt the line format.
  auto flat = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return out;
  };
  if (flat(source) != source) return;
  std::ofstream out(*file_, std::ios::app);
  out << flat(language) << '\t' << source << '\t' << flat(target) << '\n';
}

std::size_t TranslationCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::string translate_to_english(std::string_view text, std::string_view language, Translator& translator,
                                 TranslationCache* cache) {
  const std::string lang = detail::ascii_lower(detail::trim(language));
  if (lang == "en" || text.empty()) return std::string(text);
  if (cache) {
    if (auto hit = cache->lookup(lang, text)) return *hit;
  }
  try {
    std::string translated = translator.translate(text, lang);
    if (cache) cache->insert(lang, text, translated);
    return translated;
  } catch (const std::exception& e) {
    spdlog::warn("translation ({} -> en) via '{}' failed, keeping original text: {}", lang, translator.id(),
                 e.what());
    return std::string(text);
  }
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  for (auto token : detail::split_whitespace(text)) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

bool is_url_token(std::string_view token) {
  const auto lowered = detail::ascii_lower(token);
  if (lowered.rfind("www.", 0) == 0) return true;
  const auto sep = lowered.find("://");
  if (sep == std::string::npos || sep == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(lowered[0]))) return false;
  for (std::size_t i = 1; i < sep; ++i) {
    if (!is_scheme_char(lowered[i])) return false;
  }
  return true;
}

std::string clean_text(std::string_view text, const StopwordList& stopwords) {
  std::vector<std::string> kept;
  for (auto token : detail::split_whitespace(text)) {
    if (is_url_token(token)) continue;
    std::string word = strip_sigils(detail::ascii_lower(token));
    if (word.empty() || is_url_token(word) || stopwords.contains(word)) continue;
    kept.push_back(std::move(word));
  }
  return detail::join(kept, " ");
}

}  // namespace mmfd
