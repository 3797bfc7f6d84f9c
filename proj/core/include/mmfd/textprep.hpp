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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

namespace mmfd {

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::string language, std::set<std::string> words);

  /// Bundled English list.
  static StopwordList english();

  /// One token per line; blank lines and '#' comments ignored.
  static StopwordList load(const std::filesystem::path& path, std::string language = "en");

  bool contains(std::string_view word) const;
  const std::string& language() const noexcept { return language_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

 private:
  std::string language_ = "en";
  std::set<std::string, std::less<>> words_;
};

/// Translation adapter. Implementations may throw on failure.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string id() const = 0;
  virtual std::string translate(std::string_view text, std::string_view source_language) = 0;
};

/// Word-by-word dictionary translator; unknown words pass through.
class DictionaryTranslator final : public Translator {
 public:
  std::string id() const override { return "dictionary"; }
  std::string translate(std::string_view text, std::string_view source_language) override;

  void add(std::string_view language, std::string_view word, std::string_view english);

  /// `lang TAB source_word TAB english_word` per line.
  static DictionaryTranslator load(const std::filesystem::path& path);

  std::size_t calls() const noexcept { return calls_; }

 private:
  std::map<std::pair<std::string, std::string>, std::string, std::less<>> words_;
  std::size_t calls_ = 0;
};

/// Persistent (lang, source) -> English map, appended to a
/// `lang TAB source TAB target` file when one is attached.
class TranslationCache {
 public:
  TranslationCache() = default;
  explicit TranslationCache(std::filesystem::path file);

  std::optional<std::string> lookup(std::string_view language, std::string_view source) const;
  void insert(std::string_view language, std::string_view source, std::string_view target);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::string, std::less<>> entries_;
  std::optional<std::filesystem::path> file_;
};

/// English passes through; otherwise cache, then adapter. Adapter failure
/// returns the original text and logs a warning.
std::string translate_to_english(std::string_view text, std::string_view language, Translator& translator,
                                 TranslationCache* cache = nullptr);

/// Collapses whitespace runs to single spaces and trims.
std::string normalize_whitespace(std::string_view text);

/// Scheme-prefixed (`http://`, `ftp://`, ...) or `www.`-prefixed token.
bool is_url_token(std::string_view token);

/// URL removal, lower-casing, '@'/'#' sigil stripping, whitespace
/// tokenization, stopword removal, rejoin with single spaces.
std::string clean_text(std::string_view text, const StopwordList& stopwords);

}  // namespace mmfd
