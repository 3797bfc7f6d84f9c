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

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace mmfd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::string tweet_id, std::string reason)
      : Error("malformed record '" + tweet_id + "': " + reason),
        tweet_id_(std::move(tweet_id)),
        reason_(std::move(reason)) {}

  const std::string& tweet_id() const noexcept { return tweet_id_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string tweet_id_;
  std::string reason_;
};

class ManifestNotFound : public Error {
 public:
  explicit ManifestNotFound(const std::filesystem::path& path)
      : Error("manifest not found: " + path.string()), path_(path) {}

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class InsufficientClassSize : public Error {
 public:
  using Error::Error;
};

class FutureAccount : public Error {
 public:
  using Error::Error;
};

class UnreadableImage : public Error {
 public:
  using Error::Error;
};

class EngineFailure : public Error {
 public:
  using Error::Error;
};

class EncoderFailure : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyTraining : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateName : public Error {
 public:
  using Error::Error;
};

class NotRegistered : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  explicit NonFiniteLoss(std::size_t epoch)
      : Error("training loss became non-finite at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyEvaluation : public Error {
 public:
  using Error::Error;
};

class CoverageGap : public Error {
 public:
  explicit CoverageGap(const std::string& tweet_id)
      : Error("no enrichment for record '" + tweet_id + "'"), tweet_id_(tweet_id) {}

  const std::string& tweet_id() const noexcept { return tweet_id_; }

 private:
  std::string tweet_id_;
};

}  // namespace mmfd
