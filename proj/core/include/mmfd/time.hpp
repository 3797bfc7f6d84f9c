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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace mmfd {

using UtcInstant = std::chrono::sys_seconds;
using UtcDate = std::chrono::sys_days;

// Accepts "YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)", the same with a
// space separator, a bare "YYYY-MM-DD", and the legacy Twitter form
// "Wed Oct 10 20:19:24 +0000 2018". Fractional seconds are truncated.
std::optional<UtcInstant> parse_utc_timestamp(std::string_view text);

std::optional<UtcDate> parse_utc_date(std::string_view text);

std::string format_utc_timestamp(UtcInstant instant);
std::string format_utc_date(UtcDate date);

}  // namespace mmfd
