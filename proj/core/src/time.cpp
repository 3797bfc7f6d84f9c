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

#include "mmfd/time.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace mmfd {
namespace {

using namespace std::chrono;

bool read_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > text.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc{};
}

std::optional<sys_days> make_date(int y, int m, int d) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::optional<seconds> make_time_of_day(int hh, int mm, int ss) {
  // Leap second 60 is accepted and folded into the next minute.
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60) return std::nullopt;
  return hours{hh} + minutes{mm} + seconds{ss};
}

// Parses "+HH:MM", "+HHMM", "-HH:MM", "Z"; returns the offset east of UTC.
std::optional<seconds> parse_offset(std::string_view tz) {
  if (tz == "Z" || tz == "z") return seconds{0};
  if (tz.size() < 5 || (tz[0] != '+' && tz[0] != '-')) return std::nullopt;
  int hh = 0;
  int mm = 0;
  if (!read_int(tz, 1, 2, hh)) return std::nullopt;
  std::size_t mpos = tz[3] == ':' ? 4 : 3;
  if (!read_int(tz, mpos, 2, mm) || mpos + 2 != tz.size()) return std::nullopt;
  if (hh > 23 || mm > 59) return std::nullopt;
  seconds off = hours{hh} + minutes{mm};
  return tz[0] == '-' ? -off : off;
}

std::optional<UtcInstant> parse_iso(std::string_view text) {
  int y = 0, mo = 0, d = 0;
  if (!read_int(text, 0, 4, y) || text.size() < 10 || text[4] != '-' || !read_int(text, 5, 2, mo) ||
      text[7] != '-' || !read_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  auto date = make_date(y, mo, d);
  if (!date) return std::nullopt;
  if (text.size() == 10) return UtcInstant{*date};
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
  int hh = 0, mi = 0, ss = 0;
  if (!read_int(text, 11, 2, hh) || text.size() < 19 || text[13] != ':' || !read_int(text, 14, 2, mi) ||
      text[16] != ':' || !read_int(text, 17, 2, ss)) {
    return std::nullopt;
  }
  auto tod = make_time_of_day(hh, mi, ss);
  if (!tod) return std::nullopt;
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) return std::nullopt;
  }
  seconds offset{0};
  if (pos < text.size()) {
    auto parsed = parse_offset(text.substr(pos));
    if (!parsed) return std::nullopt;
    offset = *parsed;
  }
  return UtcInstant{*date} + *tod - offset;
}

std::optional<UtcInstant> parse_twitter(std::string_view text) {
  // "Wed Oct 10 20:19:24 +0000 2018"
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (text.size() != 30 || text[3] != ' ' || text[7] != ' ' || text[10] != ' ' || text[19] != ' ' ||
      text[25] != ' ') {
    return std::nullopt;
  }
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (text.substr(4, 3) == kMonths[i]) mo = static_cast<int>(i) + 1;
  }
  int d = 0, hh = 0, mi = 0, ss = 0, y = 0;
  if (mo == 0 || !read_int(text, 8, 2, d) || !read_int(text, 11, 2, hh) || text[13] != ':' ||
      !read_int(text, 14, 2, mi) || text[16] != ':' || !read_int(text, 17, 2, ss) ||
      !read_int(text, 26, 4, y)) {
    return std::nullopt;
  }
  auto date = make_date(y, mo, d);
  auto tod = make_time_of_day(hh, mi, ss);
  auto offset = parse_offset(text.substr(20, 5));
  if (!date || !tod || !offset) return std::nullopt;
  return UtcInstant{*date} + *tod - *offset;
}

}  // namespace

std::optional<UtcInstant> parse_utc_timestamp(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (std::isdigit(static_cast<unsigned char>(text.front()))) return parse_iso(text);
  return parse_twitter(text);
}

std::optional<UtcDate> parse_utc_date(std::string_view text) {
  auto instant = parse_utc_timestamp(text);
  if (!instant) return std::nullopt;
  return floor<days>(*instant);
}

std::string format_utc_timestamp(UtcInstant instant) {
  const auto day_point = floor<days>(instant);
  const year_month_day ymd{day_point};
  const hh_mm_ss tod{instant - day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(tod.hours().count()), static_cast<long>(tod.minutes().count()),
                static_cast<long long>(tod.seconds().count()));
  return buf;
}

std::string format_utc_date(UtcDate date) {
  const year_month_day ymd{date};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace mmfd
