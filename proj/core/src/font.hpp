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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace mmfd::detail {

inline constexpr std::size_t kGlyphWidth = 5;
inline constexpr std::size_t kGlyphHeight = 7;
inline constexpr std::size_t kGlyphAdvance = kGlyphWidth + 1;
inline constexpr std::size_t kLineAdvance = kGlyphHeight + 3;

struct Glyph {
  char ch;
  std::array<std::string_view, kGlyphHeight> rows;  // '#' ink, '.' paper

  bool ink(std::size_t col, std::size_t row) const noexcept { return rows[row][col] == '#'; }
};

std::span<const Glyph> font_glyphs() noexcept;
const Glyph* find_glyph(char ch) noexcept;

}  // namespace mmfd::detail
