// Copyright 2026 The PhyloAdapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phyloadapt/unicode.h"

#include <unicode/uchar.h>

#include <array>
#include <utility>

namespace phyloadapt::unicode {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

constexpr std::array<std::pair<char32_t, char32_t>, 17> kEmojiRanges = {{
    {0x00A9, 0x00A9},    // copyright
    {0x00AE, 0x00AE},    // registered
    {0x203C, 0x203C},    // double exclamation
    {0x2049, 0x2049},    // exclamation question
    {0x2122, 0x2122},    // trade mark
    {0x2139, 0x2139},    // information
    {0x2194, 0x21AA},    // arrows
    {0x231A, 0x23FF},    // watch, hourglass, media controls
    {0x24C2, 0x24C2},    // circled M
    {0x25AA, 0x25FE},    // geometric shapes
    {0x2600, 0x27BF},    // miscellaneous symbols, dingbats
    {0x2934, 0x2935},    // curved arrows
    {0x2B05, 0x2B55},    // arrows, squares, circles
    {0x3030, 0x3030},    // wavy dash
    {0x303D, 0x303D},    // part alternation mark
    {0x3297, 0x3299},    // circled ideographs
    {0x1F000, 0x1FAFF},  // pictographs, emoticons, flags, modifiers
}};

}  // namespace

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool valid = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and values past U+10FFFF.
    static constexpr std::array<char32_t, 5> kMinForLength = {0, 0, 0x80,
                                                              0x800, 0x10000};
    if (valid && (cp < kMinForLength[len] || cp > 0x10FFFF ||
                  (cp >= 0xD800 && cp <= 0xDFFF))) {
      valid = false;
    }
    if (!valid) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char32_t cp : text) AppendUtf8(cp, out);
  return out;
}

bool IsEmoji(char32_t cp) {
  for (const auto& [lo, hi] : kEmojiRanges) {
    if (cp >= lo && cp <= hi) return true;
  }
  return false;
}

bool IsLetter(char32_t cp) {
  return (U_GET_GC_MASK(static_cast<UChar32>(cp)) & U_GC_L_MASK) != 0 &&
         !IsEmoji(cp);
}

bool IsPunctuation(char32_t cp) {
  return (U_GET_GC_MASK(static_cast<UChar32>(cp)) & U_GC_P_MASK) != 0 &&
         !IsEmoji(cp);
}

bool IsWhitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool IsWordChar(char32_t cp) {
  if (IsEmoji(cp)) return false;
  if (cp == 0x200C || cp == 0x200D) return true;
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_ND_MASK | U_GC_PC_MASK)) !=
         0;
}

std::string ToLower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char32_t cp : DecodeUtf8(text)) {
    AppendUtf8(static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))),
               out);
  }
  return out;
}

}  // namespace phyloadapt::unicode
