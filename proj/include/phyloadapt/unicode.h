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

#ifndef PHYLOADAPT_UNICODE_H_
#define PHYLOADAPT_UNICODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace phyloadapt::unicode {

// Malformed sequences decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string& out);

// Pictographic emoji, symbol dingbats, regional indicators and skin-tone
// modifiers.
bool IsEmoji(char32_t cp);
// General category L, excluding emoji.
bool IsLetter(char32_t cp);
// General category P, excluding emoji such as U+203C.
bool IsPunctuation(char32_t cp);
// Unicode White_Space property.
bool IsWhitespace(char32_t cp);
// Regex \w: letters, marks, decimal digits, connector punctuation, ZWNJ and
// ZWJ; never an emoji.
bool IsWordChar(char32_t cp);

// Lowercases via the simple case mapping.
std::string ToLower(std::string_view text);

}  // namespace phyloadapt::unicode

#endif  // PHYLOADAPT_UNICODE_H_
