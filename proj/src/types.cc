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

#include "phyloadapt/types.h"

#include <algorithm>
#include <cctype>

namespace phyloadapt {
namespace {

constexpr std::array<std::string_view, 15> kLanguageNames = {
    "am", "dz", "ha",  "ig", "kr", "ma", "pcm", "pt",
    "sw", "ts", "twi", "yo", "tg", "or", "unknown"};

std::string Lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::optional<SentimentLabel> TryParseLabel(std::string_view text) {
  const std::string lower = Lowercase(text);
  if (lower == "negative") return SentimentLabel::kNegative;
  if (lower == "neutral") return SentimentLabel::kNeutral;
  if (lower == "positive") return SentimentLabel::kPositive;
  return std::nullopt;
}

SentimentLabel ParseLabel(std::string_view text) {
  if (auto label = TryParseLabel(text)) return *label;
  throw DataError("unknown sentiment label '" + std::string(text) + "'");
}

std::string_view LabelName(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kNegative:
      return "negative";
    case SentimentLabel::kNeutral:
      return "neutral";
    case SentimentLabel::kPositive:
      return "positive";
  }
  return "neutral";
}

std::string_view LanguageName(LanguageCode code) {
  return kLanguageNames[static_cast<std::size_t>(code)];
}

LanguageCode ParseLanguage(std::string_view text) {
  for (std::size_t i = 0; i < kLanguageNames.size(); ++i) {
    if (kLanguageNames[i] == text) return static_cast<LanguageCode>(i);
  }
  throw DataError("unknown language code '" + std::string(text) + "'");
}

bool IsTaskALanguage(LanguageCode code) {
  return std::find(kTaskALanguages.begin(), kTaskALanguages.end(), code) !=
         kTaskALanguages.end();
}

std::string LanguageTag(LanguageCode code) {
  if (code == LanguageCode::kUnknown) {
    throw std::invalid_argument("the unknown language has no tag token");
  }
  return "[" + std::string(LanguageName(code)) + "]";
}

std::optional<LanguageCode> LanguageFromTag(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') {
    return std::nullopt;
  }
  const std::string_view inner = token.substr(1, token.size() - 2);
  for (int i = 0; i < kNumTaggedLanguages; ++i) {
    if (kLanguageNames[i] == inner) return static_cast<LanguageCode>(i);
  }
  return std::nullopt;
}

}  // namespace phyloadapt
