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

#ifndef PHYLOADAPT_TYPES_H_
#define PHYLOADAPT_TYPES_H_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phyloadapt {

// Raised for malformed or inconsistent input data. The CLI maps it to exit
// code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SentimentLabel { kNegative = 0, kNeutral = 1, kPositive = 2 };

inline constexpr int kNumLabels = 3;
inline constexpr std::array<SentimentLabel, kNumLabels> kAllLabels = {
    SentimentLabel::kNegative, SentimentLabel::kNeutral,
    SentimentLabel::kPositive};

// Case-insensitive. Throws DataError naming the offending value.
SentimentLabel ParseLabel(std::string_view text);
std::optional<SentimentLabel> TryParseLabel(std::string_view text);
// Lowercase form: "negative", "neutral", "positive".
std::string_view LabelName(SentimentLabel label);

inline constexpr int LabelIndex(SentimentLabel label) {
  return static_cast<int>(label);
}
inline constexpr SentimentLabel LabelFromIndex(int index) {
  return static_cast<SentimentLabel>(index);
}

// The twelve monolingual-track languages, the two zero-shot languages
// (tg, or) and a sentinel for untagged multilingual inference.
enum class LanguageCode {
  kAm,
  kDz,
  kHa,
  kIg,
  kKr,
  kMa,
  kPcm,
  kPt,
  kSw,
  kTs,
  kTwi,
  kYo,
  kTg,
  kOr,
  kUnknown,
};

inline constexpr int kNumTaggedLanguages = 14;  // every code except kUnknown

inline constexpr std::array<LanguageCode, 12> kTaskALanguages = {
    LanguageCode::kAm,  LanguageCode::kDz, LanguageCode::kHa,
    LanguageCode::kIg,  LanguageCode::kKr, LanguageCode::kMa,
    LanguageCode::kPcm, LanguageCode::kPt, LanguageCode::kSw,
    LanguageCode::kTs,  LanguageCode::kTwi, LanguageCode::kYo};

inline constexpr std::array<LanguageCode, 2> kZeroShotLanguages = {
    LanguageCode::kTg, LanguageCode::kOr};

// "am", "dz", ..., "unknown".
std::string_view LanguageName(LanguageCode code);
// Accepts the lowercase codes above; throws DataError otherwise.
LanguageCode ParseLanguage(std::string_view text);
bool IsTaskALanguage(LanguageCode code);

// The tag token for a language, e.g. "[am]". Throws for kUnknown.
std::string LanguageTag(LanguageCode code);
// Returns the language whose tag token equals `token`, if any.
std::optional<LanguageCode> LanguageFromTag(std::string_view token);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_TYPES_H_
