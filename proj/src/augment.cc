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

#include "phyloadapt/augment.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phyloadapt/tsv.h"
#include "phyloadapt/unicode.h"

namespace phyloadapt {
namespace {

constexpr std::array<LanguageCode, 7> kMtLanguages = {
    LanguageCode::kAm, LanguageCode::kHa, LanguageCode::kIg, LanguageCode::kKr,
    LanguageCode::kSw, LanguageCode::kTs, LanguageCode::kYo};

std::string LineRef(std::string_view source, std::size_t line) {
  return std::string(source) + ": line " + std::to_string(line);
}

// Joins whitespace-separated words with '_' so a translation stays one token.
std::string SingleToken(std::string_view text) {
  std::string out;
  bool pending = false;
  for (const char32_t cp : unicode::DecodeUtf8(text)) {
    if (unicode::IsWhitespace(cp)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back('_');
    pending = false;
    unicode::AppendUtf8(cp, out);
  }
  return out;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void BilingualDictionary::Add(std::string_view source,
                              std::string_view translation) {
  if (source.empty() || translation.empty()) {
    throw std::invalid_argument("dictionary entries must be non-empty");
  }
  if (std::any_of(translation.begin(), translation.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
      })) {
    throw std::invalid_argument("translation must be a single token: '" +
                                std::string(translation) + "'");
  }
  entries_[unicode::ToLower(source)].emplace_back(translation);
}

std::optional<std::string_view> BilingualDictionary::Lookup(
    std::string_view word) const {
  const auto it = entries_.find(unicode::ToLower(word));
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second.front());
}

BilingualDictionary ReadDictionary(std::istream& in, LanguageCode language,
                                   std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  if (table.header.size() != 2) {
    throw DataError(std::string(source_name) +
                    ": dictionary must have two columns (english, translation)");
  }
  BilingualDictionary dict(language);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string translation = SingleToken(row[1]);
    if (row[0].empty() || translation.empty()) {
      throw DataError(LineRef(source_name, table.line_numbers[r]) +
                      ": empty dictionary entry");
    }
    dict.Add(row[0], translation);
  }
  return dict;
}

BilingualDictionary LoadDictionary(const std::filesystem::path& path,
                                   LanguageCode language) {
  auto in = OpenForRead(path);
  return ReadDictionary(in, language, path.string());
}

std::vector<ScoredSentence> ReadScoredSentences(std::istream& in,
                                                std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  if (table.header.size() != 2) {
    throw DataError(std::string(source_name) +
                    ": scored sentences must have two columns (sentence, score)");
  }
  std::vector<ScoredSentence> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = LineRef(source_name, table.line_numbers[r]);
    if (row[0].empty()) throw DataError(where + ": empty sentence");
    std::size_t used = 0;
    double score = -1.0;
    try {
      score = std::stod(row[1], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != row[1].size()) {
      throw DataError(where + ": invalid score '" + row[1] + "'");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      throw DataError(where + ": score " + row[1] + " outside [0, 1]");
    }
    out.push_back({row[0], score});
  }
  return out;
}

std::vector<ScoredSentence> LoadScoredSentences(
    const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadScoredSentences(in, path.string());
}

void AugmentConfig::Validate() const {
  if (!(0.0 < neg_threshold && neg_threshold < pos_threshold &&
        pos_threshold < 1.0)) {
    throw std::invalid_argument(
        "thresholds must satisfy 0 < neg_threshold < pos_threshold < 1");
  }
}

SentimentLabel LabelSst(double score, const AugmentConfig& cfg) {
  cfg.Validate();
  if (!(score >= 0.0 && score <= 1.0)) {
    throw std::invalid_argument("sentiment score must lie in [0, 1]");
  }
  if (score <= cfg.neg_threshold) return SentimentLabel::kNegative;
  if (score >= cfg.pos_threshold) return SentimentLabel::kPositive;
  return SentimentLabel::kNeutral;
}

std::string DictTranslate(std::string_view sentence,
                          const BilingualDictionary& dict) {
  const std::u32string s = unicode::DecodeUtf8(sentence);
  std::string out;
  out.reserve(sentence.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (unicode::IsWhitespace(s[i])) {
      unicode::AppendUtf8(s[i++], out);
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && !unicode::IsWhitespace(s[end])) ++end;
    std::size_t core_begin = i;
    std::size_t core_end = end;
    while (core_begin < core_end && unicode::IsPunctuation(s[core_begin])) {
      ++core_begin;
    }
    while (core_end > core_begin && unicode::IsPunctuation(s[core_end - 1])) {
      --core_end;
    }
    const std::string core =
        unicode::EncodeUtf8(std::u32string_view(s).substr(core_begin, core_end - core_begin));
    const auto translation =
        core.empty() ? std::nullopt : dict.Lookup(core);
    if (translation) {
      out += unicode::EncodeUtf8(std::u32string_view(s).substr(i, core_begin - i));
      out += *translation;
      out += unicode::EncodeUtf8(
          std::u32string_view(s).substr(core_end, end - core_end));
    } else {
      out += unicode::EncodeUtf8(std::u32string_view(s).substr(i, end - i));
    }
    i = end;
  }
  return out;
}

Dataset BuildDictAugmented(const std::vector<ScoredSentence>& sst,
                           const BilingualDictionary& dict,
                           const AugmentConfig& cfg) {
  if (!IsTaskALanguage(dict.language())) {
    throw DataError("dictionary augmentation needs a training language, got '" +
                    std::string(LanguageName(dict.language())) + "'");
  }
  const std::string prefix =
      "dict-" + std::string(LanguageName(dict.language())) + "-";
  std::vector<Example> examples;
  examples.reserve(sst.size());
  for (std::size_t i = 0; i < sst.size(); ++i) {
    Example ex;
    ex.id = prefix + std::to_string(i);
    ex.text = DictTranslate(sst[i].text, dict);
    ex.label = LabelSst(sst[i].score, cfg);
    ex.language = dict.language();
    examples.push_back(std::move(ex));
  }
  return Dataset(std::move(examples), DatasetVariant::kCleanPlusDict, false);
}

bool MtSupports(LanguageCode language) {
  return std::find(kMtLanguages.begin(), kMtLanguages.end(), language) !=
         kMtLanguages.end();
}

std::vector<LanguageCode> MtSupportedLanguages() {
  return {kMtLanguages.begin(), kMtLanguages.end()};
}

Dataset ReadMtAugmented(std::istream& in, LanguageCode language,
                        std::string_view source_name) {
  if (!MtSupports(language)) {
    std::string supported;
    for (const LanguageCode lang : kMtLanguages) {
      if (!supported.empty()) supported += ", ";
      supported += LanguageName(lang);
    }
    throw DataError("machine translation does not cover '" +
                    std::string(LanguageName(language)) +
                    "'; supported languages: " + supported);
  }
  const TsvTable table = ReadTsv(in, source_name);
  if (table.header.size() != 2) {
    throw DataError(std::string(source_name) +
                    ": MT file must have two columns (text, label)");
  }
  const std::string prefix = "mt-" + std::string(LanguageName(language)) + "-";
  std::vector<Example> examples;
  examples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = LineRef(source_name, table.line_numbers[r]);
    if (row[0].empty()) throw DataError(where + ": empty text");
    Example ex;
    ex.id = prefix + std::to_string(r);
    ex.text = row[0];
    try {
      ex.label = ParseLabel(row[1]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    ex.language = language;
    examples.push_back(std::move(ex));
  }
  return Dataset(std::move(examples), DatasetVariant::kCleanPlusMT, false);
}

Dataset LoadMtAugmented(const std::filesystem::path& path,
                        LanguageCode language) {
  if (!MtSupports(language)) {
    std::istringstream empty;
    return ReadMtAugmented(empty, language, path.string());
  }
  auto in = OpenForRead(path);
  return ReadMtAugmented(in, language, path.string());
}

Dataset BuildVariant(const Dataset& clean, const std::optional<Dataset>& dict_aug,
                     const std::optional<Dataset>& mt_aug,
                     DatasetVariant variant, std::uint64_t seed) {
  std::vector<Dataset> parts = {clean};
  const auto require = [&parts](const std::optional<Dataset>& part,
                                std::string_view name) {
    if (!part) {
      throw DataError("variant needs the " + std::string(name) +
                      " augmentation set, which was not provided");
    }
    parts.push_back(*part);
  };
  switch (variant) {
    case DatasetVariant::kClean:
      break;
    case DatasetVariant::kCleanPlusDict:
      require(dict_aug, "dictionary");
      break;
    case DatasetVariant::kCleanPlusMT:
      require(mt_aug, "MT");
      break;
    case DatasetVariant::kCleanPlusBoth:
      require(dict_aug, "dictionary");
      require(mt_aug, "MT");
      break;
    case DatasetVariant::kBest:
      throw DataError(
          "Best is compiled per language from a mapping, not built directly");
  }
  return ConcatShuffle(parts, seed).WithVariant(variant);
}

}  // namespace phyloadapt
