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

#include "phyloadapt/vocab.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "phyloadapt/unicode.h"

namespace phyloadapt {
namespace {

constexpr std::array<std::string_view, 4> kSpecialTokens = {"[PAD]", "[UNK]",
                                                            "[MASK]", "[CLS]"};

bool IsSpecialName(std::string_view token) {
  return std::find(kSpecialTokens.begin(), kSpecialTokens.end(), token) !=
         kSpecialTokens.end();
}

}  // namespace

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char32_t cp : unicode::DecodeUtf8(text)) {
    if (unicode::IsWhitespace(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      unicode::AppendUtf8(cp, current);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary::Vocabulary() {
  for (const auto name : kSpecialTokens) tokens_.emplace_back(name);
  for (int i = 0; i < kNumTaggedLanguages; ++i) {
    tokens_.push_back(LanguageTag(static_cast<LanguageCode>(i)));
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<TokenId>(i));
  }
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) : Vocabulary() {
  for (const std::string& word : words) {
    if (word.empty()) throw DataError("empty vocabulary word");
    if (!index_.emplace(word, static_cast<TokenId>(tokens_.size())).second) {
      throw DataError("duplicate or reserved vocabulary word '" + word + "'");
    }
    tokens_.push_back(word);
  }
}

TokenId Vocabulary::Lookup(std::string_view token) const {
  if (IsSpecialName(token)) return kUnk;
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

TokenId Vocabulary::TagId(LanguageCode lang) {
  if (lang == LanguageCode::kUnknown) {
    throw std::invalid_argument("the unknown language has no tag id");
  }
  return kFirstTag + static_cast<TokenId>(lang);
}

std::vector<std::string> Vocabulary::RegularWords() const {
  return {tokens_.begin() + kFirstRegular, tokens_.end()};
}

std::vector<TokenId> Vocabulary::Encode(std::string_view text,
                                        std::size_t max_len) const {
  if (max_len < 2) throw std::invalid_argument("max_len must be at least 2");
  std::vector<TokenId> ids = {kCls};
  for (const std::string& token : SplitWhitespace(text)) {
    if (ids.size() >= max_len) break;
    ids.push_back(Lookup(token));
  }
  return ids;
}

Vocabulary BuildVocab(const std::vector<Dataset>& corpus, int min_freq) {
  const bool no_examples = std::all_of(corpus.begin(), corpus.end(),
                                       [](const Dataset& ds) { return ds.empty(); });
  if (no_examples) throw DataError("cannot build a vocabulary from no data");
  std::map<std::string, long> counts;
  for (const Dataset& ds : corpus) {
    for (const Example& ex : ds.examples()) {
      for (std::string& token : SplitWhitespace(ex.text)) {
        if (LanguageFromTag(token) || IsSpecialName(token)) continue;
        ++counts[std::move(token)];
      }
    }
  }
  std::vector<std::pair<std::string, long>> kept;
  for (auto& [word, count] : counts) {
    if (count >= min_freq) kept.emplace_back(word, count);
  }
  // counts is already bytewise ordered, so a stable sort by frequency keeps
  // that order among ties.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [word, count] : kept) words.push_back(std::move(word));
  return Vocabulary(words);
}

}  // namespace phyloadapt
