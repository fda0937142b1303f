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

#ifndef PHYLOADAPT_VOCAB_H_
#define PHYLOADAPT_VOCAB_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phyloadapt/corpus.h"
#include "phyloadapt/types.h"

namespace phyloadapt {

using TokenId = std::int32_t;

// Word-level vocabulary. Ids 0-3 are [PAD], [UNK], [MASK], [CLS]; the next
// fourteen are the language tag tokens "[am]" ... "[or]"; regular words
// follow.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr TokenId kMask = 2;
  static constexpr TokenId kCls = 3;
  static constexpr TokenId kFirstTag = 4;
  static constexpr TokenId kFirstRegular = kFirstTag + kNumTaggedLanguages;

  // Only the reserved tokens.
  Vocabulary();
  // Reserved tokens followed by `words` in the given order. Throws DataError
  // on duplicates or on a word that collides with a reserved token.
  explicit Vocabulary(const std::vector<std::string>& words);

  std::size_t size() const { return tokens_.size(); }
  const std::string& Token(TokenId id) const { return tokens_.at(id); }
  // Regular words and tag tokens; anything else, including the special
  // token names, yields kUnk.
  TokenId Lookup(std::string_view token) const;
  static TokenId TagId(LanguageCode lang);
  static bool IsTag(TokenId id) {
    return id >= kFirstTag && id < kFirstRegular;
  }
  bool HasRegularTokens() const {
    return tokens_.size() > static_cast<std::size_t>(kFirstRegular);
  }

  // Regular words in id order.
  std::vector<std::string> RegularWords() const;

  // [CLS] followed by one id per whitespace token, truncated to max_len.
  // Throws std::invalid_argument if max_len < 2.
  std::vector<TokenId> Encode(std::string_view text, std::size_t max_len) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

std::vector<std::string> SplitWhitespace(std::string_view text);

// Words with frequency >= min_freq, ordered by frequency (descending) then
// bytewise. Tag tokens are never counted as words. Throws DataError for an
// empty corpus.
Vocabulary BuildVocab(const std::vector<Dataset>& corpus, int min_freq);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_VOCAB_H_
