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

#ifndef PHYLOADAPT_AUGMENT_H_
#define PHYLOADAPT_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phyloadapt/corpus.h"
#include "phyloadapt/types.h"

namespace phyloadapt {

// English-to-target word list. Keys are lowercase; each key maps to its
// translations in preference order.
class BilingualDictionary {
 public:
  explicit BilingualDictionary(LanguageCode language) : language_(language) {}

  // Appends a translation for `source` (lowercased). Throws
  // std::invalid_argument on an empty source word or translation.
  void Add(std::string_view source, std::string_view translation);

  // First-listed translation of the lowercased word, if any.
  std::optional<std::string_view> Lookup(std::string_view word) const;

  LanguageCode language() const { return language_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

 private:
  LanguageCode language_;
  std::map<std::string, std::vector<std::string>> entries_;
};

// Two columns (english, translation) behind a header; repeated source words
// keep file order as preference order.
BilingualDictionary ReadDictionary(std::istream& in, LanguageCode language,
                                   std::string_view source_name = "<stream>");
BilingualDictionary LoadDictionary(const std::filesystem::path& path,
                                   LanguageCode language);

struct ScoredSentence {
  std::string text;
  double score = 0.0;
};

// Two columns (sentence, score) behind a header. Scores must lie in [0, 1].
std::vector<ScoredSentence> ReadScoredSentences(
    std::istream& in, std::string_view source_name = "<stream>");
std::vector<ScoredSentence> LoadScoredSentences(
    const std::filesystem::path& path);

struct AugmentConfig {
  double neg_threshold = 0.35;
  double pos_threshold = 0.65;

  void Validate() const;
};

// negative at or below neg_threshold, positive at or above pos_threshold,
// neutral in between. Throws std::invalid_argument outside [0, 1].
SentimentLabel LabelSst(double score, const AugmentConfig& cfg = {});

// Word-for-word substitution. Each whitespace token's core (the token minus
// leading and trailing punctuation) is looked up case-insensitively; a hit
// replaces the core with its first translation and keeps the punctuation.
// Whitespace between tokens is preserved.
std::string DictTranslate(std::string_view sentence,
                          const BilingualDictionary& dict);

// One labeled example per sentence, in order. Ids are "dict-<lang>-<index>".
// The result's variant is kCleanPlusDict, marking its source.
Dataset BuildDictAugmented(const std::vector<ScoredSentence>& sst,
                           const BilingualDictionary& dict,
                           const AugmentConfig& cfg = {});

// Languages the offline MT system translated into.
bool MtSupports(LanguageCode language);
std::vector<LanguageCode> MtSupportedLanguages();

// Ingests pre-translated sentences: two columns (text, label) behind a
// header. Ids are "mt-<lang>-<index>"; the variant is kCleanPlusMT. Throws
// DataError for a language the MT system does not cover.
Dataset ReadMtAugmented(std::istream& in, LanguageCode language,
                        std::string_view source_name = "<stream>");
Dataset LoadMtAugmented(const std::filesystem::path& path,
                        LanguageCode language);

// Clean alone or merged with the augmentation sets the variant calls for,
// shuffled under `seed`. Throws DataError naming a missing part.
Dataset BuildVariant(const Dataset& clean, const std::optional<Dataset>& dict_aug,
                     const std::optional<Dataset>& mt_aug,
                     DatasetVariant variant, std::uint64_t seed);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_AUGMENT_H_
