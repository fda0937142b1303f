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

#ifndef PHYLOADAPT_CORPUS_H_
#define PHYLOADAPT_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phyloadapt/tsv.h"
#include "phyloadapt/types.h"

namespace phyloadapt {

struct Example {
  std::string id;
  std::string text;
  std::optional<SentimentLabel> label;
  LanguageCode language = LanguageCode::kUnknown;

  friend bool operator==(const Example&, const Example&) = default;
};

enum class DatasetVariant {
  kClean,
  kCleanPlusDict,
  kCleanPlusMT,
  kCleanPlusBoth,
  kBest,
};

// "Clean", "Clean+Dict", "Clean+MT", "Clean+Both", "Best".
std::string_view VariantName(DatasetVariant variant);
// Case- and space-insensitive; also accepts the long forms such as
// "Clean + Dictionary-based" and "Clean + MT-based".
DatasetVariant ParseVariant(std::string_view text);

// True when `text` starts with some language tag token followed by a space.
bool StartsWithLanguageTag(std::string_view text);

// An ordered list of examples. When `tagged`, every text starts with its
// language's tag token and one space; otherwise no text starts with any tag
// token. The constructor enforces this.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Example> examples, DatasetVariant variant, bool tagged);

  const std::vector<Example>& examples() const { return examples_; }
  DatasetVariant variant() const { return variant_; }
  bool tagged() const { return tagged_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  Dataset WithVariant(DatasetVariant variant) const;
  bool AllLabeled() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Example> examples_;
  DatasetVariant variant_ = DatasetVariant::kClean;
  bool tagged_ = false;
};

struct TsvColumns {
  std::string id = "id";
  std::string text = "text";
  std::string label = "label";
  // Optional. When present in a file it overrides the default language.
  std::string language = "language";
};

// Parses a dataset from a header-led TSV stream. Rows must carry as many
// columns as the header. `tagged` is inferred from the texts.
Dataset ReadDataset(std::istream& in, bool has_labels, LanguageCode language,
                    const TsvColumns& columns = {},
                    std::string_view source_name = "<stream>");
Dataset LoadTsv(const std::filesystem::path& path, bool has_labels,
                LanguageCode language, const TsvColumns& columns = {});

// Writes id, text, label (when every example is labeled) and, if
// `with_language`, the language column.
void WriteDataset(std::ostream& out, const Dataset& ds,
                  const TsvColumns& columns = {}, bool with_language = true);
void SaveTsv(const std::filesystem::path& path, const Dataset& ds,
             const TsvColumns& columns = {}, bool with_language = true);

// Shuffles under `seed`, then slices contiguously. The first two parts get
// floor(n * ratio) examples, the third gets the remainder.
std::array<Dataset, 3> SplitDataset(const Dataset& ds,
                                    const std::array<double, 3>& ratios,
                                    std::uint64_t seed);

// Prefixes every text with "[<code>] ".
Dataset TagDataset(const Dataset& ds);

// Concatenates then applies a seed-determined permutation. All parts must
// agree on `tagged`. The result carries the first part's variant.
Dataset ConcatShuffle(const std::vector<Dataset>& parts, std::uint64_t seed);

class DevScoreTable {
 public:
  // Throws std::invalid_argument unless 0 <= score <= 100.
  void Set(LanguageCode language, DatasetVariant variant, double score);
  std::optional<double> Get(LanguageCode language,
                            DatasetVariant variant) const;
  const std::map<std::pair<LanguageCode, DatasetVariant>, double>& scores()
      const {
    return scores_;
  }

 private:
  std::map<std::pair<LanguageCode, DatasetVariant>, double> scores_;
};

// Reads either a long table (language, variant, score) or a wide table with
// a language column followed by one column per variant; "-" or an empty
// cell marks a missing score.
DevScoreTable ReadDevScores(std::istream& in,
                            std::string_view source_name = "<stream>");
DevScoreTable LoadDevScores(const std::filesystem::path& path);

using BestMapping = std::map<LanguageCode, DatasetVariant>;

// Per Task-A language, the variant with the highest dev score. Ties prefer
// augmented data in the order Dict, MT, Both, then Clean.
BestMapping CompileBest(const DevScoreTable& table);

void WriteBestMapping(std::ostream& out, const BestMapping& mapping);
BestMapping ReadBestMapping(std::istream& in,
                            std::string_view source_name = "<stream>");

}  // namespace phyloadapt

#endif  // PHYLOADAPT_CORPUS_H_
