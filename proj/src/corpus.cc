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

#include "phyloadapt/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phyloadapt/random.h"

namespace phyloadapt {
namespace {

constexpr std::array<std::string_view, 5> kVariantNames = {
    "Clean", "Clean+Dict", "Clean+MT", "Clean+Both", "Best"};

std::string Normalize(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (c == ' ' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Candidate variants in tie-break preference order.
constexpr std::array<DatasetVariant, 4> kBestCandidates = {
    DatasetVariant::kCleanPlusDict, DatasetVariant::kCleanPlusMT,
    DatasetVariant::kCleanPlusBoth, DatasetVariant::kClean};

}  // namespace

std::string_view VariantName(DatasetVariant variant) {
  return kVariantNames[static_cast<std::size_t>(variant)];
}

DatasetVariant ParseVariant(std::string_view text) {
  const std::string key = Normalize(text);
  if (key == "clean") return DatasetVariant::kClean;
  if (key == "clean+dict" || key == "clean+dictionary-based" ||
      key == "clean+dictionary" || key == "dict") {
    return DatasetVariant::kCleanPlusDict;
  }
  if (key == "clean+mt" || key == "clean+mt-based" || key == "mt") {
    return DatasetVariant::kCleanPlusMT;
  }
  if (key == "clean+both" || key == "both") return DatasetVariant::kCleanPlusBoth;
  if (key == "best") return DatasetVariant::kBest;
  throw DataError("unknown dataset variant '" + std::string(text) + "'");
}

bool StartsWithLanguageTag(std::string_view text) {
  if (text.empty() || text.front() != '[') return false;
  const std::size_t close = text.find(']');
  if (close == std::string_view::npos || close + 1 >= text.size() ||
      text[close + 1] != ' ') {
    return false;
  }
  return LanguageFromTag(text.substr(0, close + 1)).has_value();
}

Dataset::Dataset(std::vector<Example> examples, DatasetVariant variant,
                 bool tagged)
    : examples_(std::move(examples)), variant_(variant), tagged_(tagged) {
  for (const Example& ex : examples_) {
    if (tagged_) {
      if (ex.language == LanguageCode::kUnknown ||
          !ex.text.starts_with(LanguageTag(ex.language) + " ")) {
        throw DataError("example '" + ex.id +
                        "' in a tagged dataset lacks its language tag");
      }
    } else if (StartsWithLanguageTag(ex.text)) {
      throw DataError("example '" + ex.id +
                      "' in an untagged dataset starts with a language tag");
    }
  }
}

Dataset Dataset::WithVariant(DatasetVariant variant) const {
  Dataset copy = *this;
  copy.variant_ = variant;
  return copy;
}

bool Dataset::AllLabeled() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const Example& ex) { return ex.label.has_value(); });
}

Dataset ReadDataset(std::istream& in, bool has_labels, LanguageCode language,
                    const TsvColumns& columns, std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  const auto id_col = table.ColumnIndex(columns.id);
  const auto text_col = table.ColumnIndex(columns.text);
  const auto label_col = table.ColumnIndex(columns.label);
  const auto lang_col = table.ColumnIndex(columns.language);
  if (!id_col || !text_col) {
    throw DataError(std::string(source_name) + ": header must contain '" +
                    columns.id + "' and '" + columns.text + "' columns");
  }
  if (has_labels && !label_col) {
    throw DataError(std::string(source_name) + ": header lacks label column '" +
                    columns.label + "'");
  }
  std::vector<Example> examples;
  examples.reserve(table.rows.size());
  bool any_tagged = false;
  bool all_tagged = true;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where =
        std::string(source_name) + ": line " + std::to_string(table.line_numbers[r]);
    Example ex;
    ex.id = row[*id_col];
    ex.text = row[*text_col];
    if (ex.text.empty()) throw DataError(where + ": empty text");
    if (has_labels) {
      try {
        ex.label = ParseLabel(row[*label_col]);
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
    }
    ex.language = lang_col ? ParseLanguage(row[*lang_col]) : language;
    const bool tagged = ex.language != LanguageCode::kUnknown &&
                        ex.text.starts_with(LanguageTag(ex.language) + " ");
    any_tagged = any_tagged || StartsWithLanguageTag(ex.text);
    all_tagged = all_tagged && tagged;
    examples.push_back(std::move(ex));
  }
  const bool tagged = !examples.empty() && all_tagged;
  if (any_tagged && !tagged) {
    throw DataError(std::string(source_name) +
                    ": language tags are present on some rows but not all "
                    "(or do not match the row language)");
  }
  return Dataset(std::move(examples), DatasetVariant::kClean, tagged);
}

Dataset LoadTsv(const std::filesystem::path& path, bool has_labels,
                LanguageCode language, const TsvColumns& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return ReadDataset(in, has_labels, language, columns, path.string());
}

void WriteDataset(std::ostream& out, const Dataset& ds,
                  const TsvColumns& columns, bool with_language) {
  const bool labeled = !ds.empty() && ds.AllLabeled();
  TsvTable table;
  table.header = {columns.id, columns.text};
  if (labeled) table.header.push_back(columns.label);
  if (with_language) table.header.push_back(columns.language);
  for (const Example& ex : ds.examples()) {
    std::vector<std::string> row = {ex.id, ex.text};
    if (labeled) row.emplace_back(LabelName(*ex.label));
    if (with_language) row.emplace_back(LanguageName(ex.language));
    table.rows.push_back(std::move(row));
  }
  WriteTsv(out, table);
}

void SaveTsv(const std::filesystem::path& path, const Dataset& ds,
             const TsvColumns& columns, bool with_language) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  WriteDataset(out, ds, columns, with_language);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::array<Dataset, 3> SplitDataset(const Dataset& ds,
                                    const std::array<double, 3>& ratios,
                                    std::uint64_t seed) {
  if (ds.empty()) throw DataError("cannot split an empty dataset");
  double sum = 0.0;
  for (const double r : ratios) {
    if (!(r >= 0.0)) throw std::invalid_argument("split ratios must be >= 0");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
  std::vector<Example> shuffled = ds.examples();
  Rng rng(seed);
  rng.Shuffle(shuffled);

  const std::size_t n = shuffled.size();
  // The epsilon keeps products such as 0.29 * 100 from flooring to 28.
  const auto part_size = [n](double ratio) {
    return std::min(n, static_cast<std::size_t>(
                           std::floor(static_cast<double>(n) * ratio + 1e-9)));
  };
  const std::size_t first = part_size(ratios[0]);
  const std::size_t second = std::min(n - first, part_size(ratios[1]));

  auto slice = [&](std::size_t begin, std::size_t end) {
    return Dataset(std::vector<Example>(shuffled.begin() + begin,
                                        shuffled.begin() + end),
                   ds.variant(), ds.tagged());
  };
  return {slice(0, first), slice(first, first + second),
          slice(first + second, n)};
}

Dataset TagDataset(const Dataset& ds) {
  if (ds.tagged()) throw DataError("dataset is already tagged");
  std::vector<Example> examples = ds.examples();
  for (Example& ex : examples) {
    if (ex.language == LanguageCode::kUnknown) {
      throw DataError("example '" + ex.id +
                      "' has no language and cannot be tagged");
    }
    ex.text = LanguageTag(ex.language) + " " + ex.text;
  }
  return Dataset(std::move(examples), ds.variant(), true);
}

Dataset ConcatShuffle(const std::vector<Dataset>& parts, std::uint64_t seed) {
  if (parts.empty()) return Dataset();
  const bool tagged = parts.front().tagged();
  std::vector<Example> examples;
  for (const Dataset& part : parts) {
    if (part.tagged() != tagged) {
      throw DataError("cannot mix tagged and untagged datasets");
    }
    examples.insert(examples.end(), part.examples().begin(),
                    part.examples().end());
  }
  Rng rng(seed);
  rng.Shuffle(examples);
  return Dataset(std::move(examples), parts.front().variant(), tagged);
}

void DevScoreTable::Set(LanguageCode language, DatasetVariant variant,
                        double score) {
  if (!(score >= 0.0 && score <= 100.0)) {
    throw std::invalid_argument("dev score must lie in [0, 100]");
  }
  scores_[{language, variant}] = score;
}

std::optional<double> DevScoreTable::Get(LanguageCode language,
                                         DatasetVariant variant) const {
  const auto it = scores_.find({language, variant});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

DevScoreTable ReadDevScores(std::istream& in, std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  DevScoreTable scores;
  const auto parse_score = [&](const std::string& cell, std::size_t row) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || used == 0) {
      throw DataError(std::string(source_name) + ": line " +
                      std::to_string(table.line_numbers[row]) +
                      ": invalid score '" + cell + "'");
    }
    return value;
  };
  const auto set = [&](LanguageCode lang, DatasetVariant variant, double score,
                       std::size_t row) {
    try {
      scores.Set(lang, variant, score);
    } catch (const std::invalid_argument&) {
      throw DataError(std::string(source_name) + ": line " +
                      std::to_string(table.line_numbers[row]) +
                      ": score out of [0, 100]");
    }
  };
  const auto lang_col = table.ColumnIndex("language");
  const auto variant_col = table.ColumnIndex("variant");
  const auto score_col = table.ColumnIndex("score");
  if (lang_col && variant_col && score_col) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (row[*score_col].empty() || row[*score_col] == "-") continue;
      set(ParseLanguage(row[*lang_col]), ParseVariant(row[*variant_col]),
          parse_score(row[*score_col], r), r);
    }
    return scores;
  }
  // Wide layout: first column holds the language.
  std::vector<DatasetVariant> variants;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    variants.push_back(ParseVariant(table.header[c]));
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const LanguageCode lang = ParseLanguage(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c].empty() || row[c] == "-") continue;
      set(lang, variants[c - 1], parse_score(row[c], r), r);
    }
  }
  return scores;
}

DevScoreTable LoadDevScores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return ReadDevScores(in, path.string());
}

BestMapping CompileBest(const DevScoreTable& table) {
  for (const auto& [key, score] : table.scores()) {
    if (!IsTaskALanguage(key.first)) {
      throw DataError("dev score for non-training language '" +
                      std::string(LanguageName(key.first)) + "'");
    }
    if (key.second == DatasetVariant::kBest) {
      throw DataError("the Best variant cannot be a candidate for itself");
    }
  }
  BestMapping mapping;
  for (const LanguageCode lang : kTaskALanguages) {
    std::optional<DatasetVariant> best;
    double best_score = 0.0;
    // Strict comparison over the preference order keeps the earlier
    // candidate on ties.
    for (const DatasetVariant variant : kBestCandidates) {
      const auto score = table.Get(lang, variant);
      if (!score) continue;
      if (!best || *score > best_score) {
        best = variant;
        best_score = *score;
      }
    }
    if (!best) {
      throw DataError("no dev scores for language '" +
                      std::string(LanguageName(lang)) + "'");
    }
    mapping[lang] = *best;
  }
  return mapping;
}

void WriteBestMapping(std::ostream& out, const BestMapping& mapping) {
  TsvTable table;
  table.header = {"language", "variant"};
  for (const auto& [lang, variant] : mapping) {
    table.rows.push_back({std::string(LanguageName(lang)),
                          std::string(VariantName(variant))});
  }
  WriteTsv(out, table);
}

BestMapping ReadBestMapping(std::istream& in, std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  if (table.header.size() != 2) {
    throw DataError(std::string(source_name) +
                    ": best mapping must have two columns (language, variant)");
  }
  BestMapping mapping;
  for (const auto& row : table.rows) {
    const DatasetVariant variant = ParseVariant(row[1]);
    if (variant == DatasetVariant::kBest) {
      throw DataError(std::string(source_name) +
                      ": a language cannot map to the Best variant");
    }
    mapping[ParseLanguage(row[0])] = variant;
  }
  return mapping;
}

}  // namespace phyloadapt
