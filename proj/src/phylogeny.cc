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

#include "phyloadapt/phylogeny.h"

#include <fstream>

#include "phyloadapt/tsv.h"

namespace phyloadapt {
namespace {

constexpr std::array<std::string_view, 4> kLevelNames = {"family", "genus",
                                                         "language", "task"};
constexpr std::array<std::string_view, 4> kStackNames = {"T", "LT", "GLT",
                                                         "FGLT"};

}  // namespace

std::string_view AdapterLevelName(AdapterLevel level) {
  return kLevelNames[static_cast<std::size_t>(level)];
}

std::string AdapterId::ToString() const {
  return std::string(AdapterLevelName(level)) + ":" + name;
}

AdapterId AdapterId::Parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size()) {
    throw DataError("malformed adapter id '" + std::string(text) + "'");
  }
  const std::string_view level = text.substr(0, colon);
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == level) {
      return {static_cast<AdapterLevel>(i), std::string(text.substr(colon + 1))};
    }
  }
  throw DataError("unknown adapter level in '" + std::string(text) + "'");
}

PhylogenyTree::PhylogenyTree(Families families)
    : families_(std::move(families)) {
  std::set<LanguageCode> seen;
  for (const auto& [family, genera] : families_) {
    if (family.empty()) throw DataError("empty family name");
    for (const auto& [genus, langs] : genera) {
      if (genus.empty()) throw DataError("empty genus name");
      for (const LanguageCode lang : langs) {
        if (lang == LanguageCode::kUnknown) {
          throw DataError("the unknown language cannot be placed in the tree");
        }
        if (!seen.insert(lang).second) {
          throw DataError("language '" + std::string(LanguageName(lang)) +
                          "' appears under more than one genus");
        }
      }
    }
  }
}

const PhylogenyTree& PhylogenyTree::Default() {
  using L = LanguageCode;
  static const PhylogenyTree tree(Families{
      {"Afroasiatic",
       {{"Ethiopic", {L::kAm}}, {"Chadic", {L::kHa}}, {"Arabic", {L::kDz, L::kMa}}}},
      {"Niger–Congo",
       {{"Volta–Congo", {L::kIg, L::kYo}},
        {"Bantu", {L::kKr, L::kSw, L::kTs}},
        {"Central Tano", {L::kTwi}}}},
      {"Creole", {{"Creole Portuguese", {L::kPcm}}}},
      {"Indo-European", {{"Romance", {L::kPt}}}},
  });
  return tree;
}

bool PhylogenyTree::Contains(LanguageCode lang) const {
  for (const auto& [family, genera] : families_) {
    for (const auto& [genus, langs] : genera) {
      if (langs.contains(lang)) return true;
    }
  }
  return false;
}

std::vector<LanguageCode> PhylogenyTree::Languages() const {
  std::set<LanguageCode> all;
  for (const auto& [family, genera] : families_) {
    for (const auto& [genus, langs] : genera) all.insert(langs.begin(), langs.end());
  }
  return {all.begin(), all.end()};
}

std::pair<std::string, std::string> PhylogenyTree::PathFor(
    LanguageCode lang) const {
  for (const auto& [family, genera] : families_) {
    for (const auto& [genus, langs] : genera) {
      if (langs.contains(lang)) return {family, genus};
    }
  }
  throw DataError("language '" + std::string(LanguageName(lang)) +
                  "' is not in the phylogeny tree");
}

PhylogenyTree ReadTree(std::istream& in, std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  if (table.header.size() != 3) {
    throw DataError(std::string(source_name) +
                    ": tree file must have three columns (family, genus, language)");
  }
  PhylogenyTree::Families families;
  for (const auto& row : table.rows) {
    families[row[0]][row[1]].insert(ParseLanguage(row[2]));
  }
  return PhylogenyTree(std::move(families));
}

PhylogenyTree LoadTree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return ReadTree(in, path.string());
}

void WriteTree(std::ostream& out, const PhylogenyTree& tree) {
  TsvTable table;
  table.header = {"family", "genus", "language"};
  for (const auto& [family, genera] : tree.families()) {
    for (const auto& [genus, langs] : genera) {
      for (const LanguageCode lang : langs) {
        table.rows.push_back({family, genus, std::string(LanguageName(lang))});
      }
    }
  }
  WriteTsv(out, table);
}

std::string_view StackConfigName(StackConfig cfg) {
  return kStackNames[static_cast<std::size_t>(cfg)];
}

StackConfig ParseStackConfig(std::string_view text) {
  for (std::size_t i = 0; i < kStackNames.size(); ++i) {
    if (kStackNames[i] == text) return static_cast<StackConfig>(i);
  }
  throw DataError("unknown stack configuration '" + std::string(text) +
                  "' (expected T, LT, GLT or FGLT)");
}

int StackDepth(StackConfig cfg) { return static_cast<int>(cfg) + 1; }

AdapterStack PhylogenyPath(const PhylogenyTree& tree, LanguageCode lang) {
  const auto [family, genus] = tree.PathFor(lang);
  return {{AdapterLevel::kFamily, family},
          {AdapterLevel::kGenus, genus},
          {AdapterLevel::kLanguage, std::string(LanguageName(lang))}};
}

AdapterStack ResolveStack(const PhylogenyTree& tree, LanguageCode lang,
                          StackConfig cfg, std::string_view task_id) {
  AdapterStack stack;
  if (cfg != StackConfig::kT) {
    if (lang == LanguageCode::kUnknown) {
      throw DataError("stack configuration " +
                      std::string(StackConfigName(cfg)) +
                      " needs a known language; only T serves untagged input");
    }
    const AdapterStack path = PhylogenyPath(tree, lang);
    const int levels = StackDepth(cfg) - 1;
    stack.assign(path.end() - levels, path.end());
  }
  stack.push_back({AdapterLevel::kTask, std::string(task_id)});
  return stack;
}

}  // namespace phyloadapt
