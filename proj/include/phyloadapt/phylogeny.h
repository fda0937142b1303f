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

#ifndef PHYLOADAPT_PHYLOGENY_H_
#define PHYLOADAPT_PHYLOGENY_H_

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phyloadapt/types.h"

namespace phyloadapt {

enum class AdapterLevel { kFamily, kGenus, kLanguage, kTask };

std::string_view AdapterLevelName(AdapterLevel level);

// Identifies one adapter: its tree level and node name ("Bantu", "yo",
// "sentiment", ...).
struct AdapterId {
  AdapterLevel level = AdapterLevel::kTask;
  std::string name;

  // "family:Niger–Congo", "task:sentiment", ...
  std::string ToString() const;
  static AdapterId Parse(std::string_view text);

  friend auto operator<=>(const AdapterId&, const AdapterId&) = default;
  friend bool operator==(const AdapterId&, const AdapterId&) = default;
};

// family -> genus -> languages. Each language sits under exactly one
// (family, genus) pair.
class PhylogenyTree {
 public:
  using Families =
      std::map<std::string, std::map<std::string, std::set<LanguageCode>>>;

  PhylogenyTree() = default;

  // Throws DataError if a language appears twice or a name is empty.
  explicit PhylogenyTree(Families families);

  // The twelve-language family/genus table compiled in as the default.
  static const PhylogenyTree& Default();

  const Families& families() const { return families_; }
  bool Contains(LanguageCode lang) const;
  std::vector<LanguageCode> Languages() const;

  // Throws DataError for a language outside the tree.
  std::pair<std::string, std::string> PathFor(LanguageCode lang) const;

 private:
  Families families_;
};

// Three columns (family, genus, language) behind a header.
PhylogenyTree ReadTree(std::istream& in, std::string_view source_name = "<stream>");
PhylogenyTree LoadTree(const std::filesystem::path& path);
void WriteTree(std::ostream& out, const PhylogenyTree& tree);

// Which tree levels join the task adapter: T, LT, GLT or FGLT.
enum class StackConfig { kT, kLT, kGLT, kFGLT };

std::string_view StackConfigName(StackConfig cfg);
StackConfig ParseStackConfig(std::string_view text);
// 1, 2, 3 or 4.
int StackDepth(StackConfig cfg);

// Adapters in application order: family, genus, language, then task. The
// task adapter is always present and always last.
using AdapterStack = std::vector<AdapterId>;

inline constexpr std::string_view kDefaultTaskId = "sentiment";

// T accepts any language including kUnknown; the deeper configurations need
// `lang` in the tree and throw DataError otherwise.
AdapterStack ResolveStack(const PhylogenyTree& tree, LanguageCode lang,
                          StackConfig cfg,
                          std::string_view task_id = kDefaultTaskId);

// The family, genus and language adapters of `lang` without a task adapter,
// as trained by masked language modeling.
AdapterStack PhylogenyPath(const PhylogenyTree& tree, LanguageCode lang);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_PHYLOGENY_H_
