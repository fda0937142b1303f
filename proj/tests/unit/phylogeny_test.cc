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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "phyloadapt/phylogeny.h"
#include "test_support.h"

namespace phyloadapt {
namespace {

using L = LanguageCode;

const auto& kExpected = testing::ExpectedPhylogeny();

const PhylogenyTree& Tree() { return PhylogenyTree::Default(); }

TEST_CASE("path_for matches the hand table") {
  CHECK(kExpected.size() == 12);
  for (const auto& [lang, path] : kExpected) {
    CAPTURE(LanguageName(lang));
    CHECK(Tree().PathFor(lang) == path);
  }
  CHECK_THROWS_AS(Tree().PathFor(L::kTg), DataError);
  CHECK_THROWS_AS(Tree().PathFor(L::kOr), DataError);
  CHECK(Tree().Languages().size() == 12);
}

TEST_CASE("resolve_stack for every language and config") {
  using A = AdapterLevel;
  for (const auto& [lang, path] : kExpected) {
    const std::string code(LanguageName(lang));
    const AdapterId family{A::kFamily, path.first};
    const AdapterId genus{A::kGenus, path.second};
    const AdapterId language{A::kLanguage, code};
    const AdapterId task{A::kTask, "sentiment"};
    CHECK(ResolveStack(Tree(), lang, StackConfig::kT) == AdapterStack{task});
    CHECK(ResolveStack(Tree(), lang, StackConfig::kLT) == AdapterStack{language, task});
    CHECK(ResolveStack(Tree(), lang, StackConfig::kGLT) ==
          AdapterStack{genus, language, task});
    CHECK(ResolveStack(Tree(), lang, StackConfig::kFGLT) ==
          AdapterStack{family, genus, language, task});
  }
}

TEST_CASE("stack properties") {
  for (const L lang : kTaskALanguages) {
    const AdapterStack full = ResolveStack(Tree(), lang, StackConfig::kFGLT);
    for (const StackConfig cfg : {StackConfig::kT, StackConfig::kLT, StackConfig::kGLT,
                                  StackConfig::kFGLT}) {
      const AdapterStack s = ResolveStack(Tree(), lang, cfg);
      CHECK(static_cast<int>(s.size()) == StackDepth(cfg));
      CHECK(AdapterStack(full.end() - s.size(), full.end()) == s);
    }
  }
  const AdapterStack ig = ResolveStack(Tree(), L::kIg, StackConfig::kFGLT);
  const AdapterStack yo = ResolveStack(Tree(), L::kYo, StackConfig::kFGLT);
  CHECK(ig[0] == yo[0]);
  CHECK(ig[1] == yo[1]);
  CHECK(ig[2] != yo[2]);
}

TEST_CASE("zero-shot and unknown languages resolve only under T") {
  for (const L lang : {L::kTg, L::kOr, L::kUnknown}) {
    CHECK(ResolveStack(Tree(), lang, StackConfig::kT).size() == 1);
    CHECK_THROWS_AS(ResolveStack(Tree(), lang, StackConfig::kLT), DataError);
    CHECK_THROWS_AS(ResolveStack(Tree(), lang, StackConfig::kFGLT), DataError);
  }
  CHECK(ResolveStack(Tree(), L::kTg, StackConfig::kT, "topic")[0].name == "topic");
}

TEST_CASE("adapter ids and stack configs round-trip through text") {
  const AdapterId id{AdapterLevel::kFamily, "Niger–Congo"};
  CHECK(id.ToString() == "family:Niger–Congo");
  CHECK(AdapterId::Parse(id.ToString()) == id);
  CHECK_THROWS(AdapterId::Parse("nolevel"));
  for (const StackConfig cfg : {StackConfig::kT, StackConfig::kLT, StackConfig::kGLT,
                                StackConfig::kFGLT}) {
    CHECK(ParseStackConfig(StackConfigName(cfg)) == cfg);
  }
  CHECK_THROWS(ParseStackConfig("FG"));
}

TEST_CASE("tree files") {
  std::ostringstream out;
  WriteTree(out, Tree());
  std::istringstream in(out.str());
  CHECK(ReadTree(in).families() == Tree().families());

  std::istringstream custom("family\tgenus\tlanguage\nF\tG\tam\nF\tG\tsw\n");
  const PhylogenyTree t = ReadTree(custom);
  CHECK(t.PathFor(L::kSw) == std::pair<std::string, std::string>{"F", "G"});
  std::istringstream dup("family\tgenus\tlanguage\nF\tG\tam\nF\tH\tam\n");
  CHECK_THROWS_AS(ReadTree(dup), DataError);
}

}  // namespace
}  // namespace phyloadapt
