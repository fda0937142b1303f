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

#include "phyloadapt/augment.h"
#include "phyloadapt/random.h"
#include "phyloadapt/vocab.h"
#include "test_support.h"

namespace phyloadapt {
namespace {

using L = LanguageCode;
using V = DatasetVariant;

BilingualDictionary GoodDict() {
  BilingualDictionary dict(L::kYo);
  dict.Add("good", "dara");
  return dict;
}

TEST_CASE("label_sst thresholds") {
  CHECK(LabelSst(0.35) == SentimentLabel::kNegative);
  CHECK(LabelSst(0.50) == SentimentLabel::kNeutral);
  CHECK(LabelSst(0.90) == SentimentLabel::kPositive);
  CHECK(LabelSst(0.65) == SentimentLabel::kPositive);
  CHECK(LabelSst(0.0) == SentimentLabel::kNegative);
  CHECK(LabelSst(1.0) == SentimentLabel::kPositive);
  AugmentConfig inverted{0.7, 0.3};
  CHECK_THROWS_AS(inverted.Validate(), std::invalid_argument);
}

TEST_CASE("label_sst is monotone in the score") {
  Rng rng(11);
  std::vector<double> scores(1000);
  for (double& s : scores) s = rng.Uniform();
  std::sort(scores.begin(), scores.end());
  for (std::size_t i = 1; i < scores.size(); ++i) {
    CHECK(LabelIndex(LabelSst(scores[i - 1])) <= LabelIndex(LabelSst(scores[i])));
  }
}

TEST_CASE("dict_translate examples") {
  CHECK(DictTranslate("a good movie", GoodDict()) == "a dara movie");
  CHECK(DictTranslate("Good!", GoodDict()) == "dara!");
  CHECK(DictTranslate("a  good\tday", GoodDict()) == "a  dara\tday");
  CHECK(DictTranslate("goodness", GoodDict()) == "goodness");
  CHECK(DictTranslate("anything at all", BilingualDictionary(L::kYo)) ==
        "anything at all");
}

TEST_CASE("dict_translate keeps token count and untranslated tokens") {
  BilingualDictionary dict(L::kSw);
  dict.Add("film", "filamu");
  dict.Add("bad", "mbaya");
  dict.Add("bad", "vibaya");  // second sense is ignored
  CHECK(dict.Lookup("BAD") == std::optional<std::string_view>("mbaya"));
  Rng rng(3);
  const std::vector<std::string> words = {"film", "Bad", "the", "a", "film,", "(bad)"};
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const int n = 1 + static_cast<int>(rng.Below(8));
    for (int k = 0; k < n; ++k) s += (k ? " " : "") + words[rng.Below(words.size())];
    const std::string t = DictTranslate(s, dict);
    const auto in_tokens = SplitWhitespace(s);
    const auto out_tokens = SplitWhitespace(t);
    REQUIRE(in_tokens.size() == out_tokens.size());
    for (std::size_t k = 0; k < in_tokens.size(); ++k) {
      if (in_tokens[k] == "the" || in_tokens[k] == "a") CHECK(out_tokens[k] == in_tokens[k]);
    }
  }
}

TEST_CASE("dictionary files") {
  std::istringstream in("english\ttranslation\ngood\tdara\nvery good\tdara pupo\nnice\tnice one\n");
  const BilingualDictionary dict = ReadDictionary(in, L::kYo);
  CHECK(dict.Lookup("good") == std::optional<std::string_view>("dara"));
  CHECK(dict.Lookup("nice") == std::optional<std::string_view>("nice_one"));
  BilingualDictionary d(L::kYo);
  CHECK_THROWS(d.Add("", "x"));
}

TEST_CASE("build_dict_augmented") {
  const std::vector<ScoredSentence> sst = {{"a good movie", 0.9}, {"dull", 0.2}, {"fine", 0.5}};
  const Dataset ds = BuildDictAugmented(sst, GoodDict());
  REQUIRE(ds.size() == 3);
  CHECK(ds[0].text == "a dara movie");
  CHECK(ds[0].label == SentimentLabel::kPositive);
  CHECK(ds[1].label == SentimentLabel::kNegative);
  CHECK(ds[1].text == "dull");
  CHECK(ds[2].label == SentimentLabel::kNeutral);
  CHECK(ds[0].language == L::kYo);
  CHECK(ds.variant() == V::kCleanPlusDict);
  CHECK_FALSE(ds.tagged());

  std::istringstream bad("sentence\tscore\nx\t1.5\n");
  CHECK_THROWS_AS(ReadScoredSentences(bad), DataError);
}

TEST_CASE("load_mt_augmented") {
  std::istringstream five("text\tlabel\na\tpositive\nb\tnegative\nc\tneutral\nd\tpositive\ne\tneutral\n");
  const Dataset ds = ReadMtAugmented(five, L::kSw);
  CHECK(ds.size() == 5);
  CHECK(ds[4].language == L::kSw);
  std::istringstream twi("text\tlabel\na\tpositive\n");
  CHECK_THROWS_AS(ReadMtAugmented(twi, L::kTwi), DataError);
  std::istringstream empty("text\tlabel\n");
  CHECK(ReadMtAugmented(empty, L::kHa).empty());
  for (const L lang : {L::kTwi, L::kPt, L::kPcm, L::kMa, L::kDz}) CHECK_FALSE(MtSupports(lang));
}

TEST_CASE("build_variant") {
  const Dataset clean = testing::KeywordCorpus(L::kSw, 100, 1, "c");
  const Dataset dict = testing::KeywordCorpus(L::kSw, 40, 2, "d");
  const Dataset mt = testing::KeywordCorpus(L::kSw, 60, 3, "m");
  const Dataset both = BuildVariant(clean, dict, mt, V::kCleanPlusBoth, 5);
  CHECK(both.size() == 200);
  CHECK(both.variant() == V::kCleanPlusBoth);
  CHECK_THROWS(BuildVariant(clean, std::nullopt, mt, V::kCleanPlusDict, 5));
  const Dataset only = BuildVariant(clean, dict, mt, V::kClean, 5);
  CHECK(only.size() == 100);
  CHECK(only.examples() != clean.examples());  // reordered
  CHECK(BuildVariant(clean, dict, mt, V::kClean, 5) == only);
}

}  // namespace
}  // namespace phyloadapt
