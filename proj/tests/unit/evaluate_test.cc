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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evaluate_checks.h"
#include "phyloadapt/evaluate.h"
#include "phyloadapt/random.h"

namespace phyloadapt {
namespace {

constexpr SentimentLabel kPos = SentimentLabel::kPositive;
constexpr SentimentLabel kNeg = SentimentLabel::kNegative;
constexpr SentimentLabel kNeu = SentimentLabel::kNeutral;

std::vector<SentimentLabel> RandomLabels(Rng& rng, std::size_t n) {
  std::vector<SentimentLabel> out(n);
  for (auto& l : out) l = LabelFromIndex(static_cast<int>(rng.Below(3)));
  return out;
}

TEST_CASE("weighted F1 hand example") {
  const std::vector<SentimentLabel> gold = {kPos, kPos, kNeg, kNeu};
  const std::vector<SentimentLabel> pred = {kPos, kNeg, kNeg, kNeu};
  const EvalReport r = WeightedF1(gold, pred);
  CHECK(r.per_class[LabelIndex(kPos)].f1 == doctest::Approx(200.0 / 3));
  CHECK(r.per_class[LabelIndex(kNeg)].f1 == doctest::Approx(200.0 / 3));
  CHECK(r.per_class[LabelIndex(kNeu)].f1 == doctest::Approx(100.0));
  CHECK(r.weighted_f1 == doctest::Approx(75.0));
  CHECK(RenderFixed(r.weighted_f1, 1) == "75.0");
  CHECK(r.total == 4);
}

TEST_CASE("weighted F1 extremes") {
  Rng rng(1);
  const auto labels = RandomLabels(rng, 37);
  CHECK(WeightedF1(labels, labels).weighted_f1 == doctest::Approx(100.0));
  const std::vector<SentimentLabel> all_pos(5, kPos), all_neg(5, kNeg);
  const EvalReport none = WeightedF1(all_pos, all_neg);
  CHECK(none.weighted_f1 == 0.0);
  CHECK(none.per_class[LabelIndex(kNeu)].precision == 0.0);  // 0/0 convention
  CHECK_THROWS(WeightedF1(all_pos, std::vector<SentimentLabel>(4, kPos)));
}

TEST_CASE("weighted F1 matches the confusion-matrix oracle and permutation") {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.Below(50);
    auto gold = RandomLabels(rng, n);
    auto pred = RandomLabels(rng, n);
    const double score = WeightedF1(gold, pred).weighted_f1;
    CHECK(std::abs(score - testing::BruteForceWeightedF1(gold, pred)) < 1e-9);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.Shuffle(perm);
    std::vector<SentimentLabel> g2(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
      g2[i] = gold[perm[i]];
      p2[i] = pred[perm[i]];
    }
    CHECK(std::abs(WeightedF1(g2, p2).weighted_f1 - score) < 1e-9);
  }
}

TEST_CASE("macro average") {
  const std::vector<double> table = {79.6, 70.8, 75.3, 68.8, 78.4, 68.0, 55.2, 63.7,
                                     71.8, 56.5, 71.9, 51.7, 71.2, 61.5, 41.9};
  CHECK(std::abs(MacroAverage(table) - 65.76) <= 0.01);
  CHECK(RenderFixed(MacroAverage(table), 2) == "65.75");
  const std::vector<double> one = {42.5};
  CHECK(MacroAverage(one) == 42.5);
  const std::vector<double> same(4, 61.2);
  CHECK(MacroAverage(same) == doctest::Approx(61.2));
  CHECK_THROWS(MacroAverage(std::vector<double>{}));
}

TEST_CASE("majority vote examples") {
  std::vector<PredictionSet> five;
  for (const SentimentLabel l : {kPos, kPos, kNeg, kNeu, kPos}) five.push_back({"m", {l}});
  CHECK(MajorityVote(five, 1) == std::vector<SentimentLabel>{kPos});

  Rng rng(3);
  const PredictionSet single{"only", RandomLabels(rng, 20)};
  CHECK(MajorityVote(std::vector<PredictionSet>{single}, 9) == single.labels);

  std::vector<PredictionSet> ragged = {{"a", {kPos}}, {"b", {kPos, kNeg}}};
  CHECK_THROWS(MajorityVote(ragged, 1));
}

TEST_CASE("majority vote is order invariant under strict majorities") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t models = 1 + rng.Below(6);
    const std::size_t n = 1 + rng.Below(20);
    std::vector<PredictionSet> sets;
    for (std::size_t m = 0; m < models; ++m) sets.push_back({"m", RandomLabels(rng, n)});
    const auto base = MajorityVote(sets, 17);
    auto shuffled = sets;
    rng.Shuffle(shuffled);
    const auto again = MajorityVote(shuffled, 17);
    auto duplicated = sets;
    duplicated.push_back(sets[rng.Below(models)]);
    const auto with_dup = MajorityVote(duplicated, 17);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<int, 3> votes{};
      for (const auto& s : sets) ++votes[LabelIndex(s.labels[i])];
      const int top = *std::max_element(votes.begin(), votes.end());
      if (2 * top > static_cast<int>(models)) {
        CHECK(again[i] == base[i]);
        if (duplicated.back().labels[i] == base[i]) CHECK(with_dup[i] == base[i]);
      }
    }
  }
}

TEST_CASE("two-way ties split evenly and reproducibly") {
  const std::size_t n = 10000;
  const std::vector<PredictionSet> sets = {{"a", std::vector<SentimentLabel>(n, kPos)},
                                           {"b", std::vector<SentimentLabel>(n, kNeg)}};
  const auto out = MajorityVote(sets, 2026);
  CHECK(out == MajorityVote(sets, 2026));
  const long pos = std::count(out.begin(), out.end(), kPos);
  CHECK(std::count(out.begin(), out.end(), kNeu) == 0);
  CHECK(std::abs(pos - 5000.0) <= 3 * std::sqrt(n * 0.25));
}

TEST_CASE("report and prediction files") {
  const std::vector<SentimentLabel> gold = {kPos, kPos, kNeg, kNeu};
  const std::vector<SentimentLabel> pred = {kPos, kNeg, kNeg, kNeu};
  const std::vector<TrackResult> tracks = {{"am", WeightedF1(gold, pred)},
                                           {"ha", WeightedF1(gold, gold)}};
  std::ostringstream out;
  WriteReport(out, tracks);
  const std::string text = out.str();
  CHECK(text.find("am\tweighted_f1\t\t\t75.0") != std::string::npos);
  CHECK(text.find("macro_average\t\t\t87.50") != std::string::npos);

  Predictions p{{"1", "2"}, {kPos, kNeu}};
  std::ostringstream pout;
  WritePredictions(pout, p);
  std::istringstream pin(pout.str());
  const Predictions back = ReadPredictions(pin);
  CHECK(back.ids == p.ids);
  CHECK(back.labels == p.labels);
}

}  // namespace
}  // namespace phyloadapt
