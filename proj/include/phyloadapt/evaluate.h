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

#ifndef PHYLOADAPT_EVALUATE_H_
#define PHYLOADAPT_EVALUATE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phyloadapt/types.h"

namespace phyloadapt {

struct ClassScores {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double f1 = 0.0;         // percent
  long support = 0;
};

// Scores are kept at full precision; rounding happens only when rendering.
struct EvalReport {
  std::array<ClassScores, kNumLabels> per_class;  // indexed by LabelIndex
  double weighted_f1 = 0.0;                       // percent
  long total = 0;
};

// Per-class precision, recall and F1 (zero when a denominator is zero) and
// their support-weighted mean. Throws std::invalid_argument on empty or
// misaligned input.
EvalReport WeightedF1(std::span<const SentimentLabel> gold,
                      std::span<const SentimentLabel> pred);

// Arithmetic mean. Throws std::invalid_argument on an empty list.
double MacroAverage(std::span<const double> track_scores);

// Fixed-point rendering, e.g. RenderFixed(75.0, 1) == "75.0".
std::string RenderFixed(double value, int decimals);

struct PredictionSet {
  std::string model_id;
  std::vector<SentimentLabel> labels;
};

// Per position, the most frequent label. Ties draw uniformly among the tied
// labels from a generator seeded by (seed, position), so a position's
// outcome does not depend on the list length. Throws std::invalid_argument
// on an empty list or unequal lengths.
std::vector<SentimentLabel> MajorityVote(std::span<const PredictionSet> preds,
                                         std::uint64_t seed);

struct TrackResult {
  std::string name;
  EvalReport report;
};

// TSV with columns class, precision, recall, f1, support: one row per
// class, a "weighted_f1" row per track and, for several tracks, a final
// "macro_average" row. Values use 1 decimal (macro average 2).
void WriteReport(std::ostream& out, std::span<const TrackResult> tracks);

// Two columns (id, label) behind a header.
struct Predictions {
  std::vector<std::string> ids;
  std::vector<SentimentLabel> labels;
};
Predictions ReadPredictions(std::istream& in,
                            std::string_view source_name = "<stream>");
Predictions LoadPredictions(const std::filesystem::path& path);
void WritePredictions(std::ostream& out, const Predictions& preds);
void SavePredictions(const std::filesystem::path& path, const Predictions& preds);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_EVALUATE_H_
