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

#include "phyloadapt/evaluate.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "phyloadapt/random.h"
#include "phyloadapt/tsv.h"

namespace phyloadapt {

EvalReport WeightedF1(std::span<const SentimentLabel> gold,
                      std::span<const SentimentLabel> pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and predicted labels differ in length");
  }
  if (gold.empty()) throw std::invalid_argument("cannot score zero examples");
  std::array<long, kNumLabels> tp{}, fp{}, fn{};
  EvalReport report;
  report.total = static_cast<long>(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int g = LabelIndex(gold[i]);
    const int p = LabelIndex(pred[i]);
    ++report.per_class[g].support;
    if (g == p) {
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  for (int c = 0; c < kNumLabels; ++c) {
    ClassScores& s = report.per_class[c];
    const double precision =
        tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fp[c]) : 0.0;
    const double recall =
        tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fn[c]) : 0.0;
    const double f1 = precision + recall > 0.0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    s.precision = 100.0 * precision;
    s.recall = 100.0 * recall;
    s.f1 = 100.0 * f1;
    report.weighted_f1 += static_cast<double>(s.support) / report.total * s.f1;
  }
  return report;
}

double MacroAverage(std::span<const double> track_scores) {
  if (track_scores.empty()) {
    throw std::invalid_argument("macro average of no tracks");
  }
  double sum = 0.0;
  for (const double s : track_scores) sum += s;
  return sum / static_cast<double>(track_scores.size());
}

std::string RenderFixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::vector<SentimentLabel> MajorityVote(std::span<const PredictionSet> preds,
                                         std::uint64_t seed) {
  if (preds.empty()) throw std::invalid_argument("no prediction sets to vote");
  const std::size_t n = preds.front().labels.size();
  for (const PredictionSet& p : preds) {
    if (p.labels.size() != n) {
      throw std::invalid_argument("prediction set '" + p.model_id +
                                  "' has a different length");
    }
  }
  std::vector<SentimentLabel> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int, kNumLabels> votes{};
    for (const PredictionSet& p : preds) ++votes[LabelIndex(p.labels[i])];
    int top = 0;
    for (const int v : votes) top = std::max(top, v);
    std::vector<SentimentLabel> tied;
    for (int c = 0; c < kNumLabels; ++c) {
      if (votes[c] == top) tied.push_back(LabelFromIndex(c));
    }
    if (tied.size() == 1) {
      out[i] = tied.front();
    } else {
      Rng rng(DeriveSeed(seed, i));
      out[i] = tied[rng.Below(tied.size())];
    }
  }
  return out;
}

void WriteReport(std::ostream& out, std::span<const TrackResult> tracks) {
  TsvTable table;
  table.header = {"track", "class", "precision", "recall", "f1", "support"};
  std::vector<double> rendered;
  for (const TrackResult& track : tracks) {
    for (const SentimentLabel label : kAllLabels) {
      const ClassScores& s = track.report.per_class[LabelIndex(label)];
      table.rows.push_back({track.name, std::string(LabelName(label)),
                            RenderFixed(s.precision, 1), RenderFixed(s.recall, 1),
                            RenderFixed(s.f1, 1), std::to_string(s.support)});
    }
    table.rows.push_back({track.name, "weighted_f1", "", "",
                          RenderFixed(track.report.weighted_f1, 1),
                          std::to_string(track.report.total)});
    rendered.push_back(std::stod(RenderFixed(track.report.weighted_f1, 1)));
  }
  if (tracks.size() > 1) {
    table.rows.push_back({"all", "macro_average", "", "",
                          RenderFixed(MacroAverage(rendered), 2), ""});
  }
  WriteTsv(out, table);
}

Predictions ReadPredictions(std::istream& in, std::string_view source_name) {
  const TsvTable table = ReadTsv(in, source_name);
  const auto id_col = table.ColumnIndex("id");
  const auto label_col = table.ColumnIndex("label");
  if (!id_col || !label_col) {
    throw DataError(std::string(source_name) +
                    ": predictions need 'id' and 'label' columns");
  }
  Predictions preds;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    preds.ids.push_back(table.rows[r][*id_col]);
    try {
      preds.labels.push_back(ParseLabel(table.rows[r][*label_col]));
    } catch (const DataError& e) {
      throw DataError(std::string(source_name) + ": line " +
                      std::to_string(table.line_numbers[r]) + ": " + e.what());
    }
  }
  return preds;
}

Predictions LoadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return ReadPredictions(in, path.string());
}

void WritePredictions(std::ostream& out, const Predictions& preds) {
  if (preds.ids.size() != preds.labels.size()) {
    throw std::invalid_argument("prediction ids and labels differ in length");
  }
  TsvTable table;
  table.header = {"id", "label"};
  for (std::size_t i = 0; i < preds.ids.size(); ++i) {
    table.rows.push_back({preds.ids[i], std::string(LabelName(preds.labels[i]))});
  }
  WriteTsv(out, table);
}

void SavePredictions(const std::filesystem::path& path, const Predictions& preds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  WritePredictions(out, preds);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace phyloadapt
