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

// Independent scoring oracles shared by the unit and acceptance suites.

#ifndef PHYLOADAPT_TESTS_EVALUATE_CHECKS_H_
#define PHYLOADAPT_TESTS_EVALUATE_CHECKS_H_

#include <array>
#include <vector>

#include "phyloadapt/types.h"

namespace phyloadapt::testing {

// Weighted F1 (percent) straight from a confusion matrix.
inline double BruteForceWeightedF1(const std::vector<SentimentLabel>& gold,
                                   const std::vector<SentimentLabel>& pred) {
  std::array<std::array<long, 3>, 3> confusion{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++confusion[LabelIndex(gold[i])][LabelIndex(pred[i])];
  }
  double weighted = 0.0;
  for (int c = 0; c < 3; ++c) {
    long tp = confusion[c][c], predicted = 0, actual = 0;
    for (int k = 0; k < 3; ++k) {
      predicted += confusion[k][c];
      actual += confusion[c][k];
    }
    const double p = predicted ? static_cast<double>(tp) / predicted : 0.0;
    const double r = actual ? static_cast<double>(tp) / actual : 0.0;
    const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    weighted += f1 * actual;
  }
  return gold.empty() ? 0.0 : 100.0 * weighted / gold.size();
}

}  // namespace phyloadapt::testing

#endif  // PHYLOADAPT_TESTS_EVALUATE_CHECKS_H_
