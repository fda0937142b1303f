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

#ifndef PHYLOADAPT_PREPROCESS_H_
#define PHYLOADAPT_PREPROCESS_H_

#include <string>
#include <string_view>

#include "phyloadapt/corpus.h"

namespace phyloadapt {

struct CleanConfig {
  int collapse_char_run_to = 2;
  int collapse_punct_run_to = 1;
  bool remove_rt = true;

  // Throws std::invalid_argument if a collapse target is below 1.
  void Validate() const;
};

// Tweet normalization. One pass applies, in order:
//   1. drop @\w+ mentions;
//   2. drop standalone "RT" tokens (case-sensitive), if enabled;
//   3. drop URLs: "http://", "https://" or "www." plus the following run of
//      non-space, non-emoji characters;
//   4. shorten runs of one punctuation character to collapse_punct_run_to;
//   5. shorten runs of one letter to collapse_char_run_to;
//   6. collapse whitespace to single spaces and trim.
// Passes repeat until the text stops changing, so the result is always a
// fixpoint. Emoji pass through untouched.
std::string CleanText(std::string_view raw, const CleanConfig& cfg = {});

// Cleans every example and drops those left empty. Throws DataError for a
// tagged dataset; tags are added after cleaning.
Dataset CleanDataset(const Dataset& ds, const CleanConfig& cfg = {});

}  // namespace phyloadapt

#endif  // PHYLOADAPT_PREPROCESS_H_
