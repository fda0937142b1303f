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

#ifndef PHYLOADAPT_TRAIN_H_
#define PHYLOADAPT_TRAIN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "phyloadapt/corpus.h"
#include "phyloadapt/model.h"
#include "phyloadapt/phylogeny.h"
#include "phyloadapt/random.h"

namespace phyloadapt {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 5;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double mask_ratio = 0.15;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Throws std::invalid_argument on a violated range.
  void Validate() const;
};

template <typename T>
struct AdamSlot {
  Matrix<T> m;
  Matrix<T> v;
  long steps = 0;
};

// First and second moments per parameter name, plus how many updates each
// parameter has received.
template <typename T>
struct AdamState {
  std::map<std::string, AdamSlot<T>> slots;

  long Steps(const std::string& name) const {
    const auto it = slots.find(name);
    return it == slots.end() ? 0 : it->second.steps;
  }
};

// Bias-corrected Adam on every parameter in `params`. The step index is `t`
// when given, otherwise each parameter's own update count plus one. Throws
// DataError on a non-finite gradient before touching anything, and
// std::invalid_argument on a shape mismatch or t < 1.
template <typename T>
void AdamStep(const ParameterView<T>& params, Gradients<T>& grads,
              AdamState<T>& state, const TrainConfig& cfg,
              std::optional<long> t = std::nullopt);

struct TrainReport {
  std::vector<double> epoch_losses;
  // Adapter ids and heads that received at least one update, e.g.
  // "language:am" or "head:classifier".
  std::set<std::string> updated;
  long steps = 0;
  double seconds = 0.0;
};

struct StepInfo {
  int epoch = 0;
  long step = 0;
  LanguageCode language = LanguageCode::kUnknown;
  double loss = 0.0;
  const AdamState<float>* state = nullptr;
};

struct TrainHooks {
  // One "epoch <e> step <s> loss <l>" line per step when set.
  std::ostream* log = nullptr;
  std::function<void(const StepInfo&)> on_step;
  // Optimizer state to continue from and leave behind for inspection.
  AdamState<float>* state = nullptr;
};

// BERT-style masking of one encoded sequence: picks round(ratio * n)
// (at least one) of the n maskable positions, i.e. neither [CLS] nor a tag.
// 80% become [MASK], 10% a random regular word, 10% stay. Returns
// (inputs, targets) where unmasked targets are -1. A sequence with nothing
// to mask yields all -1 targets.
std::pair<std::vector<TokenId>, std::vector<TokenId>> MaskSequence(
    const std::vector<TokenId>& ids, const Vocabulary& vocab, double ratio,
    Rng& rng);

// Trains family, genus and language adapters with masked language modeling.
// Batches are monolingual and interleaved round-robin across languages in
// code order; each updates only the three adapters on its language's path.
// Registers missing path adapters. Throws DataError for a language outside
// the tree.
TrainReport MlmAdapterTune(EncoderModel& model,
                           const std::map<LanguageCode, Dataset>& corpora,
                           const PhylogenyTree& tree, const TrainConfig& cfg,
                           const TrainHooks& hooks = {});

// Trains the task adapter (the last stack entry, registered if missing) and
// the classifier on labeled data, with every other parameter frozen.
// Throws DataError on an unlabeled example or an unregistered non-task
// adapter.
TrainReport FinetuneTask(EncoderModel& model, const Dataset& ds,
                         const AdapterStack& stack, const TrainConfig& cfg,
                         const TrainHooks& hooks = {});

// As FinetuneTask, but each batch holds one language and runs through that
// language's stack for `stack_config`. The shared task adapter and
// classifier are the only trained parameters.
TrainReport FinetuneRouted(EncoderModel& model, const Dataset& ds,
                           const PhylogenyTree& tree, StackConfig stack_config,
                           const TrainConfig& cfg,
                           std::string_view task_id = kDefaultTaskId,
                           const TrainHooks& hooks = {});

// Argmax labels for every example through a single stack.
std::vector<SentimentLabel> Predict(const EncoderModel& model,
                                    const Dataset& ds,
                                    const AdapterStack& stack);
// Per-example stacks from each example's language.
std::vector<SentimentLabel> PredictRouted(const EncoderModel& model,
                                          const Dataset& ds,
                                          const PhylogenyTree& tree,
                                          StackConfig stack_config,
                                          std::string_view task_id = kDefaultTaskId);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_TRAIN_H_
