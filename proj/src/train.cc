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

#include "phyloadapt/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace phyloadapt {
namespace {

using Clock = std::chrono::steady_clock;

// Seed streams, kept apart so that changing one kind of draw never shifts
// another.
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kMaskStream = 2;

std::vector<std::vector<TokenId>> EncodeAll(const EncoderModel& model,
                                            const Dataset& ds) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(ds.size());
  const auto max_len = static_cast<std::size_t>(model.config().max_seq_len);
  for (const Example& ex : ds.examples()) {
    out.push_back(model.vocab().Encode(ex.text, max_len));
  }
  return out;
}

std::vector<std::vector<std::size_t>> MakeBatches(std::size_t n,
                                                  int batch_size,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

std::string UpdatedName(const std::string& param_name) {
  if (param_name == kMlmBiasName) return "head:mlm";
  if (param_name.starts_with("heads.classifier")) return "head:classifier";
  // "adapters.<level>:<name>.<layer>.<down|up>"
  const std::string body = param_name.substr(std::string("adapters.").size());
  const std::size_t last = body.rfind('.');
  const std::size_t layer_dot = body.rfind('.', last - 1);
  return body.substr(0, layer_dot);
}

void LogStep(std::ostream* log, int epoch, long step, double loss) {
  if (log == nullptr) return;
  *log << "epoch " << epoch << " step " << step << " loss " << std::fixed
       << std::setprecision(6) << loss << '\n';
  log->unsetf(std::ios::floatfield);
}

// A monolingual labeled batch group: the examples of one language and the
// stack they run through.
struct RoutedGroup {
  LanguageCode language;
  AdapterStack stack;
  std::vector<std::size_t> members;
};

TrainReport RunFinetune(EncoderModel& model, const Dataset& ds,
                        std::vector<RoutedGroup> groups,
                        const AdapterId& task_id, const TrainConfig& cfg,
                        const TrainHooks& hooks) {
  cfg.Validate();
  const auto started = Clock::now();
  for (const Example& ex : ds.examples()) {
    if (!ex.label) {
      throw DataError("example '" + ex.id + "' has no label; cannot fine-tune");
    }
  }
  for (const RoutedGroup& group : groups) {
    for (const AdapterId& id : group.stack) {
      if (!(id == task_id) && !model.HasAdapter(id)) {
        throw DataError("adapter '" + id.ToString() +
                        "' must be registered before task fine-tuning");
      }
    }
  }
  model.RegisterAdapter(task_id);

  const auto encoded = EncodeAll(model, ds);
  ParamSelector selector;
  selector.adapters = {task_id};
  selector.classifier = true;

  AdamState<float> local_state;
  AdamState<float>& state = hooks.state != nullptr ? *hooks.state : local_state;
  TrainReport report;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::uint64_t epoch_seed =
        DeriveSeed(DeriveSeed(cfg.seed, kShuffleStream), epoch);
    // Batches of every group, interleaved round-robin.
    std::vector<std::vector<std::vector<std::size_t>>> per_group;
    std::size_t rounds = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      auto local = MakeBatches(groups[g].members.size(), cfg.batch_size,
                               DeriveSeed(epoch_seed, g));
      for (auto& batch : local) {
        for (auto& idx : batch) idx = groups[g].members[idx];
      }
      rounds = std::max(rounds, local.size());
      per_group.push_back(std::move(local));
    }
    double loss_sum = 0.0;
    long batches = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (r >= per_group[g].size()) continue;
        TokenBatch batch;
        std::vector<int> labels;
        for (const std::size_t idx : per_group[g][r]) {
          batch.push_back(encoded[idx]);
          labels.push_back(LabelIndex(*ds[idx].label));
        }
        Gradients<float> grads = model.ZeroGradients(selector);
        const double loss =
            model.ClassifyLoss(batch, labels, groups[g].stack, &grads);
        if (!std::isfinite(loss)) throw DataError("training loss is not finite");
        const ParameterView<float> view = model.TrainableParams(selector);
        AdamStep(view, grads, state, cfg);
        for (const auto& param : view) report.updated.insert(UpdatedName(param.name));
        ++report.steps;
        ++batches;
        loss_sum += loss;
        LogStep(hooks.log, epoch + 1, report.steps, loss);
        if (hooks.on_step) {
          hooks.on_step({epoch + 1, report.steps, groups[g].language, loss, &state});
        }
      }
    }
    report.epoch_losses.push_back(batches > 0 ? loss_sum / batches : 0.0);
  }
  report.seconds =
      std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (!(mask_ratio > 0.0 && mask_ratio < 1.0)) {
    throw std::invalid_argument("mask_ratio must lie in (0, 1)");
  }
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 &&
        adam_beta2 < 1.0 && adam_eps > 0.0)) {
    throw std::invalid_argument("invalid Adam hyperparameters");
  }
}

template <typename T>
void AdamStep(const ParameterView<T>& params, Gradients<T>& grads,
              AdamState<T>& state, const TrainConfig& cfg,
              std::optional<long> t) {
  if (t && *t < 1) throw std::invalid_argument("Adam step index must be >= 1");
  std::vector<Matrix<T>*> matched;
  matched.reserve(params.size());
  for (const NamedParam<T>& p : params) {
    Matrix<T>* g = grads.Find(p.name);
    if (g == nullptr) {
      throw std::invalid_argument("no gradient for parameter '" + p.name + "'");
    }
    if (g->rows() != p.value->rows() || g->cols() != p.value->cols()) {
      throw std::invalid_argument("gradient shape mismatch for '" + p.name + "'");
    }
    if (!g->allFinite()) {
      throw DataError("non-finite gradient for parameter '" + p.name + "'");
    }
    matched.push_back(g);
  }
  const T beta1 = static_cast<T>(cfg.adam_beta1);
  const T beta2 = static_cast<T>(cfg.adam_beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix<T>& value = *params[i].value;
    const Matrix<T>& g = *matched[i];
    AdamSlot<T>& slot = state.slots[params[i].name];
    if (slot.m.size() == 0) {
      slot.m = Matrix<T>::Zero(value.rows(), value.cols());
      slot.v = Matrix<T>::Zero(value.rows(), value.cols());
    }
    ++slot.steps;
    const long step = t ? *t : slot.steps;
    slot.m = beta1 * slot.m + (T(1) - beta1) * g;
    slot.v = beta2 * slot.v + (T(1) - beta2) * g.cwiseProduct(g);
    const T m_corr = static_cast<T>(1.0 - std::pow(cfg.adam_beta1, step));
    const T v_corr = static_cast<T>(1.0 - std::pow(cfg.adam_beta2, step));
    const T lr = static_cast<T>(cfg.learning_rate);
    const T eps = static_cast<T>(cfg.adam_eps);
    value.array() -= lr * (slot.m.array() / m_corr) /
                     ((slot.v.array() / v_corr).sqrt() + eps);
  }
}

template void AdamStep<float>(const ParameterView<float>&, Gradients<float>&,
                              AdamState<float>&, const TrainConfig&,
                              std::optional<long>);
template void AdamStep<double>(const ParameterView<double>&, Gradients<double>&,
                               AdamState<double>&, const TrainConfig&,
                               std::optional<long>);

std::pair<std::vector<TokenId>, std::vector<TokenId>> MaskSequence(
    const std::vector<TokenId>& ids, const Vocabulary& vocab, double ratio,
    Rng& rng) {
  std::vector<TokenId> inputs = ids;
  std::vector<TokenId> targets(ids.size(), -1);
  std::vector<std::size_t> maskable;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != Vocabulary::kCls && !Vocabulary::IsTag(ids[i])) {
      maskable.push_back(i);
    }
  }
  if (maskable.empty()) return {inputs, targets};
  const auto wanted = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(maskable.size())));
  const std::size_t count = std::clamp<std::size_t>(wanted, 1, maskable.size());
  // Partial Fisher-Yates picks `count` distinct positions.
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.Below(maskable.size() - k));
    std::swap(maskable[k], maskable[j]);
  }
  const auto regular = static_cast<std::uint64_t>(vocab.size()) -
                       static_cast<std::uint64_t>(Vocabulary::kFirstRegular);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pos = maskable[k];
    targets[pos] = ids[pos];
    const double u = rng.Uniform();
    if (u < 0.8) {
      inputs[pos] = Vocabulary::kMask;
    } else if (u < 0.9) {
      inputs[pos] = regular > 0 ? Vocabulary::kFirstRegular +
                                      static_cast<TokenId>(rng.Below(regular))
                                : Vocabulary::kMask;
    }
  }
  return {inputs, targets};
}

TrainReport MlmAdapterTune(EncoderModel& model,
                           const std::map<LanguageCode, Dataset>& corpora,
                           const PhylogenyTree& tree, const TrainConfig& cfg,
                           const TrainHooks& hooks) {
  cfg.Validate();
  const auto started = Clock::now();
  struct LanguageData {
    LanguageCode language;
    AdapterStack path;
    std::vector<std::vector<TokenId>> encoded;
  };
  std::vector<LanguageData> languages;
  for (const auto& [lang, ds] : corpora) {
    AdapterStack path = PhylogenyPath(tree, lang);
    for (const AdapterId& id : path) model.RegisterAdapter(id);
    languages.push_back({lang, std::move(path), EncodeAll(model, ds)});
  }

  AdamState<float> local_state;
  AdamState<float>& state = hooks.state != nullptr ? *hooks.state : local_state;
  TrainReport report;
  const std::uint64_t mask_seed = DeriveSeed(cfg.seed, kMaskStream);
  std::uint64_t batch_counter = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::uint64_t epoch_seed =
        DeriveSeed(DeriveSeed(cfg.seed, kShuffleStream), epoch);
    std::vector<std::vector<std::vector<std::size_t>>> per_language;
    std::size_t rounds = 0;
    for (const LanguageData& data : languages) {
      per_language.push_back(MakeBatches(
          data.encoded.size(), cfg.batch_size,
          DeriveSeed(epoch_seed, static_cast<std::uint64_t>(data.language))));
      rounds = std::max(rounds, per_language.back().size());
    }
    double loss_sum = 0.0;
    long batches = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
      for (std::size_t li = 0; li < languages.size(); ++li) {
        if (r >= per_language[li].size()) continue;
        const LanguageData& data = languages[li];
        Rng mask_rng(DeriveSeed(mask_seed, batch_counter++));
        TokenBatch inputs;
        TokenBatch targets;
        bool any_target = false;
        for (const std::size_t idx : per_language[li][r]) {
          auto [in, target] =
              MaskSequence(data.encoded[idx], model.vocab(), cfg.mask_ratio, mask_rng);
          any_target = any_target ||
                       std::any_of(target.begin(), target.end(),
                                   [](TokenId t) { return t >= 0; });
          inputs.push_back(std::move(in));
          targets.push_back(std::move(target));
        }
        if (!any_target) continue;
        ParamSelector selector;
        selector.adapters.insert(data.path.begin(), data.path.end());
        Gradients<float> grads = model.ZeroGradients(selector);
        const double loss = model.MlmLoss(inputs, targets, data.path, &grads);
        if (!std::isfinite(loss)) throw DataError("training loss is not finite");
        const ParameterView<float> view = model.TrainableParams(selector);
        AdamStep(view, grads, state, cfg);
        for (const auto& param : view) report.updated.insert(UpdatedName(param.name));
        ++report.steps;
        ++batches;
        loss_sum += loss;
        LogStep(hooks.log, epoch + 1, report.steps, loss);
        if (hooks.on_step) {
          hooks.on_step({epoch + 1, report.steps, data.language, loss, &state});
        }
      }
    }
    report.epoch_losses.push_back(batches > 0 ? loss_sum / batches : 0.0);
  }
  report.seconds =
      std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

TrainReport FinetuneTask(EncoderModel& model, const Dataset& ds,
                         const AdapterStack& stack, const TrainConfig& cfg,
                         const TrainHooks& hooks) {
  if (stack.empty() || stack.back().level != AdapterLevel::kTask) {
    throw std::invalid_argument("the stack must end with a task adapter");
  }
  RoutedGroup group{LanguageCode::kUnknown, stack, {}};
  for (std::size_t i = 0; i < ds.size(); ++i) group.members.push_back(i);
  return RunFinetune(model, ds, {std::move(group)}, stack.back(), cfg, hooks);
}

TrainReport FinetuneRouted(EncoderModel& model, const Dataset& ds,
                           const PhylogenyTree& tree, StackConfig stack_config,
                           const TrainConfig& cfg, std::string_view task_id,
                           const TrainHooks& hooks) {
  std::map<LanguageCode, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    by_language[ds[i].language].push_back(i);
  }
  std::vector<RoutedGroup> groups;
  for (auto& [lang, members] : by_language) {
    groups.push_back(
        {lang, ResolveStack(tree, lang, stack_config, task_id), std::move(members)});
  }
  return RunFinetune(model, ds, std::move(groups),
                     AdapterId{AdapterLevel::kTask, std::string(task_id)}, cfg,
                     hooks);
}

std::vector<SentimentLabel> Predict(const EncoderModel& model,
                                    const Dataset& ds,
                                    const AdapterStack& stack) {
  const auto encoded = EncodeAll(model, ds);
  std::vector<SentimentLabel> labels;
  labels.reserve(ds.size());
  constexpr std::size_t kChunk = 64;
  for (std::size_t start = 0; start < encoded.size(); start += kChunk) {
    const std::size_t end = std::min(encoded.size(), start + kChunk);
    const TokenBatch batch(encoded.begin() + start, encoded.begin() + end);
    const Matrix<float> logits = model.ForwardClassify(batch, stack);
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      Eigen::Index best = 0;
      logits.row(r).maxCoeff(&best);
      labels.push_back(LabelFromIndex(static_cast<int>(best)));
    }
  }
  return labels;
}

std::vector<SentimentLabel> PredictRouted(const EncoderModel& model,
                                          const Dataset& ds,
                                          const PhylogenyTree& tree,
                                          StackConfig stack_config,
                                          std::string_view task_id) {
  std::vector<SentimentLabel> labels(ds.size(), SentimentLabel::kNeutral);
  std::map<LanguageCode, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    by_language[ds[i].language].push_back(i);
  }
  for (const auto& [lang, members] : by_language) {
    const AdapterStack stack = ResolveStack(tree, lang, stack_config, task_id);
    std::vector<Example> subset;
    subset.reserve(members.size());
    for (const std::size_t i : members) subset.push_back(ds[i]);
    const Dataset part(std::move(subset), ds.variant(), ds.tagged());
    const auto predicted = Predict(model, part, stack);
    for (std::size_t k = 0; k < members.size(); ++k) {
      labels[members[k]] = predicted[k];
    }
  }
  return labels;
}

}  // namespace phyloadapt
