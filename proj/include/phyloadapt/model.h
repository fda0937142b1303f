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

#ifndef PHYLOADAPT_MODEL_H_
#define PHYLOADAPT_MODEL_H_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "phyloadapt/phylogeny.h"
#include "phyloadapt/vocab.h"

namespace phyloadapt {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelConfig {
  int vocab_size = 0;
  int embed_dim = 64;
  int num_layers = 2;
  int num_heads = 2;
  int ffn_dim = 128;
  int adapter_bottleneck = 16;
  int max_seq_len = 128;
  int num_classes = 3;

  // Throws std::invalid_argument when the shape constraints fail.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// One residual bottleneck per transformer layer: h + relu(h * down) * up,
// with down of shape embed_dim x bottleneck and up of bottleneck x embed_dim.
template <typename T>
struct AdapterLayer {
  Matrix<T> down;
  Matrix<T> up;
};

template <typename T>
struct AdapterModule {
  AdapterId id;
  std::vector<AdapterLayer<T>> layers;
};

// Applies one adapter layer to every row of `h`. Throws
// std::invalid_argument on a width mismatch.
template <typename T>
Matrix<T> AdapterApply(const Matrix<T>& h, const AdapterLayer<T>& adapter);

template <typename T>
struct TransformerLayer {
  Matrix<T> wq, wk, wv, wo;  // embed_dim x embed_dim
  Matrix<T> bq, bk, bv, bo;  // 1 x embed_dim
  Matrix<T> ln1_gain, ln1_bias;
  Matrix<T> w1;  // embed_dim x ffn_dim
  Matrix<T> b1;
  Matrix<T> w2;  // ffn_dim x embed_dim
  Matrix<T> b2;
  Matrix<T> ln2_gain, ln2_bias;
};

// Chooses which parameters a training step may touch. The backbone is never
// selectable.
struct ParamSelector {
  std::set<AdapterId> adapters;
  bool mlm_head = false;
  bool classifier = false;

  friend bool operator==(const ParamSelector&, const ParamSelector&) = default;
};

template <typename T>
struct NamedParam {
  std::string name;
  Matrix<T>* value;
};

template <typename T>
using ParameterView = std::vector<NamedParam<T>>;

// Gradients keyed by parameter name. Only names present at construction
// time receive accumulation.
template <typename T>
struct Gradients {
  std::map<std::string, Matrix<T>> by_name;

  Matrix<T>* Find(const std::string& name) {
    const auto it = by_name.find(name);
    return it == by_name.end() ? nullptr : &it->second;
  }
};

using TokenBatch = std::vector<std::vector<TokenId>>;

// A small post-norm transformer encoder with learned positions, a registry
// of bottleneck adapters applied after each layer's feed-forward block in
// stack order, a weight-tied MLM head and a three-way classifier on the
// [CLS] position.
template <typename T>
class BasicEncoder {
 public:
  BasicEncoder(ModelConfig config, Vocabulary vocab, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::uint64_t seed() const { return seed_; }

  // Creates the adapter with up-projections at zero, so it starts as the
  // identity. Initialization depends only on the model seed and the id.
  // Registering an existing id is a no-op.
  void RegisterAdapter(const AdapterId& id);
  bool HasAdapter(const AdapterId& id) const { return adapters_.contains(id); }
  AdapterModule<T>& adapter(const AdapterId& id);
  const AdapterModule<T>& adapter(const AdapterId& id) const;
  std::vector<AdapterId> AdapterIds() const;

  // (batch, 3) logits from the [CLS] position.
  Matrix<T> ForwardClassify(const TokenBatch& batch,
                            const AdapterStack& stack) const;
  // One (positions, vocab) matrix per sequence.
  std::vector<Matrix<T>> ForwardMlm(const TokenBatch& batch,
                                    const AdapterStack& stack) const;

  // Mean cross-entropy over the batch. When `grads` is given, accumulates
  // d(loss)/d(param) into each of its entries.
  T ClassifyLoss(const TokenBatch& batch, std::span<const int> labels,
                 const AdapterStack& stack, Gradients<T>* grads) const;
  // Mean cross-entropy over positions whose target is >= 0.
  T MlmLoss(const TokenBatch& inputs, const TokenBatch& targets,
            const AdapterStack& stack, Gradients<T>* grads) const;

  // Throws DataError for an unregistered adapter.
  ParameterView<T> TrainableParams(const ParamSelector& selector);
  // Zero-filled gradients matching TrainableParams(selector).
  Gradients<T> ZeroGradients(const ParamSelector& selector) const;

  // Every parameter in a fixed order: backbone, adapters (sorted by id),
  // MLM head, classifier.
  void VisitParameters(
      const std::function<void(const std::string&, Matrix<T>&)>& fn);
  void VisitParameters(
      const std::function<void(const std::string&, const Matrix<T>&)>& fn)
      const;
  void VisitBackbone(
      const std::function<void(const std::string&, const Matrix<T>&)>& fn)
      const;

  std::size_t BackboneParameterCount() const;
  static std::size_t AdapterParameterCount(const ModelConfig& config);

  // Same weights in another precision.
  template <typename U>
  BasicEncoder<U> Cast() const;

 private:
  template <typename U>
  friend class BasicEncoder;

  struct LayerCache;
  struct SequenceCache;

  void CheckStack(const AdapterStack& stack) const;
  void CheckSequence(const std::vector<TokenId>& ids) const;
  SequenceCache Encode(const std::vector<TokenId>& ids,
                       const AdapterStack& stack, bool keep_cache) const;
  void Backward(SequenceCache& cache, const AdapterStack& stack,
                Matrix<T> d_hidden, Gradients<T>& grads) const;
  void InitAdapter(AdapterModule<T>& module) const;

  ModelConfig config_;
  Vocabulary vocab_;
  std::uint64_t seed_;

  Matrix<T> token_embedding_;     // vocab x embed_dim, tied to the MLM head
  Matrix<T> position_embedding_;  // max_seq_len x embed_dim
  Matrix<T> embed_ln_gain_, embed_ln_bias_;
  std::vector<TransformerLayer<T>> layers_;
  std::map<AdapterId, AdapterModule<T>> adapters_;
  Matrix<T> mlm_bias_;        // 1 x vocab
  Matrix<T> classifier_w_;    // embed_dim x num_classes
  Matrix<T> classifier_b_;    // 1 x num_classes

 public:
  // For checkpoint loading.
  static BasicEncoder FromParameters(
      ModelConfig config, Vocabulary vocab, std::uint64_t seed,
      const std::vector<AdapterId>& adapters,
      const std::map<std::string, Matrix<T>>& tensors);
};

using EncoderModel = BasicEncoder<float>;
using EncoderModel64 = BasicEncoder<double>;

std::string AdapterParamName(const AdapterId& id, int layer, bool up);
inline constexpr const char* kMlmBiasName = "heads.mlm.bias";
inline constexpr const char* kClassifierWeightName = "heads.classifier.weight";
inline constexpr const char* kClassifierBiasName = "heads.classifier.bias";

}  // namespace phyloadapt

#endif  // PHYLOADAPT_MODEL_H_
