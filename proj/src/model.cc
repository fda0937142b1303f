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

#include "phyloadapt/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phyloadapt/random.h"

namespace phyloadapt {
namespace {

constexpr double kLayerNormEps = 1e-5;

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

template <typename T>
Matrix<T> RandomNormal(Rng& rng, int rows, int cols, double stddev) {
  Matrix<T> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<T>(rng.Normal() * stddev);
  }
  return m;
}

template <typename T>
Matrix<T> Constant(int rows, int cols, double value) {
  return Matrix<T>::Constant(rows, cols, static_cast<T>(value));
}

template <typename T>
struct LayerNormOut {
  Matrix<T> y;
  Matrix<T> xhat;
  Matrix<T> inv_std;  // rows x 1
};

template <typename T>
LayerNormOut<T> LayerNorm(const Matrix<T>& x, const Matrix<T>& gain,
                          const Matrix<T>& bias) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  LayerNormOut<T> out{Matrix<T>(n, d), Matrix<T>(n, d), Matrix<T>(n, 1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const T mean = x.row(i).mean();
    const auto centered = (x.row(i).array() - mean).matrix();
    const T var = centered.squaredNorm() / static_cast<T>(d);
    const T inv = T(1) / std::sqrt(var + static_cast<T>(kLayerNormEps));
    out.inv_std(i, 0) = inv;
    out.xhat.row(i) = centered * inv;
    out.y.row(i) =
        (out.xhat.row(i).array() * gain.row(0).array() + bias.row(0).array())
            .matrix();
  }
  return out;
}

template <typename T>
Matrix<T> LayerNormBackward(const Matrix<T>& dy, const Matrix<T>& xhat,
                            const Matrix<T>& inv_std, const Matrix<T>& gain) {
  const Eigen::Index n = dy.rows();
  const T d = static_cast<T>(dy.cols());
  Matrix<T> dx(n, dy.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Array<T, 1, Eigen::Dynamic> dxhat =
        dy.row(i).array() * gain.row(0).array();
    const T mean_dxhat = dxhat.sum() / d;
    const T mean_dxhat_xhat = (dxhat * xhat.row(i).array()).sum() / d;
    dx.row(i) = (inv_std(i, 0) *
                 (dxhat - mean_dxhat - xhat.row(i).array() * mean_dxhat_xhat))
                    .matrix();
  }
  return dx;
}

// tanh approximation of GELU.
template <typename T>
T Gelu(T x) {
  const T c = static_cast<T>(0.7978845608028654);
  return T(0.5) * x * (T(1) + std::tanh(c * (x + T(0.044715) * x * x * x)));
}

template <typename T>
T GeluGrad(T x) {
  const T c = static_cast<T>(0.7978845608028654);
  const T inner = c * (x + T(0.044715) * x * x * x);
  const T t = std::tanh(inner);
  const T d_inner = c * (T(1) + T(3) * T(0.044715) * x * x);
  return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * d_inner;
}

template <typename T>
void SoftmaxRowsInPlace(Matrix<T>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const T max = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - max).exp().matrix();
    m.row(i) /= m.row(i).sum();
  }
}

// -log softmax(logits)[target] and the softmax itself.
template <typename T>
T CrossEntropy(const Eigen::Ref<const Matrix<T>>& logits_row, int target,
               Matrix<T>& probs_row) {
  const T max = logits_row.maxCoeff();
  probs_row = (logits_row.array() - max).exp().matrix();
  const T sum = probs_row.sum();
  probs_row /= sum;
  return -(logits_row(0, target) - max - std::log(sum));
}

template <typename T>
void AddTo(Gradients<T>* grads, const std::string& name, const Matrix<T>& g) {
  if (grads == nullptr) return;
  if (Matrix<T>* slot = grads->Find(name)) *slot += g;
}

}  // namespace

void ModelConfig::Validate() const {
  if (vocab_size <= 0) throw std::invalid_argument("vocab_size must be positive");
  if (embed_dim <= 0 || num_layers <= 0 || num_heads <= 0 || ffn_dim <= 0 ||
      adapter_bottleneck <= 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (embed_dim % num_heads != 0) {
    throw std::invalid_argument("embed_dim must be divisible by num_heads");
  }
  if (max_seq_len < 2) throw std::invalid_argument("max_seq_len must be >= 2");
  if (adapter_bottleneck >= embed_dim) {
    throw std::invalid_argument("adapter_bottleneck must be below embed_dim");
  }
  if (num_classes != kNumLabels) {
    throw std::invalid_argument("num_classes must be 3");
  }
}

std::string AdapterParamName(const AdapterId& id, int layer, bool up) {
  return "adapters." + id.ToString() + "." + std::to_string(layer) +
         (up ? ".up" : ".down");
}

template <typename T>
Matrix<T> AdapterApply(const Matrix<T>& h, const AdapterLayer<T>& adapter) {
  if (h.cols() != adapter.down.rows() || adapter.down.cols() != adapter.up.rows() ||
      adapter.up.cols() != h.cols()) {
    throw std::invalid_argument("adapter dimensions do not match the input");
  }
  return h + (h * adapter.down).cwiseMax(T(0)) * adapter.up;
}

template <typename T>
struct BasicEncoder<T>::LayerCache {
  Matrix<T> x_in;
  Matrix<T> q, k, v;
  std::vector<Matrix<T>> probs;
  Matrix<T> ln1_xhat, ln1_inv;
  Matrix<T> y1;
  Matrix<T> u;
  Matrix<T> ln2_xhat, ln2_inv;
  std::vector<Matrix<T>> adapter_in;
  std::vector<Matrix<T>> adapter_z;
};

template <typename T>
struct BasicEncoder<T>::SequenceCache {
  std::vector<LayerCache> layers;
  Matrix<T> hidden;
};

template <typename T>
BasicEncoder<T>::BasicEncoder(ModelConfig config, Vocabulary vocab,
                              std::uint64_t seed)
    : config_(config), vocab_(std::move(vocab)), seed_(seed) {
  config_.vocab_size = static_cast<int>(vocab_.size());
  config_.Validate();
  const int d = config_.embed_dim;
  const int f = config_.ffn_dim;
  const double w_std = 1.0 / std::sqrt(static_cast<double>(d));
  const double w2_std = 1.0 / std::sqrt(static_cast<double>(f));
  Rng rng(DeriveSeed(seed, 0));
  token_embedding_ = RandomNormal<T>(rng, config_.vocab_size, d, 1.0);
  position_embedding_ = RandomNormal<T>(rng, config_.max_seq_len, d, 0.5);
  embed_ln_gain_ = Constant<T>(1, d, 1.0);
  embed_ln_bias_ = Constant<T>(1, d, 0.0);
  layers_.resize(config_.num_layers);
  for (TransformerLayer<T>& layer : layers_) {
    layer.wq = RandomNormal<T>(rng, d, d, w_std);
    layer.wk = RandomNormal<T>(rng, d, d, w_std);
    layer.wv = RandomNormal<T>(rng, d, d, w_std);
    layer.wo = RandomNormal<T>(rng, d, d, w_std);
    layer.bq = Constant<T>(1, d, 0.0);
    layer.bk = Constant<T>(1, d, 0.0);
    layer.bv = Constant<T>(1, d, 0.0);
    layer.bo = Constant<T>(1, d, 0.0);
    layer.ln1_gain = Constant<T>(1, d, 1.0);
    layer.ln1_bias = Constant<T>(1, d, 0.0);
    layer.w1 = RandomNormal<T>(rng, d, f, w_std);
    layer.b1 = Constant<T>(1, f, 0.0);
    layer.w2 = RandomNormal<T>(rng, f, d, w2_std);
    layer.b2 = Constant<T>(1, d, 0.0);
    layer.ln2_gain = Constant<T>(1, d, 1.0);
    layer.ln2_bias = Constant<T>(1, d, 0.0);
  }
  mlm_bias_ = Constant<T>(1, config_.vocab_size, 0.0);
  classifier_w_ = RandomNormal<T>(rng, d, config_.num_classes, 0.02);
  classifier_b_ = Constant<T>(1, config_.num_classes, 0.0);
}

template <typename T>
void BasicEncoder<T>::InitAdapter(AdapterModule<T>& module) const {
  const int d = config_.embed_dim;
  const int r = config_.adapter_bottleneck;
  Rng rng(DeriveSeed(seed_, Fnv1a(module.id.ToString())));
  module.layers.resize(config_.num_layers);
  for (AdapterLayer<T>& layer : module.layers) {
    layer.down = RandomNormal<T>(rng, d, r, 1.0 / std::sqrt(static_cast<double>(d)));
    layer.up = Matrix<T>::Zero(r, d);
  }
}

template <typename T>
void BasicEncoder<T>::RegisterAdapter(const AdapterId& id) {
  if (adapters_.contains(id)) return;
  AdapterModule<T> module{id, {}};
  InitAdapter(module);
  adapters_.emplace(id, std::move(module));
}

template <typename T>
AdapterModule<T>& BasicEncoder<T>::adapter(const AdapterId& id) {
  const auto it = adapters_.find(id);
  if (it == adapters_.end()) {
    throw DataError("adapter '" + id.ToString() + "' is not registered");
  }
  return it->second;
}

template <typename T>
const AdapterModule<T>& BasicEncoder<T>::adapter(const AdapterId& id) const {
  const auto it = adapters_.find(id);
  if (it == adapters_.end()) {
    throw DataError("adapter '" + id.ToString() + "' is not registered");
  }
  return it->second;
}

template <typename T>
std::vector<AdapterId> BasicEncoder<T>::AdapterIds() const {
  std::vector<AdapterId> ids;
  for (const auto& [id, module] : adapters_) ids.push_back(id);
  return ids;
}

template <typename T>
void BasicEncoder<T>::CheckStack(const AdapterStack& stack) const {
  for (const AdapterId& id : stack) {
    if (!adapters_.contains(id)) {
      throw DataError("adapter '" + id.ToString() + "' is not registered");
    }
  }
}

template <typename T>
void BasicEncoder<T>::CheckSequence(const std::vector<TokenId>& ids) const {
  if (ids.empty()) throw std::invalid_argument("empty token sequence");
  if (ids.size() > static_cast<std::size_t>(config_.max_seq_len)) {
    throw std::invalid_argument("sequence longer than max_seq_len");
  }
  for (const TokenId id : ids) {
    if (id < 0 || id >= config_.vocab_size) {
      throw std::invalid_argument("token id out of range");
    }
  }
}

template <typename T>
typename BasicEncoder<T>::SequenceCache BasicEncoder<T>::Encode(
    const std::vector<TokenId>& ids, const AdapterStack& stack,
    bool keep_cache) const {
  CheckSequence(ids);
  const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
  const int d = config_.embed_dim;
  const int heads = config_.num_heads;
  const int dh = d / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  std::vector<const AdapterModule<T>*> modules;
  modules.reserve(stack.size());
  for (const AdapterId& id : stack) modules.push_back(&adapter(id));

  Matrix<T> x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = token_embedding_.row(ids[i]) + position_embedding_.row(i);
  }
  x = LayerNorm(x, embed_ln_gain_, embed_ln_bias_).y;

  SequenceCache cache;
  if (keep_cache) cache.layers.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const TransformerLayer<T>& w = layers_[l];
    Matrix<T> q = (x * w.wq).rowwise() + w.bq.row(0);
    Matrix<T> k = (x * w.wk).rowwise() + w.bk.row(0);
    Matrix<T> v = (x * w.wv).rowwise() + w.bv.row(0);
    Matrix<T> ctx(n, d);
    std::vector<Matrix<T>> probs;
    for (int h = 0; h < heads; ++h) {
      Matrix<T> scores =
          (q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose()) *
          scale;
      SoftmaxRowsInPlace(scores);
      ctx.middleCols(h * dh, dh) = scores * v.middleCols(h * dh, dh);
      if (keep_cache) probs.push_back(std::move(scores));
    }
    Matrix<T> pre1 = x + ((ctx * w.wo).rowwise() + w.bo.row(0));
    LayerNormOut<T> ln1 = LayerNorm(pre1, w.ln1_gain, w.ln1_bias);
    Matrix<T> u = (ln1.y * w.w1).rowwise() + w.b1.row(0);
    const Matrix<T> g = u.unaryExpr([](T a) { return Gelu(a); });
    Matrix<T> pre2 = ln1.y + ((g * w.w2).rowwise() + w.b2.row(0));
    LayerNormOut<T> ln2 = LayerNorm(pre2, w.ln2_gain, w.ln2_bias);
    Matrix<T> h = std::move(ln2.y);

    LayerCache* lc = keep_cache ? &cache.layers[l] : nullptr;
    for (const AdapterModule<T>* module : modules) {
      const AdapterLayer<T>& a = module->layers[l];
      Matrix<T> z = h * a.down;
      Matrix<T> next = h + z.cwiseMax(T(0)) * a.up;
      if (lc != nullptr) {
        lc->adapter_in.push_back(std::move(h));
        lc->adapter_z.push_back(std::move(z));
      }
      h = std::move(next);
    }
    if (lc != nullptr) {
      lc->x_in = std::move(x);
      lc->q = std::move(q);
      lc->k = std::move(k);
      lc->v = std::move(v);
      lc->probs = std::move(probs);
      lc->ln1_xhat = std::move(ln1.xhat);
      lc->ln1_inv = std::move(ln1.inv_std);
      lc->y1 = std::move(ln1.y);
      lc->u = std::move(u);
      lc->ln2_xhat = std::move(ln2.xhat);
      lc->ln2_inv = std::move(ln2.inv_std);
    }
    x = std::move(h);
  }
  cache.hidden = std::move(x);
  return cache;
}

template <typename T>
void BasicEncoder<T>::Backward(SequenceCache& cache, const AdapterStack& stack,
                               Matrix<T> d_hidden, Gradients<T>& grads) const {
  const int layers = static_cast<int>(layers_.size());
  const int d = config_.embed_dim;
  const int heads = config_.num_heads;
  const int dh = d / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  // Only adapter parameters live below the heads; without any selected
  // adapter in the stack there is nothing to propagate into.
  bool any_selected = false;
  for (const AdapterId& id : stack) {
    if (grads.Find(AdapterParamName(id, 0, true)) != nullptr ||
        grads.Find(AdapterParamName(id, 0, false)) != nullptr) {
      any_selected = true;
    }
  }
  if (!any_selected) return;

  Matrix<T> dx = std::move(d_hidden);
  for (int l = layers - 1; l >= 0; --l) {
    LayerCache& lc = cache.layers[l];
    for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i) {
      const AdapterLayer<T>& a = adapter(stack[i]).layers[l];
      const Matrix<T>& z = lc.adapter_z[i];
      const Matrix<T> relu = z.cwiseMax(T(0));
      if (Matrix<T>* g_up = grads.Find(AdapterParamName(stack[i], l, true))) {
        *g_up += relu.transpose() * dx;
      }
      Matrix<T> dz = dx * a.up.transpose();
      dz.array() *= (z.array() > T(0)).template cast<T>();
      if (Matrix<T>* g_down = grads.Find(AdapterParamName(stack[i], l, false))) {
        *g_down += lc.adapter_in[i].transpose() * dz;
      }
      dx += dz * a.down.transpose();
    }
    if (l == 0) break;

    const TransformerLayer<T>& w = layers_[l];
    const Matrix<T> d_pre2 =
        LayerNormBackward(dx, lc.ln2_xhat, lc.ln2_inv, w.ln2_gain);
    Matrix<T> du = d_pre2 * w.w2.transpose();
    du.array() *= lc.u.unaryExpr([](T a) { return GeluGrad(a); }).array();
    const Matrix<T> d_y1 = d_pre2 + du * w.w1.transpose();
    const Matrix<T> d_pre1 =
        LayerNormBackward(d_y1, lc.ln1_xhat, lc.ln1_inv, w.ln1_gain);
    const Matrix<T> d_ctx = d_pre1 * w.wo.transpose();
    const Eigen::Index n = d_ctx.rows();
    Matrix<T> dq(n, d), dk(n, d), dv(n, d);
    for (int h = 0; h < heads; ++h) {
      const Matrix<T>& probs = lc.probs[h];
      const auto d_ctx_h = d_ctx.middleCols(h * dh, dh);
      const Matrix<T> d_probs = d_ctx_h * lc.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh) = probs.transpose() * d_ctx_h;
      Matrix<T> d_scores = probs.cwiseProduct(d_probs);
      const Matrix<T> row_dot = d_scores.rowwise().sum();
      d_scores -= probs.cwiseProduct(row_dot.replicate(1, n));
      d_scores *= scale;
      dq.middleCols(h * dh, dh) = d_scores * lc.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh) =
          d_scores.transpose() * lc.q.middleCols(h * dh, dh);
    }
    dx = d_pre1 + dq * w.wq.transpose() + dk * w.wk.transpose() +
         dv * w.wv.transpose();
  }
}

template <typename T>
Matrix<T> BasicEncoder<T>::ForwardClassify(const TokenBatch& batch,
                                           const AdapterStack& stack) const {
  CheckStack(stack);
  Matrix<T> logits(static_cast<Eigen::Index>(batch.size()), config_.num_classes);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const SequenceCache cache = Encode(batch[b], stack, false);
    logits.row(static_cast<Eigen::Index>(b)) =
        cache.hidden.row(0) * classifier_w_ + classifier_b_;
  }
  return logits;
}

template <typename T>
std::vector<Matrix<T>> BasicEncoder<T>::ForwardMlm(
    const TokenBatch& batch, const AdapterStack& stack) const {
  CheckStack(stack);
  std::vector<Matrix<T>> out;
  out.reserve(batch.size());
  for (const auto& ids : batch) {
    const SequenceCache cache = Encode(ids, stack, false);
    Matrix<T> logits = cache.hidden * token_embedding_.transpose();
    logits.rowwise() += mlm_bias_.row(0);
    out.push_back(std::move(logits));
  }
  return out;
}

template <typename T>
T BasicEncoder<T>::ClassifyLoss(const TokenBatch& batch,
                                std::span<const int> labels,
                                const AdapterStack& stack,
                                Gradients<T>* grads) const {
  CheckStack(stack);
  if (batch.empty() || batch.size() != labels.size()) {
    throw std::invalid_argument("batch and labels must be non-empty and aligned");
  }
  const T inv_batch = T(1) / static_cast<T>(batch.size());
  T total = 0;
  Matrix<T> probs(1, config_.num_classes);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const int label = labels[b];
    if (label < 0 || label >= config_.num_classes) {
      throw std::invalid_argument("label index out of range");
    }
    SequenceCache cache = Encode(batch[b], stack, grads != nullptr);
    const Matrix<T> cls = cache.hidden.row(0);
    const Matrix<T> logits = cls * classifier_w_ + classifier_b_;
    total += CrossEntropy<T>(logits, label, probs);
    if (grads == nullptr) continue;
    Matrix<T> d_logits = probs;
    d_logits(0, label) -= T(1);
    d_logits *= inv_batch;
    AddTo(grads, kClassifierWeightName, Matrix<T>(cls.transpose() * d_logits));
    AddTo(grads, kClassifierBiasName, d_logits);
    Matrix<T> d_hidden = Matrix<T>::Zero(cache.hidden.rows(), cache.hidden.cols());
    d_hidden.row(0) = d_logits * classifier_w_.transpose();
    Backward(cache, stack, std::move(d_hidden), *grads);
  }
  return total * inv_batch;
}

template <typename T>
T BasicEncoder<T>::MlmLoss(const TokenBatch& inputs, const TokenBatch& targets,
                           const AdapterStack& stack,
                           Gradients<T>* grads) const {
  CheckStack(stack);
  if (inputs.size() != targets.size()) {
    throw std::invalid_argument("inputs and targets must be aligned");
  }
  std::size_t masked = 0;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    if (inputs[b].size() != targets[b].size()) {
      throw std::invalid_argument("input and target lengths differ");
    }
    for (const TokenId t : targets[b]) {
      if (t >= config_.vocab_size) {
        throw std::invalid_argument("target id out of range");
      }
      if (t >= 0) ++masked;
    }
  }
  if (masked == 0) return T(0);
  const T inv_masked = T(1) / static_cast<T>(masked);
  T total = 0;
  Matrix<T> probs(1, config_.vocab_size);
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    std::vector<Eigen::Index> positions;
    for (std::size_t i = 0; i < targets[b].size(); ++i) {
      if (targets[b][i] >= 0) positions.push_back(static_cast<Eigen::Index>(i));
    }
    if (positions.empty()) continue;
    SequenceCache cache = Encode(inputs[b], stack, grads != nullptr);
    Matrix<T> d_hidden;
    if (grads != nullptr) {
      d_hidden = Matrix<T>::Zero(cache.hidden.rows(), cache.hidden.cols());
    }
    for (const Eigen::Index pos : positions) {
      const Matrix<T> logits =
          cache.hidden.row(pos) * token_embedding_.transpose() + mlm_bias_;
      const int target = targets[b][pos];
      total += CrossEntropy<T>(logits, target, probs);
      if (grads == nullptr) continue;
      Matrix<T> d_logits = probs;
      d_logits(0, target) -= T(1);
      d_logits *= inv_masked;
      AddTo(grads, kMlmBiasName, d_logits);
      d_hidden.row(pos) = d_logits * token_embedding_;
    }
    if (grads != nullptr) Backward(cache, stack, std::move(d_hidden), *grads);
  }
  return total * inv_masked;
}

template <typename T>
ParameterView<T> BasicEncoder<T>::TrainableParams(const ParamSelector& selector) {
  ParameterView<T> view;
  for (const AdapterId& id : selector.adapters) {
    AdapterModule<T>& module = adapter(id);
    for (int l = 0; l < config_.num_layers; ++l) {
      view.push_back({AdapterParamName(id, l, false), &module.layers[l].down});
      view.push_back({AdapterParamName(id, l, true), &module.layers[l].up});
    }
  }
  if (selector.mlm_head) view.push_back({kMlmBiasName, &mlm_bias_});
  if (selector.classifier) {
    view.push_back({kClassifierWeightName, &classifier_w_});
    view.push_back({kClassifierBiasName, &classifier_b_});
  }
  return view;
}

template <typename T>
Gradients<T> BasicEncoder<T>::ZeroGradients(const ParamSelector& selector) const {
  Gradients<T> grads;
  for (const AdapterId& id : selector.adapters) {
    const AdapterModule<T>& module = adapter(id);
    for (int l = 0; l < config_.num_layers; ++l) {
      grads.by_name.emplace(AdapterParamName(id, l, false),
                            Matrix<T>::Zero(module.layers[l].down.rows(),
                                            module.layers[l].down.cols()));
      grads.by_name.emplace(AdapterParamName(id, l, true),
                            Matrix<T>::Zero(module.layers[l].up.rows(),
                                            module.layers[l].up.cols()));
    }
  }
  if (selector.mlm_head) {
    grads.by_name.emplace(kMlmBiasName, Matrix<T>::Zero(1, config_.vocab_size));
  }
  if (selector.classifier) {
    grads.by_name.emplace(kClassifierWeightName,
                          Matrix<T>::Zero(config_.embed_dim, config_.num_classes));
    grads.by_name.emplace(kClassifierBiasName,
                          Matrix<T>::Zero(1, config_.num_classes));
  }
  return grads;
}

template <typename T>
void BasicEncoder<T>::VisitBackbone(
    const std::function<void(const std::string&, const Matrix<T>&)>& fn) const {
  fn("embeddings.token", token_embedding_);
  fn("embeddings.position", position_embedding_);
  fn("embeddings.ln.gain", embed_ln_gain_);
  fn("embeddings.ln.bias", embed_ln_bias_);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::string p = "layers." + std::to_string(l) + ".";
    const TransformerLayer<T>& w = layers_[l];
    fn(p + "attn.wq", w.wq);
    fn(p + "attn.wk", w.wk);
    fn(p + "attn.wv", w.wv);
    fn(p + "attn.wo", w.wo);
    fn(p + "attn.bq", w.bq);
    fn(p + "attn.bk", w.bk);
    fn(p + "attn.bv", w.bv);
    fn(p + "attn.bo", w.bo);
    fn(p + "ln1.gain", w.ln1_gain);
    fn(p + "ln1.bias", w.ln1_bias);
    fn(p + "ffn.w1", w.w1);
    fn(p + "ffn.b1", w.b1);
    fn(p + "ffn.w2", w.w2);
    fn(p + "ffn.b2", w.b2);
    fn(p + "ln2.gain", w.ln2_gain);
    fn(p + "ln2.bias", w.ln2_bias);
  }
}

template <typename T>
void BasicEncoder<T>::VisitParameters(
    const std::function<void(const std::string&, const Matrix<T>&)>& fn) const {
  VisitBackbone(fn);
  for (const auto& [id, module] : adapters_) {
    for (int l = 0; l < config_.num_layers; ++l) {
      fn(AdapterParamName(id, l, false), module.layers[l].down);
      fn(AdapterParamName(id, l, true), module.layers[l].up);
    }
  }
  fn(kMlmBiasName, mlm_bias_);
  fn(kClassifierWeightName, classifier_w_);
  fn(kClassifierBiasName, classifier_b_);
}

template <typename T>
void BasicEncoder<T>::VisitParameters(
    const std::function<void(const std::string&, Matrix<T>&)>& fn) {
  const auto& self = *this;
  self.VisitParameters([&fn](const std::string& name, const Matrix<T>& m) {
    fn(name, const_cast<Matrix<T>&>(m));
  });
}

template <typename T>
std::size_t BasicEncoder<T>::BackboneParameterCount() const {
  std::size_t count = 0;
  VisitBackbone([&count](const std::string&, const Matrix<T>& m) {
    count += static_cast<std::size_t>(m.size());
  });
  return count;
}

template <typename T>
std::size_t BasicEncoder<T>::AdapterParameterCount(const ModelConfig& config) {
  return static_cast<std::size_t>(config.num_layers) * 2 *
         static_cast<std::size_t>(config.embed_dim) *
         static_cast<std::size_t>(config.adapter_bottleneck);
}

template <typename T>
template <typename U>
BasicEncoder<U> BasicEncoder<T>::Cast() const {
  std::map<std::string, Matrix<U>> tensors;
  VisitParameters([&tensors](const std::string& name, const Matrix<T>& m) {
    tensors.emplace(name, m.template cast<U>());
  });
  return BasicEncoder<U>::FromParameters(config_, vocab_, seed_, AdapterIds(),
                                         tensors);
}

template <typename T>
BasicEncoder<T> BasicEncoder<T>::FromParameters(
    ModelConfig config, Vocabulary vocab, std::uint64_t seed,
    const std::vector<AdapterId>& adapters,
    const std::map<std::string, Matrix<T>>& tensors) {
  if (config.vocab_size != static_cast<int>(vocab.size())) {
    throw DataError("checkpoint vocabulary size does not match its config");
  }
  BasicEncoder model(config, std::move(vocab), seed);
  for (const AdapterId& id : adapters) model.RegisterAdapter(id);
  std::size_t assigned = 0;
  model.VisitParameters([&](const std::string& name, Matrix<T>& m) {
    const auto it = tensors.find(name);
    if (it == tensors.end()) throw DataError("missing tensor '" + name + "'");
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw DataError("tensor '" + name + "' has the wrong shape");
    }
    m = it->second;
    ++assigned;
  });
  if (assigned != tensors.size()) {
    throw DataError("checkpoint holds tensors the model does not define");
  }
  return model;
}

template class BasicEncoder<float>;
template class BasicEncoder<double>;
template BasicEncoder<double> BasicEncoder<float>::Cast<double>() const;
template BasicEncoder<float> BasicEncoder<double>::Cast<float>() const;
template BasicEncoder<float> BasicEncoder<float>::Cast<float>() const;
template BasicEncoder<double> BasicEncoder<double>::Cast<double>() const;
template Matrix<float> AdapterApply(const Matrix<float>&,
                                    const AdapterLayer<float>&);
template Matrix<double> AdapterApply(const Matrix<double>&,
                                     const AdapterLayer<double>&);

}  // namespace phyloadapt
