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

#include "model_checks.h"
#include "phyloadapt/checkpoint.h"
#include "phyloadapt/model.h"
#include "phyloadapt/vocab.h"
#include "test_support.h"

namespace phyloadapt {
namespace {

using L = LanguageCode;

ModelConfig SmallConfig(const Vocabulary& vocab) {
  ModelConfig cfg;
  cfg.vocab_size = static_cast<int>(vocab.size());
  cfg.embed_dim = 16;
  cfg.num_layers = 2;
  cfg.num_heads = 2;
  cfg.ffn_dim = 32;
  cfg.adapter_bottleneck = 4;
  cfg.max_seq_len = 32;
  return cfg;
}

AdapterStack Stack(L lang, StackConfig cfg) {
  return ResolveStack(PhylogenyTree::Default(), lang, cfg);
}

TEST_CASE("build_vocab") {
  const Dataset ab({{"1", "a b", std::nullopt, L::kAm}, {"2", "a", std::nullopt, L::kAm}},
                   DatasetVariant::kClean, false);
  const Vocabulary v1 = BuildVocab({ab}, 1);
  CHECK(v1.Lookup("a") != Vocabulary::kUnk);
  CHECK(v1.Lookup("b") != Vocabulary::kUnk);
  CHECK(v1.size() == Vocabulary::kFirstRegular + 2u);
  const Vocabulary v2 = BuildVocab({ab}, 2);
  CHECK(v2.Lookup("a") != Vocabulary::kUnk);
  CHECK(v2.Lookup("b") == Vocabulary::kUnk);
  CHECK_THROWS_AS(BuildVocab({}, 1), DataError);
  CHECK_THROWS_AS(BuildVocab({Dataset()}, 1), DataError);

  const Vocabulary tagged = BuildVocab({TagDataset(ab)}, 1);
  CHECK(tagged.Lookup("[am]") == Vocabulary::TagId(L::kAm));
  CHECK(tagged.RegularWords() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("encode") {
  const Vocabulary vocab(std::vector<std::string>{"good"});
  CHECK(vocab.Encode("", 128) == std::vector<TokenId>{Vocabulary::kCls});
  CHECK(vocab.Encode("[am] x", 128) ==
        std::vector<TokenId>{Vocabulary::kCls, Vocabulary::TagId(L::kAm), Vocabulary::kUnk});
  CHECK(vocab.Encode("[MASK] good", 128)[1] == Vocabulary::kUnk);
  std::string long_text;
  for (int i = 0; i < 200; ++i) long_text += "good ";
  CHECK(vocab.Encode(long_text, 128).size() == 128);
}

TEST_CASE("adapter arithmetic") {
  AdapterLayer<double> a;
  a.down = Matrix<double>::Zero(2, 1);
  a.up = Matrix<double>::Zero(1, 2);
  Matrix<double> h(1, 2);
  h << 1, 2;
  CHECK(AdapterApply(h, a) == h);
  a.down << 2, 1;
  a.up << 0.5, -1;
  Matrix<double> expected(1, 2);
  expected << 3, -2;  // relu(1*2 + 2*1) = 4; h + 4 * [0.5, -1]
  CHECK(AdapterApply(h, a) == expected);
  a.down << -2, -1;  // relu clips the bottleneck to zero
  CHECK(AdapterApply(h, a) == h);
}

TEST_CASE("adapters are identities at initialization") {
  const Vocabulary vocab = testing::SmallVocab(30);
  EncoderModel model(SmallConfig(vocab), vocab, 3);
  const AdapterStack fglt = Stack(L::kYo, StackConfig::kFGLT);
  const AdapterStack t = Stack(L::kYo, StackConfig::kT);
  testing::RegisterStack(model, fglt);
  for (const AdapterId& id : fglt) {
    for (const auto& layer : model.adapter(id).layers) CHECK(layer.up.isZero(0));
  }
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const TokenBatch batch = testing::RandomBatch(rng, model.config().vocab_size, 4, 12);
    CHECK(model.ForwardClassify(batch, fglt) == model.ForwardClassify(batch, t));
    CHECK(model.ForwardMlm(batch, fglt) == model.ForwardMlm(batch, t));
  }
}

TEST_CASE("adapters off the active stack never change the output") {
  const Vocabulary vocab = testing::SmallVocab(30);
  EncoderModel model(SmallConfig(vocab), vocab, 3);
  const AdapterStack am = Stack(L::kAm, StackConfig::kFGLT);
  const AdapterStack sw = Stack(L::kSw, StackConfig::kFGLT);
  testing::RegisterStack(model, am);
  testing::RegisterStack(model, sw);
  Rng rng(5);
  testing::PerturbAdapters(model, am, rng, 0.3);
  const TokenBatch batch = testing::RandomBatch(rng, model.config().vocab_size, 5, 10);
  const Matrix<float> before = model.ForwardClassify(batch, am);
  testing::PerturbAdapters(model, {sw[0], sw[1], sw[2]}, rng, 5.0);
  CHECK(model.ForwardClassify(batch, am) == before);
  CHECK(model.ForwardClassify(batch, sw) != before);
}

TEST_CASE("stack order matters once adapters are non-trivial") {
  const Vocabulary vocab = testing::SmallVocab(30);
  EncoderModel model(SmallConfig(vocab), vocab, 8);
  AdapterStack stack = Stack(L::kIg, StackConfig::kGLT);
  testing::RegisterStack(model, stack);
  Rng rng(2);
  testing::PerturbAdapters(model, stack, rng, 0.5);
  const TokenBatch batch = testing::RandomBatch(rng, model.config().vocab_size, 3, 8);
  const Matrix<float> forward = model.ForwardClassify(batch, stack);
  std::reverse(stack.begin(), stack.end());
  CHECK(model.ForwardClassify(batch, stack) != forward);
}

TEST_CASE("forward is deterministic and softmax rows sum to one") {
  const Vocabulary vocab = testing::SmallVocab(30);
  const EncoderModel a(SmallConfig(vocab), vocab, 42);
  const EncoderModel b(SmallConfig(vocab), vocab, 42);
  const EncoderModel c(SmallConfig(vocab), vocab, 43);
  Rng rng(9);
  const TokenBatch batch = testing::RandomBatch(rng, a.config().vocab_size, 6, 20);
  const AdapterStack none;
  const Matrix<float> logits = a.ForwardClassify(batch, none);
  CHECK(logits == b.ForwardClassify(batch, none));
  CHECK(logits != c.ForwardClassify(batch, none));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const Matrix<double> row = logits.row(r).cast<double>();
    const double m = row.maxCoeff();
    const double z = (row.array() - m).exp().sum();
    CHECK(((row.array() - m).exp() / z).sum() == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS(a.ForwardClassify(batch, Stack(L::kAm, StackConfig::kT)));  // unregistered
}

TEST_CASE("parameter selection") {
  const Vocabulary vocab = testing::SmallVocab(10);
  EncoderModel model(SmallConfig(vocab), vocab, 1);
  const AdapterStack fglt = Stack(L::kKr, StackConfig::kFGLT);
  testing::RegisterStack(model, fglt);
  CHECK(model.TrainableParams({}).empty());

  ParamSelector task;
  task.adapters = {fglt.back()};
  for (const auto& p : model.TrainableParams(task)) {
    CHECK(p.name.rfind("adapters.task:sentiment.", 0) == 0);
  }

  ParamSelector all;
  all.adapters = {fglt.begin(), fglt.end()};
  std::size_t count = 0;
  for (const auto& p : model.TrainableParams(all)) count += p.value->size();
  CHECK(count == fglt.size() * EncoderModel::AdapterParameterCount(model.config()));
  CHECK(EncoderModel::AdapterParameterCount(model.config()) ==
        2u * 2 * 16 * 4);  // layers x (down + up) x embed x bottleneck
}

TEST_CASE("analytic gradients agree with finite differences") {
  for (const std::uint64_t seed : {1u, 2u, 13u}) {
    const testing::GradientCheckResult r = testing::CheckGradients(seed);
    INFO("worst: ", r.worst_param, " rel ", r.max_rel_error, " small abs ",
         r.max_small_abs_error);
    CHECK(r.checked > 100);
    CHECK(r.below_floor < r.checked / 2);
    CHECK(r.Passed());
  }
}

TEST_CASE("checkpoints reload bitwise") {
  const Vocabulary vocab = testing::SmallVocab(25);
  EncoderModel model(SmallConfig(vocab), vocab, 77);
  const AdapterStack stack = Stack(L::kTs, StackConfig::kFGLT);
  testing::RegisterStack(model, stack);
  Rng rng(4);
  testing::PerturbAdapters(model, stack, rng, 0.2);

  std::stringstream buffer;
  WriteCheckpoint(buffer, model);
  const std::string bytes = buffer.str();
  const EncoderModel back = ReadCheckpoint(buffer);
  CHECK(back.config() == model.config());
  CHECK(back.vocab() == model.vocab());
  CHECK(back.AdapterIds() == model.AdapterIds());
  const TokenBatch batch = testing::RandomBatch(rng, model.config().vocab_size, 4, 10);
  CHECK(back.ForwardClassify(batch, stack) == model.ForwardClassify(batch, stack));
  CHECK(BackboneDigest(back) == BackboneDigest(model));
  std::stringstream again;
  WriteCheckpoint(again, back);
  CHECK(again.str() == bytes);

  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(ReadCheckpoint(truncated), DataError);
  std::istringstream garbage("not a checkpoint at all");
  CHECK_THROWS_AS(ReadCheckpoint(garbage), DataError);
}

TEST_CASE("sha256 matches a known digest") {
  CHECK(Sha256Hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("float and double models agree after casting") {
  const Vocabulary vocab = testing::SmallVocab(10);
  const EncoderModel model(SmallConfig(vocab), vocab, 5);
  const EncoderModel64 wide = model.Cast<double>();
  Rng rng(6);
  const TokenBatch batch = testing::RandomBatch(rng, model.config().vocab_size, 2, 6);
  const Matrix<double> diff =
      wide.ForwardClassify(batch, {}) - model.ForwardClassify(batch, {}).cast<double>();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("model config validation") {
  ModelConfig cfg;
  cfg.vocab_size = 30;
  cfg.num_heads = 3;  // 64 is not divisible by 3
  CHECK_THROWS(cfg.Validate());
}

}  // namespace
}  // namespace phyloadapt
