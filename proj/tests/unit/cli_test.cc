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

#include <cstdlib>
#include <sstream>

#include "phyloadapt/checkpoint.h"
#include "phyloadapt/cli.h"
#include "phyloadapt/corpus.h"
#include "phyloadapt/evaluate.h"
#include "test_support.h"

namespace phyloadapt {
namespace {

using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kRawTweets =
    "id\ttext\tlabel\n"
    "1\tRT @user Nice!!! 😊 https://t.co/x\tpositive\n"
    "2\thellooooo\tneutral\n"
    "3\t@only\tnegative\n";

TEST_CASE("preprocess writes cleaned rows and is idempotent") {
  TempDir dir;
  WriteFile(dir / "raw.tsv", kRawTweets);
  const Result r = Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "clean.tsv",
                        "--language", "ha"});
  REQUIRE(r.code == 0);
  const Dataset clean = LoadTsv(dir / "clean.tsv", true, LanguageCode::kUnknown);
  CHECK(clean.size() == 2);
  CHECK(clean[0].text == "Nice! 😊");
  CHECK(clean[1].text == "helloo");
  CHECK(clean[0].language == LanguageCode::kHa);
  CHECK(ReadFile(dir / "raw.tsv") == kRawTweets);  // input untouched

  REQUIRE(Run({"preprocess", "--in", dir / "clean.tsv", "--out", dir / "again.tsv"}).code == 0);
  CHECK(ReadFile(dir / "again.tsv") == ReadFile(dir / "clean.tsv"));

  const std::string manifest = ReadFile(dir / "clean.tsv.manifest");
  CHECK(manifest.find("command=preprocess\n") != std::string::npos);
  CHECK(manifest.find("tool_version=0.1.0\n") != std::string::npos);
  CHECK(manifest.find("collapse-char-run-to=2\n") != std::string::npos);
  CHECK(manifest.find("seed=0\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(Run({"preprocess", "--in", dir / "missing.tsv", "--out", dir / "o.tsv"}).code == 2);
  CHECK(Run({"preprocess", "--in", dir / "missing.tsv"}).code == 1);
  CHECK(Run({"preprocess", "--bogus"}).code == 1);
  CHECK(Run({}).code == 1);
  CHECK(Run({"frobnicate"}).code == 1);
  CHECK(Run({"--help"}).code == 0);
  CHECK(Run({"finetune", "--help"}).code == 0);
  WriteFile(dir / "raw.tsv", kRawTweets);
  const Result bad = Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "o.tsv",
                          "--collapse-char-run-to", "0"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error") != std::string::npos);
  WriteFile(dir / "labels.tsv", "id\ttext\tlabel\n1\thi\tmaybe\n");
  CHECK(Run({"preprocess", "--in", dir / "labels.tsv", "--out", dir / "o.tsv"}).code == 2);
}

TEST_CASE("the real binary reports the same exit codes") {
  const std::string bin = PHYLOADAPT_CLI_PATH;
  CHECK(std::system((bin + " --version > /dev/null").c_str()) == 0);
  const int status = std::system((bin + " preprocess --in /nonexistent --out /tmp/x 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("config precedence: flags over config file over defaults") {
  TempDir dir;
  WriteFile(dir / "raw.tsv", "id\ttext\tlabel\n1\thellooooo!!!!\tpositive\n");
  WriteFile(dir / "cfg.txt", "# trial settings\ncollapse-char-run-to = 3\ncollapse-punct-run-to=2\n");
  REQUIRE(Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "a.tsv", "--config",
               dir / "cfg.txt"}).code == 0);
  CHECK(LoadTsv(dir / "a.tsv", true, LanguageCode::kHa)[0].text == "hellooo!!");
  REQUIRE(Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "b.tsv", "--config",
               dir / "cfg.txt", "--collapse-char-run-to=1"}).code == 0);
  CHECK(LoadTsv(dir / "b.tsv", true, LanguageCode::kHa)[0].text == "helo!!");
  REQUIRE(Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "c.tsv"}).code == 0);
  CHECK(LoadTsv(dir / "c.tsv", true, LanguageCode::kHa)[0].text == "helloo!");

  WriteFile(dir / "broken.txt", "no equals sign\n");
  CHECK(Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "d.tsv", "--config",
             dir / "broken.txt"}).code == 1);
  WriteFile(dir / "unknown.txt", "no-such-option=1\n");
  CHECK(Run({"preprocess", "--in", dir / "raw.tsv", "--out", dir / "d.tsv", "--config",
             dir / "unknown.txt"}).code == 1);
}

TEST_CASE("compile-best writes the expected mapping") {
  TempDir dir;
  REQUIRE(Run({"compile-best", "--scores", PHYLOADAPT_TEST_DATA "/dev_scores_wide.tsv",
               "--out", dir / "best.tsv"}).code == 0);
  CHECK(ReadFile(dir / "best.tsv") ==
        "language\tvariant\n"
        "am\tClean+Dict\ndz\tClean+Dict\nha\tClean\nig\tClean+Both\nkr\tClean+Dict\n"
        "ma\tClean+Dict\npcm\tClean+Dict\npt\tClean\nsw\tClean+MT\nts\tClean+MT\n"
        "twi\tClean+Dict\nyo\tClean+MT\n");
}

TEST_CASE("augment and build-dataset") {
  TempDir dir;
  WriteFile(dir / "sst.tsv", "sentence\tscore\na good movie\t0.9\ndull\t0.2\n");
  WriteFile(dir / "dict.tsv", "english\ttranslation\ngood\tdara\n");
  REQUIRE(Run({"augment", "--mode", "dict", "--language", "yo", "--sst", dir / "sst.tsv",
               "--dict", dir / "dict.tsv", "--out", dir / "dict_aug.tsv"}).code == 0);
  const Dataset aug = LoadTsv(dir / "dict_aug.tsv", true, LanguageCode::kUnknown);
  REQUIRE(aug.size() == 2);
  CHECK(aug[0].text == "a dara movie");

  WriteFile(dir / "mt.tsv", "text\tlabel\nx\tpositive\n");
  CHECK(Run({"augment", "--mode", "mt", "--language", "twi", "--mt", dir / "mt.tsv",
             "--out", dir / "mt_aug.tsv"}).code == 2);
  CHECK(Run({"augment", "--mode", "dict", "--language", "yo", "--out", dir / "x.tsv"}).code == 1);

  WriteFile(dir / "clean.tsv",
            "id\ttext\tlabel\tlanguage\n1\tokay\tneutral\tyo\n2\tfine\tpositive\tpt\n");
  REQUIRE(Run({"build-dataset", "--clean", dir / "clean.tsv", "--dict-aug", dir / "dict_aug.tsv",
               "--variant", "Clean+Dict", "--tag", "--seed", "4", "--out",
               dir / "train.tsv"}).code == 0);
  const Dataset train = LoadTsv(dir / "train.tsv", true, LanguageCode::kUnknown);
  CHECK(train.size() == 4);
  CHECK(train.tagged());
  REQUIRE(Run({"build-dataset", "--clean", dir / "clean.tsv", "--dict-aug", dir / "dict_aug.tsv",
               "--variant", "Clean+Dict", "--tag", "--seed", "4", "--out",
               dir / "train2.tsv"}).code == 0);
  CHECK(ReadFile(dir / "train.tsv") == ReadFile(dir / "train2.tsv"));
  CHECK(Run({"build-dataset", "--clean", dir / "clean.tsv", "--variant", "Clean+MT", "--out",
             dir / "x.tsv"}).code == 1);
  CHECK(Run({"build-dataset", "--clean", dir / "clean.tsv", "--variant", "Best", "--out",
             dir / "x.tsv"}).code == 1);
}

TEST_CASE("train, predict, ensemble and evaluate; manifests replay bitwise") {
  TempDir dir;
  std::string rows = "id\ttext\tlabel\tlanguage\n";
  const char* words[3][2] = {{"bad", "awful"}, {"okay", "fine"}, {"good", "great"}};
  const char* labels[3] = {"negative", "neutral", "positive"};
  for (int i = 0; i < 60; ++i) {
    const char* lang = i % 2 ? "sw" : "ha";
    rows += std::to_string(i) + "\t[" + lang + "] we " + words[i % 3][(i / 3) % 2] +
            " day\t" + labels[i % 3] + "\t" + lang + "\n";
  }
  WriteFile(dir / "train.tsv", rows);
  const std::vector<std::string> small = {"--embed-dim", "8", "--ffn-dim", "16",
                                          "--adapter-bottleneck", "2", "--num-layers", "1",
                                          "--epochs", "2"};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.end(), small.begin(), small.end());
    return Run(args);
  };
  REQUIRE(with({"adapter-tune", "--train", dir / "train.tsv", "--out", dir / "mlm.ckpt",
                "--seed", "1"}).code == 0);
  CHECK(ReadFile(dir / "mlm.ckpt.log").find("epoch 1 step 1 loss ") == 0);
  REQUIRE(Run({"finetune", "--checkpoint", dir / "mlm.ckpt", "--train", dir / "train.tsv",
               "--stack", "FGLT", "--epochs", "2", "--out", dir / "ft.ckpt", "--seed",
               "2"}).code == 0);
  REQUIRE(Run({"finetune", "--config", dir / "ft.ckpt.manifest", "--out",
               dir / "replay.ckpt"}).code == 0);
  CHECK(ReadFile(dir / "replay.ckpt") == ReadFile(dir / "ft.ckpt"));
  CHECK(BackboneDigest(LoadCheckpoint(dir / "ft.ckpt")) ==
        BackboneDigest(LoadCheckpoint(dir / "mlm.ckpt")));

  std::vector<std::string> ensemble = {"ensemble", "--out", dir / "ens.tsv", "--seed", "3"};
  for (int s = 0; s < 5; ++s) {
    const std::string p = dir / ("p" + std::to_string(s) + ".tsv");
    REQUIRE(Run({"predict", "--checkpoint", dir / "ft.ckpt", "--input", dir / "train.tsv",
                 "--stack", "FGLT", "--out", p}).code == 0);
    ensemble.insert(ensemble.end(), {"--pred", p});
  }
  REQUIRE(Run(ensemble).code == 0);
  CHECK(LoadPredictions(dir / "ens.tsv").ids.size() == 60);

  const Result ev = Run({"evaluate", "--gold", dir / "train.tsv", "--pred", dir / "ens.tsv",
                         "--track", "mixed", "--out", dir / "report.tsv"});
  REQUIRE(ev.code == 0);
  CHECK(ReadFile(dir / "report.tsv").find("mixed\tweighted_f1") != std::string::npos);

  WriteFile(dir / "short.tsv", "id\tlabel\n0\tpositive\n");
  CHECK(Run({"ensemble", "--pred", dir / "ens.tsv", "--pred", dir / "short.tsv", "--out",
             dir / "x.tsv"}).code == 2);
  CHECK(Run({"evaluate", "--gold", dir / "train.tsv", "--pred", dir / "short.tsv", "--out",
             dir / "x.tsv"}).code == 2);
  CHECK(Run({"predict", "--checkpoint", dir / "train.tsv", "--input", dir / "train.tsv",
             "--out", dir / "x.tsv"}).code == 2);
}

TEST_CASE("key=value files") {
  TempDir dir;
  WriteFile(dir / "kv.txt", "a=1\n# comment\n\nb = two words \na=3\n");
  const auto kv = cli::ReadKeyValueFile(dir / "kv.txt");
  CHECK(kv.count("a") == 2);
  CHECK(kv.find("b")->second == "two words");
}

}  // namespace
}  // namespace phyloadapt
