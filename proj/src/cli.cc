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

#include "phyloadapt/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "phyloadapt/augment.h"
#include "phyloadapt/checkpoint.h"
#include "phyloadapt/corpus.h"
#include "phyloadapt/evaluate.h"
#include "phyloadapt/phylogeny.h"
#include "phyloadapt/preprocess.h"
#include "phyloadapt/random.h"
#include "phyloadapt/train.h"
#include "phyloadapt/vocab.h"

namespace phyloadapt::cli {
namespace {

// Keys a manifest carries that are not options.
const std::set<std::string> kMetadataKeys = {"command", "tool_version"};

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string config;
  std::string manifest;
};

struct ColumnOptions {
  std::string id = "id";
  std::string text = "text";
  std::string label = "label";

  TsvColumns ToColumns() const {
    TsvColumns c;
    c.id = id;
    c.text = text;
    c.label = label;
    return c;
  }
};

struct ModelOptions {
  int embed_dim = 64;
  int num_layers = 2;
  int num_heads = 2;
  int ffn_dim = 128;
  int adapter_bottleneck = 16;
  int max_seq_len = 128;
  int min_freq = 1;

  ModelConfig ToConfig() const {
    ModelConfig c;
    c.embed_dim = embed_dim;
    c.num_layers = num_layers;
    c.num_heads = num_heads;
    c.ffn_dim = ffn_dim;
    c.adapter_bottleneck = adapter_bottleneck;
    c.max_seq_len = max_seq_len;
    return c;
  }
};

struct TrainOptions {
  double learning_rate = 1e-4;
  int epochs = 5;
  int batch_size = 32;
  double mask_ratio = 0.15;
  std::string log;

  TrainConfig ToConfig(std::uint64_t seed) const {
    TrainConfig c;
    c.learning_rate = learning_rate;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.mask_ratio = mask_ratio;
    c.seed = seed;
    return c;
  }
};

void AddCommon(CLI::App* app, CommonOptions& o) {
  app->add_option("--seed", o.seed, "Seed for every random choice");
  app->add_option("--config", o.config,
                  "Flat key=value file; command-line flags take precedence");
  app->add_option("--manifest", o.manifest,
                  "Run manifest path (default: <output>.manifest)");
}

void AddColumns(CLI::App* app, ColumnOptions& o) {
  app->add_option("--id-column", o.id, "Name of the id column");
  app->add_option("--text-column", o.text, "Name of the text column");
  app->add_option("--label-column", o.label, "Name of the label column");
}

void AddModel(CLI::App* app, ModelOptions& o) {
  app->add_option("--embed-dim", o.embed_dim);
  app->add_option("--num-layers", o.num_layers);
  app->add_option("--num-heads", o.num_heads);
  app->add_option("--ffn-dim", o.ffn_dim);
  app->add_option("--adapter-bottleneck", o.adapter_bottleneck);
  app->add_option("--max-seq-len", o.max_seq_len);
  app->add_option("--min-freq", o.min_freq, "Minimum word frequency for the vocabulary");
}

void AddTrain(CLI::App* app, TrainOptions& o) {
  app->add_option("--lr", o.learning_rate, "Adam learning rate");
  app->add_option("--epochs", o.epochs);
  app->add_option("--batch-size", o.batch_size);
  app->add_option("--mask-ratio", o.mask_ratio);
  app->add_option("--log", o.log, "Training log path (default: <output>.log)");
}

bool HasLabelColumn(const std::string& path, const ColumnOptions& columns) {
  return ReadTsvFile(path).ColumnIndex(columns.label).has_value();
}

Dataset LoadAny(const std::string& path, LanguageCode language,
                const ColumnOptions& columns) {
  return LoadTsv(path, HasLabelColumn(path, columns), language,
                 columns.ToColumns());
}

std::map<LanguageCode, std::vector<Example>> GroupByLanguage(
    const std::vector<std::string>& paths, LanguageCode language,
    const ColumnOptions& columns) {
  std::map<LanguageCode, std::vector<Example>> groups;
  for (const std::string& path : paths) {
    const Dataset ds = LoadAny(path, language, columns);
    if (ds.tagged()) {
      throw DataError("'" + path + "' is already tagged; build from untagged data");
    }
    for (const Example& ex : ds.examples()) groups[ex.language].push_back(ex);
  }
  return groups;
}

Dataset Concat(const std::vector<std::string>& paths, LanguageCode language,
               const ColumnOptions& columns) {
  std::vector<Example> all;
  std::optional<bool> tagged;
  for (const std::string& path : paths) {
    const Dataset ds = LoadAny(path, language, columns);
    if (tagged && *tagged != ds.tagged() && !ds.empty()) {
      throw DataError("cannot mix tagged and untagged inputs");
    }
    if (!ds.empty()) tagged = ds.tagged();
    all.insert(all.end(), ds.examples().begin(), ds.examples().end());
  }
  return Dataset(std::move(all), DatasetVariant::kClean, tagged.value_or(false));
}

PhylogenyTree TreeFrom(const std::string& path) {
  return path.empty() ? PhylogenyTree::Default() : LoadTree(path);
}

std::ofstream OpenLog(const std::string& path) {
  std::ofstream log(path, std::ios::trunc);
  if (!log) throw DataError("cannot open log '" + path + "'");
  return log;
}

// The richest variant not exceeding `wanted` that the language's available
// augmentation sets allow (e.g. Clean+Both for a language without MT data
// becomes Clean+Dict).
DatasetVariant Available(DatasetVariant wanted, bool has_dict, bool has_mt) {
  switch (wanted) {
    case DatasetVariant::kCleanPlusDict:
      return has_dict ? wanted : DatasetVariant::kClean;
    case DatasetVariant::kCleanPlusMT:
      return has_mt ? wanted : DatasetVariant::kClean;
    case DatasetVariant::kCleanPlusBoth:
      if (has_dict && has_mt) return wanted;
      if (has_dict) return DatasetVariant::kCleanPlusDict;
      return has_mt ? DatasetVariant::kCleanPlusMT : DatasetVariant::kClean;
    default:
      return wanted;
  }
}

// Writes every option of `app` (except --config) in the key=value format
// --config reads, so a manifest can replay its run.
void WriteManifest(const std::string& path, const CLI::App* app) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest '" + path + "'");
  out << "# phyloadapt run manifest\n";
  out << "command=" << app->get_name() << '\n';
  out << "tool_version=" << kToolVersion << '\n';
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->results();
    } else if (const std::string d = opt->get_default_str();
               !d.empty() && d != "{}" && d != "[]") {
      values = {d};
    } else if (opt->get_expected_max() == 0) {
      values = {"false"};  // flag left unset
    }
    for (const std::string& v : values) out << name << '=' << v << '\n';
  }
}

// Appends "--key=value" for config keys the command line leaves unset.
std::vector<std::string> ApplyConfig(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;
  const auto given = [&args](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
  };
  std::vector<std::string> injected;
  for (const auto& [key, value] : ReadKeyValueFile(config_path)) {
    if (kMetadataKeys.contains(key) || key == "config" || given(key)) continue;
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.end(), injected.begin(), injected.end());
  return args;
}

}  // namespace

std::multimap<std::string, std::string> ReadKeyValueFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::multimap<std::string, std::string> values;
  std::string line;
  int line_number = 0;
  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DataError(path + ": line " + std::to_string(line_number) +
                      ": expected key=value");
    }
    values.emplace(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return values;
}

int Run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Phylogeny-routed adapter training for low-resource sentiment "
               "classification",
               "phyloadapt");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.option_defaults()->always_capture_default();

  CommonOptions common;
  ColumnOptions columns;
  ModelOptions model_opts;
  TrainOptions train_opts;
  std::string language_name = "unknown";
  std::string primary_output;
  std::function<void()> action;

  // preprocess
  std::string pp_in, pp_out;
  CleanConfig clean_cfg;
  bool keep_rt = false;
  auto* preprocess = app.add_subcommand("preprocess", "Clean tweet text");
  preprocess->add_option("--in", pp_in, "Input TSV")->required();
  preprocess->add_option("--out", pp_out, "Output TSV")->required();
  preprocess->add_option("--language", language_name,
                         "Language of rows without a language column");
  preprocess->add_option("--collapse-char-run-to", clean_cfg.collapse_char_run_to);
  preprocess->add_option("--collapse-punct-run-to", clean_cfg.collapse_punct_run_to);
  preprocess->add_flag("--keep-rt", keep_rt, "Keep standalone RT tokens");
  AddColumns(preprocess, columns);
  AddCommon(preprocess, common);
  preprocess->callback([&] {
    primary_output = pp_out;
    action = [&] {
      clean_cfg.remove_rt = !keep_rt;
      clean_cfg.Validate();
      const Dataset ds = LoadAny(pp_in, ParseLanguage(language_name), columns);
      const Dataset cleaned = CleanDataset(ds, clean_cfg);
      SaveTsv(pp_out, cleaned, columns.ToColumns());
      out << "preprocess: " << ds.size() << " rows in, " << cleaned.size()
          << " rows out\n";
    };
  });

  // augment
  std::string aug_mode, aug_sst, aug_dict, aug_mt, aug_out;
  AugmentConfig aug_cfg;
  auto* augment = app.add_subcommand("augment", "Build an augmentation set");
  augment->add_option("--mode", aug_mode, "dict or mt")
      ->required()
      ->check(CLI::IsMember({"dict", "mt"}));
  augment->add_option("--language", language_name, "Target language")->required();
  augment->add_option("--sst", aug_sst, "Scored English sentences (sentence, score)");
  augment->add_option("--dict", aug_dict, "Bilingual dictionary (english, translation)");
  augment->add_option("--mt", aug_mt, "Pre-translated sentences (text, label)");
  augment->add_option("--neg-threshold", aug_cfg.neg_threshold);
  augment->add_option("--pos-threshold", aug_cfg.pos_threshold);
  augment->add_option("--out", aug_out, "Output TSV")->required();
  AddCommon(augment, common);
  augment->callback([&] {
    primary_output = aug_out;
    action = [&] {
      const LanguageCode lang = ParseLanguage(language_name);
      Dataset ds;
      if (aug_mode == "dict") {
        if (aug_sst.empty() || aug_dict.empty()) {
          throw std::invalid_argument("--mode dict needs --sst and --dict");
        }
        aug_cfg.Validate();
        ds = BuildDictAugmented(LoadScoredSentences(aug_sst),
                                LoadDictionary(aug_dict, lang), aug_cfg);
      } else {
        if (aug_mt.empty()) throw std::invalid_argument("--mode mt needs --mt");
        ds = LoadMtAugmented(aug_mt, lang);
      }
      SaveTsv(aug_out, ds);
      out << "augment: " << ds.size() << " examples\n";
    };
  });

  // build-dataset
  std::vector<std::string> bd_clean, bd_dict, bd_mt;
  std::string bd_variant = "Clean", bd_best_map, bd_out;
  bool bd_tag = false;
  auto* build = app.add_subcommand("build-dataset",
                                   "Merge clean and augmented data into a variant");
  build->add_option("--clean", bd_clean, "Clean TSV (repeatable)")->required();
  build->add_option("--dict-aug", bd_dict, "Dictionary-augmented TSV (repeatable)");
  build->add_option("--mt-aug", bd_mt, "MT-augmented TSV (repeatable)");
  build->add_option("--variant", bd_variant,
                    "Clean, Clean+Dict, Clean+MT, Clean+Both or Best");
  build->add_option("--best-map", bd_best_map, "Language-to-variant TSV for Best");
  build->add_option("--language", language_name,
                    "Language of rows without a language column");
  build->add_flag("--tag", bd_tag, "Prefix each text with its language tag");
  build->add_option("--out", bd_out, "Output TSV")->required();
  AddColumns(build, columns);
  AddCommon(build, common);
  build->callback([&] {
    primary_output = bd_out;
    action = [&] {
      const LanguageCode lang = ParseLanguage(language_name);
      const DatasetVariant variant = ParseVariant(bd_variant);
      BestMapping best;
      if (variant == DatasetVariant::kBest) {
        if (bd_best_map.empty()) {
          throw std::invalid_argument("--variant Best needs --best-map");
        }
        std::ifstream in(bd_best_map);
        if (!in) throw DataError("cannot open '" + bd_best_map + "'");
        best = ReadBestMapping(in, bd_best_map);
      }
      auto clean = GroupByLanguage(bd_clean, lang, columns);
      auto dict = GroupByLanguage(bd_dict, lang, columns);
      auto mt = GroupByLanguage(bd_mt, lang, columns);
      const auto part_of = [](auto& groups, LanguageCode l) {
        const auto it = groups.find(l);
        return it == groups.end()
                   ? std::optional<Dataset>()
                   : std::optional<Dataset>(
                         Dataset(it->second, DatasetVariant::kClean, false));
      };
      if (variant != DatasetVariant::kBest) {
        const bool wants_dict = variant == DatasetVariant::kCleanPlusDict ||
                                variant == DatasetVariant::kCleanPlusBoth;
        const bool wants_mt = variant == DatasetVariant::kCleanPlusMT ||
                              variant == DatasetVariant::kCleanPlusBoth;
        if (wants_dict && dict.empty()) {
          throw std::invalid_argument(std::string(VariantName(variant)) + " needs --dict-aug");
        }
        if (wants_mt && mt.empty()) {
          throw std::invalid_argument(std::string(VariantName(variant)) + " needs --mt-aug");
        }
      }
      std::vector<Dataset> parts;
      for (auto& [l, examples] : clean) {
        DatasetVariant chosen = Available(variant, dict.contains(l), mt.contains(l));
        if (variant == DatasetVariant::kBest) {
          const auto it = best.find(l);
          if (it == best.end()) {
            throw DataError("best mapping has no entry for '" +
                            std::string(LanguageName(l)) + "'");
          }
          chosen = it->second;
        }
        parts.push_back(BuildVariant(Dataset(examples, DatasetVariant::kClean, false),
                                     part_of(dict, l), part_of(mt, l), chosen,
                                     DeriveSeed(common.seed, static_cast<std::uint64_t>(l))));
      }
      Dataset merged = ConcatShuffle(parts, common.seed).WithVariant(variant);
      if (bd_tag) merged = TagDataset(merged);
      SaveTsv(bd_out, merged, columns.ToColumns());
      out << "build-dataset: " << merged.size() << " examples ("
          << VariantName(variant) << (bd_tag ? ", tagged" : "") << ")\n";
    };
  });

  // compile-best
  std::string cb_scores, cb_out;
  auto* compile = app.add_subcommand(
      "compile-best", "Pick the best variant per language from dev scores");
  compile->add_option("--scores", cb_scores, "Dev score TSV")->required();
  compile->add_option("--out", cb_out, "Output mapping TSV")->required();
  AddCommon(compile, common);
  compile->callback([&] {
    primary_output = cb_out;
    action = [&] {
      const BestMapping mapping = CompileBest(LoadDevScores(cb_scores));
      std::ofstream file(cb_out, std::ios::binary | std::ios::trunc);
      if (!file) throw DataError("cannot open '" + cb_out + "' for writing");
      WriteBestMapping(file, mapping);
      out << "compile-best: " << mapping.size() << " languages\n";
    };
  });

  // adapter-tune
  std::vector<std::string> at_train, at_vocab_from;
  std::string at_init, at_out, at_tree;
  auto* adapter_tune = app.add_subcommand(
      "adapter-tune", "Train phylogeny adapters with masked language modeling");
  adapter_tune->add_option("--train", at_train, "Training TSV (repeatable)")->required();
  adapter_tune->add_option("--vocab-from", at_vocab_from,
                           "Extra TSVs contributing vocabulary (repeatable)");
  adapter_tune->add_option("--init", at_init, "Start from this checkpoint");
  adapter_tune->add_option("--tree", at_tree, "Phylogeny TSV (family, genus, language)");
  adapter_tune->add_option("--language", language_name,
                           "Language of rows without a language column");
  adapter_tune->add_option("--out", at_out, "Output checkpoint")->required();
  AddModel(adapter_tune, model_opts);
  AddTrain(adapter_tune, train_opts);
  AddColumns(adapter_tune, columns);
  AddCommon(adapter_tune, common);
  adapter_tune->callback([&] {
    primary_output = at_out;
    action = [&] {
      const LanguageCode lang = ParseLanguage(language_name);
      const PhylogenyTree tree = TreeFrom(at_tree);
      const Dataset train = Concat(at_train, lang, columns);
      std::map<LanguageCode, std::vector<Example>> grouped;
      for (const Example& ex : train.examples()) grouped[ex.language].push_back(ex);
      std::map<LanguageCode, Dataset> corpora;
      for (auto& [l, examples] : grouped) {
        corpora.emplace(l, Dataset(std::move(examples), DatasetVariant::kClean,
                                   train.tagged()));
      }
      EncoderModel model = [&] {
        if (!at_init.empty()) return LoadCheckpoint(at_init);
        std::vector<Dataset> corpus = {train};
        if (!at_vocab_from.empty()) corpus.push_back(Concat(at_vocab_from, lang, columns));
        return EncoderModel(model_opts.ToConfig(),
                            BuildVocab(corpus, model_opts.min_freq), common.seed);
      }();
      std::ofstream log = OpenLog(train_opts.log.empty() ? at_out + ".log" : train_opts.log);
      TrainHooks hooks;
      hooks.log = &log;
      const TrainReport report = MlmAdapterTune(
          model, corpora, tree, train_opts.ToConfig(common.seed), hooks);
      SaveCheckpoint(at_out, model);
      out << "adapter-tune: " << report.steps << " steps, final epoch loss "
          << report.epoch_losses.back() << ", " << report.seconds << " s\n";
    };
  });

  // finetune
  std::string ft_checkpoint, ft_train, ft_out, ft_stack = "T", ft_task = "sentiment",
                                          ft_tree;
  auto* finetune = app.add_subcommand(
      "finetune", "Train the task adapter and classifier with the backbone frozen");
  finetune->add_option("--checkpoint", ft_checkpoint,
                       "Input checkpoint (default: a fresh model)");
  finetune->add_option("--train", ft_train, "Labeled training TSV")->required();
  finetune->add_option("--stack", ft_stack, "T, LT, GLT or FGLT");
  finetune->add_option("--task-id", ft_task, "Task adapter name");
  finetune->add_option("--tree", ft_tree, "Phylogeny TSV");
  finetune->add_option("--language", language_name,
                       "Language of rows without a language column");
  finetune->add_option("--out", ft_out, "Output checkpoint")->required();
  AddModel(finetune, model_opts);
  AddTrain(finetune, train_opts);
  AddColumns(finetune, columns);
  AddCommon(finetune, common);
  finetune->callback([&] {
    primary_output = ft_out;
    action = [&] {
      const LanguageCode lang = ParseLanguage(language_name);
      const StackConfig stack_cfg = ParseStackConfig(ft_stack);
      const Dataset train = LoadTsv(ft_train, true, lang, columns.ToColumns());
      EncoderModel model =
          ft_checkpoint.empty()
              ? EncoderModel(model_opts.ToConfig(),
                             BuildVocab({train}, model_opts.min_freq), common.seed)
              : LoadCheckpoint(ft_checkpoint);
      std::ofstream log = OpenLog(train_opts.log.empty() ? ft_out + ".log" : train_opts.log);
      TrainHooks hooks;
      hooks.log = &log;
      const TrainConfig cfg = train_opts.ToConfig(common.seed);
      const TrainReport report =
          stack_cfg == StackConfig::kT
              ? FinetuneTask(model, train,
                             ResolveStack(TreeFrom(ft_tree), LanguageCode::kUnknown,
                                          StackConfig::kT, ft_task),
                             cfg, hooks)
              : FinetuneRouted(model, train, TreeFrom(ft_tree), stack_cfg, cfg,
                               ft_task, hooks);
      SaveCheckpoint(ft_out, model);
      out << "finetune: " << report.steps << " steps, final epoch loss "
          << report.epoch_losses.back() << ", " << report.seconds << " s\n";
    };
  });

  // predict
  std::string pr_checkpoint, pr_input, pr_out, pr_stack = "T", pr_task = "sentiment",
                                               pr_tree;
  auto* predict = app.add_subcommand("predict", "Label a dataset");
  predict->add_option("--checkpoint", pr_checkpoint, "Trained checkpoint")->required();
  predict->add_option("--input", pr_input, "Input TSV")->required();
  predict->add_option("--stack", pr_stack, "T, LT, GLT or FGLT");
  predict->add_option("--task-id", pr_task, "Task adapter name");
  predict->add_option("--tree", pr_tree, "Phylogeny TSV");
  predict->add_option("--language", language_name,
                      "Language of rows without a language column");
  predict->add_option("--out", pr_out, "Output predictions TSV (id, label)")->required();
  AddColumns(predict, columns);
  AddCommon(predict, common);
  predict->callback([&] {
    primary_output = pr_out;
    action = [&] {
      const EncoderModel model = LoadCheckpoint(pr_checkpoint);
      const Dataset ds = LoadAny(pr_input, ParseLanguage(language_name), columns);
      const StackConfig stack_cfg = ParseStackConfig(pr_stack);
      Predictions preds;
      preds.labels =
          stack_cfg == StackConfig::kT
              ? Predict(model, ds,
                        ResolveStack(TreeFrom(pr_tree), LanguageCode::kUnknown,
                                     StackConfig::kT, pr_task))
              : PredictRouted(model, ds, TreeFrom(pr_tree), stack_cfg, pr_task);
      for (const Example& ex : ds.examples()) preds.ids.push_back(ex.id);
      SavePredictions(pr_out, preds);
      out << "predict: " << preds.ids.size() << " predictions\n";
    };
  });

  // ensemble
  std::vector<std::string> en_preds;
  std::string en_out;
  auto* ensemble = app.add_subcommand("ensemble", "Majority-vote prediction files");
  ensemble->add_option("--pred", en_preds, "Prediction TSV (repeatable)")->required();
  ensemble->add_option("--out", en_out, "Output predictions TSV")->required();
  AddCommon(ensemble, common);
  ensemble->callback([&] {
    primary_output = en_out;
    action = [&] {
      std::vector<PredictionSet> sets;
      std::vector<std::string> ids;
      for (const std::string& path : en_preds) {
        Predictions p = LoadPredictions(path);
        if (sets.empty()) {
          ids = p.ids;
        } else if (p.ids != ids) {
          throw DataError("'" + path + "' does not list the same ids in the same order");
        }
        sets.push_back({path, std::move(p.labels)});
      }
      Predictions result;
      result.ids = ids;
      result.labels = MajorityVote(sets, common.seed);
      SavePredictions(en_out, result);
      out << "ensemble: " << sets.size() << " models, " << ids.size()
          << " predictions\n";
    };
  });

  // evaluate
  std::vector<std::string> ev_gold, ev_pred, ev_tracks;
  std::string ev_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions with weighted F1");
  evaluate->add_option("--gold", ev_gold, "Labeled TSV (repeatable)")->required();
  evaluate->add_option("--pred", ev_pred, "Prediction TSV, one per --gold")->required();
  evaluate->add_option("--track", ev_tracks, "Track names, one per --gold");
  evaluate->add_option("--language", language_name,
                       "Language of rows without a language column");
  evaluate->add_option("--out", ev_out, "Report TSV")->required();
  AddColumns(evaluate, columns);
  AddCommon(evaluate, common);
  evaluate->callback([&] {
    primary_output = ev_out;
    action = [&] {
      if (ev_gold.size() != ev_pred.size()) {
        throw std::invalid_argument("--gold and --pred must be given equally often");
      }
      if (!ev_tracks.empty() && ev_tracks.size() != ev_gold.size()) {
        throw std::invalid_argument("--track must be given once per --gold");
      }
      std::vector<TrackResult> tracks;
      for (std::size_t t = 0; t < ev_gold.size(); ++t) {
        const Dataset gold =
            LoadTsv(ev_gold[t], true, ParseLanguage(language_name), columns.ToColumns());
        const Predictions pred = LoadPredictions(ev_pred[t]);
        std::map<std::string, SentimentLabel> by_id;
        for (std::size_t i = 0; i < pred.ids.size(); ++i) {
          if (!by_id.emplace(pred.ids[i], pred.labels[i]).second) {
            throw DataError("'" + ev_pred[t] + "' repeats id '" + pred.ids[i] + "'");
          }
        }
        if (by_id.size() != gold.size()) {
          throw DataError("'" + ev_pred[t] + "' has " + std::to_string(by_id.size()) +
                          " predictions for " + std::to_string(gold.size()) +
                          " gold examples");
        }
        std::vector<SentimentLabel> g, p;
        for (const Example& ex : gold.examples()) {
          const auto it = by_id.find(ex.id);
          if (it == by_id.end()) {
            throw DataError("no prediction for id '" + ex.id + "'");
          }
          g.push_back(*ex.label);
          p.push_back(it->second);
        }
        const std::string name = ev_tracks.empty()
                                     ? std::filesystem::path(ev_gold[t]).stem().string()
                                     : ev_tracks[t];
        tracks.push_back({name, WeightedF1(g, p)});
        out << "evaluate: " << name << " weighted F1 "
            << RenderFixed(tracks.back().report.weighted_f1, 1) << '\n';
      }
      std::ofstream file(ev_out, std::ios::binary | std::ios::trunc);
      if (!file) throw DataError("cannot open '" + ev_out + "' for writing");
      WriteReport(file, tracks);
    };
  });

  std::vector<std::string> args;
  try {
    args = ApplyConfig(raw_args);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* selected = app.get_subcommands().front();
  try {
    action();
    WriteManifest(common.manifest.empty() ? primary_output + ".manifest"
                                          : common.manifest,
                  selected);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace phyloadapt::cli
