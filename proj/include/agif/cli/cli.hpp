// Copyright 2026 The AGIF Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: mix, train, eval, predict and gradcheck verbs.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#ifndef AGIF_CLI_CLI_HPP_
#define AGIF_CLI_CLI_HPP_

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "agif/corpus/dataset_io.hpp"
#include "agif/corpus/mixer.hpp"
#include "agif/corpus/vocab.hpp"
#include "agif/metrics/attention_export.hpp"
#include "agif/metrics/evaluate.hpp"
#include "agif/training/checkpoint.hpp"
#include "agif/training/model_gradcheck.hpp"
#include "agif/training/serialization.hpp"
#include "agif/training/trainer.hpp"

namespace agif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

using training::Json;

/// Parses "a,b,c" into three non-negative proportions summing to 1.
inline std::array<double, 3> parse_ratio(const std::string& text) {
  const auto parts = corpus::detail::split_on(text, ',');
  if (parts.size() != 3) {
    throw std::invalid_argument("ratio needs exactly three comma-separated values, got '" +
                                text + "'");
  }
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      r[i] = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[i].size()) {
      throw std::invalid_argument("ratio entry '" + parts[i] + "' is not a number");
    }
  }
  corpus::MixSpec probe;
  probe.ratio = r;
  validate(probe);
  return r;
}

/// Configuration file: {"model": {...}, "train": {...}}, both optional.
struct FileConfig {
  Json model = Json::object();
  Json train = Json::object();
};

inline FileConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config file " + path + ": expected an object");
  FileConfig fc;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") fc.model = value;
    else if (key == "train") fc.train = value;
    else throw std::runtime_error("config file " + path + ": unknown section '" + key + "'");
  }
  return fc;
}

namespace detail {

inline corpus::Splits read_splits(const std::string& dir, bool need_test) {
  const std::filesystem::path base(dir);
  corpus::Splits s;
  s.train = corpus::parse_dataset((base / "train.txt").string());
  s.dev = corpus::parse_dataset((base / "dev.txt").string());
  if (need_test) s.test = corpus::parse_dataset((base / "test.txt").string());
  return s;
}

inline Json intent_histogram(const std::vector<corpus::Utterance>& data) {
  std::array<std::size_t, 3> counts{};
  for (const auto& u : data) {
    const auto k = u.intents.size();
    if (k >= 1 && k <= 3) ++counts[k - 1];
  }
  return Json{{"utterances", data.size()},
              {"one_intent", counts[0]},
              {"two_intents", counts[1]},
              {"three_intents", counts[2]}};
}

template <typename V>
void apply(const std::optional<V>& flag, V& target) {
  if (flag) target = *flag;
}

}  // namespace detail

struct MixArgs {
  std::string source, out, ratio = "0.3,0.5,0.2", conjunction = "and", preset;
  std::optional<std::size_t> train_size, dev_size, test_size;
  bool allow_shared_intents = false;
};

struct TrainArgs {
  std::string data, out = "checkpoint";
  std::optional<std::size_t> epochs, batch_size, d_emb, d, d_k, intent_hidden, d_g, heads, layers;
  std::optional<double> lr, alpha, l2, grad_clip, dropout, threshold, leaky_slope;
  std::optional<std::string> interaction, selection_metric;
  bool lowercase = false;
  bool predicted_intents = false;
};

struct EvalArgs {
  std::string data, ckpt, export_attention, predictions;
};

struct PredictArgs {
  std::string ckpt;
  std::optional<std::string> text;
};

struct GradcheckArgs {
  double tol = 1e-3;
  double h = 1e-4;
  std::size_t samples = 0;
  std::string interaction = "adaptive_gat";
};

inline int run_mix(const MixArgs& a, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  corpus::MixSpec spec;
  spec.ratio = parse_ratio(a.ratio);
  spec.conjunction = a.conjunction;
  spec.seed = seed;
  spec.require_distinct_intents = !a.allow_shared_intents;
  const auto source = detail::read_splits(a.source, true);
  spec.sizes = {source.train.size(), source.dev.size(), source.test.size()};
  if (a.preset == "mixsnips") spec.sizes = corpus::split_sizes_reference(corpus::DatasetPreset::kMixSnips);
  if (a.preset == "mixatis") spec.sizes = corpus::split_sizes_reference(corpus::DatasetPreset::kMixAtis);
  if (a.preset == "dstc4") spec.sizes = corpus::split_sizes_reference(corpus::DatasetPreset::kDstc4);
  detail::apply(a.train_size, spec.sizes.train);
  detail::apply(a.dev_size, spec.sizes.dev);
  detail::apply(a.test_size, spec.sizes.test);
  const auto mixed = corpus::mix_splits(source, spec);
  std::filesystem::create_directories(a.out);
  const std::filesystem::path base(a.out);
  corpus::write_dataset(mixed.train, (base / "train.txt").string());
  corpus::write_dataset(mixed.dev, (base / "dev.txt").string());
  corpus::write_dataset(mixed.test, (base / "test.txt").string());
  err << "wrote mixed splits to " << a.out << '\n';
  out << Json{{"seed", seed},
              {"ratio", spec.ratio},
              {"train", detail::intent_histogram(mixed.train)},
              {"dev", detail::intent_histogram(mixed.dev)},
              {"test", detail::intent_histogram(mixed.test)}}
             .dump()
      << '\n';
  return kExitOk;
}

inline int run_train(const TrainArgs& a, std::optional<std::uint64_t> seed,
                     const FileConfig& fc, std::ostream& out, std::ostream& err) {
  const auto splits = detail::read_splits(a.data, false);
  const auto vocab = corpus::build_vocab(splits.train, a.lowercase);

  model::ModelConfig mc;
  training::TrainConfig tc;
  training::overlay(fc.model, mc);
  training::overlay(fc.train, tc);
  detail::apply(a.d_emb, mc.d_emb);
  detail::apply(a.d, mc.d);
  detail::apply(a.d_k, mc.d_k);
  detail::apply(a.intent_hidden, mc.intent_hidden);
  detail::apply(a.d_g, mc.d_g);
  detail::apply(a.heads, mc.heads);
  detail::apply(a.layers, mc.layers);
  detail::apply(a.dropout, mc.dropout);
  detail::apply(a.threshold, mc.intent_threshold);
  detail::apply(a.leaky_slope, mc.leaky_slope);
  if (a.interaction) mc.interaction = model::interaction_mode_from_string(*a.interaction);
  detail::apply(a.epochs, tc.epochs);
  detail::apply(a.batch_size, tc.batch_size);
  detail::apply(a.lr, tc.lr);
  detail::apply(a.alpha, tc.alpha);
  detail::apply(a.l2, tc.l2);
  detail::apply(a.grad_clip, tc.grad_clip);
  detail::apply(a.selection_metric, tc.selection_metric);
  detail::apply(seed, tc.seed);
  if (a.predicted_intents) tc.gold_intents_in_training = false;
  mc.vocab_size = vocab.num_tokens();
  mc.num_intents = vocab.num_intents();
  mc.num_slots = vocab.num_slots();
  model::validate(mc);
  training::validate(tc);

  err << "training on " << splits.train.size() << " utterances, " << mc.num_intents
      << " intents, " << mc.num_slots << " slot labels\n";
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = training::fit<float>(splits.train, splits.dev, vocab, mc, tc, &out);
  training::save_checkpoint(result.best, a.out);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << Json{{"best_epoch", result.best_epoch},
              {"checkpoint", a.out},
              {"dev", result.best.dev_metrics},
              {"seconds", seconds}}
             .dump()
      << '\n';
  return kExitOk;
}

inline int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto ck = training::load_checkpoint(a.ckpt);
  const auto m = training::to_model<float>(ck);
  const auto data = corpus::parse_dataset(a.data);
  const auto result = metrics::evaluate(m, ck.vocab, data);
  if (!a.export_attention.empty()) {
    const auto paths = metrics::export_attention(result.predictions, a.export_attention);
    err << "wrote " << paths.size() << " attention files to " << a.export_attention << '\n';
  }
  if (!a.predictions.empty()) {
    std::vector<corpus::Utterance> pred;
    for (const auto& p : result.predictions) pred.push_back(p.utterance);
    corpus::write_dataset(pred, a.predictions);
  }
  out << training::to_json(result.report).dump(2) << '\n';
  return kExitOk;
}

inline int run_predict(const PredictArgs& a, std::istream& in, std::ostream& out) {
  const auto ck = training::load_checkpoint(a.ckpt);
  const auto m = training::to_model<float>(ck);
  std::vector<std::vector<std::string>> sentences;
  auto add = [&](const std::string& line) {
    auto tokens = corpus::detail::split_ws(line);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  };
  if (a.text) {
    add(*a.text);
  } else {
    std::string line;
    while (std::getline(in, line)) add(line);
  }
  if (sentences.empty()) throw std::invalid_argument("predict: no input tokens");
  std::vector<corpus::Utterance> pred;
  for (const auto& p : metrics::predict(m, ck.vocab, sentences)) pred.push_back(p.utterance);
  out << corpus::format_dataset(pred);
  return kExitOk;
}

inline int run_gradcheck(const GradcheckArgs& a, std::uint64_t seed, std::ostream& out,
                         std::ostream& err) {
  if (!(a.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  training::ModelGradCheckOptions opts;
  opts.seed = seed;
  opts.interaction = model::interaction_mode_from_string(a.interaction);
  opts.diff.h = a.h;
  opts.diff.samples_per_param = a.samples;
  opts.diff.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto check = training::model_gradient_check(opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& r = check.result;
  Json per = Json::object();
  for (std::size_t i = 0; i < check.names.size(); ++i) {
    per[check.names[i]] = Json{{"rel_err", r.per_param[i].norm_rel_err},
                               {"max_coord_rel_err", r.per_param[i].max_rel_err},
                               {"checked", r.per_param[i].checked},
                               {"kinks", r.per_param[i].kinks}};
  }
  const bool pass = r.max_norm_rel_err < a.tol;
  out << Json{{"max_rel_err", r.max_norm_rel_err},
              {"max_coord_rel_err", r.max_rel_err},
              {"tol", a.tol},
              {"pass", pass},
              {"coordinates", r.checked},
              {"kinks_skipped", r.kinks},
              {"seconds", seconds},
              {"parameters", per}}
             .dump(2)
      << '\n';
  if (!pass) {
    err << "gradient check failed: worst parameter " << check.names[r.worst_param] << '\n';
  }
  return pass ? kExitOk : kExitFailure;
}

/// Parses `argv` and dispatches to one verb.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Joint multi-intent detection and slot filling"};
  app.name("agif");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::string config_path;
  app.add_option("--seed", seed, "Random seed (default 0)");
  app.add_option("--config", config_path, "JSON config with 'model' and 'train' sections")
      ->check(CLI::ExistingFile);

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Build multi-intent splits from single-intent ones");
  mix_cmd->add_option("--source", mix.source, "Directory with train.txt, dev.txt, test.txt")
      ->required()->check(CLI::ExistingDirectory);
  mix_cmd->add_option("--out", mix.out, "Output directory")->required();
  mix_cmd->add_option("--ratio", mix.ratio, "Proportions of 1,2,3-intent utterances")
      ->check([](const std::string& s) {
        try {
          parse_ratio(s);
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
        return std::string();
      });
  mix_cmd->add_option("--conjunction", mix.conjunction, "Token joining the parts");
  mix_cmd->add_option("--preset", mix.preset, "Reference split sizes")
      ->check(CLI::IsMember({"mixsnips", "mixatis", "dstc4"}));
  mix_cmd->add_option("--train-size", mix.train_size, "Mixed train utterances");
  mix_cmd->add_option("--dev-size", mix.dev_size, "Mixed dev utterances");
  mix_cmd->add_option("--test-size", mix.test_size, "Mixed test utterances");
  mix_cmd->add_flag("--allow-shared-intents", mix.allow_shared_intents,
                    "Allow parts that share an intent");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train and keep the best dev checkpoint");
  train_cmd->add_option("--data", train.data, "Directory with train.txt and dev.txt")
      ->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--out", train.out, "Checkpoint directory");
  train_cmd->add_option("--epochs", train.epochs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", train.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.lr)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--alpha", train.alpha)->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--l2", train.l2)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--grad-clip", train.grad_clip)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--dropout", train.dropout)->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--threshold", train.threshold)->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--leaky-slope", train.leaky_slope)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--d-emb", train.d_emb);
  train_cmd->add_option("--d", train.d);
  train_cmd->add_option("--d-k", train.d_k);
  train_cmd->add_option("--intent-hidden", train.intent_hidden);
  train_cmd->add_option("--d-g", train.d_g);
  train_cmd->add_option("--heads", train.heads);
  train_cmd->add_option("--layers", train.layers);
  train_cmd->add_option("--interaction", train.interaction)
      ->check(CLI::IsMember({"adaptive_gat", "vanilla_attention", "gcn", "sentence_level",
                             "sentence_level_2layer"}));
  train_cmd->add_option("--selection-metric", train.selection_metric)
      ->check(CLI::IsMember({"overall_acc", "slot_f1", "intent_acc"}));
  train_cmd->add_flag("--lowercase", train.lowercase, "Lowercase tokens");
  train_cmd->add_flag("--predicted-intents", train.predicted_intents,
                      "Feed predicted rather than gold intents to the graph in training");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset file");
  eval_cmd->add_option("--data", eval.data, "Dataset file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--ckpt", eval.ckpt, "Checkpoint directory")
      ->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--export-attention", eval.export_attention,
                       "Write per-utterance attention CSV files here");
  eval_cmd->add_option("--predictions", eval.predictions, "Write predictions in dataset format");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Tag whitespace-tokenized text");
  predict_cmd->add_option("--ckpt", predict.ckpt, "Checkpoint directory")
      ->required()->check(CLI::ExistingDirectory);
  predict_cmd->add_option("--text", predict.text, "Input text; stdin lines otherwise");

  GradcheckArgs grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of a micro model");
  grad_cmd->add_option("--tol", grad.tol, "Maximum relative error");
  grad_cmd->add_option("--step", grad.h, "Central-difference step")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--samples", grad.samples, "Coordinates per parameter (0: all)");
  grad_cmd->add_option("--interaction", grad.interaction)
      ->check(CLI::IsMember({"adaptive_gat", "vanilla_attention", "gcn", "sentence_level",
                             "sentence_level_2layer"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    FileConfig fc;
    if (!config_path.empty()) fc = read_config_file(config_path);
    const std::uint64_t s = seed.value_or(0);
    if (*mix_cmd) return run_mix(mix, s, out, err);
    if (*train_cmd) return run_train(train, seed, fc, out, err);
    if (*eval_cmd) return run_eval(eval, out, err);
    if (*predict_cmd) return run_predict(predict, in, out);
    if (*grad_cmd) return run_gradcheck(grad, s, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace agif::cli

#endif  // AGIF_CLI_CLI_HPP_
