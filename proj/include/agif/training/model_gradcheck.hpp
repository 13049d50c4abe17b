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

#ifndef AGIF_TRAINING_MODEL_GRADCHECK_HPP_
#define AGIF_TRAINING_MODEL_GRADCHECK_HPP_

#include <string>
#include <vector>

#include "agif/autodiff/gradcheck.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/corpus/mixer.hpp"
#include "agif/corpus/synthetic.hpp"
#include "agif/corpus/vocab.hpp"
#include "agif/model/agif.hpp"
#include "agif/training/trainer.hpp"

namespace agif::training {

struct ModelGradCheckOptions {
  std::uint64_t seed = 0;
  model::InteractionMode interaction = model::InteractionMode::kAdaptiveGat;
  model::GraphActivation graph_activation = model::GraphActivation::kLeakyRelu;
  GradCheckOptions diff;
};

struct ModelGradCheck {
  GradCheckResult result;
  std::vector<std::string> names;  // parameter names, aligned with result.per_param
  std::size_t parameters = 0;      // scalar coordinate count
};

/// Two toy utterances (one with two intents, one with one) for gradient checks.
inline std::vector<corpus::Utterance> gradcheck_utterances(std::uint64_t seed) {
  Rng rng(seed);
  const auto grammar = corpus::toy_grammar(3);
  const auto source = corpus::generate_single_intent(grammar, 12, rng);
  corpus::MixSpec spec;
  spec.ratio = {0.0, 1.0, 0.0};
  auto out = corpus::mix_datasets(source, spec, 1, rng);
  out.push_back(source.front());
  return out;
}

/// Checks the joint training loss of a float64 micro model (dropout off, gold
/// intents on the graph) against central differences over every parameter.
inline ModelGradCheck model_gradient_check(const ModelGradCheckOptions& opts = {}) {
  const auto data = gradcheck_utterances(opts.seed);
  const auto vocab = corpus::build_vocab(data);
  auto mc = model::micro_config(vocab.num_tokens(), vocab.num_intents(), vocab.num_slots());
  mc.interaction = opts.interaction;
  mc.graph_activation = opts.graph_activation;
  model::Model<double> m = model::Model<double>::create(mc, opts.seed);
  const auto batch = corpus::encode_batch(data, vocab);
  TrainConfig tc;
  auto loss = [&]() {
    Rng rng(opts.seed);
    return batch_loss(batch, m, tc, model::Mode::kTrain, model::IntentSource::kGold, rng).total;
  };
  ModelGradCheck out;
  for (const auto& p : m.params.named()) {
    out.names.push_back(p.name);
    out.parameters += p.tensor.size();
  }
  out.result = finite_diff_check<double>(loss, m.params.tensors(), opts.diff);
  return out;
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_MODEL_GRADCHECK_HPP_
