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

#ifndef AGIF_METRICS_EVALUATE_HPP_
#define AGIF_METRICS_EVALUATE_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "agif/autodiff/tensor.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/corpus/utterance.hpp"
#include "agif/corpus/vocab.hpp"
#include "agif/metrics/slu_metrics.hpp"
#include "agif/model/agif.hpp"

namespace agif::metrics {

struct Prediction {
  // Input tokens with predicted slots and intents.
  corpus::Utterance utterance;
  // Intent labels of the graph nodes 1..n, in node order.
  std::vector<std::string> node_intents;
  // Per token: final-layer attention of the slot node over [self, intents...].
  std::vector<std::vector<double>> slot_attention;
};

struct EvalResult {
  EvalReport report;
  std::vector<Prediction> predictions;
};

/// Eval-mode decoding, with predicted intents feeding the graph.
template <typename T>
std::vector<Prediction> predict(const model::Model<T>& m, const corpus::Vocabulary& vocab,
                                const std::vector<std::vector<std::string>>& sentences,
                                std::size_t batch_size = 64) {
  NoGradGuard no_grad;
  Rng unused(0);
  std::vector<Prediction> out;
  out.reserve(sentences.size());
  batch_size = std::max<std::size_t>(batch_size, 1);
  for (std::size_t start = 0; start < sentences.size(); start += batch_size) {
    const std::size_t end = std::min(sentences.size(), start + batch_size);
    std::vector<corpus::Utterance> chunk;
    for (std::size_t i = start; i < end; ++i) {
      corpus::Utterance u;
      u.tokens = sentences[i];
      u.slots.assign(u.tokens.size(), "O");
      u.intents = {"<none>"};
      chunk.push_back(std::move(u));
    }
    const auto batch = corpus::encode_batch(chunk, vocab);
    const auto trace = model::forward(batch, m.params, m.config, model::Mode::kEval,
                                      model::IntentSource::kPredicted, unused);
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      const auto& tr = trace.utterances[b];
      Prediction p;
      p.utterance.tokens = chunk[b].tokens;
      for (int s : tr.predicted_slots) p.utterance.slots.push_back(vocab.slot_label(s));
      for (int i : tr.predicted_intents) p.utterance.intents.push_back(vocab.intents.label(i));
      for (int i : tr.graph_intents) p.node_intents.push_back(vocab.intents.label(i));
      for (const auto& layers : tr.attention) {
        if (layers.empty()) break;
        const auto& final_layer = layers.back();
        std::vector<double> row(final_layer.weights.begin(),
                                final_layer.weights.begin() + final_layer.nodes);
        p.slot_attention.push_back(std::move(row));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

template <typename T>
EvalResult evaluate(const model::Model<T>& m, const corpus::Vocabulary& vocab,
                    const std::vector<corpus::Utterance>& data, std::size_t batch_size = 64) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(data.size());
  for (const auto& u : data) sentences.push_back(u.tokens);
  EvalResult result;
  result.predictions = predict(m, vocab, sentences, batch_size);
  std::vector<corpus::Utterance> pred;
  pred.reserve(data.size());
  for (const auto& p : result.predictions) pred.push_back(p.utterance);
  result.report = compute_report(data, pred);
  return result;
}

}  // namespace agif::metrics

#endif  // AGIF_METRICS_EVALUATE_HPP_
