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

// The joint intent-detection / slot-filling network with per-token intent-slot
// graph interaction.

#ifndef AGIF_MODEL_AGIF_HPP_
#define AGIF_MODEL_AGIF_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "agif/autodiff/ops.hpp"
#include "agif/autodiff/random.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/model/config.hpp"
#include "agif/model/layers.hpp"
#include "agif/model/params.hpp"

namespace agif::model {

enum class Mode { kTrain, kEval };
enum class IntentSource { kGold, kPredicted };

template <typename T>
struct EncoderOutput {
  Tensor<T> e;               // length × 2d
  Tensor<T> self_attention;  // length × T_max, zero on padded keys
};

/// Encodes one padded row of token ids. BiLSTM states cover the valid prefix;
/// self-attention queries come from valid tokens and padded keys are masked.
template <typename T>
EncoderOutput<T> encode(std::span<const int> token_ids, std::size_t length,
                        const ModelParams<T>& p, const ModelConfig& c, Mode mode,
                        Rng& rng) {
  if (length == 0 || length > token_ids.size()) {
    throw ShapeError("encode: length must lie in [1, padded length]");
  }
  const bool training = mode == Mode::kTrain;
  const std::size_t t_max = token_ids.size();
  if (p.word_embedding.cols() != c.d_emb || p.w_v.rows() != c.d) {
    throw ShapeError("encode: parameters do not match the model config");
  }
  const std::vector<int> ids(token_ids.begin(), token_ids.end());
  const Tensor<T> x_all = dropout(embedding(p.word_embedding, ids), c.dropout, training, rng);
  const Tensor<T> x = length == t_max ? x_all : slice_rows(x_all, 0, length);

  const Tensor<T> h = concat_cols<T>({lstm_sequence(p.encoder_fwd, x, false),
                                      lstm_sequence(p.encoder_bwd, x, true)});

  const Tensor<T> q = matmul_nt(x, p.w_q);
  const Tensor<T> k = matmul_nt(x_all, p.w_k);
  const Tensor<T> v = matmul_nt(x_all, p.w_v);
  const T inv_sqrt_dk = T(1) / std::sqrt(static_cast<T>(c.d_k));
  const Tensor<T> alpha =
      masked_softmax(scale(matmul_nt(q, k), inv_sqrt_dk), Mask::prefix(t_max, length), 1);
  const Tensor<T> a = matmul(alpha, v);

  EncoderOutput<T> out;
  out.e = dropout(concat_cols<T>({h, a}), c.dropout, training, rng);
  out.self_attention = alpha;
  return out;
}

template <typename T>
struct PooledContext {
  Tensor<T> c;        // 1 × 2d
  Tensor<T> weights;  // 1 × length
};

/// Attention pooling p_t = softmax_t(w_e·e_t + b), c = Σ p_t e_t.
template <typename T>
PooledContext<T> intent_pool(const Tensor<T>& e, const ModelParams<T>& p) {
  const Tensor<T> scores = outer_sum(p.b_e, matmul_nt(p.w_e, e));
  const Tensor<T> weights = softmax(scores, 1);
  return {matmul(weights, e), weights};
}

/// {i : probs[i] > threshold}, or the argmax (lowest index on ties) when that
/// set is empty.
inline std::vector<int> select_intents(std::span<const double> probs, double threshold) {
  std::vector<int> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > threshold) out.push_back(static_cast<int>(i));
  }
  if (out.empty() && !probs.empty()) {
    const auto best = std::max_element(probs.begin(), probs.end()) - probs.begin();
    out.push_back(static_cast<int>(best));
  }
  return out;
}

template <typename T>
struct IntentPrediction {
  Tensor<T> probs;  // 1 × N_I
  std::vector<int> intents;
};

template <typename T>
IntentPrediction<T> predict_intents(const Tensor<T>& context, const ModelParams<T>& p,
                                    const ModelConfig& c) {
  const Tensor<T> hidden = leaky_relu(linear(context, p.w_c, std::optional<Tensor<T>>(p.b_c)),
                                      static_cast<T>(c.leaky_slope));
  IntentPrediction<T> out;
  out.probs = sigmoid(linear(hidden, p.w_i, std::optional<Tensor<T>>(p.b_i)));
  const std::vector<double> probs(out.probs.data().begin(), out.probs.data().end());
  out.intents = select_intents(probs, c.intent_threshold);
  return out;
}

template <typename T>
struct InteractionOutput {
  Tensor<T> slot;                     // 1 × d_g
  std::vector<AttentionMap> layers;  // per graph layer, head-averaged
};

/// Refines the slot decoder state with the intent nodes `intents`. The
/// behaviour follows `c.interaction`; with zero graph layers the adaptive and
/// GCN modes return the state unchanged.
template <typename T>
InteractionOutput<T> graph_interact(const Tensor<T>& state, const std::vector<int>& intents,
                                    const ModelParams<T>& p, const ModelConfig& c) {
  InteractionOutput<T> out;
  const std::size_t n = intents.size();
  switch (c.interaction) {
    case InteractionMode::kAdaptiveGat:
    case InteractionMode::kGcn: {
      if (p.graph.empty()) {
        out.slot = state;
        return out;
      }
      const Mask adjacency = build_interaction_graph(n);
      Tensor<T> nodes = n == 0 ? state
                               : concat_rows<T>({state, embedding(p.intent_embedding, intents)});
      for (const auto& layer : p.graph) {
        auto g = gat_layer(nodes, adjacency, layer, c);
        nodes = std::move(g.nodes);
        out.layers.push_back(std::move(g.attention));
      }
      out.slot = n == 0 ? nodes : row_of(nodes, 0);
      return out;
    }
    case InteractionMode::kVanillaAttention: {
      if (n == 0) {
        out.slot = state;
        return out;
      }
      const Tensor<T> table = embedding(p.intent_embedding, intents);  // n × d_g
      const Tensor<T> weights = softmax(matmul_nt(state, table), 1);
      out.slot = add(state, matmul(weights, table));
      AttentionMap map;
      map.nodes = n + 1;
      map.weights.assign((n + 1) * (n + 1), 0.0);
      for (std::size_t j = 0; j < n; ++j) map.weights[j + 1] = static_cast<double>(weights[j]);
      out.layers.push_back(std::move(map));
      return out;
    }
    case InteractionMode::kSentenceLevel:
    case InteractionMode::kSentenceLevel2Layer: {
      if (n == 0) {
        out.slot = state;
        return out;
      }
      const Tensor<T> table = embedding(p.intent_embedding, intents);
      const Tensor<T> ones = Tensor<T>::full({1, n}, T(1));
      out.slot = add(state, matmul(ones, table));
      return out;
    }
  }
  throw std::invalid_argument("graph_interact: unknown interaction mode");
}

inline int argmax_lowest(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

template <typename T>
struct SlotPrediction {
  Tensor<T> distribution;  // 1 × N_S
  int label = 0;
};

template <typename T>
SlotPrediction<T> predict_slot(const Tensor<T>& h, const Tensor<T>& w_s) {
  SlotPrediction<T> out;
  out.distribution = softmax(matmul_nt(h, w_s), 1);
  const std::vector<double> d(out.distribution.data().begin(), out.distribution.data().end());
  out.label = argmax_lowest(d);
  return out;
}

/// Per-utterance record of a forward pass.
template <typename T>
struct UtteranceTrace {
  Tensor<T> e;
  Tensor<T> intent_probs;  // 1 × N_I
  std::vector<int> predicted_intents;
  std::vector<int> graph_intents;  // intent ids used as graph nodes, in node order
  Tensor<T> slot_probs;            // length × N_S
  std::vector<int> predicted_slots;
  // attention[t][l]: head-averaged weights of graph layer l at step t.
  std::vector<std::vector<AttentionMap>> attention;
};

template <typename T>
struct ForwardTrace {
  std::vector<UtteranceTrace<T>> utterances;
};

/// Decodes one utterance. In training mode the previous label fed to the
/// decoder is the gold one-hot; in eval mode it is the previous predicted
/// distribution.
template <typename T>
UtteranceTrace<T> forward_utterance(const corpus::Batch& batch, std::size_t b,
                                    const ModelParams<T>& p, const ModelConfig& c, Mode mode,
                                    IntentSource source, Rng& rng) {
  const std::size_t length = batch.lengths.at(b);
  const auto ids = batch.token_ids.row(b);
  UtteranceTrace<T> trace;
  const auto enc = encode<T>(ids, length, p, c, mode, rng);
  trace.e = enc.e;
  const auto pooled = intent_pool(enc.e, p);
  const auto intents = predict_intents(pooled.c, p, c);
  trace.intent_probs = intents.probs;
  trace.predicted_intents = intents.intents;
  trace.graph_intents = source == IntentSource::kGold ? batch.gold_intents.at(b) : intents.intents;

  const std::size_t n_s = c.num_slots;
  std::vector<LstmState<T>> states;
  for (const auto& l : p.slot_lstm) states.push_back(LstmState<T>::zeros(l.hidden));
  Tensor<T> y_prev = Tensor<T>::zeros({1, n_s});
  std::vector<Tensor<T>> dists;
  const auto gold = batch.slots(b);
  for (std::size_t t = 0; t < length; ++t) {
    Tensor<T> input = concat_cols<T>({row_of(enc.e, t), y_prev});
    for (std::size_t l = 0; l < p.slot_lstm.size(); ++l) {
      states[l] = lstm_step(p.slot_lstm[l], input, states[l]);
      input = states[l].h;
    }
    auto inter = graph_interact(states.back().h, trace.graph_intents, p, c);
    auto slot = predict_slot(inter.slot, p.w_s);
    trace.predicted_slots.push_back(slot.label);
    trace.attention.push_back(std::move(inter.layers));
    if (mode == Mode::kTrain) {
      std::vector<T> one_hot(n_s, T(0));
      one_hot.at(static_cast<std::size_t>(gold[t])) = T(1);
      y_prev = Tensor<T>::row(std::move(one_hot));
    } else {
      y_prev = slot.distribution;
    }
    dists.push_back(std::move(slot.distribution));
  }
  trace.slot_probs = concat_rows(dists);
  return trace;
}

template <typename T>
ForwardTrace<T> forward(const corpus::Batch& batch, const ModelParams<T>& p,
                        const ModelConfig& c, Mode mode, IntentSource source, Rng& rng) {
  ForwardTrace<T> out;
  out.utterances.reserve(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    out.utterances.push_back(forward_utterance(batch, b, p, c, mode, source, rng));
  }
  return out;
}

/// Configuration plus weights.
template <typename T>
struct Model {
  ModelConfig config;
  ModelParams<T> params;

  static Model create(const ModelConfig& c, std::uint64_t seed) {
    Rng rng(seed);
    return {c, init_params<T>(c, rng)};
  }
};

}  // namespace agif::model

#endif  // AGIF_MODEL_AGIF_HPP_
