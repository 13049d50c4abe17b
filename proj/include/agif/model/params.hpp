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

#ifndef AGIF_MODEL_PARAMS_HPP_
#define AGIF_MODEL_PARAMS_HPP_

#include <string>
#include <vector>

#include "agif/autodiff/init.hpp"
#include "agif/autodiff/random.hpp"
#include "agif/autodiff/tensor.hpp"
#include "agif/model/config.hpp"

namespace agif::model {

enum class ParamKind { kWeight, kBias, kEmbedding };

template <typename T>
struct NamedParam {
  std::string name;
  Tensor<T> tensor;  // shares storage with the owning ModelParams
  ParamKind kind;
};

/// LSTM cell with separate input and recurrent matrices; gate order i, f, g, o.
template <typename T>
struct LstmParams {
  Tensor<T> w_x;  // 4h × in
  Tensor<T> w_h;  // 4h × h
  Tensor<T> b;    // 1 × 4h
  std::size_t hidden = 0;

  static LstmParams make(std::size_t in, std::size_t hidden, Rng& rng) {
    LstmParams p;
    p.hidden = hidden;
    p.w_x = xavier_init<T>(static_cast<long>(4 * hidden), static_cast<long>(in), rng);
    p.w_h = xavier_init<T>(static_cast<long>(4 * hidden), static_cast<long>(hidden), rng);
    p.b = zeros_param<T>(1, 4 * hidden);
    return p;
  }
};

template <typename T>
struct GraphHead {
  Tensor<T> w;  // F' × F_in
  Tensor<T> a;  // 1 × 2F'; undefined for GCN aggregation
};

template <typename T>
struct GraphLayer {
  std::vector<GraphHead<T>> heads;
  bool final = false;
};

/// All trainable weights, grouped by sub-network.
template <typename T>
struct ModelParams {
  // Encoder.
  Tensor<T> word_embedding;  // V × d_emb
  LstmParams<T> encoder_fwd;
  LstmParams<T> encoder_bwd;
  Tensor<T> w_q;  // d_k × d_emb
  Tensor<T> w_k;  // d_k × d_emb
  Tensor<T> w_v;  // d × d_emb

  // Intent decoder.
  Tensor<T> w_e;  // 1 × 2d
  Tensor<T> b_e;  // 1 × 1
  Tensor<T> w_c;  // intent_hidden × 2d
  Tensor<T> b_c;
  Tensor<T> w_i;  // N_I × intent_hidden
  Tensor<T> b_i;

  Tensor<T> intent_embedding;  // N_I × d_g
  std::vector<GraphLayer<T>> graph;

  // Slot decoder: one layer, or two for the sentence-level-2-layer variant.
  std::vector<LstmParams<T>> slot_lstm;
  Tensor<T> w_s;  // N_S × d_g

  std::vector<NamedParam<T>> named() const {
    std::vector<NamedParam<T>> out;
    auto push = [&](std::string n, const Tensor<T>& t, ParamKind k) {
      if (t.defined()) out.push_back({std::move(n), t, k});
    };
    auto push_lstm = [&](const std::string& n, const LstmParams<T>& l) {
      push(n + ".w_x", l.w_x, ParamKind::kWeight);
      push(n + ".w_h", l.w_h, ParamKind::kWeight);
      push(n + ".b", l.b, ParamKind::kBias);
    };
    push("encoder.word_embedding", word_embedding, ParamKind::kEmbedding);
    push_lstm("encoder.lstm_fwd", encoder_fwd);
    push_lstm("encoder.lstm_bwd", encoder_bwd);
    push("encoder.w_q", w_q, ParamKind::kWeight);
    push("encoder.w_k", w_k, ParamKind::kWeight);
    push("encoder.w_v", w_v, ParamKind::kWeight);
    push("intent.w_e", w_e, ParamKind::kWeight);
    push("intent.b_e", b_e, ParamKind::kBias);
    push("intent.w_c", w_c, ParamKind::kWeight);
    push("intent.b_c", b_c, ParamKind::kBias);
    push("intent.w_i", w_i, ParamKind::kWeight);
    push("intent.b_i", b_i, ParamKind::kBias);
    push("intent.embedding", intent_embedding, ParamKind::kEmbedding);
    for (std::size_t l = 0; l < graph.size(); ++l) {
      for (std::size_t k = 0; k < graph[l].heads.size(); ++k) {
        const std::string base =
            "graph.layer" + std::to_string(l) + ".head" + std::to_string(k);
        push(base + ".w", graph[l].heads[k].w, ParamKind::kWeight);
        push(base + ".a", graph[l].heads[k].a, ParamKind::kWeight);
      }
    }
    for (std::size_t l = 0; l < slot_lstm.size(); ++l) {
      push_lstm("slot.lstm" + std::to_string(l), slot_lstm[l]);
    }
    push("slot.w_s", w_s, ParamKind::kWeight);
    return out;
  }

  std::vector<Tensor<T>> tensors() const {
    std::vector<Tensor<T>> out;
    for (auto& p : named()) out.push_back(p.tensor);
    return out;
  }

  void zero_grad() const {
    for (auto& p : named()) p.tensor.zero_grad();
  }
};

/// Xavier-uniform weights and embeddings, zero biases. Each sub-network draws
/// from its own stream split off `rng`.
template <typename T>
ModelParams<T> init_params(const ModelConfig& c, Rng& rng) {
  validate(c);
  auto L = [](std::size_t v) { return static_cast<long>(v); };
  ModelParams<T> p;
  const std::size_t h_enc = c.d / 2;
  const std::size_t e_width = 2 * c.d;
  {
    Rng r = rng.split();
    p.word_embedding = xavier_init<T>(L(c.vocab_size), L(c.d_emb), r);
    p.encoder_fwd = LstmParams<T>::make(c.d_emb, h_enc, r);
    p.encoder_bwd = LstmParams<T>::make(c.d_emb, h_enc, r);
    p.w_q = xavier_init<T>(L(c.d_k), L(c.d_emb), r);
    p.w_k = xavier_init<T>(L(c.d_k), L(c.d_emb), r);
    p.w_v = xavier_init<T>(L(c.d), L(c.d_emb), r);
  }
  {
    Rng r = rng.split();
    p.w_e = xavier_init<T>(1, L(e_width), r);
    p.b_e = zeros_param<T>(1, 1);
    p.w_c = xavier_init<T>(L(c.intent_hidden), L(e_width), r);
    p.b_c = zeros_param<T>(1, c.intent_hidden);
    p.w_i = xavier_init<T>(L(c.num_intents), L(c.intent_hidden), r);
    p.b_i = zeros_param<T>(1, c.num_intents);
    p.intent_embedding = xavier_init<T>(L(c.num_intents), L(c.d_g), r);
  }
  {
    Rng r = rng.split();
    const bool graph_mode = c.interaction == InteractionMode::kAdaptiveGat ||
                            c.interaction == InteractionMode::kGcn;
    const bool attention = c.interaction == InteractionMode::kAdaptiveGat;
    if (graph_mode) {
      for (std::size_t l = 0; l < c.layers; ++l) {
        GraphLayer<T> layer;
        layer.final = (l + 1 == c.layers);
        const std::size_t out_w = layer.final ? c.d_g : c.d_g / c.heads;
        for (std::size_t k = 0; k < c.heads; ++k) {
          GraphHead<T> head;
          head.w = xavier_init<T>(L(out_w), L(c.d_g), r);
          if (attention) head.a = xavier_init<T>(1, L(2 * out_w), r);
          layer.heads.push_back(std::move(head));
        }
        p.graph.push_back(std::move(layer));
      }
    }
  }
  {
    Rng r = rng.split();
    p.slot_lstm.push_back(LstmParams<T>::make(e_width + c.num_slots, c.d_g, r));
    if (c.interaction == InteractionMode::kSentenceLevel2Layer) {
      p.slot_lstm.push_back(LstmParams<T>::make(c.d_g, c.d_g, r));
    }
    p.w_s = xavier_init<T>(L(c.num_slots), L(c.d_g), r);
  }
  return p;
}

}  // namespace agif::model

#endif  // AGIF_MODEL_PARAMS_HPP_
