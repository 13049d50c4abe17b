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

#ifndef AGIF_MODEL_LAYERS_HPP_
#define AGIF_MODEL_LAYERS_HPP_

#include <vector>

#include "agif/autodiff/ops.hpp"
#include "agif/model/config.hpp"
#include "agif/model/params.hpp"

namespace agif::model {

template <typename T>
struct LstmState {
  Tensor<T> h;  // 1 × hidden
  Tensor<T> c;  // 1 × hidden

  static LstmState zeros(std::size_t hidden) {
    return {Tensor<T>::zeros({1, hidden}), Tensor<T>::zeros({1, hidden})};
  }
};

/// One LSTM step given the already projected input x·W_xᵀ + b (1 × 4h).
template <typename T>
LstmState<T> lstm_step_projected(const LstmParams<T>& p, const Tensor<T>& x_proj,
                                 const LstmState<T>& prev) {
  const std::size_t h = p.hidden;
  const Tensor<T> gates = add(x_proj, matmul_nt(prev.h, p.w_h));
  const Tensor<T> i = sigmoid(slice_cols(gates, 0, h));
  const Tensor<T> f = sigmoid(slice_cols(gates, h, 2 * h));
  const Tensor<T> g = tanh(slice_cols(gates, 2 * h, 3 * h));
  const Tensor<T> o = sigmoid(slice_cols(gates, 3 * h, 4 * h));
  Tensor<T> c = add(mul(f, prev.c), mul(i, g));
  Tensor<T> out = mul(o, tanh(c));
  return {std::move(out), std::move(c)};
}

template <typename T>
LstmState<T> lstm_step(const LstmParams<T>& p, const Tensor<T>& x, const LstmState<T>& prev) {
  return lstm_step_projected(p, linear(x, p.w_x, std::optional<Tensor<T>>(p.b)), prev);
}

/// Runs the cell over the rows of `x` (T × in); the result is T × hidden with
/// rows in input order regardless of direction.
template <typename T>
Tensor<T> lstm_sequence(const LstmParams<T>& p, const Tensor<T>& x, bool reverse) {
  const Tensor<T> proj = linear(x, p.w_x, std::optional<Tensor<T>>(p.b));
  const std::size_t steps = x.rows();
  std::vector<Tensor<T>> outputs(steps);
  auto state = LstmState<T>::zeros(p.hidden);
  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t t = reverse ? steps - 1 - n : n;
    state = lstm_step_projected(p, row_of(proj, t), state);
    outputs[t] = state.h;
  }
  return concat_rows(outputs);
}

/// Adjacency over the slot node (index 0) and n intent nodes: slot-intent
/// edges, an intent clique and self-loops, stored symmetrically.
inline Mask build_interaction_graph(std::size_t n) {
  Mask adj(n + 1, n + 1, false);
  for (std::size_t i = 0; i <= n; ++i) {
    adj.set(i, i, true);
    adj.set(0, i, true);
    adj.set(i, 0, true);
    for (std::size_t j = 1; j <= n; ++j) {
      if (i >= 1) adj.set(i, j, true);
    }
  }
  return adj;
}

template <typename T>
Tensor<T> graph_activation(const Tensor<T>& x, const ModelConfig& c) {
  switch (c.graph_activation) {
    case GraphActivation::kLeakyRelu: return leaky_relu(x, static_cast<T>(c.leaky_slope));
    case GraphActivation::kTanh: return tanh(x);
    case GraphActivation::kIdentity: return x;
  }
  return x;
}

/// Square matrix of attention weights (row i: node i over its neighbours).
struct AttentionMap {
  std::size_t nodes = 0;
  std::vector<double> weights;

  double operator()(std::size_t i, std::size_t j) const { return weights[i * nodes + j]; }
};

template <typename T>
struct GatOutput {
  Tensor<T> nodes;
  AttentionMap attention;  // averaged over heads
};

/// One graph layer. With `layer.final` heads are averaged before the
/// activation, otherwise each head is activated and the heads concatenated.
/// GCN layers (heads without attention vectors) aggregate with weight
/// 1/|N(i)| instead of learned attention.
template <typename T>
GatOutput<T> gat_layer(const Tensor<T>& nodes, const Mask& adjacency,
                       const GraphLayer<T>& layer, const ModelConfig& c) {
  const std::size_t n = nodes.rows();
  if (adjacency.rows != n || adjacency.cols != n) {
    throw ShapeError("gat_layer: adjacency does not match node count");
  }
  GatOutput<T> out;
  out.attention.nodes = n;
  out.attention.weights.assign(n * n, 0.0);
  std::vector<Tensor<T>> head_outputs;
  const double inv_heads = 1.0 / static_cast<double>(layer.heads.size());
  for (const auto& head : layer.heads) {
    const Tensor<T> wh = matmul_nt(nodes, head.w);  // n × F'
    Tensor<T> alpha;
    if (head.a.defined()) {
      const std::size_t f = wh.cols();
      const Tensor<T> src = matmul_nt(wh, slice_cols(head.a, 0, f));      // n × 1
      const Tensor<T> dst = matmul_nt(slice_cols(head.a, f, 2 * f), wh);  // 1 × n
      const Tensor<T> scores = leaky_relu(outer_sum(src, dst), static_cast<T>(c.leaky_slope));
      alpha = masked_softmax(scores, adjacency, 1);
    } else {
      std::vector<T> w(n * n, T(0));
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t degree = 0;
        for (std::size_t j = 0; j < n; ++j) degree += adjacency(i, j) ? 1 : 0;
        if (degree == 0) throw MaskError("gat_layer: node with empty neighbourhood");
        for (std::size_t j = 0; j < n; ++j)
          if (adjacency(i, j)) w[i * n + j] = T(1) / static_cast<T>(degree);
      }
      alpha = Tensor<T>({n, n}, std::move(w));
    }
    for (std::size_t i = 0; i < n * n; ++i) {
      out.attention.weights[i] += static_cast<double>(alpha[i]) * inv_heads;
    }
    Tensor<T> agg = matmul(alpha, wh);
    head_outputs.push_back(layer.final ? agg : graph_activation(agg, c));
  }
  if (layer.final) {
    const Tensor<T> mean = head_outputs.size() == 1
                               ? head_outputs.front()
                               : scale(add_n(head_outputs), static_cast<T>(inv_heads));
    out.nodes = graph_activation(mean, c);
  } else {
    out.nodes = head_outputs.size() == 1 ? head_outputs.front() : concat_cols(head_outputs);
  }
  return out;
}

}  // namespace agif::model

#endif  // AGIF_MODEL_LAYERS_HPP_
