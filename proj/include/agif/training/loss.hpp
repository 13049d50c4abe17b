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

#ifndef AGIF_TRAINING_LOSS_HPP_
#define AGIF_TRAINING_LOSS_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "agif/autodiff/ops.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/model/params.hpp"

namespace agif::training {

inline constexpr double kProbClamp = 1e-7;

/// Binary cross-entropy summed over labels, averaged over rows of `probs`
/// (B × N_I). Probabilities are clamped to [1e-7, 1 - 1e-7].
template <typename T>
Tensor<T> intent_loss(const Tensor<T>& probs, const corpus::Matrix<double>& targets) {
  if (probs.rows() != targets.rows || probs.cols() != targets.cols) {
    throw ShapeError("intent_loss: probabilities and targets differ in shape");
  }
  const T lo = static_cast<T>(kProbClamp);
  const Tensor<T> y = clamp(probs, lo, T(1) - lo);
  std::vector<T> t(targets.data.begin(), targets.data.end());
  std::vector<T> one_minus_t(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) one_minus_t[i] = T(1) - t[i];
  const Tensor<T> target(probs.shape(), std::move(t));
  const Tensor<T> complement(probs.shape(), std::move(one_minus_t));
  const Tensor<T> ll = add(mul(target, log(y)), mul(complement, log(affine(y, T(-1), T(1)))));
  return scale(sum(ll), T(-1) / static_cast<T>(probs.rows()));
}

template <typename T>
Tensor<T> intent_loss(const std::vector<Tensor<T>>& rows, const corpus::Matrix<double>& targets) {
  return intent_loss(concat_rows(rows), targets);
}

/// Negative log-likelihood of the gold slot ids over positions where `mask`
/// is set, summed per utterance and averaged over the batch. `dists[b]` must
/// have at least as many rows as utterance b has valid positions.
template <typename T>
Tensor<T> slot_loss(const std::vector<Tensor<T>>& dists, const corpus::Matrix<int>& gold,
                    const corpus::Matrix<std::uint8_t>& mask) {
  if (dists.size() != gold.rows || mask.rows != gold.rows || mask.cols != gold.cols) {
    throw ShapeError("slot_loss: batch dimensions disagree");
  }
  const T lo = static_cast<T>(kProbClamp);
  std::vector<Tensor<T>> per_utterance;
  for (std::size_t b = 0; b < dists.size(); ++b) {
    std::vector<Index2> picks;
    for (std::size_t t = 0; t < gold.cols; ++t) {
      if (!mask(b, t)) continue;
      const int id = gold(b, t);
      if (id < 0 || static_cast<std::size_t>(id) >= dists[b].cols()) {
        throw std::out_of_range("slot_loss: gold id " + std::to_string(id) + " out of range");
      }
      if (t >= dists[b].rows()) throw ShapeError("slot_loss: distribution rows missing");
      picks.push_back({t, static_cast<std::size_t>(id)});
    }
    if (picks.empty()) continue;
    per_utterance.push_back(sum(log(clamp(gather(dists[b], picks), lo, T(1) - lo))));
  }
  const T inv_b = T(-1) / static_cast<T>(dists.size());
  if (per_utterance.empty()) return Tensor<T>::scalar(T(0));
  return scale(per_utterance.size() == 1 ? per_utterance.front() : add_n(per_utterance), inv_b);
}

/// Σ‖W‖² over weight matrices; biases and embedding tables are excluded.
template <typename T>
Tensor<T> l2_penalty(const model::ModelParams<T>& params) {
  std::vector<Tensor<T>> terms;
  for (const auto& p : params.named()) {
    if (p.kind == model::ParamKind::kWeight) terms.push_back(squared_norm(p.tensor));
  }
  if (terms.empty()) return Tensor<T>::scalar(T(0));
  return add_n(terms);
}

/// alpha·L1 + (1-alpha)·L2 + l2·Σ‖W‖².
template <typename T>
Tensor<T> joint_loss(const Tensor<T>& intent, const Tensor<T>& slot, double alpha,
                     const model::ModelParams<T>& params, double l2) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("joint_loss: alpha must lie in [0, 1]");
  }
  Tensor<T> loss = add(scale(intent, static_cast<T>(alpha)), scale(slot, static_cast<T>(1.0 - alpha)));
  if (l2 != 0.0) loss = add(loss, scale(l2_penalty(params), static_cast<T>(l2)));
  return loss;
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_LOSS_HPP_
