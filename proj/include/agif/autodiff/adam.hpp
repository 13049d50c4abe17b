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

#ifndef AGIF_AUTODIFF_ADAM_HPP_
#define AGIF_AUTODIFF_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "agif/autodiff/tensor.hpp"

namespace agif {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  AdamHyper hyper;
  std::uint64_t t = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;

  AdamState() = default;
  explicit AdamState(AdamHyper h) : hyper(h) {}
};

/// One bias-corrected Adam update. `grads[i]` must match `params[i]` in
/// length; moment buffers are created lazily on the first step.
template <typename T>
void adam_step(std::span<Tensor<T>> params,
               const std::vector<std::span<const T>>& grads,
               AdamState<T>& state) {
  if (grads.size() != params.size()) {
    throw ShapeError("adam_step: parameter/gradient count mismatch");
  }
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), T(0));
      state.v.emplace_back(p.size(), T(0));
    }
  }
  if (state.m.size() != params.size()) {
    throw ShapeError("adam_step: state does not match parameter list");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].size() != params[i].size() ||
        state.m[i].size() != params[i].size()) {
      throw ShapeError("adam_step: shape mismatch for parameter " +
                       std::to_string(i));
    }
  }
  state.t += 1;
  const auto& h = state.hyper;
  const double b1t = 1.0 - std::pow(h.beta1, static_cast<double>(state.t));
  const double b2t = 1.0 - std::pow(h.beta2, static_cast<double>(state.t));
  const T lr = static_cast<T>(h.lr);
  const T b1 = static_cast<T>(h.beta1), b2 = static_cast<T>(h.beta2);
  const T c1 = static_cast<T>(b1t), c2 = static_cast<T>(b2t);
  const T eps = static_cast<T>(h.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].mutable_data();
    auto& m = state.m[i];
    auto& v = state.v[i];
    const auto g = grads[i];
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = b1 * m[k] + (T(1) - b1) * g[k];
      v[k] = b2 * v[k] + (T(1) - b2) * g[k] * g[k];
      const T mhat = m[k] / c1;
      const T vhat = v[k] / c2;
      w[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

/// Convenience overload reading each parameter's own gradient buffer; a
/// parameter that never received a gradient is treated as having zero grad.
template <typename T>
void adam_step(std::span<Tensor<T>> params, AdamState<T>& state) {
  std::vector<std::vector<T>> zeros;
  std::vector<std::span<const T>> grads;
  zeros.reserve(params.size());
  for (auto& p : params) {
    if (p.has_grad()) {
      grads.push_back(p.grad());
    } else {
      zeros.emplace_back(p.size(), T(0));
      grads.push_back(zeros.back());
    }
  }
  adam_step(params, grads, state);
}

}  // namespace agif

#endif  // AGIF_AUTODIFF_ADAM_HPP_
