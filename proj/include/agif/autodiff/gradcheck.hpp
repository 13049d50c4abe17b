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

#ifndef AGIF_AUTODIFF_GRADCHECK_HPP_
#define AGIF_AUTODIFF_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/autodiff/tensor.hpp"

namespace agif {

struct ParamCheck {
  // Largest coordinate-wise relative error.
  double max_rel_err = 0.0;
  // ||analytic - numeric|| / max(||analytic||, ||numeric||, 1e-12) over the
  // checked coordinates.
  double norm_rel_err = 0.0;
  std::size_t checked = 0;
  // Coordinates whose +h and -h evaluations took different branches of a
  // piecewise op; excluded from both errors.
  std::size_t kinks = 0;
};

struct GradCheckResult {
  double max_rel_err = 0.0;
  double max_norm_rel_err = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
  std::size_t kinks = 0;
  std::vector<ParamCheck> per_param;  // in argument order
};

struct GradCheckOptions {
  double h = 1e-4;
  // Coordinates sampled per parameter; 0 checks every coordinate.
  std::size_t samples_per_param = 0;
  std::uint64_t seed = 0;
  // Skip coordinates whose perturbation crosses a kink of a piecewise op.
  bool skip_kinks = true;
};

/// Compares reverse-mode gradients of the scalar `f` against central
/// differences. The relative error of one coordinate is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
template <typename T>
GradCheckResult finite_diff_check(const std::function<Tensor<T>()>& f,
                                  std::vector<Tensor<T>> params,
                                  const GradCheckOptions& opts = {}) {
  if (!(opts.h > 0.0)) throw std::invalid_argument("finite_diff_check: h must be > 0");

  for (auto& p : params) p.zero_grad();
  const Tensor<T> loss = f();
  {
    NoGradGuard guard;
    if (f().item() != loss.item()) {
      throw std::invalid_argument("finite_diff_check: function is not deterministic");
    }
  }
  backward(loss);

  auto evaluate = [&](std::uint64_t& signature) {
    BranchRecorder recorder;
    const double v = static_cast<double>(f().item());
    signature = recorder.signature();
    return v;
  };

  GradCheckResult result;
  Rng rng(opts.seed);
  NoGradGuard guard;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto& p = params[pi];
    std::vector<T> analytic(p.size(), T(0));
    if (p.has_grad()) analytic.assign(p.grad().begin(), p.grad().end());
    std::vector<std::size_t> coords(p.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (opts.samples_per_param > 0 && opts.samples_per_param < coords.size()) {
      rng.shuffle(coords);
      coords.resize(opts.samples_per_param);
    }
    ParamCheck pc;
    double diff_sq = 0.0, a_sq = 0.0, n_sq = 0.0;
    auto values = p.mutable_data();
    for (std::size_t idx : coords) {
      const T saved = values[idx];
      std::uint64_t sig_up = 0, sig_down = 0;
      values[idx] = saved + static_cast<T>(opts.h);
      const double up = evaluate(sig_up);
      values[idx] = saved - static_cast<T>(opts.h);
      const double down = evaluate(sig_down);
      values[idx] = saved;
      if (opts.skip_kinks && sig_up != sig_down) {
        ++pc.kinks;
        continue;
      }
      const double numeric = (up - down) / (2.0 * opts.h);
      const double a = static_cast<double>(analytic[idx]);
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      diff_sq += (a - numeric) * (a - numeric);
      a_sq += a * a;
      n_sq += numeric * numeric;
      ++pc.checked;
      if (rel > result.max_rel_err || result.checked + pc.checked == 1) {
        result.max_rel_err = rel;
        result.worst_param = pi;
        result.worst_index = idx;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
      pc.max_rel_err = std::max(pc.max_rel_err, rel);
    }
    pc.norm_rel_err =
        std::sqrt(diff_sq) / std::max({std::sqrt(a_sq), std::sqrt(n_sq), 1e-12});
    result.max_norm_rel_err = std::max(result.max_norm_rel_err, pc.norm_rel_err);
    result.checked += pc.checked;
    result.kinks += pc.kinks;
    result.per_param.push_back(pc);
  }
  return result;
}

}  // namespace agif

#endif  // AGIF_AUTODIFF_GRADCHECK_HPP_
