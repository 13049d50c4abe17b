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

#ifndef AGIF_AUTODIFF_INIT_HPP_
#define AGIF_AUTODIFF_INIT_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/autodiff/tensor.hpp"

namespace agif {

/// Xavier-uniform: U(-s, s) with s = sqrt(6 / (rows + cols)).
template <typename T>
Tensor<T> xavier_init(long rows, long cols, Rng& rng) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("xavier_init: dimensions must be positive");
  }
  const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<T> data(static_cast<std::size_t>(rows * cols));
  for (auto& v : data) v = static_cast<T>(rng.uniform(-s, s));
  return Tensor<T>({static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)},
                   std::move(data), /*requires_grad=*/true);
}

template <typename T>
Tensor<T> zeros_param(std::size_t rows, std::size_t cols) {
  return Tensor<T>::zeros({rows, cols}, /*requires_grad=*/true);
}

}  // namespace agif

#endif  // AGIF_AUTODIFF_INIT_HPP_
