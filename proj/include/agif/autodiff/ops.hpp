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

// Differentiable primitives over rank-2 tensors. Every primitive records a
// backward closure when an input requires a gradient; otherwise it is a plain
// computation.

#ifndef AGIF_AUTODIFF_OPS_HPP_
#define AGIF_AUTODIFF_OPS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/autodiff/tensor.hpp"

namespace agif {

namespace detail {

template <typename T>
void require_rank2(const Tensor<T>& t, const char* op) {
  if (!t.defined() || t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a rank-2 tensor");
  }
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                        const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

template <typename T>
bool wants_grad(const Node<T>* n) {
  return n->requires_grad;
}

}  // namespace detail

/// Boolean mask for masked softmax. A mask may cover the whole score matrix
/// or be a single row / column broadcast along the normalized axis.
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(std::size_t r, std::size_t c, bool fill = true)
      : rows(r), cols(c), bits(r * c, fill ? 1 : 0) {}

  // 1×length_max row with the first `valid` entries set.
  static Mask prefix(std::size_t length_max, std::size_t valid) {
    Mask m(1, length_max, false);
    for (std::size_t i = 0; i < valid && i < length_max; ++i) m.bits[i] = 1;
    return m;
  }

  bool operator()(std::size_t r, std::size_t c) const {
    return bits[(rows == 1 ? 0 : r) * cols + (cols == 1 ? 0 : c)] != 0;
  }
  void set(std::size_t r, std::size_t c, bool on) {
    bits[r * cols + c] = on ? 1 : 0;
  }
};

// ---------------------------------------------------------------------------
// Linear algebra

/// A (m×k) · B (k×n).
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_rank2(a, "matmul");
  detail::require_rank2(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul: inner dimensions " + shape_string(a.shape()) +
                     " x " + shape_string(b.shape()));
  }
  std::vector<T> out(m * n, T(0));
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const T x = av[i * k + p];
      const T* brow = &bv[p * n];
      T* orow = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += x * brow[j];
    }
  }
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_result<T>({m, n}, std::move(out), {&a, &b},
      [an, bn, m, k, n](detail::Node<T>& self) {
        const auto& g = self.grad;
        if (an->requires_grad) {
          an->ensure_grad();
          // dA = G · Bᵀ
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < k; ++p) {
              T acc = T(0);
              for (std::size_t j = 0; j < n; ++j)
                acc += g[i * n + j] * bn->value[p * n + j];
              an->grad[i * k + p] += acc;
            }
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          // dB = Aᵀ · G
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < k; ++p) {
              const T x = an->value[i * k + p];
              for (std::size_t j = 0; j < n; ++j)
                bn->grad[p * n + j] += x * g[i * n + j];
            }
        }
      });
}

/// A (m×k) · Bᵀ where B is (n×k).
template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_rank2(a, "matmul_nt");
  detail::require_rank2(b, "matmul_nt");
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  if (b.cols() != k) {
    throw ShapeError("matmul_nt: inner dimensions " + shape_string(a.shape()) +
                     " x " + shape_string(b.shape()) + "^T");
  }
  std::vector<T> out(m * n);
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T acc = T(0);
      const T* ar = &av[i * k];
      const T* br = &bv[j * k];
      for (std::size_t p = 0; p < k; ++p) acc += ar[p] * br[p];
      out[i * n + j] = acc;
    }
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_result<T>({m, n}, std::move(out), {&a, &b},
      [an, bn, m, k, n](detail::Node<T>& self) {
        const auto& g = self.grad;
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              const T gij = g[i * n + j];
              for (std::size_t p = 0; p < k; ++p)
                an->grad[i * k + p] += gij * bn->value[j * k + p];
            }
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              const T gij = g[i * n + j];
              for (std::size_t p = 0; p < k; ++p)
                bn->grad[j * k + p] += gij * an->value[i * k + p];
            }
        }
      });
}

/// y = x·Wᵀ + b with x (m×in), W (out×in), b (1×out).
template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w,
                 const std::optional<Tensor<T>>& bias = std::nullopt) {
  detail::require_rank2(x, "linear");
  detail::require_rank2(w, "linear");
  const std::size_t m = x.rows(), in = x.cols(), out_dim = w.rows();
  if (w.cols() != in) {
    throw ShapeError("linear: input width " + std::to_string(in) +
                     " does not match weight " + shape_string(w.shape()));
  }
  if (bias && (bias->rows() != 1 || bias->cols() != out_dim)) {
    throw ShapeError("linear: bias shape " + shape_string(bias->shape()));
  }
  std::vector<T> out(m * out_dim);
  const auto& xv = x.values();
  const auto& wv = w.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t o = 0; o < out_dim; ++o) {
      T acc = bias ? bias->values()[o] : T(0);
      const T* xr = &xv[i * in];
      const T* wr = &wv[o * in];
      for (std::size_t p = 0; p < in; ++p) acc += xr[p] * wr[p];
      out[i * out_dim + o] = acc;
    }
  auto* xn = x.node();
  auto* wn = w.node();
  auto* bn = bias ? bias->node() : nullptr;
  auto fn = [xn, wn, bn, m, in, out_dim](detail::Node<T>& self) {
    const auto& g = self.grad;
    if (xn->requires_grad) {
      xn->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out_dim; ++o) {
          const T gio = g[i * out_dim + o];
          const T* wr = &wn->value[o * in];
          T* xg = &xn->grad[i * in];
          for (std::size_t p = 0; p < in; ++p) xg[p] += gio * wr[p];
        }
    }
    if (wn->requires_grad) {
      wn->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out_dim; ++o) {
          const T gio = g[i * out_dim + o];
          const T* xr = &xn->value[i * in];
          T* wg = &wn->grad[o * in];
          for (std::size_t p = 0; p < in; ++p) wg[p] += gio * xr[p];
        }
    }
    if (bn && bn->requires_grad) {
      bn->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out_dim; ++o)
          bn->grad[o] += g[i * out_dim + o];
    }
  };
  if (bias) {
    return detail::make_result<T>({m, out_dim}, std::move(out),
                                  {&x, &w, &*bias}, fn);
  }
  return detail::make_result<T>({m, out_dim}, std::move(out), {&x, &w}, fn);
}

// ---------------------------------------------------------------------------
// Elementwise arithmetic

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "add");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a, &b},
      [an, bn](detail::Node<T>& self) {
        for (auto* p : {an, bn}) {
          if (!p->requires_grad) continue;
          p->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            p->grad[i] += self.grad[i];
        }
      });
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "sub");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a, &b},
      [an, bn](detail::Node<T>& self) {
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            an->grad[i] += self.grad[i];
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            bn->grad[i] -= self.grad[i];
        }
      });
}

/// Hadamard product.
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "mul");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a, &b},
      [an, bn](detail::Node<T>& self) {
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            an->grad[i] += self.grad[i] * bn->value[i];
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            bn->grad[i] += self.grad[i] * an->value[i];
        }
      });
}

/// scale·a + shift.
template <typename T>
Tensor<T> affine(const Tensor<T>& a, T scale, T shift = T(0)) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * a[i] + shift;
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an, scale](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i)
          an->grad[i] += scale * self.grad[i];
      });
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T s) {
  return affine(a, s, T(0));
}

/// a (m×n) + r (1×n) broadcast over rows.
template <typename T>
Tensor<T> add_row(const Tensor<T>& a, const Tensor<T>& r) {
  detail::require_rank2(a, "add_row");
  const std::size_t m = a.rows(), n = a.cols();
  if (r.rows() != 1 || r.cols() != n) {
    throw ShapeError("add_row: row shape " + shape_string(r.shape()));
  }
  std::vector<T> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a[i * n + j] + r[j];
  auto* an = a.node();
  auto* rn = r.node();
  return detail::make_result<T>({m, n}, std::move(out), {&a, &r},
      [an, rn, m, n](detail::Node<T>& self) {
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < m * n; ++i) an->grad[i] += self.grad[i];
        }
        if (rn->requires_grad) {
          rn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
              rn->grad[j] += self.grad[i * n + j];
        }
      });
}

/// out[i][j] = col[i] + row[j] for col (m×1), row (1×n).
template <typename T>
Tensor<T> outer_sum(const Tensor<T>& col, const Tensor<T>& row) {
  if (col.cols() != 1 || row.rows() != 1) {
    throw ShapeError("outer_sum: expects (m×1) and (1×n)");
  }
  const std::size_t m = col.rows(), n = row.cols();
  std::vector<T> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = col[i] + row[j];
  auto* cn = col.node();
  auto* rn = row.node();
  return detail::make_result<T>({m, n}, std::move(out), {&col, &row},
      [cn, rn, m, n](detail::Node<T>& self) {
        if (cn->requires_grad) {
          cn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
              cn->grad[i] += self.grad[i * n + j];
        }
        if (rn->requires_grad) {
          rn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
              rn->grad[j] += self.grad[i * n + j];
        }
      });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  T acc = T(0);
  for (T v : a.data()) acc += v;
  auto* an = a.node();
  return detail::make_result<T>({1, 1}, {acc}, {&a},
      [an](detail::Node<T>& self) {
        an->ensure_grad();
        const T g = self.grad[0];
        for (auto& v : an->grad) v += g;
      });
}

/// Σ a², used for the ℓ2 penalty.
template <typename T>
Tensor<T> squared_norm(const Tensor<T>& a) {
  T acc = T(0);
  for (T v : a.data()) acc += v * v;
  auto* an = a.node();
  return detail::make_result<T>({1, 1}, {acc}, {&a},
      [an](detail::Node<T>& self) {
        an->ensure_grad();
        const T g = self.grad[0];
        for (std::size_t i = 0; i < an->value.size(); ++i)
          an->grad[i] += T(2) * an->value[i] * g;
      });
}

// Sum of a list of same-shaped tensors.
template <typename T>
Tensor<T> add_n(const std::vector<Tensor<T>>& xs) {
  if (xs.empty()) throw ShapeError("add_n: empty input");
  for (const auto& x : xs) detail::require_same_shape(xs.front(), x, "add_n");
  std::vector<T> out(xs.front().size(), T(0));
  for (const auto& x : xs)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[i];
  std::vector<detail::Node<T>*> nodes;
  for (const auto& x : xs) nodes.push_back(x.node());
  return detail::make_result<T>(xs.front().shape(), std::move(out), xs,
      [nodes](detail::Node<T>& self) {
        for (auto* p : nodes) {
          if (!p->requires_grad) continue;
          p->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            p->grad[i] += self.grad[i];
        }
      });
}

// ---------------------------------------------------------------------------
// Activations

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& a) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const T x = a[i];
    out[i] = x >= T(0) ? T(1) / (T(1) + std::exp(-x))
                       : std::exp(x) / (T(1) + std::exp(x));
  }
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          const T y = self.value[i];
          an->grad[i] += self.grad[i] * y * (T(1) - y);
        }
      });
}

template <typename T>
Tensor<T> tanh(const Tensor<T>& a) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a[i]);
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          const T y = self.value[i];
          an->grad[i] += self.grad[i] * (T(1) - y * y);
        }
      });
}

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& a, T slope) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] > T(0) ? a[i] : slope * a[i];
    detail::record_branch(a[i] > T(0) ? 1u : 0u);
  }
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an, slope](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i)
          an->grad[i] += self.grad[i] * (an->value[i] > T(0) ? T(1) : slope);
      });
}

template <typename T>
Tensor<T> log(const Tensor<T>& a) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(a[i]);
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i)
          an->grad[i] += self.grad[i] / an->value[i];
      });
}

/// Clamps into [lo, hi]; the gradient is zero for clamped entries.
template <typename T>
Tensor<T> clamp(const Tensor<T>& a, T lo, T hi) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(std::max(a[i], lo), hi);
    detail::record_branch(a[i] < lo ? 0u : (a[i] > hi ? 2u : 1u));
  }
  auto* an = a.node();
  return detail::make_result<T>(a.shape(), std::move(out), {&a},
      [an, lo, hi](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          const T x = an->value[i];
          if (x >= lo && x <= hi) an->grad[i] += self.grad[i];
        }
      });
}

// ---------------------------------------------------------------------------
// Structural ops

template <typename T>
Tensor<T> concat_cols(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: empty input");
  const std::size_t m = parts.front().rows();
  std::size_t n = 0;
  std::vector<std::size_t> widths;
  for (const auto& p : parts) {
    detail::require_rank2(p, "concat_cols");
    if (p.rows() != m) throw ShapeError("concat_cols: row count mismatch");
    widths.push_back(p.cols());
    n += p.cols();
  }
  std::vector<T> out(m * n);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.cols();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < w; ++j) out[i * n + offset + j] = p[i * w + j];
    offset += w;
  }
  std::vector<detail::Node<T>*> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return detail::make_result<T>({m, n}, std::move(out), parts,
      [nodes, widths, m, n](detail::Node<T>& self) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          auto* p = nodes[k];
          const std::size_t w = widths[k];
          if (p->requires_grad) {
            p->ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t j = 0; j < w; ++j)
                p->grad[i * w + j] += self.grad[i * n + off + j];
          }
          off += w;
        }
      });
}

template <typename T>
Tensor<T> concat_rows(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: empty input");
  const std::size_t n = parts.front().cols();
  std::size_t m = 0;
  for (const auto& p : parts) {
    detail::require_rank2(p, "concat_rows");
    if (p.cols() != n) throw ShapeError("concat_rows: column count mismatch");
    m += p.rows();
  }
  std::vector<T> out;
  out.reserve(m * n);
  for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  std::vector<detail::Node<T>*> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return detail::make_result<T>({m, n}, std::move(out), parts,
      [nodes](detail::Node<T>& self) {
        std::size_t off = 0;
        for (auto* p : nodes) {
          const std::size_t len = p->value.size();
          if (p->requires_grad) {
            p->ensure_grad();
            for (std::size_t i = 0; i < len; ++i) p->grad[i] += self.grad[off + i];
          }
          off += len;
        }
      });
}

/// Columns [begin, end).
template <typename T>
Tensor<T> slice_cols(const Tensor<T>& a, std::size_t begin, std::size_t end) {
  detail::require_rank2(a, "slice_cols");
  const std::size_t m = a.rows(), n = a.cols();
  if (begin >= end || end > n) throw ShapeError("slice_cols: bad range");
  const std::size_t w = end - begin;
  std::vector<T> out(m * w);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < w; ++j) out[i * w + j] = a[i * n + begin + j];
  auto* an = a.node();
  return detail::make_result<T>({m, w}, std::move(out), {&a},
      [an, m, n, w, begin](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < w; ++j)
            an->grad[i * n + begin + j] += self.grad[i * w + j];
      });
}

/// Rows [begin, end).
template <typename T>
Tensor<T> slice_rows(const Tensor<T>& a, std::size_t begin, std::size_t end) {
  detail::require_rank2(a, "slice_rows");
  const std::size_t m = a.rows(), n = a.cols();
  if (begin >= end || end > m) throw ShapeError("slice_rows: bad range");
  std::vector<T> out(a.data().begin() + begin * n, a.data().begin() + end * n);
  auto* an = a.node();
  return detail::make_result<T>({end - begin, n}, std::move(out), {&a},
      [an, begin, n](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i)
          an->grad[begin * n + i] += self.grad[i];
      });
}

template <typename T>
Tensor<T> row_of(const Tensor<T>& a, std::size_t r) {
  return slice_rows(a, r, r + 1);
}

/// Gathers rows of `table` (V×d) by id, producing (ids.size()×d).
template <typename T>
Tensor<T> embedding(const Tensor<T>& table, const std::vector<int>& ids) {
  detail::require_rank2(table, "embedding");
  const std::size_t v = table.rows(), d = table.cols(), m = ids.size();
  if (m == 0) throw ShapeError("embedding: no ids");
  std::vector<T> out(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= v) {
      throw ShapeError("embedding: id " + std::to_string(ids[i]) +
                       " out of range " + std::to_string(v));
    }
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = table[ids[i] * d + j];
  }
  auto* tn = table.node();
  return detail::make_result<T>({m, d}, std::move(out), {&table},
      [tn, ids, d](detail::Node<T>& self) {
        tn->ensure_grad();
        for (std::size_t i = 0; i < ids.size(); ++i)
          for (std::size_t j = 0; j < d; ++j)
            tn->grad[ids[i] * d + j] += self.grad[i * d + j];
      });
}

struct Index2 {
  std::size_t row;
  std::size_t col;
};

/// Picks individual elements into a (1×K) row.
template <typename T>
Tensor<T> gather(const Tensor<T>& a, const std::vector<Index2>& at) {
  if (at.empty()) throw ShapeError("gather: no indices");
  const std::size_t n = a.cols();
  std::vector<T> out(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    if (at[k].row >= a.rows() || at[k].col >= n) {
      throw ShapeError("gather: index out of range");
    }
    out[k] = a[at[k].row * n + at[k].col];
  }
  auto* an = a.node();
  return detail::make_result<T>({1, at.size()}, std::move(out), {&a},
      [an, at, n](detail::Node<T>& self) {
        an->ensure_grad();
        for (std::size_t k = 0; k < at.size(); ++k)
          an->grad[at[k].row * n + at[k].col] += self.grad[k];
      });
}

// ---------------------------------------------------------------------------
// Softmax

class MaskError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Softmax along `axis` (1: each row, 0: each column). Masked positions are
/// exactly 0 and receive no gradient.
template <typename T>
Tensor<T> masked_softmax(const Tensor<T>& scores, const Mask& mask, int axis = 1) {
  detail::require_rank2(scores, "masked_softmax");
  if (axis != 0 && axis != 1) throw ShapeError("masked_softmax: axis must be 0 or 1");
  const std::size_t m = scores.rows(), n = scores.cols();
  const bool rows_ok = mask.rows == m || mask.rows == 1;
  const bool cols_ok = mask.cols == n || mask.cols == 1;
  if (!rows_ok || !cols_ok) {
    throw ShapeError("masked_softmax: mask shape does not match scores");
  }
  // Groups are rows for axis 1, columns for axis 0.
  const std::size_t groups = axis == 1 ? m : n;
  const std::size_t len = axis == 1 ? n : m;
  auto index = [=](std::size_t g, std::size_t k) {
    return axis == 1 ? g * n + k : k * n + g;
  };
  auto valid = [&](std::size_t g, std::size_t k) {
    return axis == 1 ? mask(g, k) : mask(k, g);
  };
  std::vector<T> out(m * n, T(0));
  for (std::size_t g = 0; g < groups; ++g) {
    T mx = -std::numeric_limits<T>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < len; ++k) {
      if (!valid(g, k)) continue;
      any = true;
      mx = std::max(mx, scores[index(g, k)]);
    }
    if (!any) throw MaskError("masked_softmax: fully masked row");
    T z = T(0);
    for (std::size_t k = 0; k < len; ++k) {
      if (!valid(g, k)) continue;
      const T e = std::exp(scores[index(g, k)] - mx);
      out[index(g, k)] = e;
      z += e;
    }
    for (std::size_t k = 0; k < len; ++k) out[index(g, k)] /= z;
  }
  auto* sn = scores.node();
  return detail::make_result<T>({m, n}, std::move(out), {&scores},
      [sn, groups, len, index](detail::Node<T>& self) {
        sn->ensure_grad();
        for (std::size_t g = 0; g < groups; ++g) {
          T dot = T(0);
          for (std::size_t k = 0; k < len; ++k) {
            const auto i = index(g, k);
            dot += self.grad[i] * self.value[i];
          }
          for (std::size_t k = 0; k < len; ++k) {
            const auto i = index(g, k);
            const T y = self.value[i];
            if (y != T(0)) sn->grad[i] += y * (self.grad[i] - dot);
          }
        }
      });
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& scores, int axis = 1) {
  return masked_softmax(scores, Mask(1, 1, true), axis);
}

// ---------------------------------------------------------------------------
// Dropout

/// Inverted dropout: survivors are rescaled by 1/(1-rate); identity in eval.
template <typename T>
Tensor<T> dropout(const Tensor<T>& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0) || rate >= 1.0) {
    throw std::invalid_argument("dropout: rate must lie in [0, 1)");
  }
  if (!training || rate == 0.0) return x;
  const T keep_scale = T(1.0 / (1.0 - rate));
  std::vector<T> factor(x.size());
  for (auto& f : factor) f = rng.uniform() < rate ? T(0) : keep_scale;
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * factor[i];
  auto* xn = x.node();
  return detail::make_result<T>(x.shape(), std::move(out), {&x},
      [xn, factor](detail::Node<T>& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i)
          xn->grad[i] += self.grad[i] * factor[i];
      });
}

}  // namespace agif

#endif  // AGIF_AUTODIFF_OPS_HPP_
