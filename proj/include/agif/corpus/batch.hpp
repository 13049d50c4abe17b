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

#ifndef AGIF_CORPUS_BATCH_HPP_
#define AGIF_CORPUS_BATCH_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "agif/corpus/utterance.hpp"
#include "agif/corpus/vocab.hpp"

namespace agif::corpus {

/// Row-major B×columns matrix of integers.
template <typename V>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<V> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, V fill = V{}) : rows(r), cols(c), data(r * c, fill) {}

  V& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const V& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::vector<V> row(std::size_t r) const {
    return std::vector<V>(data.begin() + r * cols, data.begin() + (r + 1) * cols);
  }
};

/// Padded id matrices ready for the model. `mask(b, t)` holds exactly for
/// t < lengths[b]; padded positions carry PAD ids.
struct Batch {
  Matrix<int> token_ids;
  Matrix<int> slot_ids;
  Matrix<double> intent_targets;
  Matrix<std::uint8_t> mask;
  std::vector<std::size_t> lengths;
  // Gold intent ids per row (unknown labels dropped), first-occurrence order.
  std::vector<std::vector<int>> gold_intents;

  std::size_t size() const { return lengths.size(); }
  std::size_t max_length() const { return token_ids.cols; }

  // Token ids of row b restricted to its valid prefix.
  std::vector<int> tokens(std::size_t b) const {
    auto r = token_ids.row(b);
    r.resize(lengths[b]);
    return r;
  }
  std::vector<int> slots(std::size_t b) const {
    auto r = slot_ids.row(b);
    r.resize(lengths[b]);
    return r;
  }
};

inline Batch encode_batch(const std::vector<Utterance>& utterances,
                          const Vocabulary& vocab) {
  Batch batch;
  std::size_t t_max = 0;
  for (const auto& u : utterances) {
    validate(u);
    t_max = std::max(t_max, u.tokens.size());
  }
  const std::size_t b = utterances.size();
  const std::size_t n_i = vocab.num_intents();
  batch.token_ids = Matrix<int>(b, t_max, kPadId);
  batch.slot_ids = Matrix<int>(b, t_max, kPadId);
  batch.intent_targets = Matrix<double>(b, n_i, 0.0);
  batch.mask = Matrix<std::uint8_t>(b, t_max, 0);
  batch.gold_intents.resize(b);
  for (std::size_t r = 0; r < b; ++r) {
    const auto& u = utterances[r];
    batch.lengths.push_back(u.tokens.size());
    for (std::size_t t = 0; t < u.tokens.size(); ++t) {
      batch.token_ids(r, t) = vocab.token_id(u.tokens[t]);
      batch.slot_ids(r, t) = vocab.slot_id(u.slots[t]);
      batch.mask(r, t) = 1;
    }
    for (const auto& intent : u.intents) {
      if (auto id = vocab.intents.find(intent)) {
        batch.intent_targets(r, static_cast<std::size_t>(*id)) = 1.0;
        batch.gold_intents[r].push_back(*id);
      }
    }
  }
  return batch;
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_BATCH_HPP_
