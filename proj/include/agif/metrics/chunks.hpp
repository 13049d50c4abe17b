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

#ifndef AGIF_METRICS_CHUNKS_HPP_
#define AGIF_METRICS_CHUNKS_HPP_

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace agif::metrics {

struct Chunk {
  std::string label;
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  auto operator<=>(const Chunk&) const = default;
};

/// Typed spans of a BIO sequence. B-x always opens a chunk; I-x continues an
/// open x chunk and otherwise opens a new one; O closes.
inline std::vector<Chunk> extract_chunks(const std::vector<std::string>& labels) {
  std::vector<Chunk> chunks;
  bool open = false;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const std::string& l = labels[t];
    if (l == "O") {
      open = false;
      continue;
    }
    if (l.size() < 3 || (l[0] != 'B' && l[0] != 'I') || l[1] != '-') {
      throw std::invalid_argument("malformed BIO label '" + l + "' at position " +
                                  std::to_string(t));
    }
    const std::string type = l.substr(2);
    if (l[0] == 'I' && open && chunks.back().label == type) {
      chunks.back().end = t;
      continue;
    }
    chunks.push_back({type, t, t});
    open = true;
  }
  return chunks;
}

}  // namespace agif::metrics

#endif  // AGIF_METRICS_CHUNKS_HPP_
