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

#ifndef AGIF_CORPUS_UTTERANCE_HPP_
#define AGIF_CORPUS_UTTERANCE_HPP_

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace agif::corpus {

/// One annotated utterance. `intents` keeps first-occurrence order for
/// serialization but is compared as a set.
struct Utterance {
  std::vector<std::string> tokens;
  std::vector<std::string> slots;
  std::vector<std::string> intents;

  bool operator==(const Utterance&) const = default;
};

inline bool same_intent_set(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  return std::set<std::string>(a.begin(), a.end()) ==
         std::set<std::string>(b.begin(), b.end());
}

/// Throws std::invalid_argument when the utterance breaks its invariants.
inline void validate(const Utterance& u) {
  if (u.tokens.empty()) throw std::invalid_argument("utterance has no tokens");
  if (u.tokens.size() != u.slots.size()) {
    throw std::invalid_argument("utterance has " + std::to_string(u.tokens.size()) +
                                " tokens but " + std::to_string(u.slots.size()) +
                                " slot labels");
  }
  if (u.intents.empty()) throw std::invalid_argument("utterance has no intents");
  std::set<std::string> seen;
  for (const auto& i : u.intents) {
    if (i.empty()) throw std::invalid_argument("empty intent label");
    if (!seen.insert(i).second) {
      throw std::invalid_argument("duplicate intent label '" + i + "'");
    }
  }
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_UTTERANCE_HPP_
