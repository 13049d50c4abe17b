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

#ifndef AGIF_CORPUS_VOCAB_HPP_
#define AGIF_CORPUS_VOCAB_HPP_

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "agif/corpus/utterance.hpp"

namespace agif::corpus {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

/// Bijective string <-> id map with ids assigned in insertion order.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(const std::vector<std::string>& labels) {
    for (const auto& l : labels) {
      if (!add(l).second) throw std::invalid_argument("duplicate label '" + l + "'");
    }
  }

  // Returns (id, inserted).
  std::pair<int, bool> add(const std::string& label) {
    auto [it, inserted] = index_.emplace(label, static_cast<int>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return {it->second, inserted};
  }

  std::optional<int> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= labels_.size()) {
      throw std::out_of_range("label id " + std::to_string(id) + " out of range");
    }
    return labels_[static_cast<std::size_t>(id)];
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const LabelMap& o) const { return labels_ == o.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

inline std::string lowercase_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Token, slot and intent vocabularies. Token id 0 is PAD and 1 is UNK; slot
/// id 0 is PAD. Intents carry no reserved entries.
struct Vocabulary {
  LabelMap tokens;
  LabelMap slots;
  LabelMap intents;
  bool lowercase = false;

  std::size_t num_intents() const { return intents.size(); }
  std::size_t num_slots() const { return slots.size(); }
  std::size_t num_tokens() const { return tokens.size(); }

  std::string normalize(const std::string& token) const {
    return lowercase ? lowercase_ascii(token) : token;
  }

  int token_id(const std::string& token) const {
    return tokens.find(normalize(token)).value_or(kUnkId);
  }

  // Slot labels unseen in training map to "O" when present, else PAD.
  int slot_id(const std::string& slot) const {
    if (auto id = slots.find(slot)) return *id;
    return slots.find("O").value_or(kPadId);
  }

  // Decodes a predicted slot id; PAD is rendered as "O".
  std::string slot_label(int id) const {
    return id == kPadId ? std::string("O") : slots.label(id);
  }

  bool operator==(const Vocabulary&) const = default;
};

/// Builds vocabularies from the training split only, ids in first-occurrence
/// order.
inline Vocabulary build_vocab(const std::vector<Utterance>& train,
                              bool lowercase = false) {
  if (train.empty()) throw std::invalid_argument("build_vocab: empty training set");
  Vocabulary v;
  v.lowercase = lowercase;
  v.tokens.add(kPadToken);
  v.tokens.add(kUnkToken);
  v.slots.add(kPadToken);
  for (const auto& u : train) {
    for (const auto& t : u.tokens) v.tokens.add(v.normalize(t));
    for (const auto& s : u.slots) v.slots.add(s);
    for (const auto& i : u.intents) v.intents.add(i);
  }
  return v;
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_VOCAB_HPP_
