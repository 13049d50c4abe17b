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

#ifndef AGIF_CORPUS_MIXER_HPP_
#define AGIF_CORPUS_MIXER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/corpus/utterance.hpp"

namespace agif::corpus {

struct SplitSizes {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  bool operator==(const SplitSizes&) const = default;
};

/// Options for synthesizing multi-intent utterances from single-intent ones.
struct MixSpec {
  // Probabilities of producing 1, 2 and 3 intent utterances.
  std::array<double, 3> ratio{0.3, 0.5, 0.2};
  std::string conjunction = "and";
  std::uint64_t seed = 0;
  SplitSizes sizes;
  bool require_distinct_intents = true;
};

inline void validate(const MixSpec& spec) {
  double total = 0.0;
  for (double r : spec.ratio) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("mix ratio entries must be non-negative");
    }
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("mix ratio must sum to 1");
  }
  if (spec.conjunction.empty() ||
      spec.conjunction.find_first_of(" \t\n") != std::string::npos) {
    throw std::invalid_argument("conjunction must be a single non-empty token");
  }
}

enum class DatasetPreset { kMixSnips, kMixAtis, kDstc4 };

/// Published split sizes (train, dev, test) of the reference corpora.
inline SplitSizes split_sizes_reference(DatasetPreset preset) {
  switch (preset) {
    case DatasetPreset::kMixSnips: return {45000, 2500, 2500};
    case DatasetPreset::kMixAtis: return {18000, 1000, 1000};
    case DatasetPreset::kDstc4: return {12759, 4812, 7848};
  }
  throw std::invalid_argument("unknown dataset preset");
}

namespace detail {

inline std::size_t draw_intent_count(const std::array<double, 3>& ratio, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (ratio[k] > 0.0) last_positive = k;
    acc += ratio[k];
    if (u < acc && ratio[k] > 0.0) return k + 1;
  }
  return last_positive + 1;
}

inline bool overlaps(const std::set<std::string>& used, const Utterance& u) {
  for (const auto& i : u.intents) {
    if (used.count(i)) return true;
  }
  return false;
}

}  // namespace detail

/// Concatenates parts with the conjunction token (slot "O") between them.
inline Utterance concatenate(const std::vector<const Utterance*>& parts,
                             const std::string& conjunction) {
  Utterance out;
  std::set<std::string> seen;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (p) {
      out.tokens.push_back(conjunction);
      out.slots.push_back("O");
    }
    const auto& u = *parts[p];
    out.tokens.insert(out.tokens.end(), u.tokens.begin(), u.tokens.end());
    out.slots.insert(out.slots.end(), u.slots.begin(), u.slots.end());
    for (const auto& i : u.intents) {
      if (seen.insert(i).second) out.intents.push_back(i);
    }
  }
  return out;
}

/// Draws `count` utterances. Each draws k in {1,2,3} from `spec.ratio`, then
/// k distinct source utterances (with pairwise disjoint intents when
/// `require_distinct_intents`), joined by the conjunction.
inline std::vector<Utterance> mix_datasets(const std::vector<Utterance>& source,
                                           const MixSpec& spec, std::size_t count,
                                           Rng& rng) {
  validate(spec);
  if (count == 0) return {};
  if (source.empty()) throw std::invalid_argument("mix_datasets: empty source");
  std::size_t max_k = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (spec.ratio[k] > 0.0) max_k = k + 1;
  }
  std::set<std::string> distinct;
  for (const auto& u : source) distinct.insert(u.intents.begin(), u.intents.end());
  if (spec.require_distinct_intents && distinct.size() < max_k) {
    throw std::invalid_argument("mix_datasets: source has " +
                                std::to_string(distinct.size()) +
                                " distinct intents but up to " + std::to_string(max_k) +
                                " are requested per utterance");
  }
  if (source.size() < max_k) {
    throw std::invalid_argument("mix_datasets: source smaller than requested parts");
  }

  constexpr int kMaxRejections = 1000;
  std::vector<Utterance> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t k = detail::draw_intent_count(spec.ratio, rng);
    std::vector<std::size_t> chosen;
    std::set<std::string> used;
    auto acceptable = [&](std::size_t idx) {
      if (std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) return false;
      return !(spec.require_distinct_intents && detail::overlaps(used, source[idx]));
    };
    while (chosen.size() < k) {
      std::size_t pick = source.size();
      for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const auto idx = static_cast<std::size_t>(rng.below(source.size()));
        if (acceptable(idx)) {
          pick = idx;
          break;
        }
      }
      if (pick == source.size()) {
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < source.size(); ++i) {
          if (acceptable(i)) eligible.push_back(i);
        }
        if (eligible.empty()) {
          throw std::invalid_argument(
              "mix_datasets: no source utterance with unused intents remains");
        }
        pick = eligible[rng.below(eligible.size())];
      }
      chosen.push_back(pick);
      used.insert(source[pick].intents.begin(), source[pick].intents.end());
    }
    std::vector<const Utterance*> parts;
    for (auto idx : chosen) parts.push_back(&source[idx]);
    out.push_back(concatenate(parts, spec.conjunction));
  }
  return out;
}

struct Splits {
  std::vector<Utterance> train;
  std::vector<Utterance> dev;
  std::vector<Utterance> test;
};

/// Mixes each split from the matching source split only, with independent
/// streams derived from `spec.seed`.
inline Splits mix_splits(const Splits& source, const MixSpec& spec) {
  Rng root(spec.seed);
  Rng train_rng = root.split();
  Rng dev_rng = root.split();
  Rng test_rng = root.split();
  Splits out;
  out.train = mix_datasets(source.train, spec, spec.sizes.train, train_rng);
  out.dev = mix_datasets(source.dev, spec, spec.sizes.dev, dev_rng);
  out.test = mix_datasets(source.test, spec, spec.sizes.test, test_rng);
  return out;
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_MIXER_HPP_
