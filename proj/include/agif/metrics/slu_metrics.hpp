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

#ifndef AGIF_METRICS_SLU_METRICS_HPP_
#define AGIF_METRICS_SLU_METRICS_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/corpus/utterance.hpp"
#include "agif/metrics/chunks.hpp"

namespace agif::metrics {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline PrecisionRecall from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecall r;
  r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  // Equal to 2PR/(P+R), evaluated from counts in one division.
  r.f1 = tp ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn) : 0.0;
  return r;
}

/// Micro-averaged span F1 over exactly matching (label, start, end) chunks.
inline PrecisionRecall slot_f1(const std::vector<std::vector<std::string>>& gold,
                               const std::vector<std::vector<std::string>>& pred) {
  if (gold.size() != pred.size()) throw std::invalid_argument("slot_f1: corpus size mismatch");
  std::size_t tp = 0, n_gold = 0, n_pred = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw std::invalid_argument("slot_f1: length mismatch in utterance " + std::to_string(i));
    }
    const auto g = extract_chunks(gold[i]);
    const auto p = extract_chunks(pred[i]);
    const std::set<Chunk> gs(g.begin(), g.end());
    n_gold += gs.size();
    n_pred += p.size();
    for (const auto& c : p) tp += gs.count(c);
  }
  return from_counts(tp, n_pred - tp, n_gold - tp);
}

struct LabelScore {
  PrecisionRecall score;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct IntentScores {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::map<std::string, LabelScore> per_label;
};

/// Exact-set accuracy and macro F1 over labels that occur in gold or
/// prediction (each utterance contributes presence/absence per label).
inline IntentScores intent_metrics(const std::vector<std::vector<std::string>>& gold,
                                   const std::vector<std::vector<std::string>>& pred) {
  if (gold.size() != pred.size()) throw std::invalid_argument("intent_metrics: size mismatch");
  IntentScores out;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::set<std::string> g(gold[i].begin(), gold[i].end());
    const std::set<std::string> p(pred[i].begin(), pred[i].end());
    if (g == p) ++exact;
    for (const auto& l : g) {
      auto& s = out.per_label[l];
      if (p.count(l)) ++s.tp; else ++s.fn;
    }
    for (const auto& l : p) {
      if (!g.count(l)) ++out.per_label[l].fp;
    }
  }
  out.accuracy = gold.empty() ? 0.0 : static_cast<double>(exact) / static_cast<double>(gold.size());
  double total = 0.0;
  for (auto& [label, s] : out.per_label) {
    s.score = from_counts(s.tp, s.fp, s.fn);
    total += s.score.f1;
  }
  out.macro_f1 = out.per_label.empty() ? 0.0 : total / static_cast<double>(out.per_label.size());
  return out;
}

/// Fraction of utterances whose intent set and every slot label are correct.
inline double overall_acc(const std::vector<corpus::Utterance>& gold,
                          const std::vector<corpus::Utterance>& pred) {
  if (gold.size() != pred.size()) throw std::invalid_argument("overall_acc: size mismatch");
  if (gold.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].slots.size() != pred[i].slots.size()) {
      throw std::invalid_argument("overall_acc: length mismatch in utterance " + std::to_string(i));
    }
    if (corpus::same_intent_set(gold[i].intents, pred[i].intents) &&
        gold[i].slots == pred[i].slots) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

struct EvalReport {
  double slot_f1 = 0.0;
  double slot_precision = 0.0;
  double slot_recall = 0.0;
  double intent_macro_f1 = 0.0;
  double intent_acc = 0.0;
  double overall_acc = 0.0;
  std::map<std::string, LabelScore> per_intent;
  std::size_t utterances = 0;
};

inline EvalReport compute_report(const std::vector<corpus::Utterance>& gold,
                                 const std::vector<corpus::Utterance>& pred) {
  if (gold.size() != pred.size()) throw std::invalid_argument("compute_report: size mismatch");
  std::vector<std::vector<std::string>> gs, ps, gi, pi;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    gs.push_back(gold[i].slots);
    ps.push_back(pred[i].slots);
    gi.push_back(gold[i].intents);
    pi.push_back(pred[i].intents);
  }
  EvalReport r;
  const auto slots = slot_f1(gs, ps);
  r.slot_f1 = slots.f1;
  r.slot_precision = slots.precision;
  r.slot_recall = slots.recall;
  const auto intents = intent_metrics(gi, pi);
  r.intent_macro_f1 = intents.macro_f1;
  r.intent_acc = intents.accuracy;
  r.per_intent = intents.per_label;
  r.overall_acc = overall_acc(gold, pred);
  r.utterances = gold.size();
  return r;
}

}  // namespace agif::metrics

#endif  // AGIF_METRICS_SLU_METRICS_HPP_
