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

// JSON forms of configurations, vocabularies and evaluation reports. Readers
// overlay the keys present onto an existing value and reject unknown keys.

#ifndef AGIF_TRAINING_SERIALIZATION_HPP_
#define AGIF_TRAINING_SERIALIZATION_HPP_

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>

#include "agif/corpus/vocab.hpp"
#include "agif/metrics/slu_metrics.hpp"
#include "agif/model/config.hpp"
#include "agif/training/config.hpp"

namespace agif::training {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& known,
                           const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument(what + ": unknown key '" + key + "'");
  }
}

template <typename V>
void read_if(const Json& j, const char* key, V& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<V>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const model::ModelConfig& c) {
  return Json{{"vocab_size", c.vocab_size},
              {"num_intents", c.num_intents},
              {"num_slots", c.num_slots},
              {"d_emb", c.d_emb},
              {"d", c.d},
              {"d_k", c.d_k},
              {"intent_hidden", c.intent_hidden},
              {"d_g", c.d_g},
              {"heads", c.heads},
              {"layers", c.layers},
              {"intent_threshold", c.intent_threshold},
              {"leaky_slope", c.leaky_slope},
              {"dropout", c.dropout},
              {"interaction", model::to_string(c.interaction)},
              {"graph_activation", model::to_string(c.graph_activation)}};
}

inline void overlay(const Json& j, model::ModelConfig& c) {
  detail::reject_unknown(j,
                         {"vocab_size", "num_intents", "num_slots", "d_emb", "d", "d_k",
                          "intent_hidden", "d_g", "heads", "layers", "intent_threshold",
                          "leaky_slope", "dropout", "interaction", "graph_activation"},
                         "model config");
  detail::read_if(j, "vocab_size", c.vocab_size);
  detail::read_if(j, "num_intents", c.num_intents);
  detail::read_if(j, "num_slots", c.num_slots);
  detail::read_if(j, "d_emb", c.d_emb);
  detail::read_if(j, "d", c.d);
  detail::read_if(j, "d_k", c.d_k);
  detail::read_if(j, "intent_hidden", c.intent_hidden);
  detail::read_if(j, "d_g", c.d_g);
  detail::read_if(j, "heads", c.heads);
  detail::read_if(j, "layers", c.layers);
  detail::read_if(j, "intent_threshold", c.intent_threshold);
  detail::read_if(j, "leaky_slope", c.leaky_slope);
  detail::read_if(j, "dropout", c.dropout);
  std::string s;
  if (j.contains("interaction")) {
    detail::read_if(j, "interaction", s);
    c.interaction = model::interaction_mode_from_string(s);
  }
  if (j.contains("graph_activation")) {
    detail::read_if(j, "graph_activation", s);
    c.graph_activation = model::graph_activation_from_string(s);
  }
}

inline Json to_json(const TrainConfig& c) {
  return Json{{"alpha", c.alpha},
              {"lr", c.lr},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"eps", c.eps},
              {"batch_size", c.batch_size},
              {"epochs", c.epochs},
              {"l2", c.l2},
              {"seed", c.seed},
              {"grad_clip", c.grad_clip},
              {"gold_intents_in_training", c.gold_intents_in_training},
              {"selection_metric", c.selection_metric}};
}

inline void overlay(const Json& j, TrainConfig& c) {
  detail::reject_unknown(j,
                         {"alpha", "lr", "beta1", "beta2", "eps", "batch_size", "epochs", "l2",
                          "seed", "grad_clip", "gold_intents_in_training", "selection_metric"},
                         "train config");
  detail::read_if(j, "alpha", c.alpha);
  detail::read_if(j, "lr", c.lr);
  detail::read_if(j, "beta1", c.beta1);
  detail::read_if(j, "beta2", c.beta2);
  detail::read_if(j, "eps", c.eps);
  detail::read_if(j, "batch_size", c.batch_size);
  detail::read_if(j, "epochs", c.epochs);
  detail::read_if(j, "l2", c.l2);
  detail::read_if(j, "seed", c.seed);
  detail::read_if(j, "grad_clip", c.grad_clip);
  detail::read_if(j, "gold_intents_in_training", c.gold_intents_in_training);
  detail::read_if(j, "selection_metric", c.selection_metric);
}

inline Json to_json(const corpus::Vocabulary& v) {
  return Json{{"tokens", v.tokens.labels()},
              {"slots", v.slots.labels()},
              {"intents", v.intents.labels()},
              {"lowercase", v.lowercase}};
}

inline corpus::Vocabulary vocab_from_json(const Json& j) {
  detail::reject_unknown(j, {"tokens", "slots", "intents", "lowercase"}, "vocabulary");
  corpus::Vocabulary v;
  try {
    v.tokens = corpus::LabelMap(j.at("tokens").get<std::vector<std::string>>());
    v.slots = corpus::LabelMap(j.at("slots").get<std::vector<std::string>>());
    v.intents = corpus::LabelMap(j.at("intents").get<std::vector<std::string>>());
    v.lowercase = j.value("lowercase", false);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("vocabulary: ") + e.what());
  }
  if (v.tokens.size() < 2 || v.tokens.label(corpus::kPadId) != corpus::kPadToken ||
      v.tokens.label(corpus::kUnkId) != corpus::kUnkToken) {
    throw std::invalid_argument("vocabulary: token table must start with <pad>, <unk>");
  }
  if (v.slots.size() < 1 || v.slots.label(corpus::kPadId) != corpus::kPadToken) {
    throw std::invalid_argument("vocabulary: slot table must start with <pad>");
  }
  return v;
}

inline Json to_json(const metrics::EvalReport& r) {
  Json per = Json::object();
  for (const auto& [label, s] : r.per_intent) {
    per[label] = Json{{"precision", s.score.precision},
                      {"recall", s.score.recall},
                      {"f1", s.score.f1},
                      {"tp", s.tp},
                      {"fp", s.fp},
                      {"fn", s.fn}};
  }
  return Json{{"slot_f1", r.slot_f1},
              {"slot_precision", r.slot_precision},
              {"slot_recall", r.slot_recall},
              {"intent_f1", r.intent_macro_f1},
              {"intent_acc", r.intent_acc},
              {"overall_acc", r.overall_acc},
              {"utterances", r.utterances},
              {"per_intent", per}};
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_SERIALIZATION_HPP_
