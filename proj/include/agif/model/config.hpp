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

#ifndef AGIF_MODEL_CONFIG_HPP_
#define AGIF_MODEL_CONFIG_HPP_

#include <stdexcept>
#include <string>

namespace agif::model {

/// How slot decoder states receive intent information.
enum class InteractionMode {
  kAdaptiveGat,          // per-token graph attention over slot + intent nodes
  kVanillaAttention,     // slot state attends over intent embeddings
  kGcn,                  // same graph, degree-normalized mean aggregation
  kSentenceLevel,        // sum of intent embeddings added at every step
  kSentenceLevel2Layer,  // as above with a two-layer decoder LSTM
};

enum class GraphActivation { kLeakyRelu, kTanh, kIdentity };

inline std::string to_string(InteractionMode m) {
  switch (m) {
    case InteractionMode::kAdaptiveGat: return "adaptive_gat";
    case InteractionMode::kVanillaAttention: return "vanilla_attention";
    case InteractionMode::kGcn: return "gcn";
    case InteractionMode::kSentenceLevel: return "sentence_level";
    case InteractionMode::kSentenceLevel2Layer: return "sentence_level_2layer";
  }
  return "unknown";
}

inline InteractionMode interaction_mode_from_string(const std::string& s) {
  if (s == "adaptive_gat") return InteractionMode::kAdaptiveGat;
  if (s == "vanilla_attention") return InteractionMode::kVanillaAttention;
  if (s == "gcn") return InteractionMode::kGcn;
  if (s == "sentence_level") return InteractionMode::kSentenceLevel;
  if (s == "sentence_level_2layer") return InteractionMode::kSentenceLevel2Layer;
  throw std::invalid_argument("unknown interaction mode '" + s + "'");
}

inline std::string to_string(GraphActivation a) {
  switch (a) {
    case GraphActivation::kLeakyRelu: return "leaky_relu";
    case GraphActivation::kTanh: return "tanh";
    case GraphActivation::kIdentity: return "identity";
  }
  return "unknown";
}

inline GraphActivation graph_activation_from_string(const std::string& s) {
  if (s == "leaky_relu") return GraphActivation::kLeakyRelu;
  if (s == "tanh") return GraphActivation::kTanh;
  if (s == "identity") return GraphActivation::kIdentity;
  throw std::invalid_argument("unknown graph activation '" + s + "'");
}

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t num_intents = 0;
  std::size_t num_slots = 0;

  std::size_t d_emb = 128;
  // BiLSTM output width (d/2 per direction) and self-attention output width.
  std::size_t d = 256;
  std::size_t d_k = 256;
  std::size_t intent_hidden = 256;
  // Graph node width; also the slot decoder hidden size.
  std::size_t d_g = 64;
  std::size_t heads = 4;
  std::size_t layers = 2;

  double intent_threshold = 0.5;
  double leaky_slope = 0.01;
  double dropout = 0.4;
  InteractionMode interaction = InteractionMode::kAdaptiveGat;
  GraphActivation graph_activation = GraphActivation::kLeakyRelu;

  bool operator==(const ModelConfig&) const = default;
};

inline void validate(const ModelConfig& c) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("ModelConfig: " + m); };
  if (c.vocab_size < 2) fail("vocab_size must include PAD and UNK");
  if (c.num_intents < 1) fail("num_intents must be >= 1");
  if (c.num_slots < 1) fail("num_slots must be >= 1");
  if (c.d_emb < 1 || c.d_k < 1 || c.intent_hidden < 1 || c.d_g < 1) fail("sizes must be positive");
  if (c.d < 2 || c.d % 2 != 0) fail("d must be even");
  if (c.heads < 1 || c.d_g % c.heads != 0) fail("d_g must be divisible by heads");
  if (!(c.intent_threshold > 0.0 && c.intent_threshold < 1.0)) fail("intent_threshold must lie in (0,1)");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) fail("dropout must lie in [0,1)");
  if (!(c.leaky_slope >= 0.0)) fail("leaky_slope must be non-negative");
}

/// Small configuration used for gradient checking and quick tests.
inline ModelConfig micro_config(std::size_t vocab_size, std::size_t num_intents,
                                std::size_t num_slots) {
  ModelConfig c;
  c.vocab_size = vocab_size;
  c.num_intents = num_intents;
  c.num_slots = num_slots;
  c.d_emb = 8;
  c.d = 16;
  c.d_k = 8;
  c.intent_hidden = 16;
  c.d_g = 8;
  c.heads = 2;
  c.layers = 2;
  c.dropout = 0.0;
  return c;
}

}  // namespace agif::model

#endif  // AGIF_MODEL_CONFIG_HPP_
