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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "agif/autodiff/gradcheck.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/corpus/vocab.hpp"
#include "agif/model/agif.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace agif::model {
namespace {

using T64 = Tensor<double>;

ModelConfig tiny(InteractionMode mode = InteractionMode::kAdaptiveGat) {
  auto c = micro_config(12, 4, 6);
  c.interaction = mode;
  return c;
}

T64 random_row(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return T64::row(v);
}

TEST(Config, ValidationAndModeNames) {
  auto c = tiny();
  EXPECT_NO_THROW(validate(c));
  c.d_g = 7;  // not divisible by heads
  EXPECT_THROW(validate(c), std::invalid_argument);
  for (auto m : {InteractionMode::kAdaptiveGat, InteractionMode::kVanillaAttention,
                 InteractionMode::kGcn, InteractionMode::kSentenceLevel,
                 InteractionMode::kSentenceLevel2Layer}) {
    EXPECT_EQ(interaction_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(interaction_mode_from_string("rnn"), std::invalid_argument);
}

TEST(Params, ShapesFollowConfig) {
  Rng rng(1);
  auto c = tiny();
  const auto p = init_params<double>(c, rng);
  EXPECT_EQ(p.w_e.cols(), 2 * c.d);
  EXPECT_EQ(p.b_e.size(), 1u);
  ASSERT_EQ(p.graph.size(), 2u);
  EXPECT_EQ(p.graph[0].heads[0].w.rows(), c.d_g / c.heads);
  EXPECT_EQ(p.graph[1].heads[0].w.rows(), c.d_g);
  EXPECT_EQ(p.slot_lstm[0].w_x.cols(), 2 * c.d + c.num_slots);
  std::set<std::string> names;
  for (const auto& n : p.named()) EXPECT_TRUE(names.insert(n.name).second) << n.name;
  c.interaction = InteractionMode::kSentenceLevel2Layer;
  Rng rng2(1);
  const auto q = init_params<double>(c, rng2);
  EXPECT_TRUE(q.graph.empty());
  EXPECT_EQ(q.slot_lstm.size(), 2u);
}

TEST(Encoder, SingleTokenAttendsToItself) {
  Rng rng(2);
  const auto c = tiny();
  const auto p = init_params<double>(c, rng);
  const std::vector<int> ids{3};
  const auto out = encode<double>(ids, 1, p, c, Mode::kEval, rng);
  EXPECT_EQ(out.self_attention.values(), std::vector<double>{1.0});
  EXPECT_EQ(out.e.cols(), 2 * c.d);
}

TEST(Encoder, PaddedKeysGetZeroWeight) {
  Rng rng(3);
  const auto c = tiny();
  const auto p = init_params<double>(c, rng);
  const std::vector<int> ids{3, 4, 0, 0};
  const auto out = encode<double>(ids, 2, p, c, Mode::kEval, rng);
  ASSERT_EQ(out.self_attention.rows(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(out.self_attention.at(r, 2), 0.0);
    EXPECT_EQ(out.self_attention.at(r, 3), 0.0);
    EXPECT_NEAR(out.self_attention.at(r, 0) + out.self_attention.at(r, 1), 1.0, 1e-12);
  }
  // The valid rows do not depend on how much padding follows.
  const std::vector<int> short_ids{3, 4};
  const auto ref = encode<double>(short_ids, 2, p, c, Mode::kEval, rng);
  for (std::size_t i = 0; i < ref.e.size(); ++i) EXPECT_NEAR(out.e[i], ref.e[i], 1e-14);
}

TEST(Encoder, DefaultWidthIs512) {
  ModelConfig c;
  c.vocab_size = 5;
  c.num_intents = 2;
  c.num_slots = 3;
  Rng rng(4);
  const auto p = init_params<float>(c, rng);
  const std::vector<int> ids{2, 3, 4};
  const auto out = encode<float>(ids, 3, p, c, Mode::kEval, rng);
  EXPECT_EQ(out.e.cols(), 512u);
}

TEST(IntentPool, IdenticalStatesPoolToThatState) {
  Rng rng(5);
  const auto c = tiny();
  const auto p = init_params<double>(c, rng);
  const auto row = random_row(2 * c.d, rng);
  const auto e = concat_rows<double>({row, row, row});
  const auto pooled = intent_pool(e, p);
  for (std::size_t i = 0; i < row.size(); ++i) EXPECT_NEAR(pooled.c[i], row[i], 1e-14);
}

TEST(IntentPool, ContextIsConvexCombination) {
  Rng rng(6);
  const auto c = tiny();
  const auto p = init_params<double>(c, rng);
  const auto e = concat_rows<double>({random_row(2 * c.d, rng), random_row(2 * c.d, rng),
                                      random_row(2 * c.d, rng), random_row(2 * c.d, rng)});
  const auto pooled = intent_pool(e, p);
  double total = 0.0;
  for (double w : pooled.weights.data()) {
    EXPECT_GE(w, 0.0);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (std::size_t k = 0; k < e.cols(); ++k) {
    double expect = 0.0, lo = 1e9, hi = -1e9;
    for (std::size_t t = 0; t < e.rows(); ++t) {
      expect += pooled.weights[t] * e.at(t, k);
      lo = std::min(lo, e.at(t, k));
      hi = std::max(hi, e.at(t, k));
    }
    EXPECT_NEAR(pooled.c[k], expect, 1e-12);
    EXPECT_GE(pooled.c[k], lo - 1e-12);
    EXPECT_LE(pooled.c[k], hi + 1e-12);
  }
}

TEST(Intents, ThresholdRuleAndFallback) {
  const std::vector<double> probs{0.9, 0.3, 0.6, 0.7, 0.2};
  EXPECT_EQ(select_intents(probs, 0.5), (std::vector<int>{0, 2, 3}));
  const std::vector<double> low{0.1, 0.4, 0.4, 0.2};
  EXPECT_EQ(select_intents(low, 0.5), std::vector<int>{1});
  const std::vector<double> one{0.1, 0.2, 0.7, 0.4};
  EXPECT_EQ(select_intents(one, 0.5), std::vector<int>{2});
  const std::vector<double> at{0.5, 0.5};
  EXPECT_EQ(select_intents(at, 0.5), std::vector<int>{0});  // strict comparison
}

TEST(Graph, Topology) {
  const auto g0 = build_interaction_graph(0);
  EXPECT_EQ(g0.rows, 1u);
  EXPECT_TRUE(g0(0, 0));
  const auto g2 = build_interaction_graph(2);
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      if (g2(i, j)) edges.insert({i, j});
  EXPECT_EQ(edges, (std::set<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(g2(i, j), g2(j, i));
  const auto g3 = build_interaction_graph(3);
  int degree = 0;
  for (int j = 0; j < 4; ++j) degree += g3(0, j);
  EXPECT_EQ(degree, 4);
}

GraphLayer<double> single_head_layer(std::size_t f_in, std::size_t f_out, bool attention,
                                     Rng& rng) {
  GraphLayer<double> layer;
  layer.final = true;
  GraphHead<double> h;
  h.w = xavier_init<double>(static_cast<long>(f_out), static_cast<long>(f_in), rng);
  if (attention) h.a = xavier_init<double>(1, static_cast<long>(2 * f_out), rng);
  layer.heads.push_back(h);
  return layer;
}

TEST(Gat, SingleNodeIsActivatedProjection) {
  Rng rng(7);
  auto c = tiny();
  for (bool attention : {true, false}) {  // adaptive and GCN aggregation
    const auto layer = single_head_layer(8, 8, attention, rng);
    const auto h = random_row(8, rng);
    const auto out = gat_layer(h, build_interaction_graph(0), layer, c);
    const auto wh = oracle::matvec(layer.heads[0].w.values(), 8, h.values());
    for (std::size_t k = 0; k < 8; ++k) {
      const double ref = wh[k] > 0 ? wh[k] : c.leaky_slope * wh[k];
      EXPECT_NEAR(out.nodes[k], ref, 1e-14);
    }
    EXPECT_EQ(out.attention(0, 0), 1.0);
  }
}

TEST(Gat, IdenticalNodesShareAttentionEqually) {
  Rng rng(8);
  const auto c = tiny();
  const auto layer = single_head_layer(8, 8, true, rng);
  const auto h = random_row(8, rng);
  const auto out = gat_layer(concat_rows<double>({h, h}), build_interaction_graph(1), layer, c);
  EXPECT_NEAR(out.attention(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out.attention(0, 1), 0.5, 1e-15);
}

TEST(Gat, RowsSumToOneAndMatchNaiveAttention) {
  Rng rng(9);
  const auto c = tiny();
  const auto layer = single_head_layer(8, 8, true, rng);
  const auto nodes = concat_rows<double>({random_row(8, rng), random_row(8, rng), random_row(8, rng)});
  const auto out = gat_layer(nodes, build_interaction_graph(2), layer, c);
  const auto& w = layer.heads[0].w.values();
  const auto& a = layer.heads[0].a.values();
  std::vector<std::vector<double>> wh;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> hi(nodes.values().begin() + 8 * i, nodes.values().begin() + 8 * (i + 1));
    wh.push_back(oracle::matvec(w, 8, hi));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> scores;
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 8; ++k) s += a[k] * wh[i][k] + a[8 + k] * wh[j][k];
      scores.push_back(s > 0 ? s : c.leaky_slope * s);
    }
    const auto alpha = oracle::softmax(scores);
    double row = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(out.attention(i, j), alpha[j], 1e-14);
      row += out.attention(i, j);
    }
    EXPECT_NEAR(row, 1.0, 1e-14);
  }
}

TEST(Lstm, ZeroWeightsGiveZeroOutput) {
  LstmParams<double> p;
  p.hidden = 3;
  p.w_x = T64::zeros({12, 4});
  p.w_h = T64::zeros({12, 3});
  p.b = T64::zeros({1, 12});
  const auto out = lstm_sequence(p, T64::full({5, 4}, 2.0), false);
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, MatchesScalarOracleBothDirections) {
  Rng rng(10);
  const auto p = LstmParams<double>::make(4, 3, rng);
  auto b = p.b;
  for (auto& v : b.mutable_data()) v = rng.uniform(-0.5, 0.5);
  std::vector<double> xs(5 * 4);
  for (auto& v : xs) v = rng.uniform(-1, 1);
  const T64 x({5, 4}, xs);
  for (bool reverse : {false, true}) {
    const auto out = lstm_sequence(p, x, reverse);
    std::vector<double> h(3, 0.0), cell(3, 0.0);
    for (std::size_t s = 0; s < 5; ++s) {
      const std::size_t t = reverse ? 4 - s : s;
      std::vector<double> xt(xs.begin() + 4 * t, xs.begin() + 4 * (t + 1));
      oracle::lstm_step(p.w_x.values(), p.w_h.values(), p.b.values(), xt, h, cell);
      for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(out.at(t, k), h[k], 1e-14);
    }
  }
}

TEST(Lstm, GradientThroughThreeSteps) {
  Rng rng(11);
  auto p = LstmParams<double>::make(3, 2, rng);
  std::vector<double> xs(9);
  for (auto& v : xs) v = rng.uniform(-1, 1);
  T64 x({3, 3}, xs, true);
  const auto r = finite_diff_check<double>(
      [&] { return squared_norm(lstm_sequence(p, x, false)); }, {p.w_x, p.w_h, p.b, x});
  EXPECT_LT(r.max_rel_err, 1e-6);
}

TEST(Interaction, ZeroLayersReturnStateBitwise) {
  Rng rng(12);
  auto c = tiny();
  c.layers = 0;
  const auto p = init_params<double>(c, rng);
  const auto s = random_row(c.d_g, rng);
  const auto out = graph_interact(s, {0, 2}, p, c);
  EXPECT_EQ(out.slot.node(), s.node());
}

TEST(Interaction, SentenceLevelAddsIntentEmbeddings) {
  Rng rng(13);
  const auto c = tiny(InteractionMode::kSentenceLevel);
  const auto p = init_params<double>(c, rng);
  const auto s = random_row(c.d_g, rng);
  const auto out = graph_interact(s, {1, 3}, p, c);
  for (std::size_t k = 0; k < c.d_g; ++k) {
    EXPECT_NEAR(out.slot[k], s[k] + p.intent_embedding.at(1, k) + p.intent_embedding.at(3, k),
                1e-15);
  }
}

TEST(Interaction, VanillaAttentionOverIdenticalEmbeddings) {
  Rng rng(14);
  const auto c = tiny(InteractionMode::kVanillaAttention);
  auto p = init_params<double>(c, rng);
  auto table = p.intent_embedding.mutable_data();
  for (std::size_t k = 0; k < c.d_g; ++k) table[c.d_g + k] = table[k];  // rows 0 and 1 equal
  const auto s = random_row(c.d_g, rng);
  const auto out = graph_interact(s, {0, 1}, p, c);
  for (std::size_t k = 0; k < c.d_g; ++k) EXPECT_NEAR(out.slot[k] - s[k], table[k], 1e-15);
  EXPECT_NEAR(out.layers[0](0, 1), 0.5, 1e-15);
}

TEST(Interaction, PermutingIntentNodesKeepsSlotOutput) {
  for (auto mode : {InteractionMode::kAdaptiveGat, InteractionMode::kGcn}) {
    Rng rng(15);
    const auto c = tiny(mode);
    const auto p = init_params<double>(c, rng);
    const auto s = random_row(c.d_g, rng);
    for (std::vector<int> ids : {std::vector<int>{0, 2}, std::vector<int>{3, 1, 2}}) {
      std::sort(ids.begin(), ids.end());
      const auto ref = graph_interact(s, ids, p, c).slot;
      while (std::next_permutation(ids.begin(), ids.end())) {
        const auto out = graph_interact(s, ids, p, c).slot;
        for (std::size_t k = 0; k < c.d_g; ++k) EXPECT_NEAR(out[k], ref[k], 1e-12);
      }
    }
  }
}

TEST(SlotHead, ZeroWeightsAndTies) {
  const auto h = T64::row({0.3, -0.2});
  const auto out = predict_slot(h, T64::zeros({4, 2}));
  for (double v : out.distribution.data()) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_EQ(out.label, 0);
  const std::vector<double> tie{0.1, 0.4, 0.4};
  EXPECT_EQ(argmax_lowest(tie), 1);
}

corpus::Batch toy_batch(const corpus::Vocabulary** vocab_out = nullptr) {
  static const auto data = fixtures::toy_multi_intent(4, 3);
  static const auto vocab = corpus::build_vocab(data);
  if (vocab_out) *vocab_out = &vocab;
  return corpus::encode_batch(data, vocab);
}

TEST(Forward, EvalUsesPredictedIntentsAndTrainUsesGold) {
  const corpus::Vocabulary* v = nullptr;
  const auto batch = toy_batch(&v);
  auto c = micro_config(v->num_tokens(), v->num_intents(), v->num_slots());
  const auto m = Model<double>::create(c, 1);
  Rng rng(0);
  const auto eval = forward(batch, m.params, c, Mode::kEval, IntentSource::kPredicted, rng);
  const auto train = forward(batch, m.params, c, Mode::kTrain, IntentSource::kGold, rng);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    EXPECT_EQ(eval.utterances[b].graph_intents, eval.utterances[b].predicted_intents);
    EXPECT_EQ(train.utterances[b].graph_intents, batch.gold_intents[b]);
    const auto& probs = eval.utterances[b].slot_probs;
    EXPECT_EQ(probs.rows(), batch.lengths[b]);
    for (std::size_t t = 0; t < probs.rows(); ++t) {
      double row = 0.0;
      for (std::size_t k = 0; k < probs.cols(); ++k) row += probs.at(t, k);
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

TEST(Forward, DeterministicUnderSeed) {
  const corpus::Vocabulary* v = nullptr;
  const auto batch = toy_batch(&v);
  auto c = micro_config(v->num_tokens(), v->num_intents(), v->num_slots());
  c.dropout = 0.4;
  const auto m = Model<double>::create(c, 2);
  Rng a(5), b(5);
  const auto x = forward(batch, m.params, c, Mode::kTrain, IntentSource::kGold, a);
  const auto y = forward(batch, m.params, c, Mode::kTrain, IntentSource::kGold, b);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(x.utterances[i].slot_probs.values(), y.utterances[i].slot_probs.values());
  }
}

}  // namespace
}  // namespace agif::model
