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

#ifndef AGIF_TRAINING_CONFIG_HPP_
#define AGIF_TRAINING_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace agif::training {

struct TrainConfig {
  // Weight of the intent objective; the slot objective gets 1 - alpha.
  double alpha = 0.5;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t batch_size = 16;
  std::size_t epochs = 50;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
  // Global gradient-norm clip; 0 disables clipping.
  double grad_clip = 0.0;
  // Graph intent nodes during training: gold (teacher forcing) or predicted.
  bool gold_intents_in_training = true;
  // Dev metric used for checkpoint selection.
  std::string selection_metric = "overall_acc";

  bool operator==(const TrainConfig&) const = default;
};

inline void validate(const TrainConfig& c) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("TrainConfig: " + m); };
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) fail("alpha must lie in [0,1]");
  if (c.epochs < 1) fail("epochs must be >= 1");
  if (c.batch_size < 1) fail("batch_size must be >= 1");
  if (!(c.lr >= 0.0)) fail("lr must be non-negative");
  if (!(c.beta1 >= 0.0 && c.beta1 < 1.0 && c.beta2 >= 0.0 && c.beta2 < 1.0)) fail("betas must lie in [0,1)");
  if (!(c.eps > 0.0)) fail("eps must be positive");
  if (!(c.l2 >= 0.0)) fail("l2 must be non-negative");
  if (!(c.grad_clip >= 0.0)) fail("grad_clip must be non-negative");
  if (c.selection_metric != "overall_acc" && c.selection_metric != "slot_f1" &&
      c.selection_metric != "intent_acc") {
    fail("selection_metric must be overall_acc, slot_f1 or intent_acc");
  }
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_CONFIG_HPP_
