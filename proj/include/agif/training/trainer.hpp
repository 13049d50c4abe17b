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

#ifndef AGIF_TRAINING_TRAINER_HPP_
#define AGIF_TRAINING_TRAINER_HPP_

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/autodiff/adam.hpp"
#include "agif/autodiff/random.hpp"
#include "agif/corpus/batch.hpp"
#include "agif/corpus/utterance.hpp"
#include "agif/corpus/vocab.hpp"
#include "agif/metrics/evaluate.hpp"
#include "agif/model/agif.hpp"
#include "agif/training/checkpoint.hpp"
#include "agif/training/config.hpp"
#include "agif/training/loss.hpp"
#include "agif/training/serialization.hpp"

namespace agif::training {

struct EpochStats {
  double loss = 0.0;         // mean joint loss over batches
  double intent_loss = 0.0;  // mean L1
  double slot_loss = 0.0;    // mean L2
  std::size_t batches = 0;
};

class NonFiniteLossError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline AdamHyper adam_hyper(const TrainConfig& tc) {
  return {tc.lr, tc.beta1, tc.beta2, tc.eps};
}

/// Rescales all gradients so that their joint L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
template <typename T>
double clip_grad_norm(std::vector<Tensor<T>>& params, double max_norm) {
  double total = 0.0;
  for (const auto& p : params) {
    if (!p.has_grad()) continue;
    for (T g : p.grad()) total += static_cast<double>(g) * static_cast<double>(g);
  }
  const double norm = std::sqrt(total);
  if (max_norm > 0.0 && norm > max_norm) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto& p : params) {
      if (!p.has_grad()) continue;
      for (T& g : p.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

/// Losses of one batch under the given mode and intent source.
template <typename T>
struct BatchLoss {
  Tensor<T> total;
  Tensor<T> intent;
  Tensor<T> slot;
};

template <typename T>
BatchLoss<T> batch_loss(const corpus::Batch& batch, const model::Model<T>& m,
                        const TrainConfig& tc, model::Mode mode, model::IntentSource source,
                        Rng& rng) {
  const auto trace = model::forward(batch, m.params, m.config, mode, source, rng);
  std::vector<Tensor<T>> probs, dists;
  for (const auto& u : trace.utterances) {
    probs.push_back(u.intent_probs);
    dists.push_back(u.slot_probs);
  }
  BatchLoss<T> out;
  out.intent = intent_loss(probs, batch.intent_targets);
  out.slot = slot_loss(dists, batch.slot_ids, batch.mask);
  out.total = joint_loss(out.intent, out.slot, tc.alpha, m.params, tc.l2);
  return out;
}

/// One pass over `data` in an order shuffled by `rng`, with an Adam update per
/// batch.
template <typename T>
EpochStats train_epoch(const std::vector<corpus::Utterance>& data, model::Model<T>& m,
                       const corpus::Vocabulary& vocab, const TrainConfig& tc,
                       AdamState<T>& opt, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("train_epoch: empty training set");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const auto source =
      tc.gold_intents_in_training ? model::IntentSource::kGold : model::IntentSource::kPredicted;
  std::vector<Tensor<T>> params = m.params.tensors();
  EpochStats stats;
  for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
    const std::size_t end = std::min(order.size(), start + tc.batch_size);
    std::vector<corpus::Utterance> chunk;
    for (std::size_t i = start; i < end; ++i) chunk.push_back(data[order[i]]);
    const auto batch = corpus::encode_batch(chunk, vocab);
    m.params.zero_grad();
    const auto loss = batch_loss(batch, m, tc, model::Mode::kTrain, source, rng);
    const double value = static_cast<double>(loss.total.item());
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "non-finite loss " << value << " at batch " << stats.batches
          << " (intent " << static_cast<double>(loss.intent.item()) << ", slot "
          << static_cast<double>(loss.slot.item()) << ")";
      throw NonFiniteLossError(msg.str());
    }
    backward(loss.total);
    if (tc.grad_clip > 0.0) clip_grad_norm(params, tc.grad_clip);
    adam_step(std::span<Tensor<T>>(params), opt);
    stats.loss += value;
    stats.intent_loss += static_cast<double>(loss.intent.item());
    stats.slot_loss += static_cast<double>(loss.slot.item());
    ++stats.batches;
  }
  m.params.zero_grad();
  const double n = static_cast<double>(stats.batches);
  stats.loss /= n;
  stats.intent_loss /= n;
  stats.slot_loss /= n;
  return stats;
}

inline double selection_score(const metrics::EvalReport& r, const std::string& metric) {
  if (metric == "overall_acc") return r.overall_acc;
  if (metric == "slot_f1") return r.slot_f1;
  if (metric == "intent_acc") return r.intent_acc;
  throw std::invalid_argument("unknown selection metric '" + metric + "'");
}

/// 1-based index of the best epoch: highest primary score, then highest slot
/// F1, then the earlier epoch.
inline std::size_t select_best_epoch(const std::vector<double>& primary,
                                     const std::vector<double>& slot_f1) {
  if (primary.empty() || primary.size() != slot_f1.size()) {
    throw std::invalid_argument("select_best_epoch: need one score pair per epoch");
  }
  std::size_t best = 0;
  for (std::size_t e = 1; e < primary.size(); ++e) {
    if (primary[e] > primary[best] ||
        (primary[e] == primary[best] && slot_f1[e] > slot_f1[best])) {
      best = e;
    }
  }
  return best + 1;
}

inline std::size_t select_best_epoch(const std::vector<double>& primary) {
  return select_best_epoch(primary, std::vector<double>(primary.size(), 0.0));
}

struct EpochRecord {
  std::size_t epoch = 0;
  EpochStats stats;
  metrics::EvalReport dev;
};

struct FitResult {
  Checkpoint best;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
};

inline Json epoch_log_line(const EpochRecord& r) {
  return Json{{"epoch", r.epoch},
              {"loss", r.stats.loss},
              {"intent_loss", r.stats.intent_loss},
              {"slot_loss", r.stats.slot_loss},
              {"dev", to_json(r.dev)}};
}

/// Trains for `tc.epochs` epochs, evaluating dev after each one and keeping
/// the best checkpoint. One JSON line per epoch goes to `log` when non-null.
template <typename T = float>
FitResult fit(const std::vector<corpus::Utterance>& train,
              const std::vector<corpus::Utterance>& dev, const corpus::Vocabulary& vocab,
              const model::ModelConfig& mc, const TrainConfig& tc, std::ostream* log = nullptr) {
  if (train.empty() || dev.empty()) throw std::invalid_argument("fit: train and dev must be non-empty");
  validate(tc);
  Rng master(tc.seed);
  Rng init_rng = master.split();
  Rng train_rng = master.split();
  model::Model<T> m{mc, model::init_params<T>(mc, init_rng)};
  AdamState<T> opt(adam_hyper(tc));
  FitResult result;
  std::vector<double> primary, slot;
  for (std::size_t epoch = 1; epoch <= tc.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.stats = train_epoch(train, m, vocab, tc, opt, train_rng);
    rec.dev = metrics::evaluate(m, vocab, dev).report;
    primary.push_back(selection_score(rec.dev, tc.selection_metric));
    slot.push_back(rec.dev.slot_f1);
    if (select_best_epoch(primary, slot) == epoch) {
      result.best = make_checkpoint(m, tc, vocab, to_json(rec.dev), epoch);
      result.best_epoch = epoch;
    }
    if (log) *log << epoch_log_line(rec).dump() << '\n' << std::flush;
    result.history.push_back(std::move(rec));
  }
  return result;
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_TRAINER_HPP_
