/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dataset/experiment.hpp"
#include "ssd/dataset/materialize.hpp"
#include "ssd/nnet/adam.hpp"
#include "ssd/nnet/checkpoint.hpp"
#include "ssd/nnet/loss.hpp"
#include "ssd/nnet/small_cnn.hpp"
#include "ssd/trainer/metrics.hpp"

namespace ssd::trainer {

using dataset::Experiment;
using dataset::LabeledSet;
using dataset::MaterializedFold;

struct TrainConfig {
  int batch_size = 128;
  int epochs = 15;
  double lr = 1e-4;
  nnet::LossKind loss = nnet::LossKind::CategoricalCE;
  std::uint64_t seed = 0;
  Experiment experiment = Experiment::e1();
  bool class_weights = true;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;

  static TrainConfig for_experiment(const Experiment& e, std::uint64_t seed = 0) {
    TrainConfig c;
    c.experiment = e;
    c.loss = e.binary() ? nnet::LossKind::BinaryCE : nnet::LossKind::CategoricalCE;
    c.seed = seed;
    return c;
  }

  void validate() const {
    require(batch_size >= 1, ErrorKind::Config, "batch_size must be >= 1");
    require(epochs >= 1, ErrorKind::Config, "epochs must be >= 1");
    require(lr >= 0.0, ErrorKind::Config, "learning rate must be non-negative");
    require((loss == nnet::LossKind::BinaryCE) == experiment.binary(), ErrorKind::Config,
            "loss does not match experiment " + experiment.name());
  }
};

/// Seed of a fold's weight initialisation; shuffles derive from the same
/// fold seed.
inline std::uint64_t fold_seed(std::uint64_t seed, int fold) { return keyed_seed("fold" + std::to_string(fold), seed); }
inline std::uint64_t init_seed(std::uint64_t seed, int fold) { return keyed_seed("init", fold_seed(seed, fold)); }

/// Copies maps [first, first + count) of `order` into an NHWC batch.
inline nnet::Tensor<float> assemble_batch(const LabeledSet& set, const std::vector<std::size_t>& order, std::size_t first,
                                          std::size_t count, std::vector<int>* labels = nullptr) {
  const auto& m0 = *set.maps[order[first]];
  nnet::Tensor<float> batch({static_cast<int>(count), m0.n_mels, m0.frames, m0.channels});
  const std::size_t per = m0.values.size();
  if (labels) labels->clear();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& m = *set.maps[order[first + i]];
    require(m.values.size() == per, ErrorKind::Shape, "feature maps in a set differ in shape");
    std::copy(m.values.begin(), m.values.end(), batch.data.begin() + static_cast<std::ptrdiff_t>(i * per));
    if (labels) labels->push_back(set.labels[order[first + i]]);
  }
  return batch;
}

/// Probabilities for every element of `set`, in set order.
inline nnet::Tensor<float> predict(const nnet::SmallCnn<float>& model, const LabeledSet& set, int batch_size = 128) {
  require(!set.empty(), ErrorKind::Degenerate, "empty set");
  const int k = model.config().num_classes;
  nnet::Tensor<float> out({static_cast<int>(set.size()), k});
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t first = 0; first < set.size(); first += static_cast<std::size_t>(batch_size)) {
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(batch_size), set.size() - first);
    const auto p = model.forward(assemble_batch(set, order, first, count));
    std::copy(p.data.begin(), p.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(first * k));
  }
  return out;
}

/// Unweighted mean cross-entropy over a set.
inline double mean_loss(const nnet::SmallCnn<float>& model, const LabeledSet& set) {
  const auto p = predict(model, set);
  const int k = model.config().num_classes;
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double py = p[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(set.labels[i])];
    total += -std::log(std::clamp(py, nnet::kProbEpsilon, 1.0));
  }
  return total / static_cast<double>(set.size());
}

struct EvalResult {
  Confusion confusion;
  double accuracy = 0.0;
};

/// Argmax of each probability row (ties to the lowest class) against targets.
inline EvalResult evaluate_probabilities(const nnet::Tensor<float>& probs, const std::vector<int>& targets) {
  require(!targets.empty(), ErrorKind::Degenerate, "empty test set");
  require(probs.shape.size() == 2 && static_cast<std::size_t>(probs.shape[0]) == targets.size(), ErrorKind::Shape,
          "probability rows do not match the targets");
  const int k = probs.shape[1];
  for (int y : targets) require(y >= 0 && y < k, ErrorKind::Validation, "label outside the model's classes");
  std::vector<int> predicted;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto* row = probs.ptr() + i * static_cast<std::size_t>(k);
    predicted.push_back(argmax(row, row + k));
  }
  auto m = confusion_from_labels(predicted, targets, k);
  return {m, m.accuracy()};
}

inline EvalResult evaluate(const nnet::SmallCnn<float>& model, const LabeledSet& test) {
  require(!test.empty(), ErrorKind::Degenerate, "empty test set");
  const int k = model.config().num_classes;
  for (int y : test.labels) require(y >= 0 && y < k, ErrorKind::Validation, "label outside the model's classes");
  return evaluate_probabilities(predict(model, test), test.labels);
}

inline EvalResult evaluate(const nnet::Checkpoint& ckpt, const LabeledSet& test) { return evaluate(ckpt.model(), test); }

struct TrainResult {
  nnet::Checkpoint checkpoint;   // lowest validation loss
  std::vector<double> train_loss_curve;
  std::vector<double> val_loss_curve;
  int best_epoch = 0;            // 1-based
};

using EpochCallback = std::function<void(int epoch, double train_loss, double val_loss)>;

/// Adam training with per-epoch shuffling; after every epoch the validation
/// loss is measured and the best epoch (strictly lower loss wins, so ties
/// keep the earlier one) becomes the returned checkpoint.
inline TrainResult train_fold(const MaterializedFold& data, const TrainConfig& cfg, const nnet::SmallCnnConfig& model_cfg,
                              const EpochCallback& on_epoch = {}) {
  cfg.validate();
  require(!data.train.empty(), ErrorKind::Degenerate, "no training data");
  require(!data.val.empty(), ErrorKind::Degenerate, "no validation data");
  require(model_cfg.num_classes == data.num_classes, ErrorKind::Config, "model classes do not match the data");
  const auto& m0 = *data.train.maps.front();
  require(model_cfg.input_shape == std::array<int, 3>{m0.n_mels, m0.frames, m0.channels}, ErrorKind::Config,
          "model input shape does not match the feature maps");

  const std::uint64_t fseed = fold_seed(cfg.seed, data.fold);
  nnet::SmallCnn<float> model(model_cfg, init_seed(cfg.seed, data.fold));
  auto state = nnet::AdamState<float>::zeros_like(model.parameters());
  const nnet::AdamHyper hyper{cfg.lr, cfg.beta1, cfg.beta2, cfg.epsilon};
  const auto weights =
      cfg.class_weights ? data.weights.weights : std::vector<double>(static_cast<std::size_t>(data.num_classes), 1.0);

  TrainResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);
  long step = 0;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::mt19937_64 rng(keyed_seed("epoch" + std::to_string(epoch), fseed));
    std::shuffle(order.begin(), order.end(), rng);
    double train_total = 0.0;
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(cfg.batch_size)) {
      const auto count = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), order.size() - first);
      const auto batch = assemble_batch(data.train, order, first, count, &labels);
      nnet::SmallCnn<float>::Trace trace;
      nnet::Tensor<float> dlogits;
      const auto probs = model.forward(batch, &trace);
      const double loss = nnet::cross_entropy(probs, labels, weights, &dlogits);
      train_total += loss * static_cast<double>(count);
      auto grads = model.backward(trace, dlogits);
      for (const auto& g : grads) nnet::require_finite(g, "gradients");
      nnet::adam_step(model.parameters(), grads, state, hyper, ++step);
    }
    const double train_loss = train_total / static_cast<double>(order.size());
    const double val_loss = mean_loss(model, data.val);
    result.train_loss_curve.push_back(train_loss);
    result.val_loss_curve.push_back(val_loss);
    if (val_loss < best) {
      best = val_loss;
      result.best_epoch = epoch;
      result.checkpoint = nnet::Checkpoint::from_model(
          model, {cfg.experiment.name(), data.fold, epoch, val_loss, cfg.seed, ""});
    }
    if (on_epoch) on_epoch(epoch, train_loss, val_loss);
  }
  return result;
}

}  // namespace ssd::trainer
