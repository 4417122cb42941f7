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

#include <optional>
#include <string>
#include <vector>

#include "ssd/core/parallel.hpp"
#include "ssd/dataset/feature_cache.hpp"
#include "ssd/dataset/folds.hpp"
#include "ssd/dataset/materialize.hpp"
#include "ssd/trainer/report.hpp"
#include "ssd/trainer/train.hpp"

namespace ssd::trainer {

inline nlohmann::json train_config_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size}, {"epochs", c.epochs},         {"lr", c.lr},
          {"loss", nnet::to_string(c.loss)}, {"class_weights", c.class_weights}, {"beta1", c.beta1},
          {"beta2", c.beta2},           {"epsilon", c.epsilon}};
}

struct CrossValidation {
  EvalReport report;
  std::vector<nnet::Checkpoint> checkpoints;  // one per fold
};

/// Extracts every feature the plan needs, then trains and tests each fold.
/// Folds run on up to `jobs` threads; each fold is sequential and seeded by
/// (cfg.seed, fold), so the report does not depend on `jobs`.
inline CrossValidation cross_validate(const dataset::FoldPlan& plan, const std::vector<dataset::SpeechSample>& samples,
                                      dataset::FeatureCache& cache, const TrainConfig& cfg,
                                      const nnet::SmallCnnConfig& model_cfg, unsigned jobs = 1,
                                      const std::vector<int>& folds_wanted = {}) {
  cfg.validate();
  std::vector<int> folds = folds_wanted;
  if (folds.empty()) {
    for (int f = 0; f < plan.k; ++f) folds.push_back(f);
  }
  std::vector<std::pair<const dataset::SpeechSample*, int>> wanted;
  for (const auto& s : samples) {
    for (int v = 0; v < augment::kExpansionFactor; ++v) wanted.emplace_back(&s, v);
  }
  cache.prefetch(wanted, jobs);

  std::vector<FoldReport> reports(folds.size());
  std::vector<nnet::Checkpoint> ckpts(folds.size());
  parallel_for(folds.size(), jobs, [&](std::size_t i) {
    const auto data = dataset::materialize_experiment(plan, folds[i], samples, cfg.experiment, cache, 1);
    auto trained = train_fold(data, cfg, model_cfg);
    const auto eval = evaluate(trained.checkpoint, data.test);
    reports[i] = {folds[i], eval.confusion, eval.accuracy, trained.best_epoch, std::move(trained.val_loss_curve),
                  std::move(trained.train_loss_curve)};
    ckpts[i] = std::move(trained.checkpoint);
  });

  CrossValidation out;
  out.report.experiment = cfg.experiment.name();
  out.report.class_names = cfg.experiment.class_names();
  out.report.seed = cfg.seed;
  out.report.model_config_hash = nnet::config_hash(model_cfg);
  out.report.train_config = train_config_json(cfg);
  out.report.per_fold = std::move(reports);
  out.report.finalize();
  out.checkpoints = std::move(ckpts);
  return out;
}

}  // namespace ssd::trainer
