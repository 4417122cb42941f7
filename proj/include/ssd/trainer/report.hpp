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

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/core/error.hpp"
#include "ssd/trainer/metrics.hpp"

namespace ssd::trainer {

inline constexpr int kEvalReportVersion = 1;

struct FoldReport {
  int fold = 0;  // 0-based; rendered 1-based
  Confusion confusion;
  double accuracy = 0.0;
  int best_epoch = 0;
  std::vector<double> val_loss_curve;
  std::vector<double> train_loss_curve;

  friend bool operator==(const FoldReport&, const FoldReport&) = default;
};

/// Held-out fold results of one cross-validation run. Accuracies are
/// fractions; the table renders them as percentages.
struct EvalReport {
  std::string experiment;
  std::vector<std::string> class_names;
  std::uint64_t seed = 0;
  std::string model_config_hash;
  nlohmann::json train_config = nlohmann::json::object();
  std::vector<FoldReport> per_fold;
  Summary summary;

  void finalize() {
    std::vector<double> acc;
    for (const auto& f : per_fold) acc.push_back(f.accuracy);
    summary = summarize(acc);
  }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline nlohmann::json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.per_fold) {
    folds.push_back({{"fold", f.fold + 1},
                     {"accuracy", f.accuracy},
                     {"test_size", f.confusion.total()},
                     {"confusion_matrix", f.confusion.counts},
                     {"best_epoch", f.best_epoch},
                     {"val_loss_curve", f.val_loss_curve},
                     {"train_loss_curve", f.train_loss_curve}});
  }
  return {{"format", "ssd-eval-report"},
          {"version", kEvalReportVersion},
          {"experiment", r.experiment},
          {"classes", r.class_names},
          {"seed", r.seed},
          {"model_config_hash", r.model_config_hash},
          {"train_config", r.train_config},
          {"confusion_layout", "rows=predicted,columns=target"},
          {"per_fold", folds},
          {"summary", summary_json(r.summary)}};
}

inline EvalReport eval_report_from_json(const nlohmann::json& j) {
  try {
    require(j.at("format") == "ssd-eval-report", ErrorKind::Parse, "not an eval report");
    require(j.at("version") == kEvalReportVersion, ErrorKind::UnsupportedFormat, "eval report version");
    EvalReport r;
    r.experiment = j.at("experiment");
    r.class_names = j.at("classes").get<std::vector<std::string>>();
    r.seed = j.at("seed");
    r.model_config_hash = j.at("model_config_hash");
    r.train_config = j.at("train_config");
    for (const auto& f : j.at("per_fold")) {
      FoldReport fr;
      fr.fold = f.at("fold").get<int>() - 1;
      fr.confusion.counts = f.at("confusion_matrix").get<std::vector<std::vector<std::int64_t>>>();
      fr.confusion.classes = static_cast<int>(fr.confusion.counts.size());
      fr.accuracy = f.at("accuracy");
      fr.best_epoch = f.at("best_epoch");
      fr.val_loss_curve = f.at("val_loss_curve").get<std::vector<double>>();
      fr.train_loss_curve = f.at("train_loss_curve").get<std::vector<double>>();
      r.per_fold.push_back(std::move(fr));
    }
    r.finalize();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("eval report: ") + e.what());
  }
}

/// Confusion matrix as CSV: header row of target classes, one row per
/// predicted class.
inline std::string confusion_csv(const Confusion& m, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "predicted\\target";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (int r = 0; r < m.classes; ++r) {
    out << names[static_cast<std::size_t>(r)];
    for (int c = 0; c < m.classes; ++c) out << ',' << m.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    out << '\n';
  }
  return out.str();
}

inline std::string format_table(const EvalReport& r) {
  std::ostringstream out;
  out << "experiment " << r.experiment << "  (accuracy on held-out test folds, %)\n";
  out << "fold  accuracy  test  best_epoch\n";
  for (const auto& f : r.per_fold) {
    char line[96];
    std::snprintf(line, sizeof line, "%4d  %8s  %4lld  %10d\n", f.fold + 1, one_decimal(100.0 * f.accuracy).c_str(),
                  static_cast<long long>(f.confusion.total()), f.best_epoch);
    out << line;
  }
  const auto& s = r.summary;
  out << "mean " << one_decimal(100.0 * s.mean) << "  min " << one_decimal(100.0 * s.min) << "  q1 "
      << one_decimal(100.0 * s.q1) << "  median " << one_decimal(100.0 * s.median) << "  q3 "
      << one_decimal(100.0 * s.q3) << "  max " << one_decimal(100.0 * s.max) << '\n';
  return out.str();
}

}  // namespace ssd::trainer
