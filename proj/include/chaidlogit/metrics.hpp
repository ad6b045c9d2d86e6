// Copyright 2026 The chaidlogit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAIDLOGIT_METRICS_HPP_
#define CHAIDLOGIT_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "chaidlogit/data_model.hpp"
#include "chaidlogit/logit.hpp"

namespace chaidlogit {

struct AccuracyResult {
  double accuracy = 0.0;
  ConfusionCounts confusion;
};

// Class 1 iff score > cutoff; a score equal to the cutoff is class 0.
AccuracyResult accuracy(std::span<const double> scores, std::span<const std::uint8_t> labels, double cutoff = 0.5);

// Trapezoidal area under the ROC curve over all distinct thresholds; equals
// the Mann-Whitney concordance with ties counted one half.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// max_x |F_neg(x) - F_pos(x)| over the class-conditional empirical CDFs.
double ks_stat(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct MetricsReport {
  std::string split;  // "train" or "validation"
  double accuracy = 0.0;
  double auc = 0.0;
  double ks = 0.0;
  ConfusionCounts confusion;
};

MetricsReport score_report(std::span<const double> scores, std::span<const std::uint8_t> labels, std::string split);

std::pair<MetricsReport, MetricsReport> evaluate(const LogisticModel& model, const Dataset& train,
                                                 const Dataset& valid);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_METRICS_HPP_
