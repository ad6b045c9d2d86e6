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

#include "chaidlogit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "metrics";

struct ClassTotals {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassTotals check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels, bool need_both) {
  if (scores.size() != labels.size()) throw Error(std::string(kModule), "scores and labels differ in length");
  if (scores.empty()) throw Error(std::string(kModule), "empty input");
  ClassTotals t;
  for (const auto l : labels) {
    if (l > 1) throw Error(std::string(kModule), "labels must be 0 or 1");
    (l ? t.pos : t.neg) += 1;
  }
  if (need_both && (t.pos == 0 || t.neg == 0)) {
    throw Error(std::string(kModule), "single-class input: both labels are required");
  }
  return t;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace

AccuracyResult accuracy(std::span<const double> scores, std::span<const std::uint8_t> labels, double cutoff) {
  check_inputs(scores, labels, false);
  AccuracyResult r;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const bool predicted = scores[k] > cutoff;
    if (predicted) {
      (labels[k] ? r.confusion.tp : r.confusion.fp) += 1;
    } else {
      (labels[k] ? r.confusion.fn : r.confusion.tn) += 1;
    }
  }
  r.accuracy = static_cast<double>(r.confusion.tp + r.confusion.tn) / static_cast<double>(r.confusion.total());
  return r;
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const auto totals = check_inputs(scores, labels, true);
  const auto order = order_by_score(scores);
  // Sweep thresholds from the highest score down; twice the area accumulates
  // exactly in integers.
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t twice_area = 0;
  std::size_t k = order.size();
  while (k > 0) {
    const double s = scores[order[k - 1]];
    std::uint64_t dtp = 0;
    std::uint64_t dfp = 0;
    while (k > 0 && scores[order[k - 1]] == s) {
      (labels[order[k - 1]] ? dtp : dfp) += 1;
      --k;
    }
    twice_area += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
  }
  return static_cast<double>(twice_area) / (2.0 * static_cast<double>(totals.pos) * static_cast<double>(totals.neg));
}

double ks_stat(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const auto totals = check_inputs(scores, labels, true);
  const auto order = order_by_score(scores);
  const double n_neg = static_cast<double>(totals.neg);
  const double n_pos = static_cast<double>(totals.pos);
  std::size_t neg_le = 0;
  std::size_t pos_le = 0;
  double best = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] ? pos_le : neg_le) += 1;
      ++k;
    }
    best = std::max(best, std::abs(static_cast<double>(neg_le) / n_neg - static_cast<double>(pos_le) / n_pos));
  }
  return best;
}

MetricsReport score_report(std::span<const double> scores, std::span<const std::uint8_t> labels, std::string split) {
  MetricsReport r;
  r.split = std::move(split);
  const auto acc = accuracy(scores, labels, 0.5);
  r.accuracy = acc.accuracy;
  r.confusion = acc.confusion;
  r.auc = roc_auc(scores, labels);
  r.ks = ks_stat(scores, labels);
  return r;
}

std::pair<MetricsReport, MetricsReport> evaluate(const LogisticModel& model, const Dataset& train,
                                                 const Dataset& valid) {
  const auto train_scores = predict_proba(model, train);
  const auto valid_scores = predict_proba(model, valid);
  return {score_report(train_scores, train.binary_target(), "train"),
          score_report(valid_scores, valid.binary_target(), "validation")};
}

}  // namespace chaidlogit
