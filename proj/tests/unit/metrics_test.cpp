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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chaidlogit/metrics.hpp"
#include "test_util.hpp"

using namespace chaidlogit;
using chaidlogit::testing::Cells;
using chaidlogit::testing::make_dataset;

namespace {

using Labels = std::vector<std::uint8_t>;

double mann_whitney(const std::vector<double>& s, const Labels& y) {
  double concordant = 0;
  double pairs = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!y[a]) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (y[b]) continue;
      pairs += 1;
      concordant += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
    }
  }
  return concordant / pairs;
}

double ecdf_ks(const std::vector<double>& s, const Labels& y) {
  const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  const std::size_t neg = y.size() - pos;
  double best = 0;
  for (const double x : s) {
    std::size_t pos_le = 0, neg_le = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] <= x) (y[k] ? pos_le : neg_le)++;
    }
    best = std::max(best, std::abs(static_cast<double>(neg_le) / static_cast<double>(neg) -
                                   static_cast<double>(pos_le) / static_cast<double>(pos)));
  }
  return best;
}

}  // namespace

TEST_CASE("accuracy") {
  const std::vector<double> s{0.9, 0.2, 0.7, 0.1};
  const Labels y{1, 0, 1, 0};
  CHECK(accuracy(s, y).accuracy == 1.0);

  // tp=3, tn=2, fp=1, fn=2
  const std::vector<double> s2{0.9, 0.8, 0.7, 0.1, 0.2, 0.6, 0.3, 0.4};
  const Labels y2{1, 1, 1, 0, 0, 0, 1, 1};
  const AccuracyResult r = accuracy(s2, y2);
  CHECK(r.confusion == ConfusionCounts{3, 2, 1, 2});
  CHECK(r.accuracy == 0.625);

  const std::vector<double> half{0.5};
  const Labels one{1};
  CHECK(accuracy(half, one).confusion.fn == 1);
  CHECK(accuracy(half, one).accuracy == 0.0);

  const std::vector<double> empty;
  const Labels none;
  CHECK_THROWS_AS(accuracy(empty, none), Error);
  CHECK_THROWS_AS(accuracy(s, one), Error);
}

TEST_CASE("roc_auc worked examples") {
  const std::vector<double> s{0.8, 0.6, 0.4, 0.7};
  const Labels y{1, 1, 0, 0};
  CHECK(roc_auc(s, y) == 0.75);
  const std::vector<double> sep{0.9, 0.8, 0.1, 0.2};
  CHECK(roc_auc(sep, y) == 1.0);
  const std::vector<double> flat(4, 0.3);
  CHECK(roc_auc(flat, y) == 0.5);
  const Labels single{1, 1, 1, 1};
  CHECK_THROWS_AS(roc_auc(s, single), Error);
}

TEST_CASE("ks_stat worked examples") {
  const std::vector<double> s{0.8, 0.6, 0.4, 0.7};
  const Labels y{1, 1, 0, 0};
  CHECK(ks_stat(s, y) == 0.5);
  const std::vector<double> sep{0.9, 0.8, 0.1, 0.2};
  CHECK(ks_stat(sep, y) == 1.0);
  const std::vector<double> same{0.3, 0.6, 0.6, 0.3};
  CHECK(ks_stat(same, y) == 0.0);
  const Labels single{0, 0, 0, 0};
  CHECK_THROWS_AS(ks_stat(s, single), Error);
}

TEST_CASE("metrics agree with brute-force oracles") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> len(2, 120), levels(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::uniform_int_distribution<int> level(0, levels(rng));
    std::vector<double> s(n);
    Labels y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = level(rng) / 7.0;
      y[k] = static_cast<std::uint8_t>(rng() & 1);
    }
    y[0] = 0;
    y[1] = 1;
    const double auc = roc_auc(s, y);
    CHECK(std::abs(auc - mann_whitney(s, y)) < 1e-10);
    CHECK(ks_stat(s, y) == ecdf_ks(s, y));

    Labels flipped(n);
    for (std::size_t k = 0; k < n; ++k) flipped[k] = 1 - y[k];
    CHECK(std::abs(roc_auc(s, flipped) - (1 - auc)) < 1e-12);

    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = std::exp(3 * s[k]) - 5;
    CHECK(std::abs(roc_auc(t, y) - auc) < 1e-12);
    CHECK(ks_stat(t, y) == ks_stat(s, y));
  }
}

TEST_CASE("score_report and evaluate") {
  const std::vector<double> s{0.9, 0.2, 0.6, 0.4};
  const Labels y{1, 0, 0, 1};
  const MetricsReport r = score_report(s, y, "validation");
  CHECK(r.split == "validation");
  CHECK(r.accuracy == 0.5);
  CHECK(r.confusion.total() == 4);
  CHECK(r.auc == 0.75);
  CHECK(r.ks >= 0.0);
  CHECK(r.ks <= 1.0);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  auto make = [&](int n) {
    Cells x, yy;
    for (int k = 0; k < n; ++k) {
      const double v = z(rng);
      x.push_back(v);
      yy.push_back(std::bernoulli_distribution(1 / (1 + std::exp(-v)))(rng));
    }
    return make_dataset({{"x", x}}, yy);
  };
  const Dataset train = make(300), valid = make(200);
  const std::vector<ColumnId> ids{column_id(0)};
  const LogisticModel m = fit(train, ids);
  const auto [tr, va] = evaluate(m, train, valid);
  CHECK(tr.split == "train");
  CHECK(va.split == "validation");
  CHECK(tr.confusion.total() == 300);
  CHECK(va.confusion.total() == 200);
  CHECK(va.auc == roc_auc(predict_proba(m, valid), valid.binary_target()));
}
