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

#include <cmath>
#include <random>

#include "chaidlogit/interaction_scan.hpp"
#include "chaidlogit/logit.hpp"
#include "test_util.hpp"

using namespace chaidlogit;
using chaidlogit::testing::Cells;
using chaidlogit::testing::make_dataset;

namespace {

// p unit-variance normals with mean `mean`; the target depends on gamma * x_a * x_b only.
// A centred product carries no marginal signal, so a root split needs mean != 0.
Dataset planted(std::size_t n, std::size_t p, std::size_t a, std::size_t b, double gamma, std::uint64_t seed,
                double mean = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(mean, 1.0);
  std::vector<std::pair<std::string, Cells>> preds(p);
  Cells y;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> x(p);
    for (auto& v : x) v = z(rng);
    for (std::size_t k = 0; k < p; ++k) {
      preds[k].first = "x" + std::to_string(k);
      preds[k].second.push_back(x[k]);
    }
    y.push_back(std::bernoulli_distribution(1 / (1 + std::exp(-gamma * x[a] * x[b])))(rng));
  }
  return make_dataset(preds, y);
}

// Likelihood-ratio statistic of adding x_i * x_j to a model with x_i and x_j.
double product_lr(const Dataset& ds, ColumnId i, ColumnId j) {
  const Dataset with = ds.with_column(make_interaction_column(ds, i, j));
  const std::vector<ColumnId> small{i, j};
  const std::vector<ColumnId> big{i, j, ds.next_column_id()};
  return 2 * (fit(with, big).log_likelihood - fit(with, small).log_likelihood);
}

}  // namespace

TEST_CASE("enumerate_pairs") {
  CHECK(enumerate_pairs(180).size() == 16110);
  CHECK(enumerate_pairs(2) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  const auto five = enumerate_pairs(5);
  CHECK(five.size() == 10);
  CHECK(five.front() == std::make_pair<std::size_t, std::size_t>(0, 1));
  CHECK(five[4] == std::make_pair<std::size_t, std::size_t>(1, 2));
  CHECK(five.back() == std::make_pair<std::size_t, std::size_t>(3, 4));
  for (std::size_t p = 2; p < 40; ++p) CHECK(enumerate_pairs(p).size() == p * (p - 1) / 2);
  CHECK_THROWS_AS(enumerate_pairs(1), Error);
  CHECK_THROWS_AS(enumerate_pairs(0), Error);
}

TEST_CASE("detect_pair: planted product is detected and confirmed by a logistic fit") {
  const Dataset ds = planted(2000, 2, 0, 1, 2.0, 3);
  const auto term = detect_pair(ds, column_id(0), column_id(1), ChaidConfig{});
  REQUIRE(term.has_value());
  CHECK(term->i == column_id(0));
  CHECK(term->j == column_id(1));
  CHECK(term->name() == "x0*x1");
  CHECK(term->tree_depth_reached >= 1);
  CHECK(term->used_both);

  const Dataset with = ds.with_column(make_interaction_column(ds, column_id(0), column_id(1)));
  const std::vector<ColumnId> cols{column_id(0), column_id(1), column_id(3)};
  const LogisticModel m = fit(with, cols);
  CHECK(m.coefficients[2].name == "x0*x1");
  CHECK(m.coefficients[2].p_value < 1e-6);
}

TEST_CASE("detect_pair: argument order does not matter") {
  const Dataset ds = planted(1000, 2, 0, 1, 2.0, 4);
  const auto a = detect_pair(ds, column_id(0), column_id(1), ChaidConfig{});
  const auto b = detect_pair(ds, column_id(1), column_id(0), ChaidConfig{});
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->i == b->i);
  CHECK(a->root_adjusted_p == b->root_adjusted_p);
}

TEST_CASE("detect_pair: constant columns give nothing") {
  Cells y;
  for (int r = 0; r < 100; ++r) y.push_back(r % 3 == 0);
  const Dataset ds = make_dataset({{"a", Cells(100, 1.0)}, {"b", Cells(100, 4.0)}}, y);
  CHECK_FALSE(detect_pair(ds, column_id(0), column_id(1), ChaidConfig{}).has_value());
}

TEST_CASE("detect_pair: a one-variable tree still yields a term") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  Cells x, flat, y;
  for (int r = 0; r < 1000; ++r) {
    const double v = z(rng);
    x.push_back(v);
    flat.push_back(2.0);
    y.push_back(std::bernoulli_distribution(1 / (1 + std::exp(-2 * v)))(rng));
  }
  const Dataset ds = make_dataset({{"x", x}, {"flat", flat}}, y);
  const auto term = detect_pair(ds, column_id(0), column_id(1), ChaidConfig{});
  REQUIRE(term.has_value());
  CHECK_FALSE(term->used_both);
}

TEST_CASE("scan_all: planted pair among five predictors") {
  const Dataset ds = planted(3000, 5, 1, 3, 2.0, 6);
  const ScanResult scan = scan_all(ds, ds.predictor_ids(), ChaidConfig{}, 1);
  CHECK(scan.report.pairs_total == 10);
  CHECK(scan.report.outcomes.size() == 10);
  CHECK(scan.report.pairs_detected == scan.terms.size());
  bool found = false;
  for (const auto& t : scan.terms) found = found || (t.i == column_id(1) && t.j == column_id(3));
  CHECK(found);

  // The likelihood-ratio oracle ranks the planted pair first.
  double best = -1;
  std::pair<std::size_t, std::size_t> arg{};
  for (const auto& [i, j] : enumerate_pairs(5)) {
    const double lr = product_lr(ds, column_id(static_cast<std::uint32_t>(i)), column_id(static_cast<std::uint32_t>(j)));
    if (lr > best) {
      best = lr;
      arg = {i, j};
    }
  }
  CHECK(arg == std::make_pair<std::size_t, std::size_t>(1, 3));
  for (std::size_t k = 1; k < scan.terms.size(); ++k) {
    const auto& a = scan.terms[k - 1];
    const auto& b = scan.terms[k];
    CHECK(std::make_pair(to_index(a.i), to_index(a.j)) < std::make_pair(to_index(b.i), to_index(b.j)));
  }
}

TEST_CASE("scan_all: worker count does not change the result") {
  const Dataset ds = planted(1500, 8, 2, 5, 1.5, 7);
  const ScanResult one = scan_all(ds, ds.predictor_ids(), ChaidConfig{}, 1);
  for (const std::size_t w : {2u, 3u, 8u, 0u}) {
    const ScanResult many = scan_all(ds, ds.predictor_ids(), ChaidConfig{}, w);
    REQUIRE(many.terms.size() == one.terms.size());
    for (std::size_t k = 0; k < one.terms.size(); ++k) {
      CHECK(many.terms[k].i == one.terms[k].i);
      CHECK(many.terms[k].j == one.terms[k].j);
      CHECK(many.terms[k].root_adjusted_p == one.terms[k].root_adjusted_p);
      CHECK(many.terms[k].tree_depth_reached == one.terms[k].tree_depth_reached);
      CHECK(many.terms[k].used_both == one.terms[k].used_both);
    }
    for (std::size_t k = 0; k < one.report.outcomes.size(); ++k) {
      CHECK(many.report.outcomes[k].detected == one.report.outcomes[k].detected);
    }
  }
}

TEST_CASE("scan_all: alpha zero detects nothing") {
  const Dataset ds = planted(1000, 4, 0, 1, 3.0, 8);
  ChaidConfig cfg;
  cfg.alpha = 0.0;
  const ScanResult scan = scan_all(ds, ds.predictor_ids(), cfg, 2);
  CHECK(scan.terms.empty());
  CHECK(scan.report.pairs_detected == 0);
  CHECK(scan.report.pairs_total == 6);
}

TEST_CASE("scan_all: detections grow with alpha on seeded data") {
  const std::vector<double> alphas{0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::size_t violations = 0, comparisons = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset ds = planted(800, 6, 0, 1, 1.0, 100 + seed, 0.0);
    std::vector<std::vector<bool>> detected;
    for (const double alpha : alphas) {
      ChaidConfig cfg;
      cfg.alpha = alpha;
      std::vector<bool> d;
      for (const auto& o : scan_all(ds, ds.predictor_ids(), cfg, 1).report.outcomes) d.push_back(o.detected);
      detected.push_back(d);
    }
    for (std::size_t a = 1; a < alphas.size(); ++a) {
      for (std::size_t k = 0; k < detected[a].size(); ++k) {
        ++comparisons;
        if (detected[a - 1][k] && !detected[a][k]) ++violations;
      }
    }
  }
  CHECK(comparisons > 0);
  CHECK(violations == 0);
}

TEST_CASE("materialize_terms appends products and records ids") {
  const Dataset ds = planted(500, 4, 0, 2, 3.0, 9);
  ScanResult scan = scan_all(ds, ds.predictor_ids(), ChaidConfig{}, 1);
  REQUIRE_FALSE(scan.terms.empty());
  const Dataset out = materialize_terms(ds, scan.terms);
  CHECK(out.columns().size() == ds.columns().size() + scan.terms.size());
  for (const auto& t : scan.terms) {
    REQUIRE(t.derived.has_value());
    const Column& c = out.column(*t.derived);
    CHECK(c.name() == t.name());
    CHECK(c.parents() == std::make_pair(t.i, t.j));
    const auto a = ds.column(t.i).dense_values();
    const auto b = ds.column(t.j).dense_values();
    for (std::size_t r = 0; r < ds.n_rows(); ++r) CHECK(c.at(r) == a[r] * b[r]);
  }
}
