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

#include "chaidlogit/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "chaidlogit/error.hpp"
#include "chaidlogit/interaction_scan.hpp"
#include "chaidlogit/preprocess.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "synth_oracle";

enum StreamTag : std::uint32_t { kColumn = 1, kBlock = 2, kTarget = 3, kMissing = 4 };

std::mt19937_64 stream(std::uint64_t seed, StreamTag tag, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void SynthSpec::validate() const {
  if (n_rows == 0) throw Error(std::string(kModule), "degenerate spec: zero rows");
  if (n_predictors == 0) throw Error(std::string(kModule), "degenerate spec: zero predictors");
  for (const auto& [k, beta] : main_effects) {
    if (k >= n_predictors) throw Error(std::string(kModule), "main effect index out of range");
  }
  for (const auto& e : interactions) {
    if (e.i >= n_predictors || e.j >= n_predictors || e.i == e.j) {
      throw Error(std::string(kModule), "interaction indices must be distinct and below n_predictors");
    }
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw Error(std::string(kModule), "missing rate must lie in [0, 1)");
  if (!(block_correlation >= 0.0 && block_correlation < 1.0)) {
    throw Error(std::string(kModule), "block correlation must lie in [0, 1)");
  }
}

Dataset generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_rows;
  const std::size_t p = spec.n_predictors;

  std::vector<std::vector<double>> factors;
  if (spec.block_size > 0 && spec.block_correlation > 0.0) {
    const std::size_t blocks = (p + spec.block_size - 1) / spec.block_size;
    for (std::size_t b = 0; b < blocks; ++b) {
      auto rng = stream(spec.seed, kBlock, b);
      std::normal_distribution<double> normal;
      std::vector<double> f(n);
      for (auto& v : f) v = normal(rng);
      factors.push_back(std::move(f));
    }
  }
  const double load = std::sqrt(spec.block_correlation);
  const double noise = std::sqrt(1.0 - spec.block_correlation);

  std::vector<std::vector<double>> x(p, std::vector<double>(n));
  for (std::size_t j = 0; j < p; ++j) {
    auto rng = stream(spec.seed, kColumn, j);
    std::normal_distribution<double> normal;
    for (std::size_t r = 0; r < n; ++r) {
      const double e = normal(rng);
      x[j][r] = factors.empty() ? e : load * factors[j / spec.block_size][r] + noise * e;
    }
  }

  std::vector<std::optional<double>> target(n);
  {
    auto rng = stream(spec.seed, kTarget, 0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
      double eta = spec.intercept;
      for (const auto& [k, beta] : spec.main_effects) eta += beta * x[k][r];
      for (const auto& e : spec.interactions) eta += e.gamma * x[e.i][r] * x[e.j][r];
      const double prob = 1.0 / (1.0 + std::exp(-eta));
      target[r] = uniform(rng) < prob ? 1.0 : 0.0;
    }
  }

  std::vector<Column> columns;
  columns.reserve(p + 1);
  for (std::size_t j = 0; j < p; ++j) {
    const auto id = column_id(static_cast<std::uint32_t>(j));
    const std::string name = "x" + std::to_string(j);
    if (spec.missing_rate > 0.0) {
      auto rng = stream(spec.seed, kMissing, j);
      std::bernoulli_distribution drop(spec.missing_rate);
      std::vector<std::optional<double>> values(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (!drop(rng)) values[r] = x[j][r];
      }
      columns.emplace_back(id, name, values);
    } else {
      columns.push_back(Column::dense(id, name, std::move(x[j])));
    }
  }
  const auto target_id = column_id(static_cast<std::uint32_t>(p));
  columns.emplace_back(target_id, spec.target_name, target);
  return Dataset("synthetic", std::move(columns), target_id);
}

void check_oracle_guard(std::size_t n_predictors, std::size_t n_rows) {
  const std::size_t products = n_predictors * (n_predictors - 1) / 2;
  if (products + n_predictors >= n_rows) {
    throw Error(std::string(kModule), "large p small n: " + std::to_string(products) + " products + " +
                                          std::to_string(n_predictors) + " predictors = " +
                                          std::to_string(products + n_predictors) + " candidates >= " +
                                          std::to_string(n_rows) + " rows");
  }
}

OracleResult complete_stepwise_oracle(const Dataset& ds, std::span<const ColumnId> base,
                                      const StepwiseOptions& options) {
  check_oracle_guard(base.size(), ds.n_rows());
  const auto start = std::chrono::steady_clock::now();

  std::vector<ColumnId> ids(base.begin(), base.end());
  std::sort(ids.begin(), ids.end(), [](ColumnId a, ColumnId b) { return to_index(a) < to_index(b); });
  std::vector<InteractionTerm> terms;
  for (const auto& [a, b] : enumerate_pairs(ids.size())) {
    InteractionTerm t;
    t.i = ids[a];
    t.j = ids[b];
    terms.push_back(t);
  }
  const Dataset full = materialize_terms(ds, terms);
  std::vector<ColumnId> candidates = ids;
  for (const auto& t : terms) candidates.push_back(*t.derived);

  OracleResult out;
  out.product_candidates = terms.size();
  out.stepwise = stepwise(full, candidates, options);
  out.seconds = seconds_since(start);
  return out;
}

BenchReport run_benchmark(const SynthSpec& spec, const BenchConfig& cfg) {
  const Dataset raw = generate(spec);
  const Dataset clean = drop_missing_target(raw);
  const SplitResult split = stratified_split(clean, cfg.train_fraction, cfg.split_seed);
  const ImputeResult imputed = filter_and_impute(split.train, 0.9);
  const Dataset& train = imputed.data;
  const Dataset valid = apply_imputation(split.valid, imputed.medians);
  const auto base = train.predictor_ids();
  check_oracle_guard(base.size(), train.n_rows());

  BenchReport report;
  report.n_rows = spec.n_rows;
  report.n_predictors = spec.n_predictors;
  report.workers = cfg.workers;

  StepwiseOptions step_opts = cfg.stepwise;
  step_opts.workers = cfg.workers;

  const auto hybrid_start = std::chrono::steady_clock::now();
  ScanResult scan = scan_all(train, base, cfg.chaid, cfg.workers);
  report.scan_seconds = scan.report.seconds;
  const Dataset train_h = materialize_terms(train, scan.terms);
  std::vector<ColumnId> hybrid_candidates = base;
  for (const auto& t : scan.terms) hybrid_candidates.push_back(*t.derived);
  const StepwiseResult hybrid = stepwise(train_h, hybrid_candidates, step_opts);
  report.hybrid_seconds = seconds_since(hybrid_start);

  const OracleResult oracle = complete_stepwise_oracle(train, base, step_opts);
  report.oracle_seconds = oracle.seconds;
  report.speedup = report.oracle_seconds / report.hybrid_seconds;

  report.pairs_total = scan.report.pairs_total;
  report.pairs_detected = scan.report.pairs_detected;
  for (const auto& e : spec.interactions) {
    const auto a = column_id(static_cast<std::uint32_t>(std::min(e.i, e.j)));
    const auto b = column_id(static_cast<std::uint32_t>(std::max(e.i, e.j)));
    report.planted_detected.push_back(std::any_of(scan.terms.begin(), scan.terms.end(), [&](const InteractionTerm& t) {
      return t.i == a && t.j == b;
    }));
  }
  report.hybrid_candidates = hybrid_candidates.size();
  report.oracle_candidates = base.size() + oracle.product_candidates;
  report.hybrid_model_size = hybrid.model.size();
  report.oracle_model_size = oracle.stepwise.model.size();
  report.hybrid_valid = score_report(predict_proba(hybrid.model, valid), valid.binary_target(), "validation");
  report.oracle_valid =
      score_report(predict_proba(oracle.stepwise.model, valid), valid.binary_target(), "validation");
  return report;
}

}  // namespace chaidlogit
