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

#ifndef CHAIDLOGIT_SYNTH_HPP_
#define CHAIDLOGIT_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chaidlogit/chaid.hpp"
#include "chaidlogit/data_model.hpp"
#include "chaidlogit/logit.hpp"
#include "chaidlogit/metrics.hpp"

namespace chaidlogit {

struct InteractionEffect {
  std::size_t i = 0;
  std::size_t j = 0;
  double gamma = 0.0;
};

// Synthetic credit-response data: predictors x0..x{p-1} are standard normal
// (optionally sharing a factor within consecutive blocks), and
// RESP_FLAG ~ Bernoulli(sigmoid(intercept + sum beta x + sum gamma x_i x_j)).
struct SynthSpec {
  std::size_t n_rows = 1000;
  std::size_t n_predictors = 10;
  std::map<std::size_t, double> main_effects;
  std::vector<InteractionEffect> interactions;
  double intercept = 0.0;
  std::size_t block_size = 0;  // 0 = independent predictors
  double block_correlation = 0.0;
  double missing_rate = 0.0;   // per predictor cell, after the target is drawn
  std::uint64_t seed = 1;
  std::string target_name = "RESP_FLAG";

  void validate() const;
};

// Each predictor, each block factor, each missing mask and the target draw
// from their own seeded stream, so adding columns never perturbs earlier ones.
Dataset generate(const SynthSpec& spec);

// Refuses when p (p - 1) / 2 + p >= rows: the full product pool would leave
// no degrees of freedom.
void check_oracle_guard(std::size_t n_predictors, std::size_t n_rows);

struct OracleResult {
  StepwiseResult stepwise;
  std::size_t product_candidates = 0;
  double seconds = 0.0;
};

// Materializes every pairwise product of `base` and runs stepwise selection
// over base plus products.
OracleResult complete_stepwise_oracle(const Dataset& ds, std::span<const ColumnId> base,
                                      const StepwiseOptions& options = {});

struct BenchConfig {
  ChaidConfig chaid;
  StepwiseOptions stepwise;
  double train_fraction = 0.6;
  std::uint64_t split_seed = 1;
  std::size_t workers = 1;
};

struct BenchReport {
  std::size_t n_rows = 0;
  std::size_t n_predictors = 0;
  std::size_t workers = 1;
  std::size_t pairs_total = 0;
  std::size_t pairs_detected = 0;
  std::vector<bool> planted_detected;  // parallel to SynthSpec::interactions
  double scan_seconds = 0.0;
  double hybrid_seconds = 0.0;  // scan plus stepwise on base + detected terms
  double oracle_seconds = 0.0;
  double speedup = 0.0;         // oracle_seconds / hybrid_seconds
  std::size_t hybrid_model_size = 0;
  std::size_t oracle_model_size = 0;
  std::size_t oracle_candidates = 0;
  std::size_t hybrid_candidates = 0;
  MetricsReport hybrid_valid;
  MetricsReport oracle_valid;
};

BenchReport run_benchmark(const SynthSpec& spec, const BenchConfig& cfg);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_SYNTH_HPP_
