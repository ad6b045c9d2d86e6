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

#ifndef CHAIDLOGIT_PIPELINE_HPP_
#define CHAIDLOGIT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chaidlogit/chaid.hpp"
#include "chaidlogit/interaction_scan.hpp"
#include "chaidlogit/logit.hpp"
#include "chaidlogit/metrics.hpp"
#include "chaidlogit/preprocess.hpp"
#include "chaidlogit/serialize.hpp"
#include "chaidlogit/synth.hpp"

namespace chaidlogit {

struct PipelineConfig {
  std::filesystem::path input;
  std::string target = "RESP_FLAG";
  double train_fraction = 0.6;
  std::uint64_t seed = 1;
  double max_missing = 0.9;
  bool clustering = true;
  double max_second_eigenvalue = 1.0;
  ChaidConfig chaid;
  double sle = 0.15;
  double sls = 0.15;
  EntryTest entry_test = EntryTest::kScore;
  double vif_threshold = 10.0;
  std::vector<std::size_t> sweep{30, 27, 24, 21, 18, 15, 12};
  std::filesystem::path out_dir = "out";
  SynthSpec synth;

  void validate() const;
  StepwiseOptions stepwise_options(std::size_t workers) const;
};

void to_json(json& j, const PipelineConfig& cfg);
// Absent keys keep their defaults; unknown keys are rejected.
void from_json(const json& j, PipelineConfig& cfg);

PipelineConfig load_config(const std::filesystem::path& path);

// Training and validation data after the split, the missing-value filter,
// median imputation and (optionally) variable clustering.
struct Prepared {
  Dataset train;
  Dataset valid;
  MedianMap medians;
  std::vector<std::string> dropped;
  bool clustered = false;
  ClusterAssignment clusters;
  std::vector<ColumnId> base;  // predictors offered to the scan and to both models
};

Prepared prepare(const Dataset& raw, const PipelineConfig& cfg);

// Rebuilds the prepared data from recorded medians and base predictor names,
// without recomputing either.
Prepared replay_prepare(const Dataset& raw, const PipelineConfig& cfg, const MedianMap& medians,
                        const std::vector<std::string>& base_names);

struct FittedModel {
  StepwiseResult selection;
  LogisticModel model;  // after the VIF screen
  VifReport vif;
  std::vector<std::string> candidates;
};

struct FittedModels {
  FittedModel hybrid;
  FittedModel pure;
  Dataset train;  // base predictors plus materialized interaction columns
};

// Stepwise selection over base + detected terms (hybrid) and base alone (pure).
FittedModels fit_models(const Prepared& prep, std::vector<InteractionTerm> terms, const PipelineConfig& cfg,
                        std::size_t workers);

struct ComparisonRow {
  std::size_t size = 0;
  std::size_t hybrid_size = 0;
  std::size_t hybrid_interactions = 0;
  MetricsReport hybrid_train;
  MetricsReport hybrid_valid;
  std::size_t pure_size = 0;
  MetricsReport pure_train;
  MetricsReport pure_valid;
};

// Each model cut back to min(k, size) columns by Wald elimination, then scored.
std::vector<ComparisonRow> compare_sweep(const LogisticModel& hybrid, const LogisticModel& pure, const Dataset& train,
                                         const Dataset& valid, const PipelineConfig& cfg);
void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);

// Cumulative share of each class captured when the population is taken in
// descending score order, at every percentile.
struct KsPoint {
  double population = 0.0;
  double positive = 0.0;
  double negative = 0.0;
};

std::vector<KsPoint> ks_curve(std::span<const double> scores, std::span<const std::uint8_t> labels,
                              std::size_t steps = 100);
void write_ks_curve_csv(const std::vector<KsPoint>& hybrid, const std::vector<KsPoint>& pure, std::ostream& out);

struct TermProfile {
  std::string term;
  std::string file_name;  // profile_<a>__<b>.csv
  std::vector<ProfileRow> rows;
};

// Pair-tree profiles for every interaction column of `model`.
std::vector<TermProfile> profile_terms(const LogisticModel& model, const Dataset& train, const ChaidConfig& cfg);

struct PipelineResult {
  Prepared prepared;
  ScanResult scan;
  FittedModels models;
  std::vector<ComparisonRow> comparison;
  MetricsReport hybrid_valid;
  MetricsReport pure_valid;
};

// The whole procedure in memory.
PipelineResult run_pipeline(const Dataset& raw, const PipelineConfig& cfg, std::size_t workers = 1);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_PIPELINE_HPP_
