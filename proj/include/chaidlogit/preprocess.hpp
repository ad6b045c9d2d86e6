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

#ifndef CHAIDLOGIT_PREPROCESS_HPP_
#define CHAIDLOGIT_PREPROCESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaidlogit/data_model.hpp"

namespace chaidlogit {

// Rows whose target is present; predictors untouched. Throws on an empty result.
Dataset drop_missing_target(const Dataset& ds);

struct SplitResult {
  Dataset train;
  Dataset valid;
  std::vector<std::size_t> train_rows;  // indices into the input, ascending
  std::vector<std::size_t> valid_rows;
};

// Per class, floor(train_fraction * class_size + 0.5) rows go to training.
// A pure function of (ds, train_fraction, seed).
SplitResult stratified_split(const Dataset& ds, double train_fraction = 0.6, std::uint64_t seed = 1);

// Median of a non-empty sample; even counts average the two middle values.
double median(std::vector<double> values);

struct MedianEntry {
  ColumnId id{};
  std::string name;
  double median = 0.0;
};

// Training-split medians of every surviving predictor, kept for replay on
// validation or new data.
struct MedianMap {
  std::vector<MedianEntry> entries;

  const MedianEntry* find(std::string_view name) const;
};

struct ImputeResult {
  Dataset data;
  MedianMap medians;
  std::vector<std::string> dropped;  // names of columns above the missing threshold
};

ImputeResult filter_and_impute(const Dataset& train, double max_missing_fraction = 0.9);

// Restricts `valid` to the MedianMap columns (matched by name) and fills gaps
// with the recorded training medians. Extra predictors are dropped with a warning.
Dataset apply_imputation(const Dataset& valid, const MedianMap& medians);

struct ClusterMember {
  ColumnId id{};
  std::string name;
  double r2_own = 0.0;
  double r2_next = 0.0;
  double ratio = 0.0;  // (1 - r2_own) / (1 - r2_next); 1 - r2_own with a single cluster
};

struct VariableCluster {
  std::vector<ClusterMember> members;  // ascending ColumnId
  ColumnId representative{};
  double first_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;
};

struct ExcludedColumn {
  ColumnId id{};
  std::string name;
};

struct ClusterAssignment {
  std::vector<VariableCluster> clusters;
  std::vector<ExcludedColumn> excluded;  // zero-variance columns, never selected
  double max_second_eigenvalue = 1.0;
  // Sum of the clusters' first eigenvalues over the number of clustered variables.
  double variance_explained = 0.0;
};

// Divisive principal-component clustering of the predictors. A cluster whose
// correlation matrix has second eigenvalue above the threshold is split by a
// quartimax rotation of its first two components, followed by reassignment
// between the two halves until stable. The largest second eigenvalue splits first.
ClusterAssignment cluster_variables(const Dataset& train, double max_second_eigenvalue = 1.0);

// One column per cluster: the ratio minimizer, ties to the lower ColumnId.
// Returned in ascending ColumnId order.
std::vector<ColumnId> select_representatives(const ClusterAssignment& assignment);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_PREPROCESS_HPP_
