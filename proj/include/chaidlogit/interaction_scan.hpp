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

#ifndef CHAIDLOGIT_INTERACTION_SCAN_HPP_
#define CHAIDLOGIT_INTERACTION_SCAN_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaidlogit/chaid.hpp"
#include "chaidlogit/data_model.hpp"

namespace chaidlogit {

// All (i, j) with i < j in lexicographic order; p * (p - 1) / 2 entries.
std::vector<std::pair<std::size_t, std::size_t>> enumerate_pairs(std::size_t p);

// A pair whose two-predictor CHAID tree split at the root.
struct InteractionTerm {
  ColumnId i{};
  ColumnId j{};
  std::string name_i;
  std::string name_j;
  std::size_t tree_depth_reached = 0;
  bool used_both = false;
  double root_adjusted_p = 1.0;
  std::optional<ColumnId> derived;  // set once the product column is materialized

  std::string name() const { return name_i + "*" + name_j; }
};

struct PairOutcome {
  ColumnId i{};
  ColumnId j{};
  bool detected = false;
  double root_adjusted_p = 1.0;  // 1 when the root did not split
};

struct ScanReport {
  std::size_t pairs_total = 0;
  std::size_t pairs_detected = 0;
  std::vector<PairOutcome> outcomes;  // enumeration order
  std::size_t workers = 1;
  double seconds = 0.0;               // wall clock; kept out of deterministic artifacts
};

struct ScanResult {
  std::vector<InteractionTerm> terms;  // ordered by (i, j)
  ScanReport report;
};

std::optional<InteractionTerm> detect_pair(const PredictorBins& a, const PredictorBins& b,
                                           std::span<const std::uint8_t> target, const ChaidConfig& cfg);
std::optional<InteractionTerm> detect_pair(const Dataset& ds, ColumnId i, ColumnId j, const ChaidConfig& cfg);

// The pair tree itself, for profiling a detected term.
ChaidTree grow_pair_tree(const Dataset& ds, ColumnId i, ColumnId j, const ChaidConfig& cfg);

// Predictors are scanned in ascending ColumnId order. Output does not depend
// on `workers` (0 means hardware concurrency).
ScanResult scan_all(const Dataset& ds, std::span<const ColumnId> predictors, const ChaidConfig& cfg,
                    std::size_t workers = 1);

// Appends one product column per term (in term order) and records its id.
Dataset materialize_terms(const Dataset& ds, std::vector<InteractionTerm>& terms);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_INTERACTION_SCAN_HPP_
