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

#ifndef CHAIDLOGIT_CHAID_HPP_
#define CHAIDLOGIT_CHAID_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaidlogit/chi_square.hpp"
#include "chaidlogit/data_model.hpp"

namespace chaidlogit {

struct ChaidConfig {
  double alpha = 0.3;             // merge and split significance, applied to Bonferroni-adjusted p
  std::size_t min_split = 18;     // smallest node that may split
  std::size_t min_leaf = 10;      // smallest child
  std::size_t max_branches = 3;
  std::size_t max_depth = 15;
  std::size_t n_bins = 10;        // initial ordinal bins per continuous predictor

  void validate() const;
  friend bool operator==(const ChaidConfig&, const ChaidConfig&) = default;
};

// Ordered bins of a continuous predictor. Bin b holds values in
// [cuts[b-1], cuts[b]) with open ends on both sides.
struct OrdinalBinning {
  std::vector<double> cuts;
  std::vector<std::uint16_t> bins;  // per row

  std::size_t bin_count() const { return cuts.size() + 1; }
};

// Equal-frequency binning over distinct values: each of the n_bins - 1
// quantile targets snaps to the nearest boundary between distinct sorted
// values, duplicates collapse. A constant column yields one bin.
OrdinalBinning bin_continuous(std::span<const double> values, std::size_t n_bins);

// A contiguous run of bins [first_bin, last_bin] and its class counts.
struct BinGroup {
  std::size_t first_bin = 0;
  std::size_t last_bin = 0;
  ClassCounts counts;
};

struct MergeResult {
  std::vector<BinGroup> groups;
  std::size_t categories = 0;  // non-empty bins before merging
  double statistic = 0.0;      // Pearson statistic of the final 2 x k table (0 with one group)
  double raw_p = 1.0;
  double bonferroni = 1.0;
  double adjusted_p = 1.0;     // min(1, bonferroni * raw_p); 1 with one group
};

// Number of ways to cut c ordered categories into k contiguous groups: C(c-1, k-1).
double bonferroni_multiplier(std::size_t categories, std::size_t groups);

// Ordinal merging on per-bin class counts (empty bins are absorbed by their
// neighbours). Repeatedly merges the adjacent pair with the largest pairwise
// p while that p exceeds alpha or the group count exceeds max_branches, then
// folds groups smaller than min_leaf into the neighbour with the larger
// pairwise p; both phases repeat until neither changes anything.
MergeResult merge_categories(std::span<const ClassCounts> bin_counts, const ChaidConfig& cfg);

// Convenience overload counting `target` over `bins` (restricted to a node).
MergeResult merge_categories(std::span<const std::uint8_t> target, std::span<const std::uint16_t> bins,
                             std::size_t bin_count, const ChaidConfig& cfg);

// A binned predictor offered to the tree.
struct PredictorBins {
  ColumnId id{};
  std::string name;
  OrdinalBinning binning;
};

PredictorBins bin_predictor(const Column& column, std::size_t n_bins);

struct BranchCondition {
  ColumnId predictor{};
  std::size_t first_bin = 0;
  std::size_t last_bin = 0;
  double lower = -std::numeric_limits<double>::infinity();  // inclusive
  double upper = std::numeric_limits<double>::infinity();   // exclusive
};

struct NodeSplit {
  ColumnId predictor{};
  std::string predictor_name;
  std::vector<BinGroup> groups;
  std::size_t categories = 0;
  double statistic = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
};

struct ChaidNode {
  std::size_t id = 0;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  std::vector<std::uint32_t> rows;  // ascending indices into the training rows
  ClassCounts counts;
  std::optional<BranchCondition> condition;  // absent on the root
  std::optional<NodeSplit> split;
  std::vector<std::size_t> children;

  bool is_leaf() const { return children.empty(); }
};

struct OfferedPredictor {
  ColumnId id{};
  std::string name;
  std::vector<double> cuts;
};

class ChaidTree {
 public:
  ChaidTree(std::vector<ChaidNode> nodes, ChaidConfig config, std::vector<OfferedPredictor> predictors);

  const ChaidNode& root() const { return nodes_.front(); }
  const ChaidNode& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<ChaidNode>& nodes() const { return nodes_; }
  const ChaidConfig& config() const { return config_; }
  const std::vector<OfferedPredictor>& predictors() const { return predictors_; }

  // Deepest node depth; 0 for a root-only tree.
  std::size_t depth_reached() const;
  bool splits_on(ColumnId predictor) const;
  std::vector<std::size_t> leaves() const;

 private:
  std::vector<ChaidNode> nodes_;
  ChaidConfig config_;
  std::vector<OfferedPredictor> predictors_;
};

struct SplitCandidate {
  std::size_t predictor_index = 0;  // position in the offered list
  MergeResult merge;
};

// Best significant split of `node`, or nothing. Requires both classes present,
// node size >= min_split and depth < max_depth. Ranks by adjusted p, then the
// larger statistic, then the lower ColumnId; accepts only adjusted p < alpha.
std::optional<SplitCandidate> best_split(const ChaidNode& node, std::span<const PredictorBins* const> predictors,
                                         std::span<const std::uint8_t> target, const ChaidConfig& cfg);

// Breadth-first growth; node ids follow creation order.
ChaidTree grow_tree(std::span<const PredictorBins* const> predictors, std::span<const std::uint8_t> target,
                    const ChaidConfig& cfg);
ChaidTree grow_tree(const Dataset& ds, std::span<const ColumnId> predictors, const ChaidConfig& cfg);

struct ProfileRow {
  std::size_t leaf_id = 0;
  std::string segment;  // e.g. "x11 >= 2, x16 < 557.1"
  std::size_t n = 0;
  double response_rate = 0.0;  // n1 / n
};

// One row per leaf in descending response rate (ties by leaf id). The segment
// lists every offered predictor's range along the path, "any" if unconstrained.
std::vector<ProfileRow> extract_profile(const ChaidTree& tree);

// RFC 4180 CSV with header segment,n,response_rate.
void write_profile_csv(const std::vector<ProfileRow>& rows, std::ostream& out);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_CHAID_HPP_
