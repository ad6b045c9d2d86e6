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

#include "chaidlogit/chaid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "chaid";

[[noreturn]] void fail(const std::string& message) { throw Error(std::string(kModule), message); }

// p of the 2 x 2 table formed by two adjacent groups. Two groups that are pure
// in the same class have identical distributions, hence p = 1.
double pair_p_value(const ClassCounts& a, const ClassCounts& b) {
  if (a.n0 + b.n0 == 0 || a.n1 + b.n1 == 0) return 1.0;
  const ClassCounts table[2] = {a, b};
  return chi_square_test(table).p_value;
}

void merge_adjacent(std::vector<BinGroup>& groups, std::size_t left) {
  groups[left].last_bin = groups[left + 1].last_bin;
  groups[left].counts += groups[left + 1].counts;
  groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(left) + 1);
}

}  // namespace

void ChaidConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) fail("alpha must lie in [0, 1)");
  if (min_leaf < 1) fail("min_leaf must be at least 1");
  if (min_split < 2) fail("min_split must be at least 2");
  if (max_branches < 2) fail("max_branches must be at least 2");
  if (max_depth < 1) fail("max_depth must be at least 1");
  if (n_bins < 2 || n_bins > 65535) fail("n_bins must lie in [2, 65535]");
}

OrdinalBinning bin_continuous(std::span<const double> values, std::size_t n_bins) {
  if (n_bins < 1 || n_bins > 65535) fail("n_bins must lie in [1, 65535]");
  OrdinalBinning out;
  out.bins.assign(values.size(), 0);
  if (values.empty()) return out;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // Position i is a boundary when sorted[i - 1] < sorted[i]; cutting there
  // puts exactly i rows in the lower bins.
  std::vector<std::size_t> boundaries;
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted[i - 1] < sorted[i]) boundaries.push_back(i);
  }
  if (boundaries.empty()) return out;

  std::vector<std::size_t> chosen;
  for (std::size_t k = 1; k < n_bins; ++k) {
    const double target = static_cast<double>(k) * static_cast<double>(n) / static_cast<double>(n_bins);
    auto it = std::lower_bound(boundaries.begin(), boundaries.end(), target,
                               [](std::size_t b, double t) { return static_cast<double>(b) < t; });
    std::size_t pick;
    if (it == boundaries.end()) {
      pick = boundaries.back();
    } else if (it == boundaries.begin()) {
      pick = *it;
    } else {
      const std::size_t above = *it;
      const std::size_t below = *(it - 1);
      pick = (target - static_cast<double>(below) <= static_cast<double>(above) - target) ? below : above;
    }
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  for (const auto i : chosen) out.cuts.push_back(sorted[i]);

  for (std::size_t r = 0; r < values.size(); ++r) {
    out.bins[r] = static_cast<std::uint16_t>(std::upper_bound(out.cuts.begin(), out.cuts.end(), values[r]) -
                                             out.cuts.begin());
  }
  return out;
}

double bonferroni_multiplier(std::size_t categories, std::size_t groups) {
  if (groups < 1 || categories < groups) fail("bonferroni multiplier needs 1 <= groups <= categories");
  // C(c - 1, k - 1), exact for the small counts used here.
  const std::size_t n = categories - 1;
  std::size_t k = groups - 1;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(result);
}

MergeResult merge_categories(std::span<const ClassCounts> bin_counts, const ChaidConfig& cfg) {
  MergeResult out;
  std::vector<BinGroup>& groups = out.groups;
  std::size_t pending_empty_start = 0;
  bool pending = false;
  for (std::size_t b = 0; b < bin_counts.size(); ++b) {
    if (bin_counts[b].total() == 0) {
      if (groups.empty()) {
        if (!pending) pending_empty_start = b;
        pending = true;
      } else {
        groups.back().last_bin = b;
      }
      continue;
    }
    ++out.categories;
    BinGroup g;
    g.first_bin = groups.empty() && pending ? pending_empty_start : b;
    g.last_bin = b;
    g.counts = bin_counts[b];
    groups.push_back(g);
  }
  if (out.categories < 2) return out;

  bool changed = true;
  while (changed) {
    changed = false;
    while (groups.size() >= 2) {
      std::size_t best = 0;
      double best_p = -1.0;
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        const double p = pair_p_value(groups[g].counts, groups[g + 1].counts);
        if (p > best_p) {
          best_p = p;
          best = g;
        }
      }
      if (best_p > cfg.alpha || groups.size() > cfg.max_branches) {
        merge_adjacent(groups, best);
        changed = true;
      } else {
        break;
      }
    }
    while (groups.size() >= 2) {
      std::optional<std::size_t> small;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].counts.total() < cfg.min_leaf &&
            (!small || groups[g].counts.total() < groups[*small].counts.total())) {
          small = g;
        }
      }
      if (!small) break;
      const std::size_t g = *small;
      std::size_t left;
      if (g == 0) {
        left = 0;
      } else if (g + 1 == groups.size()) {
        left = g - 1;
      } else {
        const double p_left = pair_p_value(groups[g - 1].counts, groups[g].counts);
        const double p_right = pair_p_value(groups[g].counts, groups[g + 1].counts);
        left = p_left >= p_right ? g - 1 : g;
      }
      merge_adjacent(groups, left);
      changed = true;
    }
  }

  if (groups.size() >= 2) {
    std::vector<ClassCounts> table;
    table.reserve(groups.size());
    for (const auto& g : groups) table.push_back(g.counts);
    const auto test = chi_square_test(table);
    out.statistic = test.statistic;
    out.raw_p = test.p_value;
    out.bonferroni = bonferroni_multiplier(out.categories, groups.size());
    out.adjusted_p = std::min(1.0, out.bonferroni * out.raw_p);
  }
  return out;
}

MergeResult merge_categories(std::span<const std::uint8_t> target, std::span<const std::uint16_t> bins,
                             std::size_t bin_count, const ChaidConfig& cfg) {
  if (target.size() != bins.size()) fail("target and bins differ in length");
  std::vector<ClassCounts> counts(bin_count);
  for (std::size_t r = 0; r < bins.size(); ++r) {
    if (bins[r] >= bin_count) fail("bin index out of range");
    (target[r] ? counts[bins[r]].n1 : counts[bins[r]].n0) += 1;
  }
  return merge_categories(counts, cfg);
}

PredictorBins bin_predictor(const Column& column, std::size_t n_bins) {
  return PredictorBins{column.id(), column.name(), bin_continuous(column.dense_values(), n_bins)};
}

// ---------------------------------------------------------------- tree

ChaidTree::ChaidTree(std::vector<ChaidNode> nodes, ChaidConfig config, std::vector<OfferedPredictor> predictors)
    : nodes_(std::move(nodes)), config_(config), predictors_(std::move(predictors)) {
  if (nodes_.empty()) fail("a tree needs a root node");
}

std::size_t ChaidTree::depth_reached() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

bool ChaidTree::splits_on(ColumnId predictor) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [predictor](const ChaidNode& n) { return n.split && n.split->predictor == predictor; });
}

std::vector<std::size_t> ChaidTree::leaves() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes_) {
    if (n.is_leaf()) out.push_back(n.id);
  }
  return out;
}

std::optional<SplitCandidate> best_split(const ChaidNode& node, std::span<const PredictorBins* const> predictors,
                                         std::span<const std::uint8_t> target, const ChaidConfig& cfg) {
  if (node.rows.size() < cfg.min_split || node.depth >= cfg.max_depth) return std::nullopt;
  if (node.counts.n0 == 0 || node.counts.n1 == 0) return std::nullopt;

  std::optional<SplitCandidate> best;
  std::vector<ClassCounts> counts;
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    const PredictorBins& pb = *predictors[k];
    counts.assign(pb.binning.bin_count(), ClassCounts{});
    for (const auto r : node.rows) (target[r] ? counts[pb.binning.bins[r]].n1 : counts[pb.binning.bins[r]].n0) += 1;
    std::size_t non_empty = 0;
    for (const auto& c : counts) non_empty += c.total() > 0 ? 1 : 0;
    if (non_empty < 2) continue;

    MergeResult merge = merge_categories(counts, cfg);
    if (merge.groups.size() < 2) continue;
    const bool sizes_ok = std::all_of(merge.groups.begin(), merge.groups.end(),
                                      [&](const BinGroup& g) { return g.counts.total() >= cfg.min_leaf; });
    if (!sizes_ok) continue;

    if (best) {
      const PredictorBins& incumbent = *predictors[best->predictor_index];
      const auto key = std::make_tuple(merge.adjusted_p, -merge.statistic, to_index(pb.id));
      const auto best_key =
          std::make_tuple(best->merge.adjusted_p, -best->merge.statistic, to_index(incumbent.id));
      if (!(key < best_key)) continue;
    }
    best = SplitCandidate{k, std::move(merge)};
  }
  if (best && best->merge.adjusted_p < cfg.alpha) return best;
  return std::nullopt;
}

ChaidTree grow_tree(std::span<const PredictorBins* const> predictors, std::span<const std::uint8_t> target,
                    const ChaidConfig& cfg) {
  cfg.validate();
  if (predictors.empty()) fail("grow_tree needs at least one predictor");
  for (const auto* p : predictors) {
    if (p->binning.bins.size() != target.size()) fail("predictor '" + p->name + "' does not match the target length");
  }

  std::vector<ChaidNode> nodes(1);
  ChaidNode& root = nodes.front();
  root.rows.resize(target.size());
  for (std::size_t r = 0; r < target.size(); ++r) {
    root.rows[r] = static_cast<std::uint32_t>(r);
    (target[r] ? root.counts.n1 : root.counts.n0) += 1;
  }

  for (std::size_t current = 0; current < nodes.size(); ++current) {
    auto candidate = best_split(nodes[current], predictors, target, cfg);
    if (!candidate) continue;
    const PredictorBins& pb = *predictors[candidate->predictor_index];
    const auto& groups = candidate->merge.groups;

    std::vector<std::size_t> group_of_bin(pb.binning.bin_count());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t b = groups[g].first_bin; b <= groups[g].last_bin; ++b) group_of_bin[b] = g;
    }

    const std::size_t first_child = nodes.size();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::size_t depth = nodes[current].depth + 1;
      ChaidNode& child = nodes.emplace_back();
      child.id = first_child + g;
      child.depth = depth;
      child.parent = current;
      BranchCondition cond;
      cond.predictor = pb.id;
      cond.first_bin = groups[g].first_bin;
      cond.last_bin = groups[g].last_bin;
      if (cond.first_bin > 0) cond.lower = pb.binning.cuts[cond.first_bin - 1];
      if (cond.last_bin + 1 < pb.binning.bin_count()) cond.upper = pb.binning.cuts[cond.last_bin];
      child.condition = cond;
    }
    for (const auto r : nodes[current].rows) {
      ChaidNode& child = nodes[first_child + group_of_bin[pb.binning.bins[r]]];
      child.rows.push_back(r);
      (target[r] ? child.counts.n1 : child.counts.n0) += 1;
    }

    NodeSplit split;
    split.predictor = pb.id;
    split.predictor_name = pb.name;
    split.groups = groups;
    split.categories = candidate->merge.categories;
    split.statistic = candidate->merge.statistic;
    split.raw_p = candidate->merge.raw_p;
    split.adjusted_p = candidate->merge.adjusted_p;
    nodes[current].split = std::move(split);
    for (std::size_t g = 0; g < groups.size(); ++g) nodes[current].children.push_back(first_child + g);
  }

  std::vector<OfferedPredictor> offered;
  offered.reserve(predictors.size());
  for (const auto* p : predictors) offered.push_back({p->id, p->name, p->binning.cuts});
  return ChaidTree(std::move(nodes), cfg, std::move(offered));
}

ChaidTree grow_tree(const Dataset& ds, std::span<const ColumnId> predictors, const ChaidConfig& cfg) {
  cfg.validate();
  if (predictors.empty()) fail("grow_tree needs at least one predictor");
  std::vector<PredictorBins> binned;
  binned.reserve(predictors.size());
  for (const auto id : predictors) binned.push_back(bin_predictor(ds.column(id), cfg.n_bins));
  std::vector<const PredictorBins*> ptrs;
  for (const auto& b : binned) ptrs.push_back(&b);
  const auto target = ds.binary_target();
  return grow_tree(ptrs, target, cfg);
}

// ------------------------------------------------------------- profile

namespace {

std::string describe_range(const std::string& name, double lower, double upper) {
  const bool has_lower = std::isfinite(lower);
  const bool has_upper = std::isfinite(upper);
  if (!has_lower && !has_upper) return name + " any";
  if (!has_lower) return name + " < " + format_double(upper);
  if (!has_upper) return name + " >= " + format_double(lower);
  return name + " >= " + format_double(lower) + " and < " + format_double(upper);
}

}  // namespace

std::vector<ProfileRow> extract_profile(const ChaidTree& tree) {
  const auto& offered = tree.predictors();
  std::vector<ProfileRow> rows;
  for (const auto leaf_id : tree.leaves()) {
    std::vector<double> lower(offered.size(), -std::numeric_limits<double>::infinity());
    std::vector<double> upper(offered.size(), std::numeric_limits<double>::infinity());
    for (const ChaidNode* n = &tree.node(leaf_id); n->condition; n = &tree.node(*n->parent)) {
      for (std::size_t k = 0; k < offered.size(); ++k) {
        if (offered[k].id != n->condition->predictor) continue;
        lower[k] = std::max(lower[k], n->condition->lower);
        upper[k] = std::min(upper[k], n->condition->upper);
      }
    }
    ProfileRow row;
    row.leaf_id = leaf_id;
    for (std::size_t k = 0; k < offered.size(); ++k) {
      if (k) row.segment += ", ";
      row.segment += describe_range(offered[k].name, lower[k], upper[k]);
    }
    const auto& counts = tree.node(leaf_id).counts;
    row.n = counts.total();
    row.response_rate = row.n ? static_cast<double>(counts.n1) / static_cast<double>(row.n) : 0.0;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ProfileRow& a, const ProfileRow& b) {
    if (a.response_rate != b.response_rate) return a.response_rate > b.response_rate;
    return a.leaf_id < b.leaf_id;
  });
  return rows;
}

void write_profile_csv(const std::vector<ProfileRow>& rows, std::ostream& out) {
  out << "segment,n,response_rate\n";
  for (const auto& r : rows) {
    std::string quoted = "\"";
    for (const char c : r.segment) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    out << quoted << ',' << r.n << ',' << format_double(r.response_rate) << '\n';
  }
}

}  // namespace chaidlogit
