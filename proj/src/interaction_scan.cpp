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

#include "chaidlogit/interaction_scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

std::vector<std::pair<std::size_t, std::size_t>> enumerate_pairs(std::size_t p) {
  if (p < 2) throw Error("interaction_scan", "pair enumeration needs at least 2 predictors");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(p * (p - 1) / 2);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::optional<InteractionTerm> detect_pair(const PredictorBins& a, const PredictorBins& b,
                                           std::span<const std::uint8_t> target, const ChaidConfig& cfg) {
  const PredictorBins* offered[2] = {&a, &b};
  if (to_index(b.id) < to_index(a.id)) std::swap(offered[0], offered[1]);
  const ChaidTree tree = grow_tree(offered, target, cfg);
  if (!tree.root().split) return std::nullopt;

  InteractionTerm term;
  term.i = offered[0]->id;
  term.j = offered[1]->id;
  term.name_i = offered[0]->name;
  term.name_j = offered[1]->name;
  term.tree_depth_reached = tree.depth_reached();
  term.used_both = tree.splits_on(term.i) && tree.splits_on(term.j);
  term.root_adjusted_p = tree.root().split->adjusted_p;
  return term;
}

std::optional<InteractionTerm> detect_pair(const Dataset& ds, ColumnId i, ColumnId j, const ChaidConfig& cfg) {
  if (i == j) throw Error("interaction_scan", "a pair needs two distinct columns");
  cfg.validate();
  const auto a = bin_predictor(ds.column(i), cfg.n_bins);
  const auto b = bin_predictor(ds.column(j), cfg.n_bins);
  const auto target = ds.binary_target();
  return detect_pair(a, b, target, cfg);
}

ChaidTree grow_pair_tree(const Dataset& ds, ColumnId i, ColumnId j, const ChaidConfig& cfg) {
  const ColumnId ids[2] = {i, j};
  return grow_tree(ds, ids, cfg);
}

ScanResult scan_all(const Dataset& ds, std::span<const ColumnId> predictors, const ChaidConfig& cfg,
                    std::size_t workers) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<ColumnId> ids(predictors.begin(), predictors.end());
  std::sort(ids.begin(), ids.end(), [](ColumnId a, ColumnId b) { return to_index(a) < to_index(b); });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const auto pairs = enumerate_pairs(ids.size());

  std::vector<PredictorBins> binned;
  binned.reserve(ids.size());
  for (const auto id : ids) binned.push_back(bin_predictor(ds.column(id), cfg.n_bins));
  const auto target = ds.binary_target();

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, pairs.size());

  std::vector<std::optional<InteractionTerm>> results(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) {
      results[k] = detect_pair(binned[pairs[k].first], binned[pairs[k].second], target, cfg);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ScanResult out;
  out.report.pairs_total = pairs.size();
  out.report.workers = workers;
  out.report.outcomes.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    PairOutcome o;
    o.i = ids[pairs[k].first];
    o.j = ids[pairs[k].second];
    if (results[k]) {
      o.detected = true;
      o.root_adjusted_p = results[k]->root_adjusted_p;
      out.terms.push_back(std::move(*results[k]));
    }
    out.report.outcomes.push_back(o);
  }
  out.report.pairs_detected = out.terms.size();
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Dataset materialize_terms(const Dataset& ds, std::vector<InteractionTerm>& terms) {
  std::vector<Column> columns = ds.columns();
  columns.reserve(columns.size() + terms.size());
  std::uint32_t next = to_index(ds.next_column_id());
  for (auto& term : terms) {
    Column c = make_interaction_column(ds, term.i, term.j).with_id(column_id(next++));
    term.derived = c.id();
    columns.push_back(std::move(c));
  }
  return ds.with_columns(std::move(columns));
}

}  // namespace chaidlogit
