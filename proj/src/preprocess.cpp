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

#include "chaidlogit/preprocess.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "preprocess";

[[noreturn]] void fail(const std::string& message) { throw Error(std::string(kModule), message); }

}  // namespace

Dataset drop_missing_target(const Dataset& ds) {
  const Column& target = ds.target();
  std::vector<std::size_t> keep;
  keep.reserve(ds.n_rows());
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    if (target.is_present(r)) keep.push_back(r);
  }
  if (keep.empty()) fail("empty dataset: every row has a missing target");
  if (keep.size() == ds.n_rows()) return ds;
  return ds.select_rows(keep);
}

SplitResult stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail("train fraction must lie strictly between 0 and 1");
  const auto y = ds.binary_target();

  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < y.size(); ++r) by_class[y[r]].push_back(r);
  for (int k = 0; k < 2; ++k) {
    if (by_class[k].size() < 2) {
      fail("target class " + std::to_string(k) + " has " + std::to_string(by_class[k].size()) +
           " rows; stratified splitting needs at least 2");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> valid_rows;
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(rows.size()) + 0.5));
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    valid_rows.insert(valid_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(valid_rows.begin(), valid_rows.end());
  return SplitResult{ds.select_rows(train_rows), ds.select_rows(valid_rows), std::move(train_rows),
                     std::move(valid_rows)};
}

double median(std::vector<double> values) {
  if (values.empty()) fail("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

const MedianEntry* MedianMap::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ImputeResult filter_and_impute(const Dataset& train, double max_missing_fraction) {
  if (!(max_missing_fraction > 0.0 && max_missing_fraction <= 1.0)) {
    fail("max missing fraction must lie in (0, 1]");
  }
  std::vector<Column> kept;
  MedianMap medians;
  std::vector<std::string> dropped;
  const double n = static_cast<double>(train.n_rows());
  for (const auto& col : train.columns()) {
    if (col.id() == train.target_id()) {
      kept.push_back(col);
      continue;
    }
    const double missing_fraction = static_cast<double>(col.missing_count()) / n;
    if (missing_fraction > max_missing_fraction || col.missing_count() == col.size()) {
      dropped.push_back(col.name());
      continue;
    }
    std::vector<double> present;
    present.reserve(col.size() - col.missing_count());
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (col.is_present(r)) present.push_back(col.raw_values()[r]);
    }
    const double m = median(std::move(present));
    medians.entries.push_back({col.id(), col.name(), m});
    kept.push_back(col.missing_count() ? col.filled(m) : col);
  }
  if (medians.entries.empty()) fail("every predictor exceeds the missing-value threshold");
  return ImputeResult{train.with_columns(std::move(kept)), std::move(medians), std::move(dropped)};
}

Dataset apply_imputation(const Dataset& valid, const MedianMap& medians) {
  for (const auto& e : medians.entries) {
    if (valid.find(e.name) == nullptr) fail("column '" + e.name + "' from the median map is absent");
  }
  std::vector<Column> kept;
  for (const auto& col : valid.columns()) {
    if (col.id() == valid.target_id()) {
      kept.push_back(col);
      continue;
    }
    const MedianEntry* e = medians.find(col.name());
    if (e == nullptr) {
      warn(kModule, "dropping column '" + col.name() + "' which was not kept during training");
      continue;
    }
    kept.push_back(col.missing_count() ? col.filled(e->median) : col);
  }
  return valid.with_columns(std::move(kept));
}

// ------------------------------------------------------- variable clustering

namespace {

struct LeadingComponents {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Eigen::VectorXd v1;
  Eigen::VectorXd v2;
};

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& corr, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = corr(rows[a], cols[b]);
  }
  return out;
}

LeadingComponents leading_components(const Eigen::MatrixXd& corr, const std::vector<int>& members) {
  LeadingComponents lc;
  const auto m = static_cast<Eigen::Index>(members.size());
  if (m == 1) {
    lc.lambda1 = 1.0;
    lc.v1 = Eigen::VectorXd::Ones(1);
    return lc;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(submatrix(corr, members, members));
  lc.lambda1 = eig.eigenvalues()(m - 1);
  lc.lambda2 = eig.eigenvalues()(m - 2);
  lc.v1 = eig.eigenvectors().col(m - 1);
  lc.v2 = eig.eigenvectors().col(m - 2);
  return lc;
}

// Squared correlation between variable j and the first principal component
// of `members`.
double r2_with_component(const Eigen::MatrixXd& corr, int j, const std::vector<int>& members,
                         const LeadingComponents& lc) {
  if (lc.lambda1 <= 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) cov += corr(j, members[a]) * lc.v1(static_cast<Eigen::Index>(a));
  return std::clamp(cov * cov / lc.lambda1, 0.0, 1.0);
}

struct WorkingCluster {
  std::vector<int> members;  // indices into the clustered-variable list, ascending
  LeadingComponents components;
  bool splittable = true;
};

// Returns the two halves, or nothing when the rotation leaves one side empty.
std::optional<std::pair<std::vector<int>, std::vector<int>>> split_cluster(const Eigen::MatrixXd& corr,
                                                                           const WorkingCluster& cluster) {
  const auto& lc = cluster.components;
  const Eigen::VectorXd x = lc.v1 * std::sqrt(std::max(lc.lambda1, 0.0));
  const Eigen::VectorXd y = lc.v2 * std::sqrt(std::max(lc.lambda2, 0.0));
  double c = 0.0;
  double d = 0.0;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    const double u = x(a) * x(a) - y(a) * y(a);
    const double v = 2.0 * x(a) * y(a);
    c += u * u - v * v;
    d += 2.0 * u * v;
  }
  const double phi = std::atan2(d, c) / 4.0;
  const double cs = std::cos(phi);
  const double sn = std::sin(phi);

  std::vector<int> side(cluster.members.size());
  for (std::size_t a = 0; a < side.size(); ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    const double rx = x(ia) * cs + y(ia) * sn;
    const double ry = -x(ia) * sn + y(ia) * cs;
    side[a] = rx * rx >= ry * ry ? 0 : 1;
  }

  auto groups = [&](const std::vector<int>& s) {
    std::pair<std::vector<int>, std::vector<int>> g;
    for (std::size_t a = 0; a < s.size(); ++a) (s[a] == 0 ? g.first : g.second).push_back(cluster.members[a]);
    return g;
  };

  auto current = groups(side);
  if (current.first.empty() || current.second.empty()) return std::nullopt;

  for (int iter = 0; iter < 50; ++iter) {
    const auto lc_a = leading_components(corr, current.first);
    const auto lc_b = leading_components(corr, current.second);
    std::vector<int> next_side = side;
    for (std::size_t a = 0; a < side.size(); ++a) {
      const int j = cluster.members[a];
      const double ra = r2_with_component(corr, j, current.first, lc_a);
      const double rb = r2_with_component(corr, j, current.second, lc_b);
      if (ra > rb) next_side[a] = 0;
      if (rb > ra) next_side[a] = 1;
    }
    if (next_side == side) break;
    auto next = groups(next_side);
    if (next.first.empty() || next.second.empty()) break;
    side = std::move(next_side);
    current = std::move(next);
  }
  return current;
}

}  // namespace

ClusterAssignment cluster_variables(const Dataset& train, double max_second_eigenvalue) {
  if (!(max_second_eigenvalue > 0.0)) fail("max second eigenvalue must be positive");
  ClusterAssignment out;
  out.max_second_eigenvalue = max_second_eigenvalue;

  const auto n = static_cast<Eigen::Index>(train.n_rows());
  if (n < 2) fail("clustering needs at least 2 rows");

  std::vector<const Column*> vars;
  for (const auto id : train.predictor_ids()) {
    const Column& col = train.column(id);
    const auto values = col.dense_values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
      warn(kModule, "column '" + col.name() + "' is constant; excluded from clustering");
      out.excluded.push_back({col.id(), col.name()});
      continue;
    }
    vars.push_back(&col);
  }
  if (vars.empty()) fail("no non-constant predictors to cluster");

  const auto p = static_cast<Eigen::Index>(vars.size());
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto values = vars[static_cast<std::size_t>(j)]->dense_values();
    z.col(j) = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
    const double mean = z.col(j).mean();
    z.col(j).array() -= mean;
    const double norm = z.col(j).norm();
    z.col(j) /= norm;
  }
  Eigen::MatrixXd corr = z.transpose() * z;
  corr.diagonal().setOnes();

  std::vector<WorkingCluster> clusters(1);
  clusters[0].members.resize(static_cast<std::size_t>(p));
  std::iota(clusters[0].members.begin(), clusters[0].members.end(), 0);
  clusters[0].components = leading_components(corr, clusters[0].members);

  while (true) {
    int pick = -1;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const auto& c = clusters[k];
      if (!c.splittable || c.members.size() < 2 || c.components.lambda2 <= max_second_eigenvalue) continue;
      if (pick < 0 || c.components.lambda2 > clusters[static_cast<std::size_t>(pick)].components.lambda2) {
        pick = static_cast<int>(k);
      }
    }
    if (pick < 0) break;
    auto halves = split_cluster(corr, clusters[static_cast<std::size_t>(pick)]);
    if (!halves) {
      clusters[static_cast<std::size_t>(pick)].splittable = false;
      continue;
    }
    WorkingCluster a;
    a.members = std::move(halves->first);
    a.components = leading_components(corr, a.members);
    WorkingCluster b;
    b.members = std::move(halves->second);
    b.components = leading_components(corr, b.members);
    clusters[static_cast<std::size_t>(pick)] = std::move(a);
    clusters.push_back(std::move(b));
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const WorkingCluster& a, const WorkingCluster& b) { return a.members.front() < b.members.front(); });

  double explained = 0.0;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& wc = clusters[k];
    VariableCluster vc;
    vc.first_eigenvalue = wc.components.lambda1;
    vc.second_eigenvalue = wc.components.lambda2;
    explained += wc.components.lambda1;
    for (const int j : wc.members) {
      ClusterMember m;
      m.id = vars[static_cast<std::size_t>(j)]->id();
      m.name = vars[static_cast<std::size_t>(j)]->name();
      m.r2_own = r2_with_component(corr, j, wc.members, wc.components);
      for (std::size_t other = 0; other < clusters.size(); ++other) {
        if (other == k) continue;
        m.r2_next = std::max(m.r2_next, r2_with_component(corr, j, clusters[other].members, clusters[other].components));
      }
      if (clusters.size() == 1) {
        m.ratio = 1.0 - m.r2_own;
      } else {
        const double denom = 1.0 - m.r2_next;
        m.ratio = denom > 0.0 ? (1.0 - m.r2_own) / denom : std::numeric_limits<double>::infinity();
      }
      vc.members.push_back(std::move(m));
    }
    std::sort(vc.members.begin(), vc.members.end(),
              [](const ClusterMember& a, const ClusterMember& b) { return to_index(a.id) < to_index(b.id); });
    out.clusters.push_back(std::move(vc));
  }
  out.variance_explained = explained / static_cast<double>(p);

  const auto reps = select_representatives(out);
  for (auto& c : out.clusters) {
    for (const auto id : reps) {
      if (std::any_of(c.members.begin(), c.members.end(), [id](const ClusterMember& m) { return m.id == id; })) {
        c.representative = id;
      }
    }
  }
  return out;
}

std::vector<ColumnId> select_representatives(const ClusterAssignment& assignment) {
  std::vector<ColumnId> reps;
  reps.reserve(assignment.clusters.size());
  for (const auto& c : assignment.clusters) {
    if (c.members.empty()) fail("cluster without members");
    const ClusterMember* best = &c.members.front();
    for (const auto& m : c.members) {
      if (m.ratio < best->ratio || (m.ratio == best->ratio && to_index(m.id) < to_index(best->id))) best = &m;
    }
    reps.push_back(best->id);
  }
  std::sort(reps.begin(), reps.end(), [](ColumnId a, ColumnId b) { return to_index(a) < to_index(b); });
  return reps;
}

}  // namespace chaidlogit
