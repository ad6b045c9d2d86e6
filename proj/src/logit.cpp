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

#include "chaidlogit/logit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "chaidlogit/chi_square.hpp"
#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "logit";

[[noreturn]] void fail(const std::string& message) { throw Error(std::string(kModule), message); }

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double clamp_probability(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

double softplus(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(x.cols()) = x;
  return out;
}

std::string parameter_name(const std::vector<ModelColumn>& columns, Eigen::Index k) {
  return k == 0 ? std::string("(intercept)") : columns[static_cast<std::size_t>(k - 1)].name;
}

// Factorization of the information matrix after unit-diagonal scaling.
struct ScaledSolver {
  Eigen::VectorXd scale;  // 1 / sqrt(diag(H))
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  bool singular = false;

  explicit ScaledSolver(const Eigen::MatrixXd& h) {
    scale = h.diagonal().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
    if (!scale.allFinite()) {
      singular = true;
      return;
    }
    ldlt.compute(scale.asDiagonal() * h * scale.asDiagonal());
    // rcond() ignores exact zero pivots, so the pivots are checked directly.
    const Eigen::VectorXd d = ldlt.vectorD();
    singular = ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-12 ||
               (d.size() > 0 && !(d.minCoeff() > 1e-12 * d.cwiseAbs().maxCoeff()));
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& g) const {
    return scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * g);
  }

  Eigen::VectorXd inverse_diagonal() const {
    const auto q = scale.size();
    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(q, q));
    return inv.diagonal().cwiseProduct(scale.cwiseProduct(scale));
  }
};

std::vector<std::string> collinear_parameters(const Eigen::MatrixXd& h, const std::vector<ModelColumn>& columns) {
  Eigen::VectorXd scale = h.diagonal().cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index k = 0; k < scale.size(); ++k) scale(k) = scale(k) > 0.0 ? 1.0 / scale(k) : 0.0;
  // Every parameter with weight in a null-space direction takes part in a dependency.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scale.asDiagonal() * h * scale.asDiagonal());
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double top = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  std::vector<bool> involved(static_cast<std::size_t>(h.rows()), false);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) > 1e-10 * top) continue;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      if (std::abs(eig.eigenvectors()(r, k)) > 1e-6) involved[static_cast<std::size_t>(r)] = true;
    }
  }
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    if (scale(r) == 0.0) involved[static_cast<std::size_t>(r)] = true;
  }
  std::vector<std::string> names;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    if (involved[static_cast<std::size_t>(r)]) names.push_back(parameter_name(columns, r));
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? ", " : "") + parts[k];
  return out;
}

}  // namespace

Eigen::VectorXd LogisticModel::beta() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(coefficients.size() + 1));
  b(0) = intercept.estimate;
  for (std::size_t k = 0; k < coefficients.size(); ++k) b(static_cast<Eigen::Index>(k + 1)) = coefficients[k].estimate;
  return b;
}

ModelColumn model_column(const Dataset& ds, ColumnId id) {
  const Column& c = ds.column(id);
  ModelColumn mc{c.name(), std::nullopt};
  if (const auto parents = c.parents()) {
    mc.parents = std::make_pair(ds.column(parents->first).name(), ds.column(parents->second).name());
  }
  return mc;
}

Design build_design(const Dataset& ds, std::span<const ColumnId> ids) {
  Design d;
  d.x.resize(static_cast<Eigen::Index>(ds.n_rows()), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto values = ds.column(ids[k]).dense_values();
    d.x.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    d.columns.push_back(model_column(ds, ids[k]));
  }
  return d;
}

Design build_design(const Dataset& ds, const std::vector<ModelColumn>& columns) {
  Design d;
  const auto n = static_cast<Eigen::Index>(ds.n_rows());
  d.x.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (const Column* c = ds.find(columns[k].name)) {
      const auto values = c->dense_values();
      d.x.col(col) = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
    } else if (columns[k].parents) {
      const Column* a = ds.find(columns[k].parents->first);
      const Column* b = ds.find(columns[k].parents->second);
      if (a == nullptr || b == nullptr) fail("cannot rebuild interaction '" + columns[k].name + "': parent missing");
      const auto va = a->dense_values();
      const auto vb = b->dense_values();
      d.x.col(col) = Eigen::Map<const Eigen::VectorXd>(va.data(), n).cwiseProduct(
          Eigen::Map<const Eigen::VectorXd>(vb.data(), n));
    } else {
      fail("required column '" + columns[k].name + "' is missing");
    }
  }
  d.columns = columns;
  return d;
}

Eigen::VectorXd target_vector(const Dataset& ds) {
  const auto y = ds.binary_target();
  Eigen::VectorXd out(static_cast<Eigen::Index>(y.size()));
  for (std::size_t r = 0; r < y.size(); ++r) out(static_cast<Eigen::Index>(r)) = y[r];
  return out;
}

double log_likelihood(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd eta = (x * beta.tail(x.cols())).array() + beta(0);
  double ll = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) ll += y(r) * eta(r) - softplus(eta(r));
  return ll;
}

Eigen::VectorXd score(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd eta = (x * beta.tail(x.cols())).array() + beta(0);
  Eigen::VectorXd resid = y;
  for (Eigen::Index r = 0; r < eta.size(); ++r) resid(r) -= sigmoid(eta(r));
  Eigen::VectorXd g(x.cols() + 1);
  g(0) = resid.sum();
  g.tail(x.cols()) = x.transpose() * resid;
  return g;
}

LogisticModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<ModelColumn> columns,
                  const FitOptions& options, const Eigen::VectorXd* start) {
  const Eigen::Index n = x.rows();
  const Eigen::Index q = x.cols() + 1;
  if (static_cast<std::size_t>(x.cols()) != columns.size()) fail("design and column names disagree");
  if (y.size() != n) fail("design and target differ in length");
  if (n <= q) fail("need more rows (" + std::to_string(n) + ") than parameters (" + std::to_string(q) + ")");
  if (!x.allFinite()) fail("design contains non-finite values");

  const Eigen::MatrixXd xt = with_intercept(x);
  Eigen::VectorXd sd(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    sd(j) = std::sqrt((x.col(j).array() - mean).square().sum() / static_cast<double>(n));
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
  if (start != nullptr && start->size() == q) {
    beta = *start;
  } else {
    const double mean = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);
    beta(0) = std::log(mean / (1.0 - mean));
  }

  LogisticModel m;
  m.columns = std::move(columns);
  m.n_obs = static_cast<std::size_t>(n);

  auto eval = [&](const Eigen::VectorXd& b, Eigen::VectorXd& mu) {
    const Eigen::VectorXd eta = xt * b;
    mu.resize(n);
    double ll = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      mu(r) = sigmoid(eta(r));
      ll += y(r) * eta(r) - softplus(eta(r));
    }
    return ll;
  };

  Eigen::VectorXd mu;
  double ll = eval(beta, mu);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  auto information = [&] {
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    g = xt.transpose() * (y - mu);
    h.noalias() = xt.transpose() * w.asDiagonal() * xt;
  };

  auto standardized_max = [&](const Eigen::VectorXd& b) {
    return x.cols() ? b.tail(x.cols()).cwiseAbs().cwiseProduct(sd).maxCoeff() : 0.0;
  };

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    information();
    if (g.cwiseAbs().maxCoeff() < options.tol) {
      m.converged = true;
      break;
    }
    if (standardized_max(beta) > options.separation_bound) {
      m.separation = true;
      break;
    }
    ScaledSolver solver(h);
    if (solver.singular) {
      if (iter == 0) {
        fail("singular information matrix; collinear columns: " + join(collinear_parameters(h, m.columns)));
      }
      m.separation = true;
      break;
    }
    const Eigen::VectorXd delta = solver.solve(g);
    // Below this predicted ascent the likelihood comparison is roundoff, so the full step is taken.
    const bool negligible = g.dot(delta) < 1e-13 * (1.0 + std::abs(ll));
    double step = 1.0;
    Eigen::VectorXd candidate;
    Eigen::VectorXd mu_candidate;
    double ll_candidate = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (std::size_t half = 0; half <= options.max_halvings; ++half) {
      candidate = beta + step * delta;
      ll_candidate = eval(candidate, mu_candidate);
      if (ll_candidate >= ll || (negligible && half == 0)) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    ++m.iterations;
    if (!accepted) break;  // no ascent direction left at working precision
    const double change = (candidate - beta).cwiseAbs().maxCoeff();
    beta = std::move(candidate);
    mu = std::move(mu_candidate);
    ll = ll_candidate;
    if (step == 1.0 && change < options.tol) {
      information();
      m.converged = !(standardized_max(beta) > options.separation_bound);
      break;
    }
  }
  information();
  m.log_likelihood = ll;
  m.max_abs_score = g.cwiseAbs().maxCoeff();
  if (!m.converged && m.max_abs_score < 1e-6 && !m.separation) m.converged = true;
  if (m.separation) {
    m.converged = false;
    warn(kModule, "quasi-complete separation detected; coefficients are not reliable");
  } else if (!m.converged) {
    warn(kModule, "IRLS did not converge within " + std::to_string(options.max_iter) + " iterations");
  }

  ScaledSolver final_solver(h);
  Eigen::VectorXd var = Eigen::VectorXd::Constant(q, std::numeric_limits<double>::infinity());
  if (!final_solver.singular) var = final_solver.inverse_diagonal();

  auto coefficient = [&](Eigen::Index k) {
    Coefficient c;
    c.name = parameter_name(m.columns, k);
    c.estimate = beta(k);
    c.std_error = std::sqrt(std::max(var(k), 0.0));
    if (std::isfinite(c.std_error) && c.std_error > 0.0) {
      c.wald_chi_square = beta(k) * beta(k) / var(k);
      c.p_value = chi_square_upper_tail(c.wald_chi_square, 1.0);
    }
    return c;
  };
  m.intercept = coefficient(0);
  for (Eigen::Index k = 1; k < q; ++k) m.coefficients.push_back(coefficient(k));
  return m;
}

LogisticModel fit(const Dataset& ds, std::span<const ColumnId> columns, const FitOptions& options) {
  Design d = build_design(ds, columns);
  return fit(d.x, target_vector(ds), std::move(d.columns), options);
}

Eigen::VectorXd predict_proba(const LogisticModel& model, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.cols()) != model.coefficients.size()) fail("design width does not match the model");
  const Eigen::VectorXd b = model.beta();
  Eigen::VectorXd eta = (x * b.tail(x.cols())).array() + b(0);
  for (Eigen::Index r = 0; r < eta.size(); ++r) eta(r) = clamp_probability(sigmoid(eta(r)));
  return eta;
}

std::vector<double> predict_proba(const LogisticModel& model, const Dataset& rows) {
  const Design d = build_design(rows, model.columns);
  const Eigen::VectorXd p = predict_proba(model, d.x);
  return std::vector<double>(p.data(), p.data() + p.size());
}

// ------------------------------------------------------------ stepwise

namespace {

constexpr Eigen::Index kScoreBlock = 64;

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < count; k = next++) fn(k);
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
}

class StepwiseSearch {
 public:
  StepwiseSearch(const Dataset& ds, std::span<const ColumnId> candidates, const StepwiseOptions& options)
      : options_(options), y_(target_vector(ds)) {
    ids_.assign(candidates.begin(), candidates.end());
    std::sort(ids_.begin(), ids_.end(), [](ColumnId a, ColumnId b) { return to_index(a) < to_index(b); });
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    Design d = build_design(ds, ids_);
    pool_ = std::move(d.x);
    columns_ = std::move(d.columns);
    eligible_.assign(ids_.size(), true);
    in_model_.assign(ids_.size(), false);
  }

  StepwiseResult run() {
    StepwiseResult out;
    out.trace.candidate_pool = ids_.size();
    model_ = refit(nullptr);
    std::set<std::vector<std::size_t>> visited{included()};

    for (std::size_t step = 1; options_.max_steps == 0 || step <= options_.max_steps; ++step) {
      bool acted = false;
      std::optional<std::size_t> entered;

      while (true) {
        const auto best = best_entry();
        if (!best || best->second >= options_.sle) break;
        const auto previous = model_;
        in_model_[best->first] = true;
        try {
          model_ = refit(&previous);
        } catch (const Error&) {
          in_model_[best->first] = false;
          eligible_[best->first] = false;
          model_ = previous;
          continue;
        }
        out.trace.steps.push_back({step, StepAction::kEnter, columns_[best->first].name, best->second});
        entered = best->first;
        acted = true;
        break;
      }

      while (true) {
        const auto inc = included();
        std::optional<std::size_t> worst;
        double worst_p = -1.0;
        for (std::size_t pos = 0; pos < inc.size(); ++pos) {
          if (entered && inc[pos] == *entered) continue;
          const double p = model_.coefficients[pos].p_value;
          if (p > worst_p) {
            worst_p = p;
            worst = inc[pos];
          }
        }
        if (!worst || !(worst_p > options_.sls)) break;
        const auto previous = model_;
        in_model_[*worst] = false;
        model_ = refit(&previous);
        out.trace.steps.push_back({step, StepAction::kRemove, columns_[*worst].name, worst_p});
        acted = true;
      }

      if (!acted) break;
      if (!visited.insert(included()).second) {
        out.trace.cycle_detected = true;
        break;
      }
    }

    out.model = model_;
    for (const auto k : included()) out.selected.push_back(ids_[k]);
    return out;
  }

 private:
  std::vector<std::size_t> included() const {
    std::vector<std::size_t> inc;
    for (std::size_t k = 0; k < ids_.size(); ++k) {
      if (in_model_[k]) inc.push_back(k);
    }
    return inc;
  }

  Eigen::MatrixXd included_design(const std::vector<std::size_t>& inc) const {
    Eigen::MatrixXd x(pool_.rows(), static_cast<Eigen::Index>(inc.size()));
    for (std::size_t k = 0; k < inc.size(); ++k) x.col(static_cast<Eigen::Index>(k)) = pool_.col(static_cast<Eigen::Index>(inc[k]));
    return x;
  }

  // Warm start: coefficients of columns kept from `previous`, zero for new ones.
  LogisticModel refit(const LogisticModel* previous) const {
    const auto inc = included();
    std::vector<ModelColumn> cols;
    for (const auto k : inc) cols.push_back(columns_[k]);
    const Eigen::MatrixXd x = included_design(inc);
    if (previous == nullptr) return fit(x, y_, std::move(cols), options_.fit);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inc.size() + 1));
    start(0) = previous->intercept.estimate;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (std::size_t b = 0; b < previous->columns.size(); ++b) {
        if (previous->columns[b].name == cols[a].name) start(static_cast<Eigen::Index>(a + 1)) = previous->coefficients[b].estimate;
      }
    }
    return fit(x, y_, std::move(cols), options_.fit, &start);
  }

  // (candidate, p) with the smallest entry p; ties to the lower ColumnId.
  std::optional<std::pair<std::size_t, double>> best_entry() {
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < ids_.size(); ++k) {
      if (!in_model_[k] && eligible_[k]) open.push_back(k);
    }
    if (open.empty()) return std::nullopt;
    const std::vector<double> p =
        options_.entry_test == EntryTest::kScore ? score_p_values(open) : wald_p_values(open);
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t a = 0; a < open.size(); ++a) {
      if (!best || p[a] < best->second) best = std::make_pair(open[a], p[a]);
    }
    return best;
  }

  std::vector<double> score_p_values(const std::vector<std::size_t>& open) const {
    const auto inc = included();
    const Eigen::MatrixXd xt = with_intercept(included_design(inc));
    const Eigen::VectorXd mu = predict_proba(model_, xt.rightCols(xt.cols() - 1));
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    const Eigen::VectorXd resid = y_ - mu;
    const Eigen::MatrixXd h = xt.transpose() * w.asDiagonal() * xt;
    const Eigen::LLT<Eigen::MatrixXd> llt(h);

    std::vector<double> p(open.size(), 1.0);
    const auto n_open = static_cast<Eigen::Index>(open.size());
    const auto blocks = static_cast<std::size_t>((n_open + kScoreBlock - 1) / kScoreBlock);
    parallel_for(blocks, options_.workers, [&](std::size_t blk) {
      const Eigen::Index first = static_cast<Eigen::Index>(blk) * kScoreBlock;
      const Eigen::Index width = std::min(kScoreBlock, n_open - first);
      Eigen::MatrixXd c(pool_.rows(), kScoreBlock);
      c.setZero();
      for (Eigen::Index a = 0; a < width; ++a) c.col(a) = pool_.col(static_cast<Eigen::Index>(open[static_cast<std::size_t>(first + a)]));
      const Eigen::MatrixXd wc = w.asDiagonal() * c;
      const Eigen::VectorXd u = c.transpose() * resid;
      const Eigen::MatrixXd v = xt.transpose() * wc;
      const Eigen::MatrixXd qm = llt.matrixL().solve(v);
      for (Eigen::Index a = 0; a < width; ++a) {
        const double total = c.col(a).dot(wc.col(a));
        const double var = total - qm.col(a).squaredNorm();
        if (!(total > 0.0) || !(var > 1e-10 * total)) continue;  // collinear with the model
        p[static_cast<std::size_t>(first + a)] = chi_square_upper_tail(u(a) * u(a) / var, 1.0);
      }
    });
    return p;
  }

  std::vector<double> wald_p_values(const std::vector<std::size_t>& open) const {
    const auto inc = included();
    const Eigen::MatrixXd base = included_design(inc);
    std::vector<double> p(open.size(), 1.0);
    parallel_for(open.size(), options_.workers, [&](std::size_t a) {
      Eigen::MatrixXd x(base.rows(), base.cols() + 1);
      x.leftCols(base.cols()) = base;
      x.col(base.cols()) = pool_.col(static_cast<Eigen::Index>(open[a]));
      std::vector<ModelColumn> cols;
      for (const auto k : inc) cols.push_back(columns_[k]);
      cols.push_back(columns_[open[a]]);
      Eigen::VectorXd start = Eigen::VectorXd::Zero(x.cols() + 1);
      start.head(model_.coefficients.size() + 1) = model_.beta();
      try {
        const auto m = fit(x, y_, std::move(cols), options_.fit, &start);
        p[a] = m.coefficients.back().p_value;
      } catch (const Error&) {
        p[a] = 1.0;
      }
    });
    return p;
  }

  StepwiseOptions options_;
  Eigen::VectorXd y_;
  std::vector<ColumnId> ids_;
  Eigen::MatrixXd pool_;
  std::vector<ModelColumn> columns_;
  std::vector<bool> eligible_;
  std::vector<bool> in_model_;
  LogisticModel model_;
};

}  // namespace

StepwiseResult stepwise(const Dataset& ds, std::span<const ColumnId> candidates, const StepwiseOptions& options) {
  if (candidates.empty()) fail("stepwise selection needs at least one candidate");
  if (!(options.sle > 0.0 && options.sle < 1.0) || !(options.sls > 0.0 && options.sls < 1.0)) {
    fail("entry and stay levels must lie in (0, 1)");
  }
  return StepwiseSearch(ds, candidates, options).run();
}

// ----------------------------------------------------------------- VIF

bool VifReport::any_flagged() const {
  return std::any_of(entries.begin(), entries.end(), [](const VifEntry& e) { return e.flagged; });
}

VifReport vif(const Eigen::MatrixXd& x, const std::vector<std::string>& names, double threshold) {
  if (x.cols() < 2) fail("VIF needs at least 2 columns");
  VifReport report;
  report.threshold = threshold;
  const Eigen::Index n = x.rows();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    VifEntry e;
    e.name = names[static_cast<std::size_t>(j)];
    Eigen::MatrixXd others(n, x.cols());
    others.col(0).setOnes();
    for (Eigen::Index k = 0, c = 1; k < x.cols(); ++k) {
      if (k != j) others.col(c++) = x.col(k);
    }
    const Eigen::VectorXd target = x.col(j);
    const double mean = target.mean();
    const double tss = (target.array() - mean).square().sum();
    if (!(tss > 0.0)) {
      e.infinite = true;
    } else {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
      const Eigen::VectorXd coef = qr.solve(target);
      const double rss = (target - others * coef).squaredNorm();
      const double unexplained = std::clamp(rss / tss, 0.0, 1.0);
      e.r2 = 1.0 - unexplained;
      if (unexplained < 1e-12) {
        e.infinite = true;
      } else {
        e.vif = 1.0 / unexplained;
      }
    }
    if (e.infinite) {
      e.r2 = 1.0;
      e.vif = std::numeric_limits<double>::infinity();
    }
    e.flagged = e.infinite || e.vif >= threshold;
    report.entries.push_back(std::move(e));
  }
  return report;
}

VifReport vif(const Dataset& ds, std::span<const ColumnId> columns, double threshold) {
  const Design d = build_design(ds, columns);
  std::vector<std::string> names;
  for (const auto& c : d.columns) names.push_back(c.name);
  return vif(d.x, names, threshold);
}

// ----------------------------------------------------------- reduction

LogisticModel reduce_to_k(const Dataset& ds, const LogisticModel& model, std::size_t k, const FitOptions& options) {
  if (k > model.size()) {
    fail("cannot reduce a " + std::to_string(model.size()) + "-column model to " + std::to_string(k));
  }
  LogisticModel current = model;
  const Eigen::VectorXd y = target_vector(ds);
  while (current.size() > k) {
    std::size_t weakest = 0;
    for (std::size_t a = 1; a < current.size(); ++a) {
      if (current.coefficients[a].wald_chi_square < current.coefficients[weakest].wald_chi_square) weakest = a;
    }
    std::vector<ModelColumn> cols = current.columns;
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(weakest));
    Design d = build_design(ds, cols);
    current = fit(d.x, y, std::move(d.columns), options);
  }
  return current;
}

LogisticModel vif_screen(const Dataset& ds, const LogisticModel& model, double threshold, const FitOptions& options) {
  LogisticModel current = model;
  const Eigen::VectorXd y = target_vector(ds);
  while (current.size() >= 2) {
    const Design d = build_design(ds, current.columns);
    std::vector<std::string> names;
    for (const auto& c : d.columns) names.push_back(c.name);
    const VifReport report = vif(d.x, names, threshold);
    std::optional<std::size_t> worst;
    for (std::size_t a = 0; a < report.entries.size(); ++a) {
      if (!report.entries[a].flagged) continue;
      if (!worst || report.entries[a].vif > report.entries[*worst].vif) worst = a;
    }
    if (!worst) break;
    warn(kModule, "dropping '" + names[*worst] + "' (VIF " + format_double(report.entries[*worst].vif) + ")");
    std::vector<ModelColumn> cols = current.columns;
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(*worst));
    Design reduced = build_design(ds, cols);
    current = fit(reduced.x, y, std::move(reduced.columns), options);
  }
  return current;
}

}  // namespace chaidlogit
