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

#ifndef CHAIDLOGIT_LOGIT_HPP_
#define CHAIDLOGIT_LOGIT_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaidlogit/data_model.hpp"

namespace chaidlogit {

struct FitOptions {
  double tol = 1e-8;            // on max |score| or max |parameter change|
  std::size_t max_iter = 100;
  std::size_t max_halvings = 10;
  // A standardized coefficient |beta_j| * sd(x_j) beyond this bound while the
  // score is still non-zero is treated as separation.
  double separation_bound = 50.0;
};

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double wald_chi_square = 0.0;
  double p_value = 1.0;
};

// A model input. Interaction columns remember their parents so the product
// can be rebuilt on data that only carries the base predictors.
struct ModelColumn {
  std::string name;
  std::optional<std::pair<std::string, std::string>> parents;

  friend bool operator==(const ModelColumn&, const ModelColumn&) = default;
};

struct LogisticModel {
  Coefficient intercept;
  std::vector<Coefficient> coefficients;  // parallel to `columns`
  std::vector<ModelColumn> columns;
  double log_likelihood = 0.0;
  std::size_t n_obs = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool separation = false;
  double max_abs_score = 0.0;

  std::size_t size() const { return columns.size(); }
  // Intercept first.
  Eigen::VectorXd beta() const;
};

// Dense design matrix (no intercept column) over dataset columns.
struct Design {
  Eigen::MatrixXd x;
  std::vector<ModelColumn> columns;
};

ModelColumn model_column(const Dataset& ds, ColumnId id);
Design build_design(const Dataset& ds, std::span<const ColumnId> ids);
// Looks columns up by name and rebuilds missing interaction columns from their parents.
Design build_design(const Dataset& ds, const std::vector<ModelColumn>& columns);
Eigen::VectorXd target_vector(const Dataset& ds);

// Log-likelihood and its gradient for beta = (intercept, slopes) on design x.
double log_likelihood(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
Eigen::VectorXd score(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Newton / IRLS with step halving. Throws on a singular information matrix,
// naming the collinear columns; separation returns a flagged, unconverged model.
LogisticModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<ModelColumn> columns,
                  const FitOptions& options = {}, const Eigen::VectorXd* start = nullptr);
LogisticModel fit(const Dataset& ds, std::span<const ColumnId> columns, const FitOptions& options = {});

Eigen::VectorXd predict_proba(const LogisticModel& model, const Eigen::MatrixXd& x);
std::vector<double> predict_proba(const LogisticModel& model, const Dataset& rows);

enum class EntryTest {
  kScore,  // Rao score test against the current fit
  kWald,   // refit with the candidate added, Wald test of its coefficient
};

struct StepwiseOptions {
  double sle = 0.15;
  double sls = 0.15;
  EntryTest entry_test = EntryTest::kScore;
  std::size_t max_steps = 0;  // 0 = unlimited
  std::size_t workers = 1;
  FitOptions fit;
};

enum class StepAction { kEnter, kRemove };

struct SelectionStep {
  std::size_t step = 0;
  StepAction action = StepAction::kEnter;
  std::string column;
  double p_value = 0.0;
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::size_t candidate_pool = 0;
  bool cycle_detected = false;
};

struct StepwiseResult {
  SelectionTrace trace;
  LogisticModel model;
  std::vector<ColumnId> selected;  // ascending ColumnId, matches model.columns
};

StepwiseResult stepwise(const Dataset& ds, std::span<const ColumnId> candidates, const StepwiseOptions& options = {});

struct VifEntry {
  std::string name;
  double r2 = 0.0;
  double vif = 1.0;
  bool infinite = false;
  bool flagged = false;
};

struct VifReport {
  std::vector<VifEntry> entries;
  double threshold = 10.0;

  bool any_flagged() const;
};

// VIF = 1 / (1 - R^2) from an intercept least-squares fit of each column on the others.
VifReport vif(const Dataset& ds, std::span<const ColumnId> columns, double threshold = 10.0);
VifReport vif(const Eigen::MatrixXd& x, const std::vector<std::string>& names, double threshold = 10.0);

// Drops the smallest-Wald column and refits until `k` columns remain.
LogisticModel reduce_to_k(const Dataset& ds, const LogisticModel& model, std::size_t k,
                          const FitOptions& options = {});

// Drops the highest-VIF column and refits until no VIF reaches the threshold.
LogisticModel vif_screen(const Dataset& ds, const LogisticModel& model, double threshold,
                         const FitOptions& options = {});

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_LOGIT_HPP_
