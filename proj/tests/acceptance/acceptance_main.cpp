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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <Eigen/Dense>

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chaidlogit/chaid.hpp"
#include "chaidlogit/chi_square.hpp"
#include "chaidlogit/cli.hpp"
#include "chaidlogit/data_model.hpp"
#include "chaidlogit/error.hpp"
#include "chaidlogit/interaction_scan.hpp"
#include "chaidlogit/logit.hpp"
#include "chaidlogit/metrics.hpp"
#include "chaidlogit/pipeline.hpp"
#include "chaidlogit/serialize.hpp"
#include "chaidlogit/synth.hpp"

namespace fs = std::filesystem;
using namespace chaidlogit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Quiet the library's warnings while a criterion runs; separation and
// convergence notices are expected on random data.
struct QuietWarnings {
  WarningSink previous;
  QuietWarnings() : previous(set_warning_sink([](std::string_view, std::string_view) {})) {}
  ~QuietWarnings() { set_warning_sink(std::move(previous)); }
};

// 1. Metrics against brute-force definitions.
Outcome metric_oracles() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_int_distribution<int> coarse(0, 20);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  double worst_auc = 0.0;
  std::size_t ks_mismatch = 0, acc_mismatch = 0, sets = 0;
  while (sets < 1000) {
    const std::size_t n = size(rng);
    const bool tied = sets % 2 == 0;
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = tied ? coarse(rng) / 20.0 : fine(rng);
      y[k] = fine(rng) < 0.3 + 0.4 * s[k];
      pos += y[k];
    }
    if (pos == 0 || pos == n) continue;
    ++sets;
    const std::size_t neg = n - pos;

    double concordant = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!y[a]) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (y[b]) continue;
        concordant += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
      }
    }
    const double mw = concordant / (static_cast<double>(pos) * static_cast<double>(neg));
    worst_auc = std::max(worst_auc, std::abs(roc_auc(s, y) - mw));

    double ks = 0.0;
    for (const double t : s) {
      std::size_t pos_le = 0, neg_le = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (s[k] <= t) (y[k] ? pos_le : neg_le) += 1;
      }
      ks = std::max(ks, std::abs(static_cast<double>(neg_le) / static_cast<double>(neg) -
                                 static_cast<double>(pos_le) / static_cast<double>(pos)));
    }
    if (ks_stat(s, y) != ks) ++ks_mismatch;

    std::size_t tp = 0, tn = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (s[k] > 0.5 && y[k]) ++tp;
      if (s[k] <= 0.5 && !y[k]) ++tn;
    }
    if (accuracy(s, y).accuracy != static_cast<double>(tp + tn) / static_cast<double>(n)) ++acc_mismatch;
  }
  const double secs = seconds_since(start);
  return {worst_auc <= 1e-10 && ks_mismatch == 0 && acc_mismatch == 0 && secs < 10.0,
          fmt("1000 sets; max |auc - mann-whitney| %.3g, ks mismatches %zu, accuracy mismatches %zu, %.2f s",
              worst_auc, ks_mismatch, acc_mismatch, secs)};
}

// 2. Pearson chi-square against a direct implementation.
Outcome chi_square_oracle() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> cols(2, 6);
  std::uniform_int_distribution<std::uint64_t> count(0, 60);
  double worst_stat = 0.0, worst_p = 0.0;
  std::size_t tables = 0;
  while (tables < 1000) {
    std::vector<ClassCounts> t(cols(rng));
    for (auto& c : t) c = {count(rng), count(rng)};
    std::uint64_t r0 = 0, r1 = 0;
    bool empty_col = false;
    for (const auto& c : t) {
      r0 += c.n0;
      r1 += c.n1;
      empty_col = empty_col || c.total() == 0;
    }
    if (empty_col || r0 == 0 || r1 == 0) continue;
    ++tables;
    const double n = static_cast<double>(r0 + r1);
    double stat = 0.0;
    for (const auto& c : t) {
      const double e0 = static_cast<double>(r0) * static_cast<double>(c.total()) / n;
      const double e1 = static_cast<double>(r1) * static_cast<double>(c.total()) / n;
      stat += (c.n0 - e0) * (c.n0 - e0) / e0 + (c.n1 - e1) * (c.n1 - e1) / e1;
    }
    const double df = static_cast<double>(t.size() - 1);
    const double p = boost::math::gamma_q(df / 2.0, stat / 2.0);
    const auto got = chi_square_test(t);
    auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
    worst_stat = std::max(worst_stat, stat < 1e-12 ? std::abs(got.statistic - stat) : rel(got.statistic, stat));
    worst_p = std::max(worst_p, rel(got.p_value, p));
  }
  const ClassCounts worked[] = {{20, 10}, {10, 20}};
  const auto w = chi_square_test(worked);
  const bool worked_ok = std::abs(w.statistic - 20.0 / 3.0) < 1e-12 && w.df == 1 && std::abs(w.p_value - 0.00982) < 1e-4;
  return {worst_stat <= 1e-9 && worst_p <= 1e-9 && worked_ok,
          fmt("1000 tables; max rel error statistic %.3g, p %.3g; worked table statistic %.6f p %.5f", worst_stat,
              worst_p, w.statistic, w.p_value)};
}

// 3. IRLS: intercept-only closed form, vanishing gradient, finite differences.
Outcome irls_correctness() {
  QuietWarnings quiet;
  double worst_intercept = 0.0;
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<Eigen::Index> n_dist(50, 500), p_dist(1, 5);
  std::uniform_real_distribution<double> rate(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = n_dist(rng);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    const auto ones = std::clamp<Eigen::Index>(std::llround(rate(rng) * static_cast<double>(n)), 1, n - 1);
    y.head(ones).setOnes();
    const double mean = static_cast<double>(ones) / static_cast<double>(n);
    const LogisticModel m = fit(Eigen::MatrixXd(n, 0), y, {});
    worst_intercept = std::max(worst_intercept, std::abs(m.intercept.estimate - std::log(mean / (1 - mean))));
  }

  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst_gradient = 0.0, worst_fd = 0.0;
  std::size_t not_converged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = n_dist(rng), p = p_dist(rng);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n), beta(p);
    std::vector<ModelColumn> columns;
    for (Eigen::Index j = 0; j < p; ++j) {
      beta(j) = coef(rng);
      columns.push_back({"c" + std::to_string(j), std::nullopt});
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index j = 0; j < p; ++j) x(r, j) = z(rng);
      y(r) = std::bernoulli_distribution(1 / (1 + std::exp(-(0.3 + x.row(r).dot(beta)))))(rng);
    }
    const LogisticModel m = fit(x, y, columns);
    if (!m.converged) {
      ++not_converged;
      continue;
    }
    worst_gradient = std::max(worst_gradient, score(m.beta(), x, y).cwiseAbs().maxCoeff());

    Eigen::VectorXd b = m.beta();
    for (Eigen::Index k = 0; k < b.size(); ++k) b(k) += 0.3 * z(rng);
    const Eigen::VectorXd g = score(b, x, y);
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      const double h = 1e-5;
      Eigen::VectorXd up = b, down = b;
      up(k) += h;
      down(k) -= h;
      const double fd = (log_likelihood(up, x, y) - log_likelihood(down, x, y)) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
    }
  }
  return {worst_intercept <= 1e-8 && worst_gradient < 1e-6 && worst_fd <= 1e-4 && not_converged == 0,
          fmt("max |intercept - logit(mean)| %.3g; 100 problems, max |gradient| %.3g, max rel fd error %.3g, "
              "non-converged %zu",
              worst_intercept, worst_gradient, worst_fd, not_converged)};
}

// 4. CHAID trees on random configs and data.
Outcome chaid_invariants() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  std::size_t violations = 0, splits = 0;
  double worst_identity = 0.0;
  std::string first_violation;
  auto violation = [&](int tree, const std::string& what) {
    if (violations++ == 0) first_violation = fmt("tree %d: %s", tree, what.c_str());
  };
  for (int tree = 0; tree < 200; ++tree) {
    ChaidConfig cfg;
    cfg.alpha = 0.01 + 0.5 * u(rng);
    cfg.min_leaf = std::uniform_int_distribution<std::size_t>(1, 25)(rng);
    cfg.min_split = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
    cfg.max_branches = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    cfg.max_depth = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    cfg.n_bins = std::uniform_int_distribution<std::size_t>(2, 15)(rng);

    const std::size_t n = std::uniform_int_distribution<std::size_t>(40, 1500)(rng);
    const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    std::vector<Column> columns;
    std::vector<std::vector<double>> xs(p, std::vector<double>(n));
    for (std::size_t j = 0; j < p; ++j) {
      const bool discrete = u(rng) < 0.4;
      for (auto& v : xs[j]) v = discrete ? std::floor(4 * u(rng)) : z(rng);
    }
    std::vector<double> y(n);
    const double w0 = 2 * z(rng), w1 = z(rng);
    for (std::size_t r = 0; r < n; ++r) {
      double eta = w0 * xs[0][r];
      if (p > 1) eta += w1 * xs[0][r] * xs[1][r];
      y[r] = u(rng) < 1 / (1 + std::exp(-eta));
    }
    for (std::size_t j = 0; j < p; ++j) {
      columns.push_back(Column::dense(column_id(static_cast<std::uint32_t>(j)), "x" + std::to_string(j), xs[j]));
    }
    columns.push_back(Column::dense(column_id(static_cast<std::uint32_t>(p)), "RESP_FLAG", y));
    const Dataset ds("random", std::move(columns), column_id(static_cast<std::uint32_t>(p)));
    const ChaidTree t = grow_tree(ds, ds.predictor_ids(), cfg);
    const auto labels = ds.binary_target();

    ClassCounts leaf_sum;
    for (const ChaidNode& node : t.nodes()) {
      ClassCounts counted;
      for (const auto r : node.rows) (labels[r] ? counted.n1 : counted.n0) += 1;
      if (!(counted == node.counts)) violation(tree, "node counts disagree with its rows");
      if (node.depth > cfg.max_depth) violation(tree, "node deeper than max_depth");
      if (node.is_leaf()) {
        leaf_sum += node.counts;
        if (node.split) violation(tree, "leaf carries a split");
        continue;
      }
      ++splits;
      if (!node.split) violation(tree, "internal node without a split");
      if (node.rows.size() < cfg.min_split) violation(tree, "split below min_split");
      if (node.depth >= cfg.max_depth) violation(tree, "split at max_depth");
      if (node.children.size() < 2 || node.children.size() > cfg.max_branches) violation(tree, "branch count");
      if (node.split && !(node.split->adjusted_p < cfg.alpha)) violation(tree, "adjusted p not below alpha");
      std::vector<std::uint32_t> united;
      for (const auto c : node.children) {
        const ChaidNode& child = t.node(c);
        if (child.rows.size() < cfg.min_leaf) violation(tree, "child below min_leaf");
        if (child.parent != node.id || child.depth != node.depth + 1) violation(tree, "child linkage");
        if (!child.condition || (node.split && child.condition->predictor != node.split->predictor)) {
          violation(tree, "child condition");
        } else {
          const Column& col = ds.column(child.condition->predictor);
          for (const auto r : child.rows) {
            const double v = *col.at(r);
            if (!(v >= child.condition->lower && v < child.condition->upper)) {
              violation(tree, "row outside its branch interval");
              break;
            }
          }
        }
        united.insert(united.end(), child.rows.begin(), child.rows.end());
      }
      std::sort(united.begin(), united.end());
      if (united != node.rows) violation(tree, "children do not partition the parent");
    }
    if (!(leaf_sum == t.root().counts)) violation(tree, "leaf counts do not sum to the root");

    const auto rows = extract_profile(t);
    double weighted = 0.0;
    for (const auto& row : rows) weighted += static_cast<double>(row.n) * row.response_rate;
    const double root_rate = static_cast<double>(t.root().counts.n1) / static_cast<double>(t.root().counts.total());
    worst_identity = std::max(worst_identity, std::abs(weighted / static_cast<double>(t.root().rows.size()) - root_rate));
  }
  return {violations == 0 && worst_identity <= 1e-12 && splits > 0,
          fmt("200 trees, %zu splits checked, %zu violations%s%s; max profile identity error %.3g", splits, violations,
              violations ? "; first: " : "", first_violation.c_str(), worst_identity)};
}

// 5. Planted-interaction recovery over 20 seeds.
Outcome planted_recovery() {
  QuietWarnings quiet;
  const auto start = std::chrono::steady_clock::now();
  std::size_t both_detected = 0, hybrid_wins = 0;
  std::vector<double> improvement;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PipelineConfig cfg;
    cfg.clustering = false;
    cfg.seed = seed;
    cfg.synth.n_rows = 5000;
    cfg.synth.n_predictors = 20;
    cfg.synth.intercept = std::log(4.0);
    cfg.synth.interactions = {{2, 9, 2.0}, {13, 17, 2.0}};
    cfg.synth.seed = seed;
    const Dataset raw = generate(cfg.synth);
    const PipelineResult res = run_pipeline(raw, cfg, 1);
    std::size_t found = 0;
    for (const auto& e : cfg.synth.interactions) {
      const std::string a = "x" + std::to_string(e.i), b = "x" + std::to_string(e.j);
      found += std::any_of(res.scan.terms.begin(), res.scan.terms.end(),
                           [&](const InteractionTerm& t) { return t.name_i == a && t.name_j == b; });
    }
    both_detected += found == cfg.synth.interactions.size();
    const double gain = res.hybrid_valid.auc - res.pure_valid.auc;
    hybrid_wins += gain > 0.0;
    improvement.push_back(gain);
  }
  std::sort(improvement.begin(), improvement.end());
  const double median = (improvement[9] + improvement[10]) / 2.0;
  const double secs = seconds_since(start);
  return {both_detected >= 19 && hybrid_wins >= 16 && median >= 0.02 && secs < 300.0,
          fmt("both pairs detected in %zu/20, hybrid auc higher in %zu/20, median auc gain %.4f, %.1f s",
              both_detected, hybrid_wins, median, secs)};
}

// 6. Hybrid scan plus stepwise against the complete stepwise oracle.
Outcome efficiency() {
  QuietWarnings quiet;
  const auto start = std::chrono::steady_clock::now();
  SynthSpec spec;
  spec.n_rows = 5000;
  spec.n_predictors = 50;
  spec.intercept = std::log(4.0);
  spec.interactions = {{4, 17, 2.0}, {23, 41, 2.0}};
  spec.seed = 1;
  BenchConfig cfg;
  cfg.workers = 1;
  const BenchReport r = run_benchmark(spec, cfg);
  const double secs = seconds_since(start);
  const bool planted = std::all_of(r.planted_detected.begin(), r.planted_detected.end(), [](bool b) { return b; });
  return {r.speedup >= 2.0 && secs < 900.0,
          fmt("hybrid %.1f s, oracle %.1f s, speedup %.2fx, planted pairs detected: %s, %.1f s total", r.hybrid_seconds,
              r.oracle_seconds, r.speedup, planted ? "all" : "not all", secs)};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "chaidlogit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every artifact except the timing record, keyed by file name.
std::vector<std::pair<std::string, std::string>> artifacts(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != "run_meta.json") files.emplace_back(name, slurp(e.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

// 7. Byte-identical artifacts across repeated runs and worker counts.
Outcome determinism() {
  QuietWarnings quiet;
  const fs::path root = fs::temp_directory_path() / "chaidlogit_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  SynthSpec spec;
  spec.n_rows = 4000;
  spec.n_predictors = 16;
  spec.intercept = std::log(4.0);
  spec.interactions = {{1, 6, 2.0}, {9, 12, 2.0}};
  spec.main_effects = {{0, 0.4}};
  spec.block_size = 4;
  spec.block_correlation = 0.5;
  spec.missing_rate = 0.02;
  spec.seed = 11;
  write_json_file(root / "config.json", json{{"input", (root / "synthetic.csv").string()}, {"synth", spec}});
  const std::string config = (root / "config.json").string();

  std::vector<int> status;
  status.push_back(cli({"synth", "--config", config, "--out", root.string()}));
  const std::vector<std::pair<std::string, std::string>> runs{{"a", "1"}, {"b", "1"}, {"c", "8"}};
  for (const auto& [name, workers] : runs) {
    status.push_back(cli({"run", "--config", config, "--seed", "7", "--workers", workers, "--out", (root / name).string()}));
  }
  const bool ok_status = std::all_of(status.begin(), status.end(), [](int s) { return s == 0; });
  const auto a = artifacts(root / "a");
  const auto b = artifacts(root / "b");
  const auto c = artifacts(root / "c");
  std::size_t profiles = 0;
  for (const auto& f : a) profiles += f.first.rfind("profile_", 0) == 0;
  fs::remove_all(root);
  return {ok_status && !a.empty() && a == b && a == c,
          fmt("%zu artifacts (%zu profiles); repeat run %s, workers 1 vs 8 %s", a.size(), profiles,
              a == b ? "identical" : "differs", a == c ? "identical" : "differs")};
}

// 8. Pair count and the complete-stepwise guard.
Outcome combinatorics() {
  const std::size_t pairs = enumerate_pairs(180).size();
  SynthSpec spec;
  spec.n_rows = 12498;
  spec.n_predictors = 180;
  spec.seed = 3;
  const Dataset ds = generate(spec);
  std::string message;
  bool refused = false;
  try {
    complete_stepwise_oracle(ds, ds.predictor_ids());
  } catch (const Error& e) {
    refused = true;
    message = e.what();
  }
  const bool cites = message.find("16290") != std::string::npos && message.find("12498") != std::string::npos;
  return {pairs == 16110 && refused && cites,
          fmt("enumerate_pairs(180) = %zu; oracle at p = 180, n = 12498: %s", pairs,
              refused ? message.c_str() : "not refused")};
}

// 9. VIF on a constructed collinearity and on orthogonal designs.
Outcome vif_screening() {
  std::mt19937_64 rng(1009);
  std::normal_distribution<double> z;
  const Eigen::Index n = 1000;
  Eigen::MatrixXd x(n, 3);
  for (Eigen::Index r = 0; r < n; ++r) {
    x(r, 0) = z(rng);
    x(r, 1) = z(rng);
    x(r, 2) = x(r, 0) + x(r, 1) + 0.1 * z(rng);
  }
  const VifReport collinear = vif(x, {"x1", "x2", "x3"}, 10.0);
  const bool x3_flagged = collinear.entries.size() == 3 && collinear.entries[2].flagged;

  // Columns of a Sylvester-Hadamard matrix without the constant column are
  // centred and mutually orthogonal.
  double worst = 0.0;
  for (const int order : {8, 16, 64}) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
    while (h.rows() < order) {
      Eigen::MatrixXd next(2 * h.rows(), 2 * h.cols());
      next << h, h, h, -h;
      h = next;
    }
    const Eigen::Index cols = std::min<Eigen::Index>(order - 1, 7);
    Eigen::MatrixXd design = h.middleCols(1, cols);
    for (Eigen::Index j = 0; j < cols; ++j) design.col(j) *= static_cast<double>(j + 1);
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < cols; ++j) names.push_back("h" + std::to_string(j));
    for (const auto& e : vif(design, names, 10.0).entries) worst = std::max(worst, std::abs(e.vif - 1.0));
  }
  return {x3_flagged && worst <= 1e-8,
          fmt("x3 = x1 + x2 + e: vif %.1f %s at 10; orthogonal designs max |vif - 1| %.3g",
              collinear.entries.size() == 3 ? collinear.entries[2].vif : 0.0, x3_flagged ? "flagged" : "not flagged",
              worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric oracles", metric_oracles},
      {"chi-square correctness", chi_square_oracle},
      {"IRLS correctness", irls_correctness},
      {"CHAID structural invariants", chaid_invariants},
      {"planted-interaction recovery", planted_recovery},
      {"efficiency", efficiency},
      {"determinism and parallel invariance", determinism},
      {"combinatorics and guards", combinatorics},
      {"VIF screening", vif_screening},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
