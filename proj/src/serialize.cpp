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

#include "chaidlogit/serialize.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string_view>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "serialize";

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j, double if_null) { return j.is_null() ? if_null : j.get<double>(); }

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view context) {
  if (!j.is_object()) throw Error(std::string(kModule), std::string(context) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) throw Error(std::string(kModule), "unknown key '" + key + "' in " + std::string(context));
  }
}

json to_id(ColumnId id) { return to_index(id); }
ColumnId id_from(const json& j) { return column_id(j.get<std::uint32_t>()); }

void to_json_coefficient(json& j, const Coefficient& c) {
  j = json{{"name", c.name},
           {"estimate", number(c.estimate)},
           {"std_error", number(c.std_error)},
           {"wald_chi_square", number(c.wald_chi_square)},
           {"p_value", number(c.p_value)}};
}

Coefficient coefficient_from(const json& j) {
  Coefficient c;
  c.name = j.at("name").get<std::string>();
  c.estimate = number_from(j.at("estimate"), std::numeric_limits<double>::quiet_NaN());
  c.std_error = number_from(j.at("std_error"), std::numeric_limits<double>::infinity());
  c.wald_chi_square = number_from(j.at("wald_chi_square"), 0.0);
  c.p_value = number_from(j.at("p_value"), 1.0);
  return c;
}

}  // namespace

void to_json(json& j, const ChaidConfig& cfg) {
  j = json{{"alpha", cfg.alpha},         {"min_split", cfg.min_split}, {"min_leaf", cfg.min_leaf},
           {"max_branches", cfg.max_branches}, {"max_depth", cfg.max_depth}, {"n_bins", cfg.n_bins}};
}

void from_json(const json& j, ChaidConfig& cfg) {
  check_keys(j, {"alpha", "min_split", "min_leaf", "max_branches", "max_depth", "n_bins"}, "chaid config");
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.min_split = j.value("min_split", cfg.min_split);
  cfg.min_leaf = j.value("min_leaf", cfg.min_leaf);
  cfg.max_branches = j.value("max_branches", cfg.max_branches);
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.n_bins = j.value("n_bins", cfg.n_bins);
  cfg.validate();
}

void to_json(json& j, const MedianMap& m) {
  j = json::array();
  for (const auto& e : m.entries) j.push_back({{"id", to_id(e.id)}, {"name", e.name}, {"median", e.median}});
}

void from_json(const json& j, MedianMap& m) {
  m.entries.clear();
  for (const auto& e : j) m.entries.push_back({id_from(e.at("id")), e.at("name").get<std::string>(), e.at("median").get<double>()});
}

void to_json(json& j, const ClusterAssignment& ca) {
  json clusters = json::array();
  for (const auto& c : ca.clusters) {
    json members = json::array();
    for (const auto& m : c.members) {
      members.push_back({{"id", to_id(m.id)},
                         {"name", m.name},
                         {"r2_own", m.r2_own},
                         {"r2_next", m.r2_next},
                         {"ratio", number(m.ratio)}});
    }
    clusters.push_back({{"members", std::move(members)},
                        {"representative", to_id(c.representative)},
                        {"first_eigenvalue", c.first_eigenvalue},
                        {"second_eigenvalue", c.second_eigenvalue}});
  }
  json excluded = json::array();
  for (const auto& e : ca.excluded) excluded.push_back({{"id", to_id(e.id)}, {"name", e.name}});
  j = json{{"max_second_eigenvalue", ca.max_second_eigenvalue},
           {"variance_explained", ca.variance_explained},
           {"clusters", std::move(clusters)},
           {"excluded", std::move(excluded)}};
}

void from_json(const json& j, ClusterAssignment& ca) {
  ca = ClusterAssignment{};
  ca.max_second_eigenvalue = j.at("max_second_eigenvalue").get<double>();
  ca.variance_explained = j.at("variance_explained").get<double>();
  for (const auto& c : j.at("clusters")) {
    VariableCluster vc;
    vc.representative = id_from(c.at("representative"));
    vc.first_eigenvalue = c.at("first_eigenvalue").get<double>();
    vc.second_eigenvalue = c.at("second_eigenvalue").get<double>();
    for (const auto& m : c.at("members")) {
      ClusterMember cm;
      cm.id = id_from(m.at("id"));
      cm.name = m.at("name").get<std::string>();
      cm.r2_own = m.at("r2_own").get<double>();
      cm.r2_next = m.at("r2_next").get<double>();
      cm.ratio = number_from(m.at("ratio"), std::numeric_limits<double>::infinity());
      vc.members.push_back(std::move(cm));
    }
    ca.clusters.push_back(std::move(vc));
  }
  for (const auto& e : j.at("excluded")) ca.excluded.push_back({id_from(e.at("id")), e.at("name").get<std::string>()});
}

void to_json(json& j, const ChaidTree& tree) {
  json predictors = json::array();
  for (const auto& p : tree.predictors()) {
    predictors.push_back({{"id", to_id(p.id)}, {"name", p.name}, {"cuts", p.cuts}});
  }
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    json node{{"id", n.id},
              {"depth", n.depth},
              {"parent", n.parent ? json(*n.parent) : json(nullptr)},
              {"n", n.counts.total()},
              {"n0", n.counts.n0},
              {"n1", n.counts.n1},
              {"children", n.children}};
    if (n.condition) {
      node["condition"] = {{"predictor", to_id(n.condition->predictor)},
                           {"first_bin", n.condition->first_bin},
                           {"last_bin", n.condition->last_bin},
                           {"lower", number(n.condition->lower)},
                           {"upper", number(n.condition->upper)}};
    }
    if (n.split) {
      json groups = json::array();
      for (const auto& g : n.split->groups) {
        groups.push_back({{"first_bin", g.first_bin}, {"last_bin", g.last_bin}, {"n0", g.counts.n0}, {"n1", g.counts.n1}});
      }
      node["split"] = {{"predictor", to_id(n.split->predictor)},
                       {"predictor_name", n.split->predictor_name},
                       {"categories", n.split->categories},
                       {"statistic", n.split->statistic},
                       {"raw_p", n.split->raw_p},
                       {"adjusted_p", n.split->adjusted_p},
                       {"groups", std::move(groups)}};
    }
    nodes.push_back(std::move(node));
  }
  j = json{{"config", tree.config()}, {"predictors", std::move(predictors)}, {"nodes", std::move(nodes)}};
}

void to_json(json& j, const InteractionTerm& t) {
  j = json{{"i", to_id(t.i)},
           {"j", to_id(t.j)},
           {"name_i", t.name_i},
           {"name_j", t.name_j},
           {"name", t.name()},
           {"tree_depth_reached", t.tree_depth_reached},
           {"used_both", t.used_both},
           {"root_adjusted_p", t.root_adjusted_p}};
}

void from_json(const json& j, InteractionTerm& t) {
  t.i = id_from(j.at("i"));
  t.j = id_from(j.at("j"));
  t.name_i = j.at("name_i").get<std::string>();
  t.name_j = j.at("name_j").get<std::string>();
  t.tree_depth_reached = j.at("tree_depth_reached").get<std::size_t>();
  t.used_both = j.at("used_both").get<bool>();
  t.root_adjusted_p = j.at("root_adjusted_p").get<double>();
  t.derived.reset();
}

json scan_to_json(const ScanResult& scan) {
  json outcomes = json::array();
  for (const auto& o : scan.report.outcomes) {
    outcomes.push_back({{"i", to_id(o.i)}, {"j", to_id(o.j)}, {"detected", o.detected}, {"root_adjusted_p", o.root_adjusted_p}});
  }
  return json{{"pairs_total", scan.report.pairs_total},
              {"pairs_detected", scan.report.pairs_detected},
              {"terms", scan.terms},
              {"outcomes", std::move(outcomes)}};
}

ScanResult scan_from_json(const json& j) {
  ScanResult s;
  s.report.pairs_total = j.at("pairs_total").get<std::size_t>();
  s.report.pairs_detected = j.at("pairs_detected").get<std::size_t>();
  s.terms = j.at("terms").get<std::vector<InteractionTerm>>();
  for (const auto& o : j.at("outcomes")) {
    s.report.outcomes.push_back(
        {id_from(o.at("i")), id_from(o.at("j")), o.at("detected").get<bool>(), o.at("root_adjusted_p").get<double>()});
  }
  return s;
}

void to_json(json& j, const LogisticModel& m) {
  json coefficients = json::array();
  for (std::size_t k = 0; k < m.coefficients.size(); ++k) {
    json c;
    to_json_coefficient(c, m.coefficients[k]);
    if (m.columns[k].parents) c["parents"] = {m.columns[k].parents->first, m.columns[k].parents->second};
    coefficients.push_back(std::move(c));
  }
  json intercept;
  to_json_coefficient(intercept, m.intercept);
  j = json{{"intercept", std::move(intercept)},
           {"coefficients", std::move(coefficients)},
           {"log_likelihood", number(m.log_likelihood)},
           {"n_obs", m.n_obs},
           {"iterations", m.iterations},
           {"converged", m.converged},
           {"separation", m.separation},
           {"max_abs_score", number(m.max_abs_score)}};
}

void from_json(const json& j, LogisticModel& m) {
  m = LogisticModel{};
  m.intercept = coefficient_from(j.at("intercept"));
  for (const auto& c : j.at("coefficients")) {
    m.coefficients.push_back(coefficient_from(c));
    ModelColumn col{m.coefficients.back().name, std::nullopt};
    if (c.contains("parents")) {
      col.parents = std::make_pair(c.at("parents").at(0).get<std::string>(), c.at("parents").at(1).get<std::string>());
    }
    m.columns.push_back(std::move(col));
  }
  m.log_likelihood = number_from(j.at("log_likelihood"), -std::numeric_limits<double>::infinity());
  m.n_obs = j.at("n_obs").get<std::size_t>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.converged = j.at("converged").get<bool>();
  m.separation = j.at("separation").get<bool>();
  m.max_abs_score = number_from(j.at("max_abs_score"), 0.0);
}

void to_json(json& j, const SelectionTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"step", s.step},
                     {"action", s.action == StepAction::kEnter ? "enter" : "remove"},
                     {"column", s.column},
                     {"p_value", s.p_value}});
  }
  j = json{{"candidate_pool", t.candidate_pool}, {"cycle_detected", t.cycle_detected}, {"steps", std::move(steps)}};
}

void to_json(json& j, const VifReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name}, {"r2", e.r2}, {"vif", number(e.vif)}, {"infinite", e.infinite}, {"flagged", e.flagged}});
  }
  j = json{{"threshold", r.threshold}, {"entries", std::move(entries)}};
}

void to_json(json& j, const MetricsReport& r) {
  j = json{{"split", r.split},
           {"accuracy", r.accuracy},
           {"auc", r.auc},
           {"ks", r.ks},
           {"confusion", {{"tp", r.confusion.tp}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}}}};
}

void to_json(json& j, const SynthSpec& s) {
  json main = json::array();
  for (const auto& [k, beta] : s.main_effects) main.push_back({{"index", k}, {"beta", beta}});
  json inter = json::array();
  for (const auto& e : s.interactions) inter.push_back({{"i", e.i}, {"j", e.j}, {"gamma", e.gamma}});
  j = json{{"n_rows", s.n_rows},
           {"n_predictors", s.n_predictors},
           {"main_effects", std::move(main)},
           {"interactions", std::move(inter)},
           {"intercept", s.intercept},
           {"block_size", s.block_size},
           {"block_correlation", s.block_correlation},
           {"missing_rate", s.missing_rate},
           {"seed", s.seed},
           {"target_name", s.target_name}};
}

void from_json(const json& j, SynthSpec& s) {
  check_keys(j,
             {"n_rows", "n_predictors", "main_effects", "interactions", "intercept", "block_size",
              "block_correlation", "missing_rate", "seed", "target_name"},
             "synth spec");
  s.n_rows = j.value("n_rows", s.n_rows);
  s.n_predictors = j.value("n_predictors", s.n_predictors);
  if (j.contains("main_effects")) {
    s.main_effects.clear();
    for (const auto& e : j.at("main_effects")) s.main_effects[e.at("index").get<std::size_t>()] = e.at("beta").get<double>();
  }
  if (j.contains("interactions")) {
    s.interactions.clear();
    for (const auto& e : j.at("interactions")) {
      s.interactions.push_back({e.at("i").get<std::size_t>(), e.at("j").get<std::size_t>(), e.at("gamma").get<double>()});
    }
  }
  s.intercept = j.value("intercept", s.intercept);
  s.block_size = j.value("block_size", s.block_size);
  s.block_correlation = j.value("block_correlation", s.block_correlation);
  s.missing_rate = j.value("missing_rate", s.missing_rate);
  s.seed = j.value("seed", s.seed);
  s.target_name = j.value("target_name", s.target_name);
  s.validate();
}

void to_json(json& j, const BenchReport& r) {
  j = json{{"n_rows", r.n_rows},
           {"n_predictors", r.n_predictors},
           {"workers", r.workers},
           {"pairs_total", r.pairs_total},
           {"pairs_detected", r.pairs_detected},
           {"planted_detected", r.planted_detected},
           {"scan_seconds", r.scan_seconds},
           {"hybrid_seconds", r.hybrid_seconds},
           {"oracle_seconds", r.oracle_seconds},
           {"speedup", number(r.speedup)},
           {"time_saved_fraction", number(1.0 - r.hybrid_seconds / r.oracle_seconds)},
           {"hybrid_candidates", r.hybrid_candidates},
           {"oracle_candidates", r.oracle_candidates},
           {"hybrid_model_size", r.hybrid_model_size},
           {"oracle_model_size", r.oracle_model_size},
           {"hybrid_valid", r.hybrid_valid},
           {"oracle_valid", r.oracle_valid}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(std::string(kModule), "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string(kModule), "invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(std::string(kModule), "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace chaidlogit
