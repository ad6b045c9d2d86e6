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

#include "chaidlogit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "pipeline";

[[noreturn]] void fail(const std::string& message) { throw Error(std::string(kModule), message); }

Dataset restrict_to(const Dataset& ds, const MedianMap& medians) {
  std::vector<ColumnId> keep;
  for (const auto& e : medians.entries) {
    const Column* c = ds.find(e.name);
    if (c == nullptr) fail("column '" + e.name + "' from the median map is absent from the input");
    keep.push_back(c->id());
  }
  std::sort(keep.begin(), keep.end());
  return ds.restrict_columns(keep);
}

std::vector<ColumnId> ids_of(const Dataset& ds, const std::vector<ModelColumn>& columns) {
  std::vector<ColumnId> ids;
  for (const auto& c : columns) ids.push_back(ds.column_named(c.name).id());
  return ids;
}

VifReport model_vif(const Dataset& ds, const LogisticModel& model, double threshold) {
  if (model.size() < 2) {
    VifReport report;
    report.threshold = threshold;
    for (const auto& c : model.columns) report.entries.push_back({c.name, 0.0, 1.0, false, false});
    return report;
  }
  return vif(ds, ids_of(ds, model.columns), threshold);
}

FittedModel fit_one(const Dataset& train, const std::vector<ColumnId>& candidates, const PipelineConfig& cfg,
                    std::size_t workers) {
  const StepwiseOptions options = cfg.stepwise_options(workers);
  FittedModel out;
  for (const ColumnId id : candidates) out.candidates.push_back(train.column(id).name());
  out.selection = stepwise(train, candidates, options);
  out.model = vif_screen(train, out.selection.model, cfg.vif_threshold, options.fit);
  out.vif = model_vif(train, out.model, cfg.vif_threshold);
  return out;
}

LogisticModel cut_to(const Dataset& train, const LogisticModel& model, std::size_t k, const FitOptions& fit) {
  if (k >= model.size()) return model;
  return reduce_to_k(train, model, k, fit);
}

std::string file_safe(std::string_view name) {
  std::string out;
  for (const char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (target.empty()) fail("target column name is empty");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail("train_fraction must lie in (0, 1)");
  if (!(max_missing > 0.0 && max_missing <= 1.0)) fail("max_missing must lie in (0, 1]");
  if (!(max_second_eigenvalue > 0.0)) fail("max_second_eigenvalue must be positive");
  chaid.validate();
  if (!(sle > 0.0 && sle < 1.0)) fail("sle must lie in (0, 1)");
  if (!(sls > 0.0 && sls < 1.0)) fail("sls must lie in (0, 1)");
  if (!(vif_threshold > 1.0)) fail("vif_threshold must exceed 1");
  if (sweep.empty()) fail("sweep list is empty");
  for (const std::size_t k : sweep) {
    if (k == 0) fail("sweep sizes must be positive");
  }
  synth.validate();
}

StepwiseOptions PipelineConfig::stepwise_options(std::size_t workers) const {
  StepwiseOptions o;
  o.sle = sle;
  o.sls = sls;
  o.entry_test = entry_test;
  o.workers = workers;
  return o;
}

void to_json(json& j, const PipelineConfig& cfg) {
  j = json{{"input", cfg.input.string()},
           {"target", cfg.target},
           {"train_fraction", cfg.train_fraction},
           {"seed", cfg.seed},
           {"max_missing", cfg.max_missing},
           {"clustering", cfg.clustering},
           {"max_second_eigenvalue", cfg.max_second_eigenvalue},
           {"chaid", cfg.chaid},
           {"sle", cfg.sle},
           {"sls", cfg.sls},
           {"entry_test", cfg.entry_test == EntryTest::kScore ? "score" : "wald"},
           {"vif_threshold", cfg.vif_threshold},
           {"sweep", cfg.sweep},
           {"out_dir", cfg.out_dir.string()},
           {"synth", cfg.synth}};
}

void from_json(const json& j, PipelineConfig& cfg) {
  if (!j.is_object()) fail("config must be a JSON object");
  static const std::vector<std::string> known{
      "input", "target", "train_fraction", "seed", "max_missing", "clustering", "max_second_eigenvalue", "chaid",
      "sle",   "sls",    "entry_test",     "vif_threshold", "sweep", "out_dir", "synth"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("unknown config key '" + key + "'");
  }
  try {
    if (j.contains("input")) cfg.input = j.at("input").get<std::string>();
    cfg.target = j.value("target", cfg.target);
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_missing = j.value("max_missing", cfg.max_missing);
    cfg.clustering = j.value("clustering", cfg.clustering);
    cfg.max_second_eigenvalue = j.value("max_second_eigenvalue", cfg.max_second_eigenvalue);
    if (j.contains("chaid")) from_json(j.at("chaid"), cfg.chaid);
    cfg.sle = j.value("sle", cfg.sle);
    cfg.sls = j.value("sls", cfg.sls);
    if (j.contains("entry_test")) {
      const std::string t = j.at("entry_test").get<std::string>();
      if (t == "score") {
        cfg.entry_test = EntryTest::kScore;
      } else if (t == "wald") {
        cfg.entry_test = EntryTest::kWald;
      } else {
        fail("entry_test must be \"score\" or \"wald\"");
      }
    }
    cfg.vif_threshold = j.value("vif_threshold", cfg.vif_threshold);
    if (j.contains("sweep")) cfg.sweep = j.at("sweep").get<std::vector<std::size_t>>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("synth")) from_json(j.at("synth"), cfg.synth);
  } catch (const json::exception& e) {
    fail(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail("cannot open config file '" + path.string() + "'");
  return read_json_file(path).get<PipelineConfig>();
}

Prepared prepare(const Dataset& raw, const PipelineConfig& cfg) {
  const Dataset clean = drop_missing_target(raw);
  const SplitResult split = stratified_split(clean, cfg.train_fraction, cfg.seed);
  ImputeResult imputed = filter_and_impute(split.train, cfg.max_missing);
  Prepared p{std::move(imputed.data), apply_imputation(restrict_to(split.valid, imputed.medians), imputed.medians),
             std::move(imputed.medians), std::move(imputed.dropped), cfg.clustering, {}, {}};
  if (cfg.clustering) {
    p.clusters = cluster_variables(p.train, cfg.max_second_eigenvalue);
    p.base = select_representatives(p.clusters);
  } else {
    p.base = p.train.predictor_ids();
    std::sort(p.base.begin(), p.base.end());
  }
  return p;
}

Prepared replay_prepare(const Dataset& raw, const PipelineConfig& cfg, const MedianMap& medians,
                        const std::vector<std::string>& base_names) {
  const Dataset clean = drop_missing_target(raw);
  const SplitResult split = stratified_split(clean, cfg.train_fraction, cfg.seed);
  Prepared p{apply_imputation(restrict_to(split.train, medians), medians),
             apply_imputation(restrict_to(split.valid, medians), medians), medians, {}, cfg.clustering, {}, {}};
  for (const auto& name : base_names) {
    const Column* c = p.train.find(name);
    if (c == nullptr) fail("base predictor '" + name + "' is not among the imputed columns");
    p.base.push_back(c->id());
  }
  std::sort(p.base.begin(), p.base.end());
  return p;
}

FittedModels fit_models(const Prepared& prep, std::vector<InteractionTerm> terms, const PipelineConfig& cfg,
                        std::size_t workers) {
  Dataset train = materialize_terms(prep.train, terms);
  std::vector<ColumnId> hybrid_pool = prep.base;
  for (const auto& t : terms) hybrid_pool.push_back(*t.derived);
  FittedModel hybrid = fit_one(train, hybrid_pool, cfg, workers);
  FittedModel pure = fit_one(prep.train, prep.base, cfg, workers);
  return FittedModels{std::move(hybrid), std::move(pure), std::move(train)};
}

std::vector<ComparisonRow> compare_sweep(const LogisticModel& hybrid, const LogisticModel& pure, const Dataset& train,
                                         const Dataset& valid, const PipelineConfig& cfg) {
  const FitOptions fit;
  std::vector<ComparisonRow> rows;
  for (const std::size_t k : cfg.sweep) {
    ComparisonRow row;
    row.size = k;
    const LogisticModel h = cut_to(train, hybrid, k, fit);
    const LogisticModel p = cut_to(train, pure, k, fit);
    row.hybrid_size = h.size();
    row.hybrid_interactions = static_cast<std::size_t>(
        std::count_if(h.columns.begin(), h.columns.end(), [](const ModelColumn& c) { return c.parents.has_value(); }));
    std::tie(row.hybrid_train, row.hybrid_valid) = evaluate(h, train, valid);
    row.pure_size = p.size();
    std::tie(row.pure_train, row.pure_valid) = evaluate(p, train, valid);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
  out << "size,hybrid_size,hybrid_interactions,hybrid_train_accuracy,hybrid_valid_accuracy,hybrid_train_auc,"
         "hybrid_valid_auc,hybrid_train_ks,hybrid_valid_ks,pure_size,pure_train_accuracy,pure_valid_accuracy,"
         "pure_train_auc,pure_valid_auc,pure_train_ks,pure_valid_ks\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.hybrid_size << ',' << r.hybrid_interactions << ','
        << format_double(r.hybrid_train.accuracy) << ',' << format_double(r.hybrid_valid.accuracy) << ','
        << format_double(r.hybrid_train.auc) << ',' << format_double(r.hybrid_valid.auc) << ','
        << format_double(r.hybrid_train.ks) << ',' << format_double(r.hybrid_valid.ks) << ',' << r.pure_size << ','
        << format_double(r.pure_train.accuracy) << ',' << format_double(r.pure_valid.accuracy) << ','
        << format_double(r.pure_train.auc) << ',' << format_double(r.pure_valid.auc) << ','
        << format_double(r.pure_train.ks) << ',' << format_double(r.pure_valid.ks) << '\n';
  }
}

std::vector<KsPoint> ks_curve(std::span<const double> scores, std::span<const std::uint8_t> labels,
                              std::size_t steps) {
  if (scores.size() != labels.size()) fail("scores and labels differ in length");
  if (steps == 0) fail("KS curve needs at least one step");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) fail("KS curve needs both classes");

  std::vector<KsPoint> curve;
  std::size_t taken = 0, pos = 0;
  const auto n = static_cast<double>(scores.size());
  for (std::size_t s = 0; s <= steps; ++s) {
    const auto upto = static_cast<std::size_t>(std::llround(n * static_cast<double>(s) / static_cast<double>(steps)));
    for (; taken < upto; ++taken) pos += labels[order[taken]];
    curve.push_back({static_cast<double>(s) / static_cast<double>(steps),
                     static_cast<double>(pos) / static_cast<double>(positives),
                     static_cast<double>(taken - pos) / static_cast<double>(negatives)});
  }
  return curve;
}

void write_ks_curve_csv(const std::vector<KsPoint>& hybrid, const std::vector<KsPoint>& pure, std::ostream& out) {
  out << "model,population,cum_positive,cum_negative,separation\n";
  const auto rows = [&out](std::string_view model, const std::vector<KsPoint>& curve) {
    for (const auto& p : curve) {
      out << model << ',' << format_double(p.population) << ',' << format_double(p.positive) << ','
          << format_double(p.negative) << ',' << format_double(p.positive - p.negative) << '\n';
    }
  };
  rows("hybrid", hybrid);
  rows("pure", pure);
}

std::vector<TermProfile> profile_terms(const LogisticModel& model, const Dataset& train, const ChaidConfig& cfg) {
  std::vector<TermProfile> out;
  for (const auto& c : model.columns) {
    if (!c.parents) continue;
    const ColumnId a = train.column_named(c.parents->first).id();
    const ColumnId b = train.column_named(c.parents->second).id();
    const ChaidTree tree = grow_pair_tree(train, a, b, cfg);
    out.push_back({c.name, "profile_" + file_safe(c.parents->first) + "__" + file_safe(c.parents->second) + ".csv",
                   extract_profile(tree)});
  }
  return out;
}

PipelineResult run_pipeline(const Dataset& raw, const PipelineConfig& cfg, std::size_t workers) {
  cfg.validate();
  Prepared prep = prepare(raw, cfg);
  ScanResult scan = scan_all(prep.train, prep.base, cfg.chaid, workers);
  FittedModels models = fit_models(prep, scan.terms, cfg, workers);
  std::vector<ComparisonRow> comparison =
      compare_sweep(models.hybrid.model, models.pure.model, models.train, prep.valid, cfg);
  MetricsReport hybrid_valid = evaluate(models.hybrid.model, models.train, prep.valid).second;
  MetricsReport pure_valid = evaluate(models.pure.model, models.train, prep.valid).second;
  return PipelineResult{std::move(prep),       std::move(scan),         std::move(models),
                        std::move(comparison), std::move(hybrid_valid), std::move(pure_valid)};
}

}  // namespace chaidlogit
