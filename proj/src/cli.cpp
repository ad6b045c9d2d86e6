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

#include "chaidlogit/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <thread>

#include "chaidlogit/error.hpp"
#include "chaidlogit/pipeline.hpp"

namespace chaidlogit {

namespace {

namespace fs = std::filesystem;

struct InputMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArtifactMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string input;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
};

struct Context {
  PipelineConfig cfg;
  std::size_t workers = 1;
  fs::path out;
  std::ostream* log = nullptr;
};

Context make_context(const Options& o, std::ostream& log, bool synth_seed) {
  Context ctx;
  if (!o.config.empty()) {
    if (!fs::exists(o.config)) throw InputMissing("config file '" + o.config + "' does not exist");
    ctx.cfg = load_config(o.config);
  }
  if (!o.input.empty()) ctx.cfg.input = o.input;
  if (!o.out.empty()) ctx.cfg.out_dir = o.out;
  if (o.seed) (synth_seed ? ctx.cfg.synth.seed : ctx.cfg.seed) = *o.seed;
  ctx.cfg.validate();
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  ctx.workers = o.workers ? std::max<std::size_t>(1, *o.workers) : hw;
  ctx.out = ctx.cfg.out_dir;
  ctx.log = &log;
  fs::create_directories(ctx.out);
  return ctx;
}

Dataset load_input(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw InputMissing("no input file (set \"input\" in the config or pass --input)");
  if (!fs::exists(cfg.input)) throw InputMissing("input file '" + cfg.input.string() + "' does not exist");
  return load_csv(cfg.input, cfg.target);
}

json require_artifact(const Context& ctx, std::string_view file, std::string_view producer) {
  const fs::path path = ctx.out / file;
  if (!fs::exists(path)) {
    throw ArtifactMissing("missing artifact '" + path.string() + "'; run 'chaidlogit " + std::string(producer) +
                          "' first with the same --out");
  }
  return read_json_file(path);
}

void write_json(const Context& ctx, std::string_view file, const json& j) {
  write_json_file(ctx.out / file, j);
  *ctx.log << "wrote " << (ctx.out / file).string() << '\n';
}

template <typename Writer>
void write_text(const Context& ctx, const std::string& file, Writer&& writer) {
  const fs::path path = ctx.out / file;
  std::ofstream f(path);
  if (!f) throw Error("pipeline", "cannot write '" + path.string() + "'");
  writer(f);
  *ctx.log << "wrote " << path.string() << '\n';
}

std::vector<std::string> names_of(const Dataset& ds, const std::vector<ColumnId>& ids) {
  std::vector<std::string> out;
  for (const ColumnId id : ids) out.push_back(ds.column(id).name());
  return out;
}

// Upstream state shared by fit, evaluate and profile.
Prepared replay(const Context& ctx) {
  const json medians = require_artifact(ctx, "medians.json", "scan");
  const json clusters = require_artifact(ctx, "clusters.json", "scan");
  return replay_prepare(load_input(ctx.cfg), ctx.cfg, medians.at("medians").get<MedianMap>(),
                        clusters.at("base").get<std::vector<std::string>>());
}

json model_artifact(const FittedModel& m) {
  return json{{"model", m.model}, {"vif", m.vif}, {"selection", m.selection.trace}, {"candidates", m.candidates}};
}

void cmd_scan(const Context& ctx) {
  const Prepared prep = prepare(load_input(ctx.cfg), ctx.cfg);
  write_json(ctx, "medians.json", json{{"medians", prep.medians}, {"dropped", prep.dropped}});
  write_json(ctx, "clusters.json",
             json{{"enabled", prep.clustered},
                  {"assignment", prep.clustered ? json(prep.clusters) : json(nullptr)},
                  {"base", names_of(prep.train, prep.base)}});
  const ScanResult scan = scan_all(prep.train, prep.base, ctx.cfg.chaid, ctx.workers);
  write_json(ctx, "scan.json", scan_to_json(scan));
  *ctx.log << "scan: " << scan.report.pairs_detected << " of " << scan.report.pairs_total
           << " pairs detected in " << std::fixed << std::setprecision(2) << scan.report.seconds << " s\n"
           << std::defaultfloat;
}

void cmd_fit(const Context& ctx) {
  const Prepared prep = replay(ctx);
  const ScanResult scan = scan_from_json(require_artifact(ctx, "scan.json", "scan"));
  for (const auto& t : scan.terms) {
    if (!prep.train.contains(t.i) || !prep.train.contains(t.j) || prep.train.column(t.i).name() != t.name_i ||
        prep.train.column(t.j).name() != t.name_j) {
      throw Error("pipeline", "scan.json does not match the prepared data; rerun 'chaidlogit scan'");
    }
  }
  const FittedModels models = fit_models(prep, scan.terms, ctx.cfg, ctx.workers);
  write_json(ctx, "model_hybrid.json", model_artifact(models.hybrid));
  write_json(ctx, "model_pure.json", model_artifact(models.pure));
  *ctx.log << "fit: hybrid " << models.hybrid.model.size() << " columns, pure " << models.pure.model.size()
           << " columns\n";
}

std::pair<LogisticModel, LogisticModel> load_models(const Context& ctx) {
  return {require_artifact(ctx, "model_hybrid.json", "fit").at("model").get<LogisticModel>(),
          require_artifact(ctx, "model_pure.json", "fit").at("model").get<LogisticModel>()};
}

void cmd_evaluate(const Context& ctx) {
  const auto [hybrid, pure] = load_models(ctx);
  const Prepared prep = replay(ctx);
  const auto rows = compare_sweep(hybrid, pure, prep.train, prep.valid, ctx.cfg);
  write_text(ctx, "comparison.csv", [&](std::ostream& o) { write_comparison_csv(rows, o); });

  const std::vector<std::uint8_t> labels = prep.valid.binary_target();
  const std::vector<double> hs = predict_proba(hybrid, prep.valid);
  const std::vector<double> ps = predict_proba(pure, prep.valid);
  write_text(ctx, "ks_curve.csv",
             [&](std::ostream& o) { write_ks_curve_csv(ks_curve(hs, labels), ks_curve(ps, labels), o); });

  const auto [ht, hv] = evaluate(hybrid, prep.train, prep.valid);
  const auto [pt, pv] = evaluate(pure, prep.train, prep.valid);
  write_json(ctx, "metrics.json",
             json{{"hybrid", {{"size", hybrid.size()}, {"train", ht}, {"validation", hv}}},
                  {"pure", {{"size", pure.size()}, {"train", pt}, {"validation", pv}}}});
  *ctx.log << "evaluate: validation AUC hybrid " << format_double(hv.auc) << ", pure " << format_double(pv.auc)
           << '\n';
}

void cmd_profile(const Context& ctx) {
  const LogisticModel hybrid = require_artifact(ctx, "model_hybrid.json", "fit").at("model").get<LogisticModel>();
  const Prepared prep = replay(ctx);
  const auto profiles = profile_terms(hybrid, prep.train, ctx.cfg.chaid);
  if (profiles.empty()) {
    *ctx.log << "profile: the hybrid model has no interaction terms; no profiles written\n";
    return;
  }
  for (const auto& p : profiles) {
    write_text(ctx, p.file_name, [&](std::ostream& o) { write_profile_csv(p.rows, o); });
  }
}

void cmd_synth(const Context& ctx) {
  const Dataset ds = generate(ctx.cfg.synth);
  write_text(ctx, "synthetic.csv", [&](std::ostream& o) { write_csv(ds, o); });
}

void cmd_bench(const Context& ctx) {
  BenchConfig bc;
  bc.chaid = ctx.cfg.chaid;
  bc.stepwise = ctx.cfg.stepwise_options(ctx.workers);
  bc.train_fraction = ctx.cfg.train_fraction;
  bc.split_seed = ctx.cfg.seed;
  bc.workers = ctx.workers;
  const BenchReport report = run_benchmark(ctx.cfg.synth, bc);
  write_json(ctx, "bench.json", report);
  *ctx.log << "bench: speedup " << format_double(report.speedup) << "x\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void cmd_run(const Context& ctx) {
  json stages = json::object();
  const auto timed = [&](const char* name, void (*stage)(const Context&)) {
    const auto start = std::chrono::steady_clock::now();
    stage(ctx);
    stages[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const std::string started = utc_timestamp();
  timed("scan", cmd_scan);
  timed("fit", cmd_fit);
  timed("evaluate", cmd_evaluate);
  timed("profile", cmd_profile);
  write_json(ctx, "run_meta.json",
             json{{"started", started}, {"finished", utc_timestamp()}, {"workers", ctx.workers},
                  {"seconds", stages}, {"config", ctx.cfg}});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHAID interaction scan and stepwise logistic modeling"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "JSON config file; absent keys keep their defaults");
  app.add_option("--input", o.input, "input CSV (overrides the config)");
  app.add_option("--seed", o.seed, "split seed, or the generator seed for synth (overrides the config)");
  app.add_option("--workers", o.workers, "worker threads (default: available cores)");
  app.add_option("--out", o.out, "artifact directory (overrides the config)");

  struct Command {
    const char* name;
    const char* help;
    void (*body)(const Context&);
  };
  const Command commands[] = {
      {"run", "full procedure: scan, fit, evaluate, profile", cmd_run},
      {"scan", "preprocess and scan all predictor pairs", cmd_scan},
      {"fit", "stepwise hybrid and pure models from the scan", cmd_fit},
      {"evaluate", "model-size sweep, metrics and KS curves", cmd_evaluate},
      {"profile", "segment profiles for the hybrid model's interaction terms", cmd_profile},
      {"synth", "write a synthetic dataset", cmd_synth},
      {"bench", "hybrid versus complete stepwise timing on synthetic data", cmd_bench},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const WarningSink previous = set_warning_sink([&err](std::string_view module, std::string_view message) {
    err << "warning [" << module << "]: " << message << '\n';
  });
  int status = 0;
  try {
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) {
        const Context ctx = make_context(o, out, std::string_view(c.name) == "synth");
        c.body(ctx);
      }
    }
  } catch (const InputMissing& e) {
    err << "error: " << e.what() << '\n';
    status = 2;
  } catch (const ArtifactMissing& e) {
    err << "error: " << e.what() << '\n';
    status = 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    status = 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    status = 1;
  }
  set_warning_sink(previous);
  return status;
}

}  // namespace chaidlogit
