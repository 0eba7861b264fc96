#include "opdsim/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "opdsim/calibrate.hpp"
#include "opdsim/config.hpp"
#include "opdsim/engine.hpp"
#include "opdsim/io.hpp"
#include "opdsim/manifest.hpp"
#include "opdsim/patientgen.hpp"
#include "opdsim/report.hpp"

namespace opdsim {
namespace {

namespace fs = std::filesystem;

constexpr const char* kConfigFormat =
    "Config file (JSON): any subset of {strategy, memory_enabled, drift_enabled,\n"
    "  registration{mean,std,min,voice_capture_reduction,desks},\n"
    "  consult{critical|high|medium|low{mean,sd}, min}, session_length, seed, dataset_seed,\n"
    "  drift{check_interval,p_high,p_medium,p_low,history_multiplier,p_history_escalation},\n"
    "  priority_weights{urgency,acuity,wait,load,wait_cap,wait_horizon},\n"
    "  assignment_weights{specialty,load,availability}, profile{breakpoints[[t,rate]...],lambda_max}}.\n"
    "  Precedence: command-line flag > config file > built-in default.\n"
    "Dataset file (JSON): {version, patients[], history{}} as written by `generate`.\n"
    "Roster file (JSON): [{\"id\": ..., \"specialty\": ...}, ...].\n";

// Options shared by the simulation subcommands.
struct SimOptions {
  std::string strategy;
  std::string config_path;
  std::string dataset_path;
  std::string roster_path;
  std::uint64_t seed = 42;
  int reg_desks = 0;
  double kappa = 0.0;
  double p_hist = 0.0;
  bool no_memory = false;
  bool no_drift = false;
  unsigned jobs = 0;

  CLI::Option* strategy_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* desks_opt = nullptr;
  CLI::Option* kappa_opt = nullptr;
  CLI::Option* p_hist_opt = nullptr;
};

void add_inputs(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--config", o.config_path, "Run config JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--dataset", o.dataset_path, "Dataset JSON file (default: generated from dataset_seed)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--roster", o.roster_path, "Roster JSON file (default: 6-physician roster)")
      ->check(CLI::ExistingFile);
  o.desks_opt = cmd->add_option("--reg-desks", o.reg_desks, "Registration desks (overrides config)");
  o.kappa_opt = cmd->add_option("--kappa", o.kappa, "History drift multiplier (overrides config)");
  o.p_hist_opt = cmd->add_option("--p-hist", o.p_hist, "History escalation probability per check (overrides config)");
}

void add_flags(CLI::App* cmd, SimOptions& o) {
  cmd->add_flag("--no-memory", o.no_memory, "Disable history-aware escalation");
  cmd->add_flag("--no-drift", o.no_drift, "Disable the 5-minute drift reassessment");
}

StrategyConfig build_config(const SimOptions& o, std::ostream& err) {
  StrategyConfig c;
  if (!o.config_path.empty()) c = load_config(o.config_path, c);
  if (o.strategy_opt && o.strategy_opt->count()) {
    c.strategy = parse_strategy(o.strategy);
    const bool agentic = c.strategy == Strategy::Agentic;
    c.memory_enabled = agentic;
    c.drift_enabled = agentic;
  }
  if (o.seed_opt && o.seed_opt->count()) c.seed = o.seed;
  if (o.desks_opt->count()) c.reg_desks = o.reg_desks;
  if (o.kappa_opt->count()) c.drift.history_multiplier = o.kappa;
  if (o.p_hist_opt->count()) c.drift.p_history_escalation = o.p_hist;
  if (c.strategy != Strategy::Agentic && (o.no_memory || o.no_drift))
    fmt::print(err, "warning: --no-memory/--no-drift are redundant for strategy {}\n", to_string(c.strategy));
  if (o.no_memory) c.memory_enabled = false;
  if (o.no_drift) c.drift_enabled = false;
  c.normalize();
  c.validate();
  return c;
}

Dataset load_dataset(const SimOptions& o, const StrategyConfig& c) {
  return o.dataset_path.empty() ? generate_dataset(c.dataset_seed) : import_dataset(o.dataset_path);
}

std::vector<Physician> load_roster_opt(const SimOptions& o) {
  return o.roster_path.empty() ? default_roster() : load_roster(o.roster_path);
}

std::string with_manifest(const std::string& hash, const std::string& csv) {
  return fmt::format("# manifest_hash={}\n{}", hash, csv);
}

struct ExperimentOutput {
  std::string label;
  std::vector<SessionMetrics> runs;
};

// runs.jsonl, manifest.json and summary.json for one strategy or variant.
void write_experiment_dir(const fs::path& dir, const ExperimentOutput& e, const RunManifest& manifest) {
  const std::string jsonl = metrics_to_jsonl(e.runs);
  write_text_file_atomic(dir / "runs.jsonl", jsonl);
  write_text_file_atomic(dir / "manifest.json", manifest.to_json());
  auto summary = nlohmann::json::parse(summary_to_json(summarize(e.runs, e.label)));
  summary["manifest_hash"] = manifest.hash();
  summary["runs_sha256"] = sha256_hex(jsonl);
  write_text_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
}

void write_tables(const fs::path& dir, const std::string& hash, const std::vector<std::pair<std::string, Table>>& tables,
                  bool markdown) {
  std::string md = fmt::format("<!-- manifest_hash={} -->\n\n", hash);
  for (const auto& [name, t] : tables) {
    write_text_file_atomic(dir / (name + ".csv"), with_manifest(hash, to_csv(t)));
    md += to_markdown(t) + "\n";
  }
  if (markdown) write_text_file_atomic(dir / "tables.md", md);
}

struct LoadedExperiment {
  RunManifest manifest;
  std::vector<SessionMetrics> runs;
};

LoadedExperiment load_experiment_dir(const fs::path& dir) {
  LoadedExperiment e;
  e.manifest = RunManifest::from_json(read_text_file(dir / "manifest.json"));
  const std::string jsonl = read_text_file(dir / "runs.jsonl");
  const auto summary = nlohmann::json::parse(read_text_file(dir / "summary.json"));
  if (summary.value("manifest_hash", "") != e.manifest.hash())
    throw ValidationError(fmt::format("{}: summary was produced under a different manifest", dir.string()));
  if (summary.value("runs_sha256", "") != sha256_hex(jsonl))
    throw ValidationError(fmt::format("{}: runs.jsonl does not match its summary", dir.string()));
  e.runs = metrics_from_jsonl(jsonl);
  if (e.runs.size() != e.manifest.n_runs)
    throw ValidationError(fmt::format("{}: manifest lists {} runs, found {}", dir.string(), e.manifest.n_runs,
                                      e.runs.size()));
  return e;
}

using MetricField = double (*)(const SessionMetrics&);
const std::vector<std::pair<std::string, MetricField>>& comparable_metrics() {
  static const std::vector<std::pair<std::string, MetricField>> m = {
      {"critical_wait", field_critical_wait}, {"avg_wait", field_avg_wait},   {"throughput", field_throughput},
      {"low_wait", field_low_wait},           {"p95_wait", field_p95_wait},
  };
  return m;
}

std::vector<double> finite(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("'{}' is not a number", item));
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outpatient department queueing simulator", "opdsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));
  app.footer(kConfigFormat);

  // generate
  auto* gen = app.add_subcommand("generate", "Write the synthetic 368-patient dataset with its history store");
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "Dataset seed")->required();
  gen->add_option("--out", gen_out, "Output dataset JSON path")->required();
  gen->footer("Output: dataset JSON {version, patients[], history{}}.");

  // run
  auto* run = app.add_subcommand("run", "Simulate one session");
  SimOptions run_o;
  std::string run_out, trace_out, escalations_out;
  bool with_patients = false;
  run_o.strategy_opt =
      run->add_option("--strategy", run_o.strategy, "fcfs | rule-based | agentic (default: config, else agentic)");
  run_o.seed_opt = run->add_option("--seed", run_o.seed, "Run seed (default: config, else 42)");
  add_inputs(run, run_o);
  add_flags(run, run_o);
  run->add_option("--out", run_out, "Metrics JSON path (default: stdout)");
  run->add_option("--trace", trace_out, "Write the event log CSV (time,kind,patient,physician) here");
  run->add_option("--escalations", escalations_out, "Write the escalation log CSV (time,patient_id,from,to,cause)");
  run->add_flag("--patients", with_patients, "Include per-patient outcomes in the metrics JSON");
  run->footer(kConfigFormat);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a seed ladder for one or all strategies and tabulate");
  SimOptions exp_o;
  std::size_t exp_runs = 30;
  std::uint64_t exp_base = 1;
  std::string exp_dir;
  bool exp_md = false;
  exp_o.strategy_opt = exp->add_option("--strategy", exp_o.strategy, "fcfs | rule-based | agentic | all")
                           ->default_str("all");
  exp->add_option("--runs", exp_runs, "Runs per strategy")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--base-seed", exp_base, "First seed; runs use base..base+runs-1")->capture_default_str();
  exp->add_option("--out-dir", exp_dir, "Output directory")->required();
  exp->add_option("--jobs", exp_o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  exp->add_flag("--markdown", exp_md, "Also write tables.md");
  add_inputs(exp, exp_o);
  add_flags(exp, exp_o);
  exp->footer(std::string("Writes <out-dir>/<strategy>/{runs.jsonl,manifest.json,summary.json} and\n"
                          "table_performance.csv, table_urgency.csv, table_critical.csv.\n") +
              kConfigFormat);

  // ablation
  auto* abl = app.add_subcommand("ablation", "Agentic runs with memory and drift switched on and off");
  SimOptions abl_o;
  std::size_t abl_runs = 30;
  std::uint64_t abl_base = 1;
  std::string abl_dir;
  bool abl_md = false;
  abl->add_option("--runs", abl_runs, "Runs per variant")->capture_default_str()->check(CLI::PositiveNumber);
  abl->add_option("--base-seed", abl_base, "First seed")->capture_default_str();
  abl->add_option("--out-dir", abl_dir, "Output directory")->required();
  abl->add_option("--jobs", abl_o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  abl->add_flag("--markdown", abl_md, "Also write tables.md");
  add_inputs(abl, abl_o);
  abl->footer(std::string("Variants: full, no-memory, no-drift, neither. Writes <out-dir>/<variant>/... and\n"
                          "table_ablation.csv.\n") +
              kConfigFormat);

  // compare
  auto* cmp = app.add_subcommand("compare", "Welch t-test and Cohen's d between two experiment directories");
  std::string dir_a, dir_b, cmp_metric = "all", cmp_out;
  bool cmp_md = false;
  cmp->add_option("dir_a", dir_a, "First experiment directory (contains runs.jsonl)")->required();
  cmp->add_option("dir_b", dir_b, "Second experiment directory")->required();
  cmp->add_option("--metric", cmp_metric, "critical_wait | avg_wait | throughput | low_wait | p95_wait | all")
      ->capture_default_str();
  cmp->add_option("--out", cmp_out, "CSV output path (default: stdout)");
  cmp->add_flag("--markdown", cmp_md, "Print a markdown table instead of CSV");
  cmp->footer("Both directories must share dataset, roster, code version and seed ladder.");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Grid search for the history drift multiplier and escalation rate");
  SimOptions cal_o;
  std::string cal_kappa = "1,1.25,1.5,2", cal_phist = "0.02,0.035,0.05", cal_dir;
  std::size_t cal_runs = 10;
  std::uint64_t cal_base = 1;
  CalibrationTargets targets;
  cal->add_option("--sweep-kappa", cal_kappa, "Comma-separated multipliers")->capture_default_str();
  cal->add_option("--sweep-p-hist", cal_phist, "Comma-separated escalation probabilities")->capture_default_str();
  cal->add_option("--target-drifts", targets.drift_events, "Target drift events per session")->capture_default_str();
  cal->add_option("--target-crit", targets.critical_per_session, "Target critical patients per session")
      ->capture_default_str();
  cal->add_option("--runs", cal_runs, "Runs per grid cell")->capture_default_str()->check(CLI::PositiveNumber);
  cal->add_option("--base-seed", cal_base, "First seed")->capture_default_str();
  cal->add_option("--out-dir", cal_dir, "Output directory")->required();
  cal->add_option("--jobs", cal_o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  add_inputs(cal, cal_o);
  cal->footer("Writes calibration.csv (one row per cell) and calibration.json (config fragment).");

  std::vector<const char*> argv{"opdsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const Dataset d = generate_dataset(gen_seed);
      export_dataset(d, gen_out);
      std::array<int, 4> counts{};
      for (const auto& p : d.patients) ++counts[index_of(p.face_urgency)];
      fmt::print(out, "patients={} histories={} critical={} high={} medium={} low={} sha256={}\n", d.patients.size(),
                 d.history.size(), counts[0], counts[1], counts[2], counts[3], sha256_hex(dataset_to_json(d)));
      return kExitOk;
    }

    if (*run) {
      const StrategyConfig c = build_config(run_o, err);
      const Dataset d = load_dataset(run_o, c);
      const auto roster = load_roster_opt(run_o);
      std::string trace;
      SessionOptions opts;
      if (!trace_out.empty()) opts.trace = &trace;
      const SessionMetrics m = run_session(c, d, roster, c.intensity_profile(), opts);
      const std::string json = metrics_to_json(m, with_patients) + "\n";
      if (run_out.empty())
        out << json;
      else
        write_text_file_atomic(run_out, json);
      if (!trace_out.empty()) write_text_file_atomic(trace_out, trace);
      if (!escalations_out.empty()) write_text_file_atomic(escalations_out, escalations_to_csv(m));
      return kExitOk;
    }

    if (*exp) {
      std::vector<Strategy> strategies;
      if (!exp_o.strategy_opt->count() || exp_o.strategy == "all")
        strategies = {Strategy::FCFS, Strategy::RuleBased, Strategy::Agentic};
      else
        strategies = {parse_strategy(exp_o.strategy)};
      const SimOptions base_opts = [&] {
        SimOptions o = exp_o;
        o.strategy_opt = nullptr;
        return o;
      }();
      const StrategyConfig base = build_config(base_opts, err);
      const Dataset d = load_dataset(exp_o, base);
      const auto roster = load_roster_opt(exp_o);
      std::vector<StrategySummary> summaries;
      std::string hash;
      for (Strategy s : strategies) {
        StrategyConfig c = base;
        c.strategy = s;
        c.memory_enabled = s == Strategy::Agentic && !exp_o.no_memory;
        c.drift_enabled = s == Strategy::Agentic && !exp_o.no_drift;
        c.normalize();
        const auto runs = run_experiment(c, exp_runs, exp_base, d, roster, exp_o.jobs);
        const RunManifest manifest = make_manifest(c, d, roster, exp_base, exp_runs);
        const std::string label(to_string(s));
        write_experiment_dir(fs::path(exp_dir) / label, {label, runs}, manifest);
        summaries.push_back(summarize(runs, label));
        hash = manifest.comparability_hash();
      }
      write_tables(exp_dir, hash,
                   {{"table_performance", performance_table(summaries)},
                    {"table_urgency", urgency_wait_table(summaries)},
                    {"table_critical", critical_response_table(summaries)}},
                   exp_md);
      out << to_markdown(performance_table(summaries));
      return kExitOk;
    }

    if (*abl) {
      const StrategyConfig base = build_config(abl_o, err);
      const Dataset d = load_dataset(abl_o, base);
      const auto roster = load_roster_opt(abl_o);
      const AblationResults r = run_ablations(base, abl_runs, abl_base, d, roster, abl_o.jobs);
      std::vector<StrategySummary> summaries;
      std::string hash;
      for (std::size_t i = 0; i < kAllAblations.size(); ++i) {
        const std::string label(to_string(kAllAblations[i]));
        const RunManifest manifest =
            make_manifest(apply_ablation(base, kAllAblations[i]), d, roster, abl_base, abl_runs);
        write_experiment_dir(fs::path(abl_dir) / label, {label, r.runs[i]}, manifest);
        summaries.push_back(summarize(r.runs[i], label));
        hash = manifest.comparability_hash();
      }
      write_tables(abl_dir, hash, {{"table_ablation", ablation_table(summaries)}}, abl_md);
      out << to_markdown(ablation_table(summaries));
      return kExitOk;
    }

    if (*cmp) {
      const LoadedExperiment a = load_experiment_dir(dir_a);
      const LoadedExperiment b = load_experiment_dir(dir_b);
      if (a.runs.size() != b.runs.size())
        throw ValidationError(fmt::format("run count mismatch: {} vs {}", a.runs.size(), b.runs.size()));
      if (a.manifest.comparability_hash() != b.manifest.comparability_hash())
        throw ValidationError("experiments differ in dataset, roster, code version or seed ladder");
      std::vector<ComparisonResult> rows;
      bool matched = false;
      for (const auto& [name, field] : comparable_metrics()) {
        if (cmp_metric != "all" && cmp_metric != name) continue;
        matched = true;
        rows.push_back(welch_t(finite(column(a.runs, field)), finite(column(b.runs, field)), name));
      }
      if (!matched) throw ValidationError(fmt::format("unknown metric '{}'", cmp_metric));
      const Table t = comparison_table(rows);
      const std::string text = cmp_md ? to_markdown(t) : with_manifest(a.manifest.comparability_hash(), to_csv(t));
      if (cmp_out.empty())
        out << text;
      else
        write_text_file_atomic(cmp_out, text);
      return kExitOk;
    }

    if (*cal) {
      const StrategyConfig base = build_config(cal_o, err);
      const Dataset d = load_dataset(cal_o, base);
      const auto roster = load_roster_opt(cal_o);
      const auto kappas = parse_list(cal_kappa);
      const auto phists = parse_list(cal_phist);
      const CalibrationReport r = calibrate(base, kappas, phists, targets, cal_runs, cal_base, d, roster, cal_o.jobs);
      write_text_file_atomic(fs::path(cal_dir) / "calibration.csv", calibration_to_csv(r));
      write_text_file_atomic(fs::path(cal_dir) / "calibration.json", calibration_fragment(r));
      const auto& best = r.cells[r.best];
      fmt::print(out, "chosen history_multiplier={} p_history_escalation={} drift_mean={:.1f} critical_mean={:.1f}\n",
                 best.history_multiplier, best.p_history_escalation, best.drift_mean, best.critical_mean);
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const IoError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace opdsim
