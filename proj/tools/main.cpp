#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mrpath/instance.h"
#include "mrpath/io.h"
#include "mrpath/model.h"
#include "mrpath/simulation.h"
#include "mrpath/solver.h"

namespace {

using namespace mrpath;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFeasible = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitNoSolution = 5;

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kFeasible: return kExitFeasible;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    case SolveStatus::kNoSolution: return kExitNoSolution;
  }
  return kExitFailure;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

Instance load_instance(const std::string& path) { return instance_from_json(read_text_file(path)); }

struct ModelFlags {
  bool allow_idle = false;
  bool no_prune = false;
  bool tight_big_m = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--allow-idle", allow_idle, "Admit robots that never leave the depot");
    cmd->add_flag("--no-prune-arcs", no_prune, "Keep time-infeasible arcs in the model");
    cmd->add_flag("--per-constraint-big-m", tight_big_m, "Use per-row big-M constants");
  }
  ModelOptions options() const {
    ModelOptions o;
    o.allow_idle_robots = allow_idle;
    o.prune_arcs = !no_prune;
    o.per_constraint_big_m = tight_big_m;
    return o;
  }
};

struct GenerateArgs {
  std::string scenario = "A";
  int nodes = 0;
  int robots = 3;
  std::uint64_t seed = 1;
  std::string config;
  std::optional<double> service_time;
  std::optional<double> horizon;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  InstanceOptions opts;
  if (!a.config.empty()) opts = experiment_config_from_text(read_text_file(a.config)).instance;
  if (a.service_time) opts.sampling.service_time = *a.service_time;
  if (a.horizon) opts.sampling.horizon = *a.horizon;
  const Instance inst = generate_instance(parse_scenario(a.scenario), a.nodes, a.robots, a.seed, opts);
  emit(a.out, instance_to_json(inst));
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string variant = "ca";
  double time_limit = 60.0;
  std::int64_t node_limit = 2'000'000'000;
  ModelFlags model;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.instance);
  const MilpModel model = build_model(inst, parse_variant(a.variant), a.model.options());
  SolveLimits limits;
  limits.time_limit_s = a.time_limit;
  limits.node_limit = a.node_limit;
  limits.validate();
  const Solution sol = solve(model, limits);
  emit(a.out, solution_to_json(sol));
  std::cerr << "status: " << to_string(sol.status);
  if (sol.has_schedule()) std::fprintf(stderr, ", total travel time %.4f s", sol.objective);
  std::cerr << '\n';
  if (!sol.hint.empty()) std::cerr << "hint: " << sol.hint << '\n';
  return status_exit_code(sol.status);
}

struct ValidateArgs {
  std::string instance;
  std::string solution;
  std::string variant;
  bool allow_idle = false;
  bool json = false;
};

int run_validate(const ValidateArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Solution sol = solution_from_json(read_text_file(a.solution));
  const Variant variant = a.variant.empty() ? sol.variant : parse_variant(a.variant);
  ValidationOptions vopt;
  vopt.allow_idle = a.allow_idle;
  const ValidationReport report = validate(sol, inst, variant, vopt);
  if (a.json) {
    std::cout << validation_to_json(report);
  } else if (report.ok()) {
    std::cout << "ok\n";
  } else {
    for (const auto& v : report.violations) {
      std::cout << v.clause;
      for (int n : v.nodes) std::cout << ' ' << n;
      if (!v.detail.empty()) std::cout << ": " << v.detail;
      std::cout << '\n';
    }
  }
  return report.ok() ? kExitOk : kExitFailure;
}

struct EvaluateArgs {
  std::string instance;
  std::string solution;
  std::string radio;
  std::uint64_t seed = 1;
  std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Solution sol = solution_from_json(read_text_file(a.solution));
  const RadioParams radio =
      a.radio.empty() ? RadioParams{} : radio_params_from_text(read_text_file(a.radio));
  std::mt19937_64 rng(a.seed);
  try {
    emit(a.out, evaluation_to_json(evaluate_schedule(sol, inst, radio, rng)));
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> time_limit;
  std::vector<std::string> scenarios;
  std::vector<int> nodes;
  std::string format = "both";
  bool progress = false;
};

int run_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = experiment_config_from_text(read_text_file(a.config));
  if (a.runs) cfg.runs = *a.runs;
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (a.time_limit) cfg.limits.time_limit_s = *a.time_limit;
  if (!a.scenarios.empty()) {
    cfg.scenarios.clear();
    for (const auto& s : a.scenarios) cfg.scenarios.push_back(parse_scenario(s));
  }
  if (!a.nodes.empty()) cfg.node_counts = a.nodes;
  cfg.validate();

  ExportFormat format = ExportFormat::kBoth;
  if (a.format == "csv") format = ExportFormat::kCsv;
  if (a.format == "json") format = ExportFormat::kJson;

  std::function<void(const RunRecord&)> on_run;
  if (a.progress) {
    on_run = [](const RunRecord& r) {
      std::cerr << to_string(r.scenario) << " n=" << r.nodes << " run=" << r.run
                << " cua=" << to_string(r.cua.status) << " ca=" << to_string(r.ca.status) << '\n';
    };
  }
  const ExperimentResults results = run_monte_carlo(cfg, on_run);
  export_results(results, a.out, format);
  std::cout << summary_table(results);
  int excluded = 0;
  for (const auto& c : results.cells) excluded += c.excluded;
  if (excluded > 0) {
    std::cerr << excluded << " run(s) without proven optima excluded from the aggregates\n";
  }
  return kExitOk;
}

struct ExportLpArgs {
  std::string instance;
  std::string variant = "ca";
  ModelFlags model;
  std::string out;
  bool stats = false;
};

int run_export_lp(const ExportLpArgs& a) {
  const Instance inst = load_instance(a.instance);
  const MilpModel model = build_model(inst, parse_variant(a.variant), a.model.options());
  emit(a.out, export_lp(model));
  if (a.stats) std::cerr << model_stats_json(model);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-aware multi-robot path planning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mrpath 0.1.0");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample an instance");
  g->add_option("--scenario", gen.scenario, "A (collision area) or B (all cells)")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));
  g->add_option("--nodes", gen.nodes, "Number of visit nodes")->required()->check(CLI::PositiveNumber);
  g->add_option("--robots", gen.robots, "Number of robots")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Sampling seed");
  g->add_option("--config", gen.config, "Config file; its [instance] section is used")
      ->check(CLI::ExistingFile);
  g->add_option("--service-time", gen.service_time, "Service time per node (s)");
  g->add_option("--horizon", gen.horizon, "Depot window end l_0 (s)");
  g->add_option("--out", gen.out, "Output file (default stdout)");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve MP-CUA or MP-CA exactly");
  s->add_option("--instance", sol.instance)->required()->check(CLI::ExistingFile);
  s->add_option("--variant", sol.variant, "cua or ca")->check(CLI::IsMember({"cua", "ca"}));
  s->add_option("--time-limit", sol.time_limit, "Seconds")->check(CLI::PositiveNumber);
  s->add_option("--node-limit", sol.node_limit, "Search nodes")->check(CLI::PositiveNumber);
  sol.model.attach(s);
  s->add_option("--out", sol.out, "Solution file (default stdout)");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check a solution against the routing rules");
  v->add_option("--instance", val.instance)->required()->check(CLI::ExistingFile);
  v->add_option("--solution", val.solution)->required()->check(CLI::ExistingFile);
  v->add_option("--variant", val.variant, "Override the solution's variant")
      ->check(CLI::IsMember({"cua", "ca"}));
  v->add_flag("--allow-idle", val.allow_idle);
  v->add_flag("--json", val.json, "Print the report as JSON");

  EvaluateArgs eva;
  auto* e = app.add_subcommand("evaluate", "Evaluate a schedule under the radio model");
  e->add_option("--instance", eva.instance)->required()->check(CLI::ExistingFile);
  e->add_option("--solution", eva.solution)->required()->check(CLI::ExistingFile);
  e->add_option("--radio", eva.radio, "Radio parameter file")->check(CLI::ExistingFile);
  e->add_option("--seed", eva.seed, "Link sampling seed");
  e->add_option("--out", eva.out, "Output file (default stdout)");

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run the Monte Carlo comparison");
  x->add_option("--config", exp.config, "Config or manifest file")->check(CLI::ExistingFile);
  x->add_option("--out", exp.out, "Output directory")->required();
  x->add_option("--runs", exp.runs)->check(CLI::PositiveNumber);
  x->add_option("--seed", exp.seed, "Base seed");
  x->add_option("--threads", exp.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  x->add_option("--time-limit", exp.time_limit, "Per-solve time limit (s)")
      ->check(CLI::PositiveNumber);
  x->add_option("--scenarios", exp.scenarios, "Subset of A, B");
  x->add_option("--nodes", exp.nodes, "Node counts");
  x->add_option("--format", exp.format)->check(CLI::IsMember({"csv", "json", "both"}));
  x->add_flag("--progress", exp.progress, "Report each finished run on stderr");

  ExportLpArgs lp;
  auto* l = app.add_subcommand("export-lp", "Write the MILP in CPLEX LP format");
  l->add_option("--instance", lp.instance)->required()->check(CLI::ExistingFile);
  l->add_option("--variant", lp.variant, "cua or ca")->check(CLI::IsMember({"cua", "ca"}));
  lp.model.attach(l);
  l->add_option("--out", lp.out, "Output file (default stdout)");
  l->add_flag("--stats", lp.stats, "Print row and variable counts on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*s) return run_solve(sol);
    if (*v) return run_validate(val);
    if (*e) return run_evaluate(eva);
    if (*x) return run_experiment(exp);
    if (*l) return run_export_lp(lp);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
