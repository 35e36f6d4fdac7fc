#include "mrpath/simulation.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mrpath/io.h"
#include "mrpath/model.h"

namespace mrpath {

LinkTable sample_links(const Instance& instance, const RadioParams& radio, std::mt19937_64& rng) {
  const int cells = static_cast<int>(instance.layout.cells.size());
  LinkTable table(instance.visit_count(), cells);
  for (const auto& node : instance.nodes.nodes) {
    for (const auto& cell : instance.layout.cells) {
      table.at(node.id, cell.id) = sample_link(distance(node.position, cell.center), radio, rng);
    }
  }
  return table;
}

ScheduleEvaluation evaluate_schedule(const Solution& solution, const Instance& instance,
                                     const RadioParams& radio, const LinkTable& links) {
  ValidationOptions vopt;
  vopt.allow_idle = true;
  const auto report = validate(solution, instance, Variant::kCollisionUnaware, vopt);
  if (!report.ok()) {
    throw std::invalid_argument("schedule failed validation: " + report.summary());
  }
  const NodeSet& ns = instance.nodes;
  const int v = ns.visit_count();

  ScheduleEvaluation out;
  out.total_travel_time_s = route_travel_time(solution.routes, instance.travel_times());

  std::vector<int> robot_of(v + 1, 0);
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    for (int id : solution.routes[k]) {
      if (id >= 1 && id <= v) robot_of[id] = static_cast<int>(k) + 1;
    }
  }
  std::vector<CellId> serving(v + 1, 0);
  for (const auto& node : ns.nodes) serving[node.id] = serving_cell(node.position, instance.layout);
  auto start = [&](int id) { return solution.arrival_times[id]; };
  auto end = [&](int id) { return solution.arrival_times[id] + ns.visit(id).service_time; };

  // overlapping[i] lists h-partners served at the same time as i.
  std::vector<std::vector<int>> overlapping(v + 1);
  for (auto [i, j] : instance.collisions.pairs()) {
    if (robot_of[i] == 0 || robot_of[j] == 0) continue;
    if (!intervals_overlap(start(i), ns.visit(i).service_time, start(j), ns.visit(j).service_time)) {
      continue;
    }
    out.collision_events.push_back({i, j, std::max(start(i), start(j)), std::min(end(i), end(j))});
    overlapping[i].push_back(j);
    overlapping[j].push_back(i);
  }

  const double main_gain = radio.main_lobe_gain();
  std::vector<Interferer> interferers;
  double rate_sum = 0.0;
  for (int id = 1; id <= v; ++id) {
    if (robot_of[id] == 0) continue;
    interferers.clear();
    for (const auto& cell : instance.layout.cells) {
      if (cell.id == serving[id]) continue;
      double gain = radio.side_lobe_interference ? radio.side_lobe_gain : 0.0;
      for (int partner : overlapping[id]) {
        if (serving[partner] == cell.id) gain = main_gain;
      }
      if (gain > 0.0) interferers.push_back({links.at(id, cell.id), gain});
    }
    NodeEvaluation e;
    e.node = id;
    e.robot = robot_of[id];
    e.serving_cell = serving[id];
    e.start = start(id);
    e.end = end(id);
    e.sinr = sinr(links.at(id, serving[id]), interferers, radio);
    e.rate_bps = rate(e.sinr, radio.bandwidth_hz);
    e.collided = !overlapping[id].empty();
    rate_sum += e.rate_bps;
    out.per_node.push_back(e);
  }
  out.overall_rate_bps = out.per_node.empty() ? 0.0 : rate_sum / static_cast<double>(out.per_node.size());
  return out;
}

ScheduleEvaluation evaluate_schedule(const Solution& solution, const Instance& instance,
                                     const RadioParams& radio, std::mt19937_64& rng) {
  const LinkTable links = sample_links(instance, radio, rng);
  return evaluate_schedule(solution, instance, radio, links);
}

// ---------------------------------------------------------------------------
// Experiments

void ExperimentConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (node_counts.empty()) throw std::invalid_argument("node_counts must not be empty");
  if (scenarios.empty()) throw std::invalid_argument("scenarios must not be empty");
  if (robots < 1) throw std::invalid_argument("robots must be at least 1");
  for (int n : node_counts) {
    if (n < 1) throw std::invalid_argument("node counts must be positive");
  }
  radio.validate();
  limits.validate();
}

double RunRecord::rate_improvement_pct() const {
  if (!(cua.overall_rate_bps > 0.0)) return 0.0;
  return 100.0 * (ca.overall_rate_bps - cua.overall_rate_bps) / cua.overall_rate_bps;
}

double RunRecord::travel_increase_pct() const {
  if (!(cua.travel_time_s > 0.0)) return 0.0;
  return 100.0 * (ca.travel_time_s - cua.travel_time_s) / cua.travel_time_s;
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

std::uint64_t run_seed(std::uint64_t base_seed, Scenario scenario, int nodes, int run) {
  const std::uint64_t tag = (static_cast<std::uint64_t>(scenario == Scenario::kA ? 1 : 2) << 48) ^
                            (static_cast<std::uint64_t>(nodes) << 32) ^
                            static_cast<std::uint64_t>(run);
  return derive_seed(base_seed, tag);
}

namespace {

// Per-purpose streams derived from a run seed.
constexpr std::uint64_t kNodeStream = 1;
constexpr std::uint64_t kLinkStream = 2;

SchemeOutcome outcome(const Solution& sol, const Instance& inst, const RadioParams& radio,
                      const LinkTable& links) {
  SchemeOutcome o;
  o.status = sol.status;
  o.nodes_explored = sol.stats.nodes_explored;
  if (!sol.has_schedule()) return o;
  const auto eval = evaluate_schedule(sol, inst, radio, links);
  o.travel_time_s = sol.objective;
  o.overall_rate_bps = eval.overall_rate_bps;
  o.collisions = static_cast<int>(eval.collision_events.size());
  return o;
}

}  // namespace

RunRecord run_single(const ExperimentConfig& config, Scenario scenario, int nodes, int run) {
  RunRecord rec;
  rec.scenario = scenario;
  rec.nodes = nodes;
  rec.run = run;
  rec.seed = run_seed(config.base_seed, scenario, nodes, run);

  const Instance inst = generate_instance(scenario, nodes, config.robots,
                                          derive_seed(rec.seed, kNodeStream), config.instance);
  rec.h_pairs = static_cast<int>(inst.collisions.pairs().size());

  const MilpModel cua_model = build_mp_cua(inst);
  const MilpModel ca_model = build_mp_ca(inst);
  const BoundTables tables(cua_model.routing);
  const Solution cua = solve(cua_model, config.limits, &tables);
  const Solution ca = solve(ca_model, config.limits, &tables);

  std::mt19937_64 link_rng(derive_seed(rec.seed, kLinkStream));
  const LinkTable links = sample_links(inst, config.radio, link_rng);
  rec.cua = outcome(cua, inst, config.radio, links);
  rec.ca = outcome(ca, inst, config.radio, links);
  return rec;
}

ExperimentResults run_monte_carlo(const ExperimentConfig& config,
                                  const std::function<void(const RunRecord&)>& on_run) {
  config.validate();
  struct Task {
    Scenario scenario;
    int nodes;
    int run;
  };
  std::vector<Task> tasks;
  for (Scenario s : config.scenarios) {
    for (int n : config.node_counts) {
      for (int r = 0; r < config.runs; ++r) tasks.push_back({s, n, r});
    }
  }

  ExperimentResults results;
  results.config = config;
  results.runs.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        results.runs[idx] = run_single(config, tasks[idx].scenario, tasks[idx].nodes, tasks[idx].run);
        if (on_run) {
          std::lock_guard lock(report_mutex);
          on_run(results.runs[idx]);
        }
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  results.cells = summarize(config, results.runs);
  return results;
}

std::vector<CellSummary> summarize(const ExperimentConfig& config,
                                   const std::vector<RunRecord>& runs) {
  std::vector<CellSummary> cells;
  for (Scenario s : config.scenarios) {
    for (int n : config.node_counts) {
      CellSummary c;
      c.scenario = s;
      c.nodes = n;
      std::vector<double> cua_rates, ca_rates, improvements;
      double travel_cua = 0.0, travel_ca = 0.0, travel_inc = 0.0;
      double col_cua = 0.0, col_ca = 0.0, pairs = 0.0;
      for (const auto& r : runs) {
        if (r.scenario != s || r.nodes != n) continue;
        if (!r.both_optimal()) {
          ++c.excluded;
          continue;
        }
        ++c.included;
        cua_rates.push_back(r.cua.overall_rate_bps / 1e6);
        ca_rates.push_back(r.ca.overall_rate_bps / 1e6);
        improvements.push_back(r.rate_improvement_pct());
        travel_cua += r.cua.travel_time_s;
        travel_ca += r.ca.travel_time_s;
        travel_inc += r.travel_increase_pct();
        col_cua += r.cua.collisions;
        col_ca += r.ca.collisions;
        pairs += r.h_pairs;
      }
      c.cua_rate_mbps = box_stats(cua_rates);
      c.ca_rate_mbps = box_stats(ca_rates);
      if (c.included > 0) {
        const double k = c.included;
        const BoxStats imp = box_stats(improvements);
        c.mean_improvement_pct = imp.mean;
        c.min_improvement_pct = imp.min;
        c.max_improvement_pct = imp.max;
        c.mean_travel_cua_s = travel_cua / k;
        c.mean_travel_ca_s = travel_ca / k;
        c.mean_travel_increase_pct = travel_inc / k;
        c.mean_collisions_cua = col_cua / k;
        c.mean_collisions_ca = col_ca / k;
        c.mean_h_pairs = pairs / k;
      }
      cells.push_back(c);
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::string box_plot_csv(const ExperimentResults& results) {
  std::ostringstream os;
  os << "scenario,n_nodes,scheme,min_mbps,q1_mbps,median_mbps,q3_mbps,max_mbps,mean_mbps,"
        "runs_included,runs_excluded\n";
  for (const auto& c : results.cells) {
    for (int scheme = 0; scheme < 2; ++scheme) {
      const BoxStats& b = scheme == 0 ? c.cua_rate_mbps : c.ca_rate_mbps;
      os << to_string(c.scenario) << ',' << c.nodes << ',' << (scheme == 0 ? "MP-CUA" : "MP-CA")
         << ',' << fixed(b.min, 1) << ',' << fixed(b.q1, 1) << ',' << fixed(b.median, 1) << ','
         << fixed(b.q3, 1) << ',' << fixed(b.max, 1) << ',' << fixed(b.mean, 1) << ','
         << c.included << ',' << c.excluded << '\n';
    }
  }
  return os.str();
}

std::string travel_time_csv(const ExperimentResults& results, Scenario scenario) {
  std::ostringstream os;
  os << "scheme";
  for (int n : results.config.node_counts) os << ",n_visit_" << n;
  os << '\n';
  for (int scheme = 0; scheme < 2; ++scheme) {
    os << (scheme == 0 ? "MP-CUA" : "MP-CA");
    for (int n : results.config.node_counts) {
      double value = 0.0;
      for (const auto& c : results.cells) {
        if (c.scenario == scenario && c.nodes == n) {
          value = scheme == 0 ? c.mean_travel_cua_s : c.mean_travel_ca_s;
        }
      }
      os << ',' << fixed(value, 4);
    }
    os << '\n';
  }
  return os.str();
}

std::string runs_csv(const ExperimentResults& results) {
  std::ostringstream os;
  os << "scenario,n_nodes,run,seed,h_pairs,"
        "cua_status,cua_travel_s,cua_rate_mbps,cua_collisions,cua_bb_nodes,"
        "ca_status,ca_travel_s,ca_rate_mbps,ca_collisions,ca_bb_nodes,"
        "rate_improvement_pct,travel_increase_pct\n";
  for (const auto& r : results.runs) {
    os << to_string(r.scenario) << ',' << r.nodes << ',' << r.run << ',' << r.seed << ','
       << r.h_pairs;
    for (const SchemeOutcome* o : {&r.cua, &r.ca}) {
      os << ',' << to_string(o->status) << ',' << fixed(o->travel_time_s, 4) << ','
         << fixed(o->overall_rate_bps / 1e6, 1) << ',' << o->collisions << ','
         << o->nodes_explored;
    }
    os << ',' << fixed(r.rate_improvement_pct(), 2) << ',' << fixed(r.travel_increase_pct(), 3)
       << '\n';
  }
  return os.str();
}

std::string summary_table(const ExperimentResults& results) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-6s %10s %10s %12s %12s %9s %9s %8s\n", "scenario",
                "nodes", "mean_imp%", "max_imp%", "travel_cua", "travel_ca", "coll_cua",
                "coll_ca", "incl/exc");
  os << line;
  for (const auto& c : results.cells) {
    std::snprintf(line, sizeof line, "%-8s %-6d %10.2f %10.2f %12.4f %12.4f %9.2f %9.2f %4d/%-3d\n",
                  std::string(to_string(c.scenario)).c_str(), c.nodes, c.mean_improvement_pct,
                  c.max_improvement_pct, c.mean_travel_cua_s, c.mean_travel_ca_s,
                  c.mean_collisions_cua, c.mean_collisions_ca, c.included, c.excluded);
    os << line;
  }
  return os.str();
}

std::vector<std::filesystem::path> export_results(const ExperimentResults& results,
                                                  const std::filesystem::path& dir,
                                                  ExportFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    write_text_file(path, text);
    written.push_back(path);
  };
  if (format != ExportFormat::kJson) {
    emit("box_plot.csv", box_plot_csv(results));
    for (Scenario s : results.config.scenarios) {
      emit("travel_time_" + std::string(to_string(s)) + ".csv", travel_time_csv(results, s));
    }
    emit("runs.csv", runs_csv(results));
  }
  if (format != ExportFormat::kCsv) emit("results.json", results_to_json(results));
  emit("manifest.json", manifest_to_json(results));
  return written;
}

}  // namespace mrpath
