#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mrpath/instance.h"
#include "mrpath/radio.h"
#include "mrpath/solver.h"

namespace mrpath {

/// Quasi-static link realisations for one run: one sample per (visit node,
/// BS). Shared between the schemes evaluated on the same instance.
class LinkTable {
 public:
  LinkTable() = default;
  LinkTable(int visit_count, int cells) : cells_(cells), samples_(static_cast<std::size_t>(visit_count) * cells) {}

  const LinkSample& at(int node, CellId cell) const {
    return samples_[static_cast<std::size_t>(node - 1) * cells_ + cell];
  }
  LinkSample& at(int node, CellId cell) {
    return samples_[static_cast<std::size_t>(node - 1) * cells_ + cell];
  }

 private:
  int cells_ = 0;
  std::vector<LinkSample> samples_;
};

LinkTable sample_links(const Instance& instance, const RadioParams& radio, std::mt19937_64& rng);

struct NodeEvaluation {
  int node = 0;
  int robot = 0;  // 1-based
  CellId serving_cell = 0;
  double start = 0.0;  // occupancy interval [start, end]
  double end = 0.0;
  double sinr = 0.0;
  double rate_bps = 0.0;
  bool collided = false;
};

struct CollisionEvent {
  int first = 0;
  int second = 0;
  double overlap_start = 0.0;
  double overlap_end = 0.0;
};

struct ScheduleEvaluation {
  std::vector<NodeEvaluation> per_node;  // ordered by node id
  std::vector<CollisionEvent> collision_events;
  double overall_rate_bps = 0.0;  // mean over visited nodes
  double total_travel_time_s = 0.0;
};

/// Downlink service at each visited node. A node whose occupancy interval
/// overlaps that of an h-partner sees the partner's serving BS through its
/// main lobe; every other BS leaks through side lobes when enabled.
/// Throws std::invalid_argument for schedules that fail validation.
ScheduleEvaluation evaluate_schedule(const Solution& solution, const Instance& instance,
                                     const RadioParams& radio, const LinkTable& links);

ScheduleEvaluation evaluate_schedule(const Solution& solution, const Instance& instance,
                                     const RadioParams& radio, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Monte Carlo experiments

struct ExperimentConfig {
  std::vector<Scenario> scenarios{Scenario::kA, Scenario::kB};
  std::vector<int> node_counts{12, 14, 16, 18};
  int robots = 3;
  int runs = 100;
  std::uint64_t base_seed = 20230601;
  int threads = 0;  // 0 = hardware concurrency
  InstanceOptions instance;
  RadioParams radio;
  SolveLimits limits;

  void validate() const;
};

struct SchemeOutcome {
  SolveStatus status = SolveStatus::kNoSolution;
  double travel_time_s = 0.0;
  double overall_rate_bps = 0.0;
  int collisions = 0;
  std::int64_t nodes_explored = 0;
};

struct RunRecord {
  Scenario scenario = Scenario::kA;
  int nodes = 0;
  int run = 0;
  std::uint64_t seed = 0;
  int h_pairs = 0;
  SchemeOutcome cua;
  SchemeOutcome ca;

  bool both_optimal() const {
    return cua.status == SolveStatus::kOptimal && ca.status == SolveStatus::kOptimal;
  }
  double rate_improvement_pct() const;
  double travel_increase_pct() const;
};

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Quartiles by linear interpolation between order statistics.
BoxStats box_stats(std::vector<double> values);

struct CellSummary {
  Scenario scenario = Scenario::kA;
  int nodes = 0;
  int included = 0;  // runs with both schemes optimal
  int excluded = 0;
  BoxStats cua_rate_mbps;
  BoxStats ca_rate_mbps;
  double mean_travel_cua_s = 0.0;
  double mean_travel_ca_s = 0.0;
  double mean_improvement_pct = 0.0;
  double min_improvement_pct = 0.0;
  double max_improvement_pct = 0.0;
  double mean_travel_increase_pct = 0.0;
  double mean_collisions_cua = 0.0;
  double mean_collisions_ca = 0.0;
  double mean_h_pairs = 0.0;
};

struct ExperimentResults {
  ExperimentConfig config;
  std::vector<RunRecord> runs;  // ordered by (scenario, nodes, run)
  std::vector<CellSummary> cells;
};

std::uint64_t run_seed(std::uint64_t base_seed, Scenario scenario, int nodes, int run);

/// One Monte Carlo draw: sample, solve both programs, evaluate both with
/// common link realisations.
RunRecord run_single(const ExperimentConfig& config, Scenario scenario, int nodes, int run);

/// All (scenario, node count, run) cells. Output is independent of thread
/// count and completion order.
ExperimentResults run_monte_carlo(const ExperimentConfig& config,
                                  const std::function<void(const RunRecord&)>& on_run = {});

std::vector<CellSummary> summarize(const ExperimentConfig& config,
                                   const std::vector<RunRecord>& runs);

// Plot-ready tables. Rates in Mbps with one decimal.
std::string box_plot_csv(const ExperimentResults& results);
std::string travel_time_csv(const ExperimentResults& results, Scenario scenario);
std::string runs_csv(const ExperimentResults& results);
std::string summary_table(const ExperimentResults& results);

enum class ExportFormat { kCsv, kJson, kBoth };

/// Writes box_plot.csv, travel_time_<S>.csv, runs.csv (CSV) and
/// results.json (JSON) plus manifest.json. Returns the written paths.
std::vector<std::filesystem::path> export_results(const ExperimentResults& results,
                                                  const std::filesystem::path& dir,
                                                  ExportFormat format = ExportFormat::kBoth);

}  // namespace mrpath
