#include "mrpath/solver.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mrpath {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNoSolution: return "no_solution";
  }
  return "unknown";
}

SolveStatus parse_status(std::string_view text) {
  for (auto s : {SolveStatus::kOptimal, SolveStatus::kFeasible, SolveStatus::kInfeasible,
                 SolveStatus::kNoSolution}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown solve status '" + std::string(text) + "'");
}

void SolveLimits::validate() const {
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (node_limit <= 0) throw std::invalid_argument("node limit must be positive");
  if (!(gap_tolerance > 0.0 && gap_tolerance < 1.0)) {
    throw std::invalid_argument("gap tolerance must lie in (0, 1)");
  }
}

double route_travel_time(const std::vector<std::vector<int>>& routes, const TravelTimes& travel) {
  double total = 0.0;
  for (const auto& r : routes) {
    for (std::size_t s = 1; s < r.size(); ++s) total += travel(r[s - 1], r[s]);
  }
  return total;
}

namespace {

constexpr float kInfF = std::numeric_limits<float>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTableBudgetBytes = 160.0 * 1024 * 1024;

float round_down(double x) {
  if (std::isinf(x)) return x > 0 ? kInfF : -kInfF;
  float f = static_cast<float>(x);
  if (static_cast<double>(f) > x) f = std::nextafter(f, -kInfF);
  return f;
}

bool same_objective(double a, double b) {
  return std::abs(a - b) <= kObjectiveTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Routes are canonical when non-empty routes come first ordered by first
// visit, followed by idle routes.
void canonicalize(std::vector<std::vector<int>>& routes) {
  std::stable_sort(routes.begin(), routes.end(), [](const auto& a, const auto& b) {
    const bool ia = a.size() <= 2;
    const bool ib = b.size() <= 2;
    if (ia != ib) return !ia;
    if (ia) return false;
    return a[1] < b[1];
  });
}

// Replace `best` with `cand` if cand is cheaper, or equally cheap and
// lexicographically smaller.
bool prefer(double cand_obj, const std::vector<std::vector<int>>& cand, double best_obj,
            const std::vector<std::vector<int>>& best) {
  if (!std::isfinite(best_obj)) return true;
  if (same_objective(cand_obj, best_obj)) return cand < best;
  return cand_obj < best_obj;
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundTables

BoundTables::BoundTables(const RoutingData& rd) : visits_(rd.visits), robots_(rd.robots) {
  const int v = visits_;
  if (v > 24) return;
  const double bytes = 2.0 * robots_ * std::ldexp(1.0, v) * v * sizeof(float);
  if (bytes > kTableBudgetBytes) return;
  available_ = true;

  const std::uint32_t full = 1u << v;
  const int sink = rd.sink();
  fleet_.assign(robots_ + 1, std::vector<float>(full, kInfF));
  tail_.resize(robots_);
  owed_.resize(robots_);
  fleet_[0][0] = 0.0f;

  auto at = [v](std::uint32_t set, int p) { return static_cast<std::size_t>(set) * v + (p - 1); };

  auto fill_fleet = [&](int m) {
    const auto& done = tail_[m - 1];
    const auto& owed = owed_[m - 1];
    if (rd.allow_idle && rd.arc(0, sink) && fleet_[m - 1][0] != kInfF) {
      fleet_[m][0] = round_down(rd.travel(0, sink) + static_cast<double>(fleet_[m - 1][0]));
    }
    for (std::uint32_t s = 1; s < full; ++s) {
      const int lowest = std::countr_zero(s) + 1;
      double best = kInf;
      for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest) + 1;
        if (!rd.arc(0, j)) continue;
        const std::uint32_t left = s ^ (1u << (j - 1));
        const float r = j == lowest ? done[at(left, j)] : owed[at(left, j)];
        if (r != kInfF) best = std::min(best, rd.travel(0, j) + static_cast<double>(r));
      }
      fleet_[m][s] = round_down(best);
    }
  };

  for (int m = 0; m < robots_; ++m) {
    if (m >= 1) fill_fleet(m);
    auto& done = tail_[m];
    auto& owed = owed_[m];
    done.assign(static_cast<std::size_t>(full) * v, kInfF);
    owed.assign(static_cast<std::size_t>(full) * v, kInfF);
    const auto& fleet = fleet_[m];
    for (std::uint32_t u = 0; u < full; ++u) {
      const int lowest = u == 0 ? 0 : std::countr_zero(u) + 1;
      for (int p = 1; p <= v; ++p) {
        if (u & (1u << (p - 1))) continue;
        double best_done = kInf;
        double best_owed = kInf;
        if (rd.arc(p, sink) && fleet[u] != kInfF) {
          best_done = rd.travel(p, sink) + static_cast<double>(fleet[u]);
        }
        for (std::uint32_t rest = u; rest != 0; rest &= rest - 1) {
          const int j = std::countr_zero(rest) + 1;
          if (!rd.arc(p, j)) continue;
          const std::uint32_t left = u ^ (1u << (j - 1));
          const float rd_done = done[at(left, j)];
          if (rd_done != kInfF) {
            best_done = std::min(best_done, rd.travel(p, j) + static_cast<double>(rd_done));
          }
          const float ro = j == lowest ? rd_done : owed[at(left, j)];
          if (ro != kInfF) best_owed = std::min(best_owed, rd.travel(p, j) + static_cast<double>(ro));
        }
        done[at(u, p)] = round_down(best_done);
        owed[at(u, p)] = round_down(best_owed);
      }
    }
  }
  fill_fleet(robots_);
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

class Search {
 public:
  Search(const MilpModel& model, const SolveLimits& limits, const BoundTables* tables)
      : model_(model), rd_(model.routing), limits_(limits) {
    if (rd_.visits > 31) throw std::invalid_argument("solver supports at most 31 visit nodes");
    if (tables != nullptr && tables->available()) {
      tables_ = tables;
    } else {
      owned_ = std::make_unique<BoundTables>(rd_);
      if (owned_->available()) tables_ = owned_.get();
    }
    collision_aware_ = model.variant == Variant::kCollisionAware;
    partners_.assign(rd_.size(), {});
    if (collision_aware_) {
      for (auto [i, j] : rd_.collision_pairs) {
        partners_[i].push_back(j);
        partners_[j].push_back(i);
      }
    }
    min_in_.assign(rd_.size(), kInf);
    for (int j = 1; j <= rd_.visits; ++j) {
      for (int i = 0; i <= rd_.visits; ++i) {
        if (i != j && rd_.arc(i, j)) min_in_[j] = std::min(min_in_[j], rd_.travel(i, j));
      }
    }
    full_ = rd_.visits == 32 ? ~0u : (1u << rd_.visits) - 1;
  }

  Solution run() {
    start_ = std::chrono::steady_clock::now();
    Solution out;
    out.variant = model_.variant;

    routes_.assign(rd_.robots, std::vector<int>{0});
    arrival_.assign(rd_.size(), std::numeric_limits<double>::quiet_NaN());

    root_lb_ = fleet_lb(rd_.robots, full_);
    warm_start();
    trace_.push_back({0, incumbent_, std::min(root_lb_, incumbent_)});

    if (std::isfinite(root_lb_)) explore(0, 0, rd_.earliest[0], 0.0, false);

    out.stats.nodes_explored = nodes_;
    if (!aborted_) {
      if (std::isfinite(incumbent_)) {
        out.status = SolveStatus::kOptimal;
        out.stats.lower_bound = incumbent_;
      } else {
        out.status = SolveStatus::kInfeasible;
      }
    } else {
      out.status = std::isfinite(incumbent_) ? SolveStatus::kFeasible : SolveStatus::kNoSolution;
      double lb = std::min(pending_lb_, incumbent_);
      out.stats.lower_bound = std::max(root_lb_, lb);
    }
    if (std::isfinite(incumbent_)) {
      out.routes = best_routes_;
      out.arrival_times = best_arrival_;
      out.objective = incumbent_;
      out.stats.gap = std::max(0.0, (incumbent_ - out.stats.lower_bound) /
                                        std::max(std::abs(incumbent_), 1e-12));
    } else {
      out.stats.gap = kInf;
      if (out.status == SolveStatus::kInfeasible) {
        std::ostringstream hint;
        if (!model_.diagnostics.empty()) {
          hint << model_.diagnostics.front();
        } else if (!std::isfinite(root_lb_)) {
          hint << "no route set can cover every node with the available arcs and robots";
        } else if (collision_aware_) {
          hint << "no route set serves every collision pair in disjoint time intervals "
                  "within the windows";
        } else {
          hint << "no route set meets every time window";
        }
        out.hint = hint.str();
      } else {
        out.hint = "search limit reached before a feasible schedule was found";
      }
    }
    trace_.push_back({nodes_, incumbent_, std::isfinite(incumbent_)
                                              ? std::min(out.stats.lower_bound, incumbent_)
                                              : out.stats.lower_bound});
    out.stats.trace = std::move(trace_);
    return out;
  }

 private:
  struct Child {
    double lb;
    int next;  // visit node id, or sink to close the route
    double time;
  };

  // Children whose bound reaches this value cannot improve the incumbent.
  double cutoff() const {
    if (!std::isfinite(incumbent_)) return kInf;
    const double scale = std::max(1.0, std::abs(incumbent_));
    return incumbent_ - limits_.gap_tolerance * std::abs(incumbent_) +
           kObjectiveTolerance * scale;
  }

  double fallback_sum(std::uint32_t set) const {
    double s = 0.0;
    for (std::uint32_t rest = set; rest != 0; rest &= rest - 1) {
      s += min_in_[std::countr_zero(rest) + 1];
    }
    return s;
  }

  // Lower bound for `m` fresh robots covering `set`.
  double fleet_lb(int m, std::uint32_t set) const {
    if (tables_ != nullptr) return static_cast<double>(tables_->fleet(m, set));
    if (!rd_.allow_idle && std::popcount(set) < m) return kInf;
    if (m == 0 && set != 0) return kInf;
    return fallback_sum(set);
  }

  // Lower bound for a robot at visit node p plus `m` fresh robots covering `set`.
  double tail_lb(int m, std::uint32_t set, int p, bool owed) const {
    if (tables_ != nullptr) return static_cast<double>(tables_->tail(m, set, p, owed));
    if (!rd_.allow_idle && std::popcount(set) < m) return kInf;
    return fallback_sum(set);
  }

  bool conflicts(int j, double tj) const {
    for (int q : partners_[j]) {
      if ((mask_ & (1u << (q - 1))) == 0) continue;
      if (intervals_overlap(tj, rd_.service[j], arrival_[q], rd_.service[q])) return true;
    }
    return false;
  }

  bool check_limits() {
    if (nodes_ >= limits_.node_limit) return true;
    if ((nodes_ & 1023) == 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (elapsed >= limits_.time_limit_s) return true;
    }
    return false;
  }

  void record(std::vector<std::vector<int>> routes) {
    const double obj = route_travel_time(routes, rd_.travel);
    canonicalize(routes);
    if (!prefer(obj, routes, incumbent_, best_routes_)) return;
    incumbent_ = obj;
    best_routes_ = std::move(routes);
    best_arrival_ = arrival_;
    trace_.push_back({nodes_, incumbent_, std::min(root_lb_, incumbent_)});
  }

  std::vector<std::vector<int>> finished_routes(int closing_robot) const {
    auto routes = routes_;
    const int sink = rd_.sink();
    for (int k = 0; k < rd_.robots; ++k) {
      if (k >= closing_robot) routes[k].push_back(sink);
    }
    return routes;
  }

  // Robot k is at p (0 = still at the depot). `owed` means the robot has not
  // yet visited the node it is required to cover, which is then min(open).
  void explore(int k, int p, double t, double cost, bool owed) {
    ++nodes_;
    const std::uint32_t open = full_ & ~mask_;
    const int m = rd_.robots - 1 - k;
    if (check_limits()) {
      aborted_ = true;
      pending_lb_ = std::min(pending_lb_, cost + (p == 0 ? fleet_lb(m + 1, open)
                                                         : tail_lb(m, open, p, owed)));
      return;
    }
    const int sink = rd_.sink();
    const double e0 = rd_.earliest[0];
    const double depart = p == 0 ? e0 : t + rd_.service[p];
    const int lowest = open == 0 ? 0 : std::countr_zero(open) + 1;
    if (p == 0) owed = open != 0;

    std::vector<Child> children;
    children.reserve(std::popcount(open) + 1);
    for (std::uint32_t rest = open; rest != 0; rest &= rest - 1) {
      const int j = std::countr_zero(rest) + 1;
      if (!rd_.arc(p, j)) continue;
      const double tj = depart + rd_.travel(p, j);
      if (tj < rd_.earliest[j] - kTimeTolerance || tj > rd_.latest[j] + kTimeTolerance) continue;
      if (collision_aware_ && conflicts(j, tj)) continue;
      const double lb =
          cost + rd_.travel(p, j) + tail_lb(m, open & ~(1u << (j - 1)), j, owed && j != lowest);
      if (lb <= cutoff()) children.push_back({lb, j, tj});
    }
    if (p != 0 && !owed && rd_.arc(p, sink) &&
        depart + rd_.travel(p, sink) <= rd_.horizon + kTimeTolerance) {
      const double closed = cost + rd_.travel(p, sink);
      if (k == rd_.robots - 1) {
        if (open == 0) record(finished_routes(k));
      } else {
        const double lb = closed + fleet_lb(m, open);
        if (lb <= cutoff()) children.push_back({lb, sink, 0.0});
      }
    }
    if (p == 0 && open == 0 && rd_.allow_idle && rd_.arc(0, sink)) {
      record(finished_routes(k));
      return;
    }

    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      return a.lb < b.lb || (a.lb == b.lb && a.next < b.next);
    });
    for (const Child& ch : children) {
      if (aborted_) {
        pending_lb_ = std::min(pending_lb_, ch.lb);
        continue;
      }
      if (ch.lb > cutoff()) break;
      if (ch.next == sink) {
        routes_[k].push_back(sink);
        explore(k + 1, 0, e0, cost + rd_.travel(p, sink), false);
        routes_[k].pop_back();
      } else {
        const int j = ch.next;
        mask_ |= 1u << (j - 1);
        routes_[k].push_back(j);
        arrival_[j] = ch.time;
        explore(k, j, ch.time, cost + rd_.travel(p, j), owed && j != lowest);
        arrival_[j] = std::numeric_limits<double>::quiet_NaN();
        routes_[k].pop_back();
        mask_ &= ~(1u << (j - 1));
      }
    }
  }

  // Time-ordered nearest-feasible-neighbour construction.
  void warm_start() {
    const int v = rd_.visits;
    const int sink = rd_.sink();
    std::vector<std::vector<int>> routes(rd_.robots, std::vector<int>{0});
    std::vector<double> arrival(rd_.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> ready(rd_.robots, rd_.earliest[0]);
    std::vector<bool> active(rd_.robots, true);
    std::uint32_t visited = 0;
    auto overlaps = [&](int j, double tj) {
      for (int q : partners_[j]) {
        if ((visited & (1u << (q - 1))) == 0) continue;
        if (intervals_overlap(tj, rd_.service[j], arrival[q], rd_.service[q])) return true;
      }
      return false;
    };
    while (true) {
      int k = -1;
      for (int r = 0; r < rd_.robots; ++r) {
        if (active[r] && (k < 0 || ready[r] < ready[k])) k = r;
      }
      if (k < 0) break;
      const int p = routes[k].back();
      int best = -1;
      double best_t = 0.0;
      for (int j = 1; j <= v; ++j) {
        if (visited & (1u << (j - 1))) continue;
        if (!rd_.arc(p, j)) continue;
        const double tj = ready[k] + rd_.travel(p, j);
        if (tj < rd_.earliest[j] - kTimeTolerance || tj > rd_.latest[j] + kTimeTolerance) continue;
        if (!rd_.arc(j, sink) ||
            tj + rd_.service[j] + rd_.travel(j, sink) > rd_.horizon + kTimeTolerance) {
          continue;
        }
        if (overlaps(j, tj)) continue;
        if (best < 0 || rd_.travel(p, j) < rd_.travel(p, best)) {
          best = j;
          best_t = tj;
        }
      }
      if (best < 0) {
        active[k] = false;
        continue;
      }
      visited |= 1u << (best - 1);
      arrival[best] = best_t;
      routes[k].push_back(best);
      ready[k] = best_t + rd_.service[best];
    }
    if (visited != full_) return;
    for (auto& r : routes) {
      if (r.size() == 1 && !rd_.allow_idle) return;
      r.push_back(sink);
    }
    canonicalize(routes);
    const std::vector<double> saved = arrival_;
    arrival_ = arrival;
    record(std::move(routes));
    arrival_ = saved;
  }

  const MilpModel& model_;
  const RoutingData& rd_;
  SolveLimits limits_;
  const BoundTables* tables_ = nullptr;
  std::unique_ptr<BoundTables> owned_;
  bool collision_aware_ = false;
  std::vector<std::vector<int>> partners_;
  std::vector<double> min_in_;
  std::uint32_t full_ = 0;

  std::uint32_t mask_ = 0;
  std::vector<std::vector<int>> routes_;
  std::vector<double> arrival_;

  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_;
  double root_lb_ = 0.0;
  double pending_lb_ = kInf;
  double incumbent_ = kInf;
  std::vector<std::vector<int>> best_routes_;
  std::vector<double> best_arrival_;
  std::vector<BoundSample> trace_;
};

}  // namespace

Solution solve(const MilpModel& model, const SolveLimits& limits, const BoundTables* tables) {
  limits.validate();
  Search search(model, limits, tables);
  Solution sol = search.run();
  if (sol.has_schedule()) {
    const auto values = to_assignment(model, sol);
    const auto bad = violated_constraints(model, values);
    if (!bad.empty()) {
      throw std::logic_error("decoded schedule violates model row " + bad.front());
    }
    const double model_obj = objective_value(model, values);
    if (std::abs(model_obj - sol.objective) > 1e-6 * std::max(1.0, std::abs(sol.objective))) {
      throw std::logic_error("decoded objective disagrees with the model objective");
    }
  }
  return sol;
}

std::vector<double> to_assignment(const MilpModel& model, const Solution& solution) {
  std::vector<double> values(model.variables.size(), 0.0);
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& r = solution.routes[k];
    for (std::size_t s = 1; s < r.size(); ++s) {
      const int x = model.x_index(r[s - 1], r[s], static_cast<int>(k));
      if (x < 0) {
        throw std::invalid_argument("schedule uses an arc the model does not contain");
      }
      values[x] = 1.0;
    }
  }
  const auto& rd = model.routing;
  for (int i = 1; i <= rd.visits; ++i) {
    const int t = model.t_index(i);
    if (t >= 0 && i < static_cast<int>(solution.arrival_times.size()) &&
        std::isfinite(solution.arrival_times[i])) {
      values[t] = solution.arrival_times[i];
    }
  }
  for (auto [i, j] : rd.collision_pairs) {
    const int zij = model.z_index(i, j);
    const int zji = model.z_index(j, i);
    if (zij < 0 || zji < 0) continue;
    const bool i_first = solution.arrival_times[i] + rd.service[i] <=
                         solution.arrival_times[j] + kTimeTolerance;
    values[zij] = i_first ? 1.0 : 0.0;
    values[zji] = i_first ? 0.0 : 1.0;
  }
  return values;
}

// ---------------------------------------------------------------------------
// Brute force

Solution brute_force(const Instance& instance, Variant variant, bool allow_idle) {
  const int v = instance.visit_count();
  const int robots = instance.robots;
  if (v > 9 || robots > 3) {
    throw std::invalid_argument("brute force is limited to 9 visit nodes and 3 robots");
  }
  const TravelTimes travel = instance.travel_times();
  const NodeSet& ns = instance.nodes;
  const int sink = ns.sink_id();
  const double e0 = ns.depot_window.earliest;
  const double l0 = ns.depot_window.latest;
  const auto pairs = instance.collisions.pairs();
  const bool aware = variant == Variant::kCollisionAware;

  std::vector<int> perm(v);
  for (int i = 0; i < v; ++i) perm[i] = i + 1;

  Solution best;
  best.variant = variant;
  std::vector<double> times(v + 2, std::numeric_limits<double>::quiet_NaN());

  // Schedule one labelled route set; false when any rule fails.
  auto feasible = [&](const std::vector<std::vector<int>>& routes) {
    for (const auto& r : routes) {
      if (r.size() == 2 && !allow_idle) return false;
      double ready = e0;
      int prev = 0;
      for (std::size_t s = 1; s + 1 < r.size(); ++s) {
        const int j = r[s];
        const double tj = ready + travel(prev, j);
        const auto& node = ns.visit(j);
        if (tj < node.window.earliest - kTimeTolerance || tj > node.window.latest + kTimeTolerance) {
          return false;
        }
        times[j] = tj;
        ready = tj + node.service_time;
        prev = j;
      }
      if (prev != 0 && ready + travel(prev, sink) > l0 + kTimeTolerance) return false;
    }
    if (aware) {
      for (auto [i, j] : pairs) {
        if (intervals_overlap(times[i], ns.visit(i).service_time, times[j],
                              ns.visit(j).service_time)) {
          return false;
        }
      }
    }
    return true;
  };

  std::vector<int> cuts(std::max(0, robots - 1));
  std::vector<std::vector<int>> routes(robots);
  do {
    // Enumerate non-decreasing cut positions c_1 <= ... <= c_{K-1} in [0, v].
    std::function<void(int, int)> place = [&](int idx, int from) {
      if (idx == robots - 1) {
        int begin = 0;
        for (int k = 0; k < robots; ++k) {
          const int end = k < robots - 1 ? cuts[k] : v;
          routes[k].assign(1, 0);
          routes[k].insert(routes[k].end(), perm.begin() + begin, perm.begin() + end);
          routes[k].push_back(sink);
          begin = end;
        }
        if (!feasible(routes)) return;
        auto canon = routes;
        canonicalize(canon);
        const double obj = route_travel_time(canon, travel);
        if (prefer(obj, canon, best.objective, best.routes)) {
          best.objective = obj;
          best.routes = std::move(canon);
          best.arrival_times = times;
        }
        return;
      }
      for (int c = from; c <= v; ++c) {
        cuts[idx] = c;
        place(idx + 1, c);
      }
    };
    place(0, 0);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (std::isfinite(best.objective)) {
    best.status = SolveStatus::kOptimal;
    best.stats.lower_bound = best.objective;
  } else {
    best.status = SolveStatus::kInfeasible;
    best.hint = "exhaustive enumeration found no feasible schedule";
  }
  return best;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::failed(std::string_view clause) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.clause == clause; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "all clauses pass";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.clause;
    if (!v.nodes.empty()) {
      os << " [";
      for (std::size_t i = 0; i < v.nodes.size(); ++i) os << (i ? "," : "") << v.nodes[i];
      os << "]";
    }
    if (!v.detail.empty()) os << ": " << v.detail;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate(const Solution& solution, const Instance& instance, Variant variant,
                          const ValidationOptions& options) {
  ValidationReport report;
  auto fail = [&](std::string clause, std::vector<int> nodes, std::string detail = {}) {
    report.violations.push_back({std::move(clause), std::move(nodes), std::move(detail)});
  };
  const NodeSet& ns = instance.nodes;
  const int v = ns.visit_count();
  const int sink = ns.sink_id();
  const TravelTimes travel = instance.travel_times();
  const double e0 = ns.depot_window.earliest;
  const double l0 = ns.depot_window.latest;
  auto time_of = [&](int id) {
    if (id < 0 || id >= static_cast<int>(solution.arrival_times.size())) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return solution.arrival_times[id];
  };
  auto close = [](double a, double b) { return std::abs(a - b) <= kTimeTolerance; };

  if (static_cast<int>(solution.routes.size()) != instance.robots) {
    fail("route_count", {}, "expected " + std::to_string(instance.robots) + " routes, got " +
                                std::to_string(solution.routes.size()));
  }
  std::vector<int> seen(v + 2, 0);
  bool structure_ok = true;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& r = solution.routes[k];
    const int robot = static_cast<int>(k) + 1;
    if (r.empty() || r.front() != 0) {
      fail("route_start", {robot}, "route does not start at the depot source 0");
      structure_ok = false;
      continue;
    }
    if (r.size() < 2 || r.back() != sink) {
      fail("route_end", {robot}, "route does not end at the depot sink");
      structure_ok = false;
      continue;
    }
    if (r.size() == 2 && !options.allow_idle) {
      fail("depart_once", {robot}, "robot never leaves the depot");
    }
    for (std::size_t s = 1; s + 1 < r.size(); ++s) {
      if (r[s] < 1 || r[s] > v) {
        fail("unknown_node", {r[s]});
        structure_ok = false;
      } else {
        ++seen[r[s]];
      }
    }
  }
  for (int i = 1; i <= v; ++i) {
    if (seen[i] > 1) fail("visit_once", {i}, "visited " + std::to_string(seen[i]) + " times");
    if (seen[i] == 0) fail("visit_once", {i}, "never visited");
  }

  if (structure_ok) {
    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
      const auto& r = solution.routes[k];
      double ready = e0;
      int prev = 0;
      for (std::size_t s = 1; s + 1 < r.size(); ++s) {
        const int j = r[s];
        const double expected = ready + travel(prev, j);
        const double tj = time_of(j);
        if (!std::isfinite(tj)) {
          fail("arrival_chain", {prev, j}, "missing arrival time");
        } else if (!close(tj, expected)) {
          fail(prev == 0 ? "first_arrival" : "arrival_chain", {prev, j},
               "t=" + std::to_string(tj) + " expected " + std::to_string(expected));
        }
        const auto& node = ns.visit(j);
        const double t_use = std::isfinite(tj) ? tj : expected;
        if (t_use < node.window.earliest - kTimeTolerance ||
            t_use > node.window.latest + kTimeTolerance) {
          fail("time_window", {j}, "t=" + std::to_string(t_use) + " outside [" +
                                       std::to_string(node.window.earliest) + ", " +
                                       std::to_string(node.window.latest) + "]");
        }
        ready = t_use + node.service_time;
        prev = j;
      }
      if (prev != 0 && ready + travel(prev, sink) > l0 + kTimeTolerance) {
        fail("return_deadline", {prev}, "back at " + std::to_string(ready + travel(prev, sink)) +
                                            " after horizon " + std::to_string(l0));
      }
    }
    const double recomputed = route_travel_time(solution.routes, travel);
    if (std::abs(recomputed - solution.objective) > 1e-6 * std::max(1.0, std::abs(recomputed))) {
      fail("objective", {}, "reported " + std::to_string(solution.objective) + ", routes give " +
                                std::to_string(recomputed));
    }
  }

  if (variant == Variant::kCollisionAware) {
    for (auto [i, j] : instance.collisions.pairs()) {
      const double ti = time_of(i);
      const double tj = time_of(j);
      if (!std::isfinite(ti) || !std::isfinite(tj)) continue;
      if (intervals_overlap(ti, ns.visit(i).service_time, tj, ns.visit(j).service_time)) {
        fail("collision_overlap", {i, j}, "service intervals overlap");
      }
    }
  }
  return report;
}

}  // namespace mrpath
