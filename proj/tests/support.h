#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "mrpath/instance.h"
#include "mrpath/model.h"
#include "mrpath/solver.h"

namespace mrpath::testing {

/// Default three-cell layout with explicit node positions, windows [0, horizon]
/// and no collision pairs unless added.
inline Instance make_instance(const std::vector<Vec2>& points, int robots,
                              double horizon = 200.0, double service = 2.0,
                              double velocity = 5.0) {
  Instance inst;
  inst.layout = build_layout(50.0, 12);
  inst.range_limit = std::sqrt(3.0) * 50.0;
  inst.velocity = velocity;
  inst.robots = robots;
  inst.nodes.depot_position = inst.layout.depot;
  inst.nodes.depot_window = {0.0, horizon};
  int id = 1;
  for (Vec2 p : points) {
    inst.nodes.nodes.push_back({id++, p, {0.0, horizon}, service});
  }
  inst.collisions = CollisionMatrix(static_cast<int>(points.size()));
  return inst;
}

/// Small random instance with a mix of loose and tight windows; used by
/// oracle comparisons.
inline Instance random_small_instance(std::uint64_t seed, int visits, int robots) {
  InstanceOptions opts;
  std::mt19937_64 rng(seed);
  opts.sampling.service_time = 1.0 + 4.0 * uniform01(rng);
  const bool tight = uniform01(rng) < 0.5;
  const Scenario scenario = uniform01(rng) < 0.7 ? Scenario::kA : Scenario::kB;
  Instance inst = generate_instance(scenario, visits, robots, derive_seed(seed, 99), opts);
  if (tight) {
    // Arrivals cannot wait, so windows open early and close at varying times.
    for (auto& node : inst.nodes.nodes) {
      const double open = uniform01(rng) < 0.5 ? 0.0 : uniform(rng, 0.0, 8.0);
      node.window = {open, open + uniform(rng, 12.0, 45.0)};
    }
    inst.nodes.depot_window.latest = 80.0;
  }
  return inst;
}

using RouteSet = std::vector<std::vector<int>>;

/// Every assignment of the visit nodes to `robots` labelled sequences, each
/// wrapped with the depot source 0 and sink v+1. Routes may be empty.
inline void for_each_route_set(int visits, int robots, const std::function<void(const RouteSet&)>& fn) {
  std::vector<int> perm(visits);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> cuts(robots - 1, 0);
  std::function<void(int, int)> place = [&](int idx, int from) {
    if (idx == robots - 1) {
      RouteSet routes(robots);
      int pos = 0;
      for (int k = 0; k < robots; ++k) {
        const int end = k + 1 < robots ? cuts[k] : visits;
        routes[k].push_back(0);
        for (; pos < end; ++pos) routes[k].push_back(perm[pos]);
        routes[k].push_back(visits + 1);
      }
      fn(routes);
      return;
    }
    for (int c = from; c <= visits; ++c) {
      cuts[idx] = c;
      place(idx + 1, c);
    }
  };
  do {
    place(0, 0);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

/// Arrival times implied by the no-wait chains, indexed by node id.
inline std::vector<double> chain_times(const Instance& inst, const RouteSet& routes) {
  const TravelTimes travel = inst.travel_times();
  std::vector<double> t(inst.visit_count() + 2, std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : routes) {
    double ready = inst.nodes.depot_window.earliest;
    for (std::size_t s = 1; s + 1 < r.size(); ++s) {
      t[r[s]] = ready + travel(r[s - 1], r[s]);
      ready = t[r[s]] + inst.nodes.visit(r[s]).service_time;
    }
  }
  return t;
}

inline Solution as_solution(const Instance& inst, Variant variant, const RouteSet& routes) {
  Solution sol;
  sol.variant = variant;
  sol.status = SolveStatus::kFeasible;
  sol.routes = routes;
  sol.arrival_times = chain_times(inst, routes);
  sol.objective = route_travel_time(routes, inst.travel_times());
  return sol;
}

/// Model feasibility of a labelled route set: fixes x (and, for CA, each
/// complementary z choice) and asks whether arrival times exist.
inline bool model_admits(const MilpModel& model, const RouteSet& routes) {
  std::vector<double> values(model.variables.size(), 0.0);
  for (std::size_t k = 0; k < routes.size(); ++k) {
    for (std::size_t s = 1; s < routes[k].size(); ++s) {
      const int idx = model.x_index(routes[k][s - 1], routes[k][s], static_cast<int>(k));
      if (idx < 0) return false;
      values[idx] = 1.0;
    }
  }
  const auto& pairs = model.routing.collision_pairs;
  if (model.variant == Variant::kCollisionUnaware || pairs.empty()) {
    return complete_continuous(model, values).has_value();
  }
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const bool first = (mask >> p) & 1u;
      values[model.z_index(pairs[p].first, pairs[p].second)] = first ? 1.0 : 0.0;
      values[model.z_index(pairs[p].second, pairs[p].first)] = first ? 0.0 : 1.0;
    }
    if (complete_continuous(model, values).has_value()) return true;
  }
  return false;
}

}  // namespace mrpath::testing
