#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mrpath/instance.h"
#include "mrpath/model.h"
#include "mrpath/solver.h"
#include "support.h"

namespace mrpath {
namespace {

using testing::make_instance;
using testing::RouteSet;

class SolverMatchesOracle : public ::testing::TestWithParam<int> {};

TEST_P(SolverMatchesOracle, StatusObjectiveAndRoutes) {
  const int n = GetParam();
  const std::uint64_t seed = 500 + n;
  const int v = 3 + n % 5;
  const int k = 1 + n % 3;
  const Instance inst = testing::random_small_instance(seed, v, k);
  for (Variant variant : {Variant::kCollisionUnaware, Variant::kCollisionAware}) {
    const Solution exact = brute_force(inst, variant);
    const Solution got = solve(build_model(inst, variant));
    ASSERT_EQ(got.status == SolveStatus::kOptimal, exact.status == SolveStatus::kOptimal)
        << "seed " << seed << " " << to_string(variant);
    if (exact.status != SolveStatus::kOptimal) {
      EXPECT_EQ(got.status, SolveStatus::kInfeasible);
      EXPECT_FALSE(got.hint.empty());
      continue;
    }
    EXPECT_NEAR(got.objective, exact.objective, 1e-9 * std::max(1.0, exact.objective));
    EXPECT_EQ(got.routes, exact.routes) << "seed " << seed;
    EXPECT_TRUE(validate(got, inst, variant).ok()) << validate(got, inst, variant).summary();
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SolverMatchesOracle, ::testing::Range(0, 40));

TEST(SolverOracle, IdleRobotsAgreeWithOracle) {
  for (int n = 0; n < 10; ++n) {
    const Instance inst = testing::random_small_instance(900 + n, 2 + n % 3, 3);
    ModelOptions opt;
    opt.allow_idle_robots = true;
    for (Variant variant : {Variant::kCollisionUnaware, Variant::kCollisionAware}) {
      const Solution exact = brute_force(inst, variant, true);
      const Solution got = solve(build_model(inst, variant, opt));
      ASSERT_EQ(got.status, exact.status) << n;
      if (exact.has_schedule()) EXPECT_NEAR(got.objective, exact.objective, 1e-9);
    }
  }
}

TEST(SolverKnown, ThreeNodesOnALine) {
  const Instance inst = make_instance({{30.0, 0.0}, {10.0, 0.0}, {20.0, 0.0}}, 1);
  const Solution sol = solve(build_mp_cua(inst));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 12.0, 1e-12);
  ASSERT_EQ(sol.routes.size(), 1u);
  const std::vector<int> forward{0, 2, 3, 1, 4};
  std::vector<int> backward{0, 1, 3, 2, 4};
  EXPECT_TRUE(sol.routes[0] == forward || sol.routes[0] == backward);
  const double w = 2.0;
  if (sol.routes[0] == forward) {
    EXPECT_NEAR(sol.arrival_times[2], 2.0, 1e-12);
    EXPECT_NEAR(sol.arrival_times[3], 4.0 + w, 1e-12);
    EXPECT_NEAR(sol.arrival_times[1], 6.0 + 2 * w, 1e-12);
  }
}

TEST(SolverKnown, ForcedSimultaneityMakesCollisionAwareInfeasible) {
  Instance inst = make_instance({{10.0, 0.0}, {-10.0, 0.0}}, 2);
  for (auto& node : inst.nodes.nodes) node.window = {2.0, 2.0};
  inst.collisions.set(1, 2);
  const Solution cua = solve(build_mp_cua(inst));
  ASSERT_EQ(cua.status, SolveStatus::kOptimal);
  EXPECT_NEAR(cua.objective, 8.0, 1e-12);
  const Solution ca = solve(build_mp_ca(inst));
  EXPECT_EQ(ca.status, SolveStatus::kInfeasible);
  EXPECT_NE(ca.hint.find("collision"), std::string::npos);
  EXPECT_EQ(brute_force(inst, Variant::kCollisionAware).status, SolveStatus::kInfeasible);
}

TEST(SolverKnown, CollisionAwareSerializesAPair) {
  Instance inst = make_instance({{10.0, 0.0}, {-10.0, 0.0}, {0.0, 20.0}}, 2);
  inst.collisions.set(1, 2);
  const Solution cua = solve(build_mp_cua(inst));
  const Solution ca = solve(build_mp_ca(inst));
  ASSERT_EQ(ca.status, SolveStatus::kOptimal);
  EXPECT_TRUE(intervals_overlap(cua.arrival_times[1], 2.0, cua.arrival_times[2], 2.0));
  EXPECT_FALSE(intervals_overlap(ca.arrival_times[1], 2.0, ca.arrival_times[2], 2.0));
  EXPECT_GE(ca.objective, cua.objective - 1e-12);
  EXPECT_NEAR(ca.objective, brute_force(inst, Variant::kCollisionAware).objective, 1e-12);
  EXPECT_TRUE(validate(ca, inst, Variant::kCollisionAware).ok());
}

TEST(SolverKnown, TiesResolveToTheOracleRoutes) {
  const Instance inst = make_instance({{10.0, 0.0}, {-10.0, 0.0}, {0.0, 10.0}, {0.0, -10.0}}, 2);
  const Solution exact = brute_force(inst, Variant::kCollisionUnaware);
  const Solution got = solve(build_mp_cua(inst));
  ASSERT_EQ(got.status, SolveStatus::kOptimal);
  EXPECT_NEAR(got.objective, exact.objective, 1e-12);
  EXPECT_EQ(got.routes, exact.routes);
  EXPECT_EQ(got.routes, solve(build_mp_cua(inst)).routes);
}

TEST(SolverProperties, CollisionAwareNeverBeatsUnaware) {
  for (int n = 0; n < 15; ++n) {
    const Instance inst = generate_instance(Scenario::kA, 8, 3, 40 + n);
    const Solution cua = solve(build_mp_cua(inst));
    const Solution ca = solve(build_mp_ca(inst));
    ASSERT_EQ(cua.status, SolveStatus::kOptimal);
    if (ca.status == SolveStatus::kOptimal) EXPECT_GE(ca.objective, cua.objective - 1e-9);
  }
}

TEST(SolverProperties, ModelOptionsDoNotChangeTheOptimum) {
  for (int n = 0; n < 8; ++n) {
    const Instance inst = testing::random_small_instance(70 + n, 6, 2);
    for (Variant variant : {Variant::kCollisionUnaware, Variant::kCollisionAware}) {
      const Solution base = solve(build_model(inst, variant));
      ModelOptions loose;
      loose.prune_arcs = false;
      ModelOptions tight;
      tight.per_constraint_big_m = true;
      for (const ModelOptions& opt : {loose, tight}) {
        const Solution alt = solve(build_model(inst, variant, opt));
        ASSERT_EQ(alt.status, base.status);
        if (base.has_schedule()) EXPECT_NEAR(alt.objective, base.objective, 1e-9);
      }
    }
  }
}

TEST(SolverProperties, DecodedScheduleSatisfiesEveryRow) {
  for (int n = 0; n < 10; ++n) {
    const Instance inst = generate_instance(n % 2 ? Scenario::kB : Scenario::kA, 9, 3, 300 + n);
    for (Variant variant : {Variant::kCollisionUnaware, Variant::kCollisionAware}) {
      const MilpModel m = build_model(inst, variant);
      const Solution sol = solve(m);
      if (!sol.has_schedule()) continue;
      const auto values = to_assignment(m, sol);
      EXPECT_TRUE(violated_constraints(m, values).empty());
      EXPECT_NEAR(objective_value(m, values), sol.objective, 1e-9);
    }
  }
}

TEST(SolverProperties, ArrivalsFollowTheChainsExactly) {
  const Instance inst = generate_instance(Scenario::kA, 10, 3, 11);
  const Solution sol = solve(build_mp_ca(inst));
  ASSERT_TRUE(sol.has_schedule());
  const auto expect = testing::chain_times(inst, sol.routes);
  for (int i = 1; i <= inst.visit_count(); ++i) {
    EXPECT_NEAR(sol.arrival_times[i], expect[i], 1e-9) << "node " << i;
  }
  EXPECT_NEAR(route_travel_time(sol.routes, inst.travel_times()), sol.objective, 1e-9);
}

TEST(SolverProperties, TraceIsMonotone) {
  const Instance inst = generate_instance(Scenario::kA, 12, 3, 5);
  const Solution sol = solve(build_mp_ca(inst));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  ASSERT_GE(sol.stats.trace.size(), 2u);
  for (std::size_t i = 1; i < sol.stats.trace.size(); ++i) {
    const auto& a = sol.stats.trace[i - 1];
    const auto& b = sol.stats.trace[i];
    EXPECT_LE(a.nodes, b.nodes);
    EXPECT_LE(b.incumbent, a.incumbent);
  }
  for (const auto& s : sol.stats.trace) EXPECT_LE(s.lower_bound, s.incumbent + 1e-9);
  EXPECT_NEAR(sol.stats.trace.back().incumbent, sol.objective, 1e-12);
  EXPECT_NEAR(sol.stats.gap, 0.0, 1e-12);
}

TEST(SolverBounds, RelaxationIsExactWithoutBindingWindows) {
  for (int n = 0; n < 6; ++n) {
    const Instance inst = generate_instance(Scenario::kB, 10, 3, 60 + n);
    const MilpModel m = build_mp_cua(inst);
    const BoundTables tables(m.routing);
    ASSERT_TRUE(tables.available());
    const Solution sol = solve(m, {}, &tables);
    ASSERT_EQ(sol.status, SolveStatus::kOptimal);
    const std::uint32_t full = (1u << 10) - 1;
    EXPECT_LE(tables.fleet(3, full), sol.objective + 1e-9);
    EXPECT_NEAR(tables.fleet(3, full), sol.objective, 1e-4);
  }
}

TEST(SolverBounds, SharedTablesGiveTheSameAnswer) {
  const Instance inst = generate_instance(Scenario::kA, 12, 3, 8);
  const MilpModel cua = build_mp_cua(inst);
  const MilpModel ca = build_mp_ca(inst);
  const BoundTables tables(cua.routing);
  EXPECT_NEAR(solve(ca, {}, &tables).objective, solve(ca).objective, 1e-9);
}

TEST(SolverLimits, NodeLimitStopsEarly) {
  const Instance inst = generate_instance(Scenario::kA, 14, 3, 2);
  SolveLimits limits;
  limits.node_limit = 5;
  const Solution sol = solve(build_mp_ca(inst), limits);
  EXPECT_TRUE(sol.status == SolveStatus::kFeasible || sol.status == SolveStatus::kNoSolution)
      << to_string(sol.status);
  if (sol.status == SolveStatus::kFeasible) {
    EXPECT_TRUE(validate(sol, inst, Variant::kCollisionAware).ok());
    EXPECT_LE(sol.stats.lower_bound, sol.objective + 1e-9);
  } else {
    EXPECT_TRUE(sol.routes.empty());
    EXPECT_FALSE(sol.hint.empty());
  }
}

TEST(SolverLimits, InvalidLimitsAreRejected) {
  SolveLimits limits;
  limits.time_limit_s = -1.0;
  EXPECT_THROW(limits.validate(), std::invalid_argument);
  limits = {};
  limits.node_limit = 0;
  EXPECT_THROW(limits.validate(), std::invalid_argument);
  limits = {};
  limits.gap_tolerance = -0.1;
  EXPECT_THROW(limits.validate(), std::invalid_argument);
}

TEST(SolverStatus, NamesRoundTrip) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kFeasible, SolveStatus::kInfeasible,
                        SolveStatus::kNoSolution}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  EXPECT_THROW(parse_status("done"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Validator

class ValidatorMutations : public ::testing::Test {
 protected:
  void SetUp() override {
    inst = make_instance({{10.0, 0.0}, {20.0, 0.0}, {-10.0, 0.0}, {0.0, 15.0}}, 2);
    inst.collisions.set(1, 3);
    good = solve(build_mp_ca(inst));
    ASSERT_EQ(good.status, SolveStatus::kOptimal);
    ASSERT_TRUE(validate(good, inst, Variant::kCollisionAware).ok());
  }
  Instance inst;
  Solution good;
};

TEST_F(ValidatorMutations, DuplicateAndMissingVisits) {
  Solution bad = good;
  auto& r = bad.routes[0];
  r.insert(r.end() - 1, r[1]);
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("visit_once"));
  bad = good;
  for (auto& route : bad.routes) {
    if (route.size() > 3) {
      route.erase(route.begin() + 1);
      break;
    }
  }
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("visit_once"));
}

TEST_F(ValidatorMutations, EndpointsAndRouteCount) {
  Solution bad = good;
  bad.routes[0].front() = bad.routes[0][1];
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("route_start"));
  bad = good;
  bad.routes[1].back() = 0;
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("route_end"));
  bad = good;
  bad.routes.push_back({0, 5});
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("route_count"));
  bad = good;
  bad.routes.back() = {0, 5};
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("depart_once"));
  ValidationOptions idle;
  idle.allow_idle = true;
  EXPECT_FALSE(validate(bad, inst, Variant::kCollisionAware, idle).failed("depart_once"));
}

TEST_F(ValidatorMutations, TimesWindowsAndObjective) {
  Solution bad = good;
  bad.arrival_times[good.routes[0][1]] += 0.5;
  EXPECT_FALSE(validate(bad, inst, Variant::kCollisionAware).ok());
  bad = good;
  bad.objective += 1.0;
  EXPECT_TRUE(validate(bad, inst, Variant::kCollisionAware).failed("objective"));

  Instance tight = inst;
  const int first = good.routes[0][1];
  tight.nodes.nodes[first - 1].window = {50.0, 60.0};
  EXPECT_TRUE(validate(good, tight, Variant::kCollisionAware).failed("time_window"));

  Instance short_day = inst;
  short_day.nodes.depot_window.latest = 5.0;
  EXPECT_TRUE(validate(good, short_day, Variant::kCollisionAware).failed("return_deadline"));
}

TEST_F(ValidatorMutations, OverlapOnlyMattersForCollisionAware) {
  Solution cua = solve(build_mp_cua(inst));
  ASSERT_EQ(cua.status, SolveStatus::kOptimal);
  const bool overlaps = intervals_overlap(cua.arrival_times[1], 2.0, cua.arrival_times[3], 2.0);
  EXPECT_TRUE(validate(cua, inst, Variant::kCollisionUnaware).ok());
  EXPECT_EQ(validate(cua, inst, Variant::kCollisionAware).failed("collision_overlap"), overlaps);
}

TEST(Validator, UnknownNodeAndSummary) {
  const Instance inst = make_instance({{10.0, 0.0}}, 1);
  Solution sol = testing::as_solution(inst, Variant::kCollisionUnaware, RouteSet{{0, 1, 2}});
  EXPECT_TRUE(validate(sol, inst, Variant::kCollisionUnaware).ok());
  EXPECT_EQ(validate(sol, inst, Variant::kCollisionUnaware).summary(), "all clauses pass");
  sol.routes = {{0, 7, 2}};
  const auto report = validate(sol, inst, Variant::kCollisionUnaware);
  EXPECT_TRUE(report.failed("unknown_node"));
  EXPECT_NE(report.summary().find("unknown_node"), std::string::npos);
}

TEST(Intervals, TouchingEndpointsDoNotOverlap) {
  EXPECT_FALSE(intervals_overlap(0.0, 2.0, 2.0, 2.0));
  EXPECT_FALSE(intervals_overlap(2.0, 2.0, 0.0, 2.0));
  EXPECT_TRUE(intervals_overlap(0.0, 2.0, 1.9, 2.0));
  EXPECT_TRUE(intervals_overlap(1.0, 0.5, 0.0, 5.0));
}

}  // namespace
}  // namespace mrpath
