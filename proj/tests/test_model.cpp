#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "mrpath/model.h"
#include "mrpath/solver.h"
#include "support.h"

namespace mrpath {
namespace {

using testing::make_instance;
using testing::model_admits;
using testing::RouteSet;

Instance ring(int v, int robots) {
  std::vector<Vec2> pts;
  for (int i = 0; i < v; ++i) {
    const double a = kTwoPi * i / v;
    pts.push_back({30.0 * std::cos(a), 30.0 * std::sin(a)});
  }
  return make_instance(pts, robots);
}

TEST(ModelShape, FamilyAndVariableCountsMatchClosedForms) {
  const int v = 16, k = 3;
  ModelOptions opt;
  opt.prune_arcs = false;
  const ModelStats s = build_mp_cua(ring(v, k), opt).stats();
  EXPECT_EQ(s.x_vars, k * v * (v + 1));
  EXPECT_EQ(s.t_vars, v);
  EXPECT_EQ(s.z_vars, 0);
  EXPECT_EQ(s.rows.at(Family::kDepartOnce), k);
  EXPECT_EQ(s.rows.at(Family::kReturnOnce), k);
  EXPECT_EQ(s.rows.at(Family::kVisitOnce), v);
  EXPECT_EQ(s.rows.at(Family::kFlowBalance), k * v);
  EXPECT_EQ(s.rows.at(Family::kFirstArrivalLower), k * v);
  EXPECT_EQ(s.rows.at(Family::kArrivalChainLower), k * v * (v - 1));
  EXPECT_EQ(s.rows.at(Family::kReturnDeadline), k * v);
  EXPECT_EQ(s.rows.at(Family::kFirstArrivalUpper), k * v);
  EXPECT_EQ(s.rows.at(Family::kArrivalChainUpper), v * (v - 1));
  EXPECT_EQ(s.rows.at(Family::kTimeWindow), 2 * v);
  EXPECT_EQ(s.rows.count(Family::kCollisionOrder), 0u);
}

TEST(ModelShape, CollisionFamiliesScaleWithPairs) {
  Instance inst = ring(10, 3);
  inst.collisions.set(1, 6);
  inst.collisions.set(2, 7);
  inst.collisions.set(3, 4);
  const MilpModel ca = build_mp_ca(inst);
  const ModelStats s = ca.stats();
  EXPECT_EQ(s.z_vars, 6);
  EXPECT_EQ(s.rows.at(Family::kCollisionPairCount), 1);
  EXPECT_EQ(s.rows.at(Family::kCollisionOrder), 3);
  EXPECT_EQ(s.rows.at(Family::kCollisionSeparation), 6);
  EXPECT_EQ(ca.z_index(1, 2), -1);
  EXPECT_GE(ca.z_index(6, 1), 0);
  EXPECT_NE(std::find(ca.redundant_families.begin(), ca.redundant_families.end(),
                      Family::kCollisionPairCount),
            ca.redundant_families.end());
}

TEST(ModelShape, OnePairAddsFourRowsAndTwoBinaries) {
  Instance inst = ring(6, 2);
  const ModelStats base = build_mp_ca(inst).stats();
  inst.collisions.set(2, 5);
  const ModelStats one = build_mp_ca(inst).stats();
  EXPECT_EQ(one.z_vars - base.z_vars, 2);
  EXPECT_EQ(one.total_rows() - base.total_rows(), 4);  // count + order + 2 separations
  EXPECT_EQ(one.rows.at(Family::kCollisionSeparation), 2);
}

TEST(ModelShape, ZeroPairsMakesCollisionAwareIdentical) {
  const Instance inst = ring(7, 2);
  const MilpModel cua = build_mp_cua(inst);
  const MilpModel ca = build_mp_ca(inst);
  EXPECT_EQ(ca.variables.size(), cua.variables.size());
  EXPECT_EQ(ca.constraints.size(), cua.constraints.size());
  std::string a = export_lp(cua), b = export_lp(ca);
  a.erase(0, a.find('\n'));
  b.erase(0, b.find('\n'));
  EXPECT_EQ(a, b);
}

TEST(ModelObjective, CoefficientsAreTravelTimes) {
  const Instance inst = ring(5, 2);
  const MilpModel m = build_mp_cua(inst);
  const TravelTimes t = inst.travel_times();
  ASSERT_EQ(m.objective.size(), static_cast<std::size_t>(m.stats().x_vars));
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; j <= 6; ++j) {
        const int x = m.x_index(i, j, k);
        if (x < 0) continue;
        const auto it = std::find_if(m.objective.begin(), m.objective.end(),
                                     [&](const Term& term) { return term.var == x; });
        ASSERT_NE(it, m.objective.end());
        EXPECT_DOUBLE_EQ(it->coef, t(i, j));
      }
    }
  }
}

TEST(ModelVariables, BoundsAndKinds) {
  const MilpModel m = build_mp_ca(ring(5, 2));
  for (const auto& var : m.variables) {
    if (var.name.front() == 't') {
      EXPECT_EQ(var.kind, VarKind::kContinuous);
      EXPECT_EQ(var.lower, 0.0);
      EXPECT_EQ(var.upper, 200.0);
    } else {
      EXPECT_EQ(var.kind, VarKind::kBinary);
      EXPECT_EQ(var.lower, 0.0);
      EXPECT_EQ(var.upper, 1.0);
    }
  }
  EXPECT_EQ(m.t_index(0), -1);
  EXPECT_EQ(m.t_index(6), -1);
  EXPECT_EQ(m.x_index(0, 0, 0), -1);
  EXPECT_EQ(m.x_index(3, 3, 1), -1);
  EXPECT_EQ(m.x_index(6, 1, 0), -1);
  EXPECT_EQ(m.x_index(1, 0, 0), -1);
  EXPECT_EQ(m.x_index(0, 6, 0), -1);  // idle arc only on request
}

TEST(BigMValue, HorizonPlusServicePlusLongestLeg) {
  const Instance inst = make_instance({{75.0, 0.0}, {-75.0, 0.0}}, 1);
  EXPECT_DOUBLE_EQ(big_m_value(inst).value, 232.0);
  EXPECT_DOUBLE_EQ(build_mp_cua(inst).big_m.value, 232.0);
  const Instance slow = make_instance({{75.0, 0.0}, {-75.0, 0.0}}, 1, 400.0, 3.0, 2.5);
  EXPECT_DOUBLE_EQ(big_m_value(slow).value, 400.0 + 3.0 + 60.0);
  const Instance single = make_instance({{10.0, 0.0}}, 1);
  EXPECT_GE(big_m_value(single).value, 200.0);
}

TEST(BigMValue, SharedValueAppearsInEveryIndicatorRow) {
  Instance inst = ring(5, 2);
  inst.collisions.set(1, 3);
  const MilpModel m = build_mp_ca(inst);
  const double big = m.big_m.value;
  for (const auto& c : m.constraints) {
    if (c.family == Family::kCollisionSeparation) {
      EXPECT_DOUBLE_EQ(c.terms[2].coef, big) << c.name;
    }
    if (c.family == Family::kFirstArrivalLower) EXPECT_DOUBLE_EQ(c.terms[1].coef, -big);
  }
}

TEST(ModelSingleNode, OneRobotOneVisit) {
  const Instance inst = make_instance({{20.0, 0.0}}, 1);
  const MilpModel m = build_mp_ca(inst);
  const ModelStats s = m.stats();
  EXPECT_EQ(s.x_vars, 2);
  EXPECT_EQ(s.t_vars, 1);
  EXPECT_EQ(s.rows.count(Family::kArrivalChainLower), 0u);
  const Solution sol = solve(m);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 8.0, 1e-12);
  EXPECT_NEAR(sol.arrival_times[1], 4.0, 1e-12);
}

TEST(ModelLp, SectionsAndDeterminism) {
  Instance inst = ring(6, 2);
  inst.collisions.set(1, 4);
  const MilpModel m = build_mp_ca(inst);
  const std::string lp = export_lp(m);
  for (const char* section : {"Minimize", "Subject To", "Bounds", "Binaries", "End"}) {
    EXPECT_NE(lp.find(section), std::string::npos) << section;
  }
  EXPECT_LT(lp.find("Minimize"), lp.find("Subject To"));
  EXPECT_LT(lp.find("Subject To"), lp.find("Bounds"));
  EXPECT_LT(lp.find("Bounds"), lp.find("Binaries"));
  EXPECT_NE(lp.find("separate_i1_j4:"), std::string::npos);
  EXPECT_NE(lp.find(m.instance_digest), std::string::npos);
  EXPECT_EQ(lp, export_lp(build_mp_ca(inst)));
}

TEST(ModelDiagnostics, UnreachableNodeIsReported) {
  Instance inst = make_instance({{10.0, 0.0}, {40.0, 0.0}}, 1);
  inst.nodes.nodes[1].window = {0.0, 5.0};  // needs 8 s from the depot
  const MilpModel m = build_mp_cua(inst);
  ASSERT_FALSE(m.diagnostics.empty());
  EXPECT_NE(m.diagnostics.front().find("node 2"), std::string::npos);
  EXPECT_EQ(m.x_index(0, 2, 0), -1);
  EXPECT_EQ(solve(m).status, SolveStatus::kInfeasible);

  ModelOptions keep;
  keep.prune_arcs = false;
  EXPECT_GE(build_mp_cua(inst, keep).x_index(0, 2, 0), 0);
}

TEST(ModelDiagnostics, TooFewNodesForTheFleet) {
  const Instance inst = make_instance({{10.0, 0.0}}, 2);
  EXPECT_FALSE(build_mp_cua(inst).diagnostics.empty());
  ModelOptions idle;
  idle.allow_idle_robots = true;
  const MilpModel m = build_mp_cua(inst, idle);
  EXPECT_TRUE(m.diagnostics.empty());
  EXPECT_GE(m.x_index(0, 2, 1), 0);
  EXPECT_EQ(solve(m).status, SolveStatus::kOptimal);
}

TEST(ModelRejects, DisjointSubtourIsInfeasible) {
  const Instance inst = ring(4, 1);
  const MilpModel m = build_mp_cua(inst);
  std::vector<double> values(m.variables.size(), 0.0);
  for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {2, 5}, {3, 4}, {4, 3}}) {
    values[m.x_index(i, j, 0)] = 1.0;
  }
  // All assignment-style rows hold; only the timing chains can rule it out.
  std::set<Family> broken;
  for (const auto& name : violated_constraints(m, values)) {
    for (const auto& c : m.constraints) {
      if (c.name == name) broken.insert(c.family);
    }
  }
  EXPECT_EQ(broken.count(Family::kVisitOnce), 0u);
  EXPECT_EQ(broken.count(Family::kFlowBalance), 0u);
  EXPECT_FALSE(complete_continuous(m, values).has_value());
}

TEST(ModelRejects, OverlappingPairWithoutOrderIsInfeasible) {
  Instance inst = make_instance({{10.0, 0.0}, {-10.0, 0.0}}, 2);
  inst.collisions.set(1, 2);
  const MilpModel m = build_mp_ca(inst);
  EXPECT_FALSE(model_admits(m, RouteSet{{0, 1, 3}, {0, 2, 3}}));
  EXPECT_FALSE(model_admits(m, RouteSet{{0, 1, 2, 3}, {0, 3}}));  // idle arc absent
  EXPECT_TRUE(model_admits(build_mp_cua(inst), RouteSet{{0, 1, 3}, {0, 2, 3}}));
}

// Exhaustive: model feasibility of each labelled route set agrees with the
// direct rule checker.
class ModelMatchesValidator : public ::testing::TestWithParam<int> {};

TEST_P(ModelMatchesValidator, OnSmallRandomInstances) {
  const std::uint64_t seed = 1000 + GetParam();
  const int v = 3 + GetParam() % 3;
  const int k = 1 + GetParam() % 3;
  const Instance inst = testing::random_small_instance(seed, v, k);
  for (Variant variant : {Variant::kCollisionUnaware, Variant::kCollisionAware}) {
    for (bool idle : {false, true}) {
      ModelOptions opt;
      opt.allow_idle_robots = idle;
      const MilpModel m = build_model(inst, variant, opt);
      ValidationOptions vopt;
      vopt.allow_idle = idle;
      testing::for_each_route_set(v, k, [&](const RouteSet& routes) {
        const bool by_model = model_admits(m, routes);
        const bool by_rules = validate(testing::as_solution(inst, variant, routes), inst, variant,
                                       vopt).ok();
        EXPECT_EQ(by_model, by_rules) << "seed " << seed << " variant " << to_string(variant)
                                      << " idle " << idle;
      });
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ModelMatchesValidator, ::testing::Range(0, 12));

TEST(ModelAssignment, ViolationsReportBoundsAndIntegrality) {
  const MilpModel m = build_mp_cua(ring(3, 1));
  std::vector<double> values(m.variables.size(), 0.0);
  values[m.x_index(0, 1, 0)] = 0.5;
  values[m.t_index(2)] = 250.0;
  const auto v = violated_constraints(m, values);
  EXPECT_NE(std::find(v.begin(), v.end(), "integrality x_0_1_1"), v.end());
  EXPECT_NE(std::find(v.begin(), v.end(), "bound t_2"), v.end());
  EXPECT_NE(std::find(v.begin(), v.end(), "depart_k1"), v.end());
}

}  // namespace
}  // namespace mrpath
