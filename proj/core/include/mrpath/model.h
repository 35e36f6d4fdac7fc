#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrpath/common.h"
#include "mrpath/instance.h"

namespace mrpath {

enum class VarKind { kBinary, kContinuous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

/// Constraint families of the path-planning programs, named by role.
enum class Family {
  kDepartOnce,           // each robot leaves the depot once
  kReturnOnce,           // each robot reaches the sink once
  kVisitOnce,            // each visit node entered exactly once
  kFlowBalance,          // in-flow equals out-flow per robot
  kFirstArrivalLower,    // t_i >= e_0 + T_0i on a used depot arc
  kArrivalChainLower,    // t_j >= t_i + w_i + T_ij on a used arc
  kReturnDeadline,       // back at the depot by l_0
  kFirstArrivalUpper,    // t_i <= e_0 + T_0i on a used depot arc
  kArrivalChainUpper,    // t_j <= t_i + w_i + T_ij on a used arc
  kTimeWindow,           // e_i <= t_i <= l_i (two rows per node)
  kCollisionPairCount,   // sum z = number of h-pairs (redundant)
  kCollisionOrder,       // z_ij + z_ji = 1
  kCollisionSeparation,  // t_i + w_i <= t_j when z_ij = 1
};

std::string_view to_string(Family f);

struct Constraint {
  std::string name;
  Family family = Family::kDepartOnce;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// Solver-facing view of the routing data a model was built from. Arc
/// availability reflects build-time pruning.
struct RoutingData {
  int visits = 0;
  int robots = 0;
  TravelTimes travel;
  std::vector<double> earliest;  // by node id 0..v+1
  std::vector<double> latest;
  std::vector<double> service;
  double horizon = 0.0;  // l_0
  std::vector<std::pair<int, int>> collision_pairs;
  bool allow_idle = false;
  std::vector<unsigned char> arc_allowed;  // (v+2)^2, row-major

  int sink() const { return visits + 1; }
  int size() const { return visits + 2; }
  bool arc(int i, int j) const { return arc_allowed[static_cast<std::size_t>(i) * size() + j] != 0; }
};

struct BigM {
  double value = 0.0;
};

/// l_0 + max_i w_i + max_ij T_ij.
BigM big_m_value(const Instance& instance);

struct ModelOptions {
  bool allow_idle_robots = false;  // admit the direct depot->sink arc
  bool prune_arcs = true;
  bool per_constraint_big_m = false;
};

struct ModelStats {
  int x_vars = 0;
  int t_vars = 0;
  int z_vars = 0;
  std::map<Family, int> rows;

  int total_rows() const;
};

/// Canonical MILP: minimize objective subject to constraints, with
/// variable-kind and bound declarations. Immutable once built.
struct MilpModel {
  Variant variant = Variant::kCollisionUnaware;
  std::vector<Variable> variables;
  std::vector<Term> objective;  // minimize
  std::vector<Constraint> constraints;
  std::string instance_digest;
  BigM big_m;
  std::vector<Family> redundant_families;
  std::vector<std::string> diagnostics;  // build-time infeasibility hints
  RoutingData routing;

  // Variable lookup; -1 when the variable does not exist (pruned arc,
  // depot time, non-collision pair). Robot index k is zero-based.
  int x_index(int i, int j, int k) const;
  int t_index(int i) const;
  int z_index(int i, int j) const;

  ModelStats stats() const;

  // Filled by the builder.
  std::vector<int> x_lookup;
  std::vector<int> t_lookup;
  std::vector<int> z_lookup;
};

MilpModel build_mp_cua(const Instance& instance, const ModelOptions& options = {});
MilpModel build_mp_ca(const Instance& instance, const ModelOptions& options = {});
MilpModel build_model(const Instance& instance, Variant variant, const ModelOptions& options = {});

/// CPLEX LP text; byte-stable for identical models.
std::string export_lp(const MilpModel& model);

// ---------------------------------------------------------------------------
// Assignment checks

double objective_value(const MilpModel& model, const std::vector<double>& values);

/// Names of rows or bounds violated by `values` beyond `tolerance`.
std::vector<std::string> violated_constraints(const MilpModel& model,
                                              const std::vector<double>& values,
                                              double tolerance = kTimeTolerance);

/// With every binary fixed from `values`, decide whether continuous values
/// exist that satisfy all rows. The rows left over must be bounds or
/// difference constraints on the continuous variables (true for both
/// programs here); they are solved with Bellman-Ford. Returns the completed
/// assignment, or nullopt when infeasible. Throws std::logic_error if a row
/// is not of difference form.
std::optional<std::vector<double>> complete_continuous(const MilpModel& model,
                                                       const std::vector<double>& values);

}  // namespace mrpath
