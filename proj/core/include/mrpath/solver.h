#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mrpath/instance.h"
#include "mrpath/model.h"

namespace mrpath {

enum class SolveStatus {
  kOptimal,     // search completed; objective is proven minimal
  kFeasible,    // limit hit with an incumbent
  kInfeasible,  // search completed without any feasible schedule
  kNoSolution,  // limit hit before any incumbent was found
};

std::string_view to_string(SolveStatus s);
SolveStatus parse_status(std::string_view text);

struct SolveLimits {
  double time_limit_s = 60.0;
  std::int64_t node_limit = 2'000'000'000;
  double gap_tolerance = 1e-9;

  void validate() const;
};

struct BoundSample {
  std::int64_t nodes = 0;
  double incumbent = std::numeric_limits<double>::infinity();
  double lower_bound = 0.0;
};

struct SolveStats {
  std::int64_t nodes_explored = 0;
  double lower_bound = 0.0;
  double gap = 0.0;
  std::vector<BoundSample> trace;
};

/// Routes hold node ids and always start at 0 and end at v+1. Arrival times
/// are indexed by node id (depot entries unused).
struct Solution {
  Variant variant = Variant::kCollisionUnaware;
  SolveStatus status = SolveStatus::kNoSolution;
  std::vector<std::vector<int>> routes;
  std::vector<double> arrival_times;
  double objective = std::numeric_limits<double>::infinity();
  SolveStats stats;
  std::string hint;

  bool has_schedule() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
};

/// Sum of travel times along consecutive route entries.
double route_travel_time(const std::vector<std::vector<int>>& routes, const TravelTimes& travel);

/// True when [a, a+wa] and [b, b+wb] share more than a touching endpoint.
inline bool intervals_overlap(double a, double wa, double b, double wb) {
  return !(a + wa <= b + kTimeTolerance || b + wb <= a + kTimeTolerance);
}

// ---------------------------------------------------------------------------
// Relaxation tables

/// Subset dynamic-programming tables giving exact optima of the relaxation
/// without windows or collision constraints. Route sets are canonical when
/// every robot visits the smallest node still uncovered as it leaves the
/// depot.
///   tail(m, U, p, owed): a robot at visit node p covers U together with m
///                        more robots that have not left the depot yet; when
///                        `owed`, the robot must still visit min(U);
///   fleet(m, S):         m robots starting at the depot cover S.
/// Values are rounded toward -inf so they stay valid lower bounds.
class BoundTables {
 public:
  explicit BoundTables(const RoutingData& routing);

  bool available() const { return available_; }
  float tail(int m, std::uint32_t set, int p, bool owed) const {
    const auto& t = owed ? owed_[m] : tail_[m];
    return t[static_cast<std::size_t>(set) * visits_ + (p - 1)];
  }
  float fleet(int m, std::uint32_t set) const { return fleet_[m][set]; }

 private:
  int visits_ = 0;
  int robots_ = 0;
  bool available_ = false;
  std::vector<std::vector<float>> tail_;   // m = 0..K-1
  std::vector<std::vector<float>> owed_;   // m = 0..K-1
  std::vector<std::vector<float>> fleet_;  // m = 0..K
};

/// Exact depth-first branch-and-bound over robot routes. Robots are built one
/// after another in the canonical order above; arrival times follow the
/// model's equality chains; collision-aware models reject overlapping service
/// of any h-pair. `tables` may be shared between models of one instance.
Solution solve(const MilpModel& model, const SolveLimits& limits = {},
               const BoundTables* tables = nullptr);

/// Variable assignment (x, t, z) encoding a schedule for `model`.
std::vector<double> to_assignment(const MilpModel& model, const Solution& solution);

// ---------------------------------------------------------------------------
// Oracle and validator

/// Exhaustive enumeration of ordered partitions of the visit nodes into
/// robot sequences; requires v <= 9 and K <= 3.
Solution brute_force(const Instance& instance, Variant variant, bool allow_idle = false);

struct Violation {
  std::string clause;
  std::vector<int> nodes;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool failed(std::string_view clause) const;
  std::string summary() const;
};

struct ValidationOptions {
  bool allow_idle = false;
};

/// Checks a schedule against the routing rules directly (not via the MILP):
/// depot start/end, single visit, window membership, arrival chains, return
/// deadline, objective consistency, and for CA disjoint service of h-pairs.
ValidationReport validate(const Solution& solution, const Instance& instance, Variant variant,
                          const ValidationOptions& options = {});

}  // namespace mrpath
