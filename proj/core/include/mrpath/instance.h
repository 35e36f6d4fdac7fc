#pragma once

#include <cstdint>
#include <string>

#include "mrpath/geometry.h"

namespace mrpath {

/// Everything the planners need: layout, visit nodes with windows, fleet
/// size and speed, and the collision relation between nodes.
struct Instance {
  CellLayout layout;
  double range_limit = 0.0;  // wedge truncation used to derive the pairs
  NodeSet nodes;
  double velocity = 5.0;     // m/s
  int robots = 1;
  CollisionMatrix collisions;

  int visit_count() const { return nodes.visit_count(); }
  int sink_id() const { return nodes.sink_id(); }
  TravelTimes travel_times() const { return travel_time_matrix(nodes, velocity); }

  /// Stable 64-bit FNV-1a digest over all fields, rendered as hex.
  std::string digest() const;
};

struct InstanceOptions {
  double side_length = 50.0;
  int beams_per_cell = 12;
  double beamwidth = kDefaultBeamwidth;
  // Wedge truncation as a multiple of side_length. The default reaches the
  // adjacent BS, so the collision region is the hexagon spanned by the BSs
  // and the outer shared vertices.
  double range_factor = 1.7320508075688772;
  double velocity = 5.0;
  SamplingOptions sampling;
};

/// Build the default layout, sample nodes for `scenario` and derive h.
Instance generate_instance(Scenario scenario, int nodes, int robots, std::uint64_t seed,
                           const InstanceOptions& options = {});

}  // namespace mrpath
