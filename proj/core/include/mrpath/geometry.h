#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "mrpath/common.h"

namespace mrpath {

using CellId = int;

struct Cell {
  CellId id = 0;
  Vec2 center;
};

using Polygon = std::vector<Vec2>;

/// Hexagonal multi-cell layout. Each cell has a BS at its center with
/// `beams_per_cell` sectors of width `beamwidth`; sector 0 starts at the +x
/// axis and indices increase counterclockwise.
struct CellLayout {
  std::vector<Cell> cells;
  double side_length = 0.0;
  int beams_per_cell = 0;
  double beamwidth = 0.0;
  Vec2 depot;

  const Cell& cell(CellId id) const;
  // Pointy-top hexagon around the cell center, counterclockwise vertices.
  Polygon hexagon(CellId id) const;
  // Pairs (a, b), a < b, whose hexagons share an edge.
  std::vector<std::pair<CellId, CellId>> adjacent_cells() const;
  bool inside_any_hexagon(Vec2 p) const;
};

struct BeamRef {
  CellId cell = 0;
  int index = 0;

  auto operator<=>(const BeamRef&) const = default;
};

struct BeamPair {
  BeamRef first;
  BeamRef second;

  auto operator<=>(const BeamPair&) const = default;
  bool contains(BeamRef a, BeamRef b) const {
    return (first == a && second == b) || (first == b && second == a);
  }
};

inline constexpr double kDefaultBeamwidth = kPi / 6.0;

/// Three hexagons meeting at a common vertex; the depot sits at that vertex.
/// Throws std::invalid_argument when beams_per_cell * beamwidth != 2*pi.
CellLayout build_layout(double side_length, int beams_per_cell,
                        double beamwidth = kDefaultBeamwidth);

/// Arbitrary layout from explicit centers (used for single-cell and custom
/// configurations). Validates the same sector-tiling invariant.
CellLayout make_layout(std::vector<Vec2> centers, double side_length,
                       int beams_per_cell, double beamwidth, Vec2 depot);

/// Sector of `cell` containing `point`. Sectors are half-open
/// [index*theta, (index+1)*theta). Throws if point coincides with the BS.
BeamRef beam_of(Vec2 point, CellId cell, const CellLayout& layout);

/// Nearest BS, ties broken by lowest cell id.
CellId serving_cell(Vec2 point, const CellLayout& layout);

/// Main-lobe wedge of a beam truncated at `range`, as a convex polygon with
/// the arc approximated by chords.
Polygon beam_wedge(BeamRef beam, const CellLayout& layout, double range);

bool in_wedge(Vec2 point, BeamRef beam, const CellLayout& layout, double range);

/// Beam pairs from adjacent cells whose truncated wedges overlap with
/// positive area and whose boresights are opposed within +-beamwidth.
std::vector<BeamPair> interfering_beam_pairs(const CellLayout& layout,
                                             double range_limit);

/// Union of pairwise wedge intersections; Scenario A draws nodes from here.
class CollisionRegion {
 public:
  CollisionRegion(const CellLayout& layout, std::vector<BeamPair> pairs,
                  double range_limit);

  bool contains(Vec2 p) const;
  const std::vector<Polygon>& pieces() const { return pieces_; }
  double approximate_area() const;
  // Axis-aligned box enclosing the region (with a small margin).
  std::pair<Vec2, Vec2> bounds() const { return {lo_, hi_}; }

 private:
  CellLayout layout_;
  std::vector<BeamPair> pairs_;
  double range_;
  std::vector<Polygon> pieces_;
  Vec2 lo_;
  Vec2 hi_;
};

// ---------------------------------------------------------------------------
// Polygon helpers

double polygon_area(const Polygon& poly);
bool point_in_convex_polygon(Vec2 p, const Polygon& poly);
// Sutherland-Hodgman clip of `subject` against convex `clip` (both CCW).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

// ---------------------------------------------------------------------------
// Nodes

struct TimeWindow {
  double earliest = 0.0;
  double latest = 0.0;
};

struct VisitNode {
  int id = 0;
  Vec2 position;
  TimeWindow window;
  double service_time = 0.0;
};

/// Visit nodes carry ids 1..v. The depot appears in models as both node 0
/// (source) and node v+1 (sink), sharing `depot_position`.
struct NodeSet {
  std::vector<VisitNode> nodes;
  Vec2 depot_position;
  TimeWindow depot_window;

  int visit_count() const { return static_cast<int>(nodes.size()); }
  int sink_id() const { return visit_count() + 1; }
  // Node 0 and v+1 map to the depot.
  Vec2 position(int id) const;
  const VisitNode& visit(int id) const { return nodes.at(id - 1); }
};

/// Symmetric binary matrix over node ids 0..v+1; only visit nodes can be set.
class CollisionMatrix {
 public:
  CollisionMatrix() = default;
  explicit CollisionMatrix(int visit_count);

  int visit_count() const { return visit_count_; }
  bool operator()(int i, int j) const;
  void set(int i, int j, bool value = true);
  // Unordered pairs (i, j) with i < j and h_ij = 1, in lexicographic order.
  std::vector<std::pair<int, int>> pairs() const;
  // Ids that appear in at least one pair.
  std::vector<int> collision_nodes() const;
  std::vector<int> partners(int i) const;

  friend bool operator==(const CollisionMatrix&, const CollisionMatrix&) = default;

 private:
  int visit_count_ = 0;
  std::vector<std::uint8_t> bits_;
};

CollisionMatrix collision_matrix(const NodeSet& nodes, const CellLayout& layout,
                                 const std::vector<BeamPair>& pairs);

enum class WindowMode { kFixed, kRandomized };

struct SamplingOptions {
  double min_separation = 1.0;   // meters, also enforced against the depot
  double horizon = 200.0;        // l_0, seconds
  double service_time = 2.0;     // w_i, seconds
  WindowMode window_mode = WindowMode::kFixed;
  double window_width = 60.0;    // randomized mode only
  int max_attempts_per_node = 20000;
};

/// Scenario A draws uniformly over the collision region, Scenario B over the
/// union of hexagons. Deterministic in `seed`. Throws std::runtime_error when
/// rejection sampling cannot place a node.
NodeSet sample_nodes(Scenario scenario, int count, const CellLayout& layout,
                     const CollisionRegion& region, std::uint64_t seed,
                     const SamplingOptions& options = {});

/// Row-major (v+2) x (v+2) travel times in seconds over ids 0..v+1.
class TravelTimes {
 public:
  TravelTimes() = default;
  TravelTimes(int size, std::vector<double> data)
      : size_(size), data_(std::move(data)) {}

  int size() const { return size_; }
  double operator()(int i, int j) const { return data_[i * size_ + j]; }
  double max_entry() const;

 private:
  int size_ = 0;
  std::vector<double> data_;
};

TravelTimes travel_time_matrix(const NodeSet& nodes, double velocity);

}  // namespace mrpath
