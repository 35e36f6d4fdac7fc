#include "mrpath/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mrpath {

namespace {

constexpr int kArcSegments = 32;
constexpr double kAngleSnap = 1e-9;

double wrap_to_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > kPi) a -= kTwoPi;
  if (a < -kPi) a += kTwoPi;
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Layout

const Cell& CellLayout::cell(CellId id) const {
  for (const auto& c : cells) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("unknown cell id " + std::to_string(id));
}

Polygon CellLayout::hexagon(CellId id) const {
  const Vec2 c = cell(id).center;
  Polygon poly;
  poly.reserve(6);
  for (int k = 0; k < 6; ++k) {
    const double a = kPi / 6.0 + k * kPi / 3.0;
    poly.push_back({c.x + side_length * std::cos(a), c.y + side_length * std::sin(a)});
  }
  return poly;
}

std::vector<std::pair<CellId, CellId>> CellLayout::adjacent_cells() const {
  std::vector<std::pair<CellId, CellId>> out;
  const double expected = std::sqrt(3.0) * side_length;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const double d = distance(cells[a].center, cells[b].center);
      if (std::abs(d - expected) <= 1e-6 * side_length) {
        out.emplace_back(std::min(cells[a].id, cells[b].id),
                         std::max(cells[a].id, cells[b].id));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool CellLayout::inside_any_hexagon(Vec2 p) const {
  return std::any_of(cells.begin(), cells.end(), [&](const Cell& c) {
    return point_in_convex_polygon(p, hexagon(c.id));
  });
}

CellLayout make_layout(std::vector<Vec2> centers, double side_length,
                       int beams_per_cell, double beamwidth, Vec2 depot) {
  if (!(side_length > 0.0)) {
    throw std::invalid_argument("side_length must be positive");
  }
  if (beams_per_cell < 3) {
    throw std::invalid_argument("beams_per_cell must be at least 3");
  }
  if (!(beamwidth > 0.0) ||
      std::abs(beams_per_cell * beamwidth - kTwoPi) > 1e-9 * kTwoPi) {
    throw std::invalid_argument("beams_per_cell * beamwidth must equal 2*pi (got " +
                                std::to_string(beams_per_cell) + " beams of " +
                                std::to_string(beamwidth) + " rad)");
  }
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      if (distance(centers[a], centers[b]) <= 1e-9 * side_length) {
        throw std::invalid_argument("cell centers must be distinct");
      }
    }
  }
  CellLayout layout;
  layout.side_length = side_length;
  layout.beams_per_cell = beams_per_cell;
  layout.beamwidth = beamwidth;
  layout.depot = depot;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    layout.cells.push_back({static_cast<CellId>(i), centers[i]});
  }
  return layout;
}

CellLayout build_layout(double side_length, int beams_per_cell, double beamwidth) {
  // Pointy-top hexagons of circumradius l around centers placed at distance l
  // from the origin; the origin is a vertex of all three.
  std::vector<Vec2> centers;
  for (double deg : {30.0, 150.0, 270.0}) {
    const double a = deg * kPi / 180.0;
    centers.push_back({side_length * std::cos(a), side_length * std::sin(a)});
  }
  return make_layout(std::move(centers), side_length, beams_per_cell, beamwidth,
                     Vec2{0.0, 0.0});
}

// ---------------------------------------------------------------------------
// Beams

BeamRef beam_of(Vec2 point, CellId cell, const CellLayout& layout) {
  const Vec2 d = point - layout.cell(cell).center;
  if (norm(d) <= 1e-12 * std::max(1.0, layout.side_length)) {
    throw std::invalid_argument("point coincides with the base station of cell " +
                                std::to_string(cell));
  }
  // The snap keeps a point computed at exactly k*theta in sector k despite
  // atan2 rounding slightly below the boundary.
  int index = static_cast<int>(std::floor(azimuth(d) / layout.beamwidth + kAngleSnap));
  index %= layout.beams_per_cell;
  return {cell, index};
}

CellId serving_cell(Vec2 point, const CellLayout& layout) {
  CellId best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : layout.cells) {
    const double d = distance(point, c.center);
    if (d < best_d || (d == best_d && c.id < best)) {
      best_d = d;
      best = c.id;
    }
  }
  return best;
}

Polygon beam_wedge(BeamRef beam, const CellLayout& layout, double range) {
  const Vec2 c = layout.cell(beam.cell).center;
  const double lo = beam.index * layout.beamwidth;
  Polygon poly;
  poly.reserve(kArcSegments + 2);
  poly.push_back(c);
  for (int s = 0; s <= kArcSegments; ++s) {
    const double a = lo + layout.beamwidth * s / kArcSegments;
    poly.push_back({c.x + range * std::cos(a), c.y + range * std::sin(a)});
  }
  return poly;
}

bool in_wedge(Vec2 point, BeamRef beam, const CellLayout& layout, double range) {
  const double d = distance(point, layout.cell(beam.cell).center);
  if (d <= 0.0 || d > range) return false;
  return beam_of(point, beam.cell, layout) == beam;
}

std::vector<BeamPair> interfering_beam_pairs(const CellLayout& layout,
                                             double range_limit) {
  std::vector<BeamPair> out;
  if (!(range_limit > 0.0) || layout.cells.size() < 2) return out;
  const double theta = layout.beamwidth;
  const double min_area = 1e-9 * range_limit * range_limit;
  for (auto [a, b] : layout.adjacent_cells()) {
    for (int ia = 0; ia < layout.beams_per_cell; ++ia) {
      const double bore_a = (ia + 0.5) * theta;
      const Polygon wa = beam_wedge({a, ia}, layout, range_limit);
      for (int ib = 0; ib < layout.beams_per_cell; ++ib) {
        const double bore_b = (ib + 0.5) * theta;
        const double sep = std::abs(wrap_to_pi(bore_a - bore_b));
        if (kPi - sep > theta + kAngleSnap) continue;
        const Polygon overlap = clip_convex(wa, beam_wedge({b, ib}, layout, range_limit));
        if (polygon_area(overlap) > min_area) {
          out.push_back({BeamRef{a, ia}, BeamRef{b, ib}});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CollisionRegion::CollisionRegion(const CellLayout& layout, std::vector<BeamPair> pairs,
                                 double range_limit)
    : layout_(layout), pairs_(std::move(pairs)), range_(range_limit) {
  lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  hi_ = {-lo_.x, -lo_.y};
  for (const auto& p : pairs_) {
    Polygon piece = clip_convex(beam_wedge(p.first, layout_, range_),
                                beam_wedge(p.second, layout_, range_));
    for (Vec2 v : piece) {
      lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y)};
      hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y)};
    }
    pieces_.push_back(std::move(piece));
  }
  if (!pieces_.empty()) {
    // Chords sit inside the true arcs; widen the box to cover the sliver.
    const double margin = 0.01 * range_;
    lo_ = {lo_.x - margin, lo_.y - margin};
    hi_ = {hi_.x + margin, hi_.y + margin};
  }
}

bool CollisionRegion::contains(Vec2 p) const {
  return std::any_of(pairs_.begin(), pairs_.end(), [&](const BeamPair& pair) {
    return in_wedge(p, pair.first, layout_, range_) &&
           in_wedge(p, pair.second, layout_, range_);
  });
}

double CollisionRegion::approximate_area() const {
  double total = 0.0;
  for (const auto& piece : pieces_) total += polygon_area(piece);
  return total;
}

// ---------------------------------------------------------------------------
// Polygons

double polygon_area(const Polygon& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

bool point_in_convex_polygon(Vec2 p, const Polygon& poly) {
  if (poly.size() < 3) return false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % poly.size()];
    if (cross(b - a, p - a) < -1e-12) return false;
  }
  return true;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon output = subject;
  for (std::size_t e = 0; e < clip.size() && !output.empty(); ++e) {
    const Vec2 a = clip[e];
    const Vec2 b = clip[(e + 1) % clip.size()];
    const Vec2 edge = b - a;
    auto side = [&](Vec2 p) { return cross(edge, p - a); };
    Polygon input;
    input.swap(output);
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + input.size() - 1) % input.size()];
      const double sc = side(cur);
      const double sp = side(prev);
      if (sc >= 0.0) {
        if (sp < 0.0) {
          const double t = sp / (sp - sc);
          output.push_back(prev + t * (cur - prev));
        }
        output.push_back(cur);
      } else if (sp >= 0.0) {
        const double t = sp / (sp - sc);
        output.push_back(prev + t * (cur - prev));
      }
    }
  }
  return output;
}

// ---------------------------------------------------------------------------
// Nodes and collision matrix

Vec2 NodeSet::position(int id) const {
  if (id == 0 || id == sink_id()) return depot_position;
  return visit(id).position;
}

CollisionMatrix::CollisionMatrix(int visit_count)
    : visit_count_(visit_count),
      bits_(static_cast<std::size_t>(visit_count + 2) * (visit_count + 2), 0) {}

bool CollisionMatrix::operator()(int i, int j) const {
  const int n = visit_count_ + 2;
  if (i < 0 || j < 0 || i >= n || j >= n) return false;
  return bits_[static_cast<std::size_t>(i) * n + j] != 0;
}

void CollisionMatrix::set(int i, int j, bool value) {
  if (i < 1 || j < 1 || i > visit_count_ || j > visit_count_ || i == j) {
    throw std::invalid_argument("collision pair must join two distinct visit nodes");
  }
  const int n = visit_count_ + 2;
  bits_[static_cast<std::size_t>(i) * n + j] = value;
  bits_[static_cast<std::size_t>(j) * n + i] = value;
}

std::vector<std::pair<int, int>> CollisionMatrix::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= visit_count_; ++i) {
    for (int j = i + 1; j <= visit_count_; ++j) {
      if ((*this)(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<int> CollisionMatrix::collision_nodes() const {
  std::vector<int> out;
  for (int i = 1; i <= visit_count_; ++i) {
    if (!partners(i).empty()) out.push_back(i);
  }
  return out;
}

std::vector<int> CollisionMatrix::partners(int i) const {
  std::vector<int> out;
  for (int j = 1; j <= visit_count_; ++j) {
    if ((*this)(i, j)) out.push_back(j);
  }
  return out;
}

CollisionMatrix collision_matrix(const NodeSet& nodes, const CellLayout& layout,
                                 const std::vector<BeamPair>& pairs) {
  const int v = nodes.visit_count();
  std::vector<BeamRef> beams;
  beams.reserve(v);
  for (const auto& node : nodes.nodes) {
    beams.push_back(beam_of(node.position, serving_cell(node.position, layout), layout));
  }
  CollisionMatrix h(v);
  for (int i = 0; i < v; ++i) {
    for (int j = i + 1; j < v; ++j) {
      if (beams[i].cell == beams[j].cell) continue;
      const bool paired = std::any_of(pairs.begin(), pairs.end(), [&](const BeamPair& p) {
        return p.contains(beams[i], beams[j]);
      });
      if (paired) h.set(nodes.nodes[i].id, nodes.nodes[j].id);
    }
  }
  return h;
}

NodeSet sample_nodes(Scenario scenario, int count, const CellLayout& layout,
                     const CollisionRegion& region, std::uint64_t seed,
                     const SamplingOptions& options) {
  if (count < 1) throw std::invalid_argument("node count must be at least 1");
  std::mt19937_64 rng(seed);

  Vec2 lo;
  Vec2 hi;
  if (scenario == Scenario::kA) {
    if (region.pieces().empty()) {
      throw std::runtime_error("collision region is empty; cannot sample Scenario A");
    }
    std::tie(lo, hi) = region.bounds();
  } else {
    lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    hi = {-lo.x, -lo.y};
    for (const auto& c : layout.cells) {
      for (Vec2 v : layout.hexagon(c.id)) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
      }
    }
  }

  NodeSet set;
  set.depot_position = layout.depot;
  set.depot_window = {0.0, options.horizon};
  for (int id = 1; id <= count; ++id) {
    bool placed = false;
    for (int attempt = 0; attempt < options.max_attempts_per_node && !placed; ++attempt) {
      const Vec2 p{uniform(rng, lo.x, hi.x), uniform(rng, lo.y, hi.y)};
      const bool inside = scenario == Scenario::kA ? region.contains(p)
                                                   : layout.inside_any_hexagon(p);
      if (!inside) continue;
      if (distance(p, layout.depot) < options.min_separation) continue;
      const bool crowded = std::any_of(set.nodes.begin(), set.nodes.end(), [&](const VisitNode& n) {
        return distance(n.position, p) < options.min_separation;
      });
      if (crowded) continue;
      VisitNode node;
      node.id = id;
      node.position = p;
      node.service_time = options.service_time;
      if (options.window_mode == WindowMode::kFixed) {
        node.window = {0.0, options.horizon};
      } else {
        const double e = uniform(rng, 0.0, 0.5 * options.horizon);
        node.window = {e, std::min(e + options.window_width, options.horizon)};
      }
      set.nodes.push_back(node);
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("rejection sampling failed to place node " +
                               std::to_string(id) + "; sampling region is degenerate");
    }
  }
  return set;
}

double TravelTimes::max_entry() const {
  double m = 0.0;
  for (double d : data_) m = std::max(m, d);
  return m;
}

TravelTimes travel_time_matrix(const NodeSet& nodes, double velocity) {
  if (!(velocity > 0.0)) throw std::invalid_argument("velocity must be positive");
  const int n = nodes.visit_count() + 2;
  std::vector<double> data(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) data[i * n + j] = distance(nodes.position(i), nodes.position(j)) / velocity;
    }
  }
  return TravelTimes(n, std::move(data));
}

}  // namespace mrpath
