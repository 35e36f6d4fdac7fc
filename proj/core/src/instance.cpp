#include "mrpath/instance.h"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace mrpath {

namespace {

class Fnv1a {
 public:
  void add(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (value >> (8 * i)) & 0xffU;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double value) { add(std::bit_cast<std::uint64_t>(value)); }
  void add(int value) { add(static_cast<std::uint64_t>(static_cast<std::int64_t>(value))); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string Instance::digest() const {
  Fnv1a h;
  h.add(layout.side_length);
  h.add(layout.beams_per_cell);
  h.add(layout.beamwidth);
  for (const auto& c : layout.cells) {
    h.add(c.id);
    h.add(c.center.x);
    h.add(c.center.y);
  }
  h.add(layout.depot.x);
  h.add(layout.depot.y);
  h.add(range_limit);
  h.add(nodes.depot_window.earliest);
  h.add(nodes.depot_window.latest);
  for (const auto& n : nodes.nodes) {
    h.add(n.id);
    h.add(n.position.x);
    h.add(n.position.y);
    h.add(n.window.earliest);
    h.add(n.window.latest);
    h.add(n.service_time);
  }
  h.add(velocity);
  h.add(robots);
  for (auto [i, j] : collisions.pairs()) {
    h.add(i);
    h.add(j);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

Instance generate_instance(Scenario scenario, int nodes, int robots, std::uint64_t seed,
                           const InstanceOptions& options) {
  if (robots < 1) throw std::invalid_argument("robot count must be at least 1");
  Instance inst;
  inst.layout = build_layout(options.side_length, options.beams_per_cell, options.beamwidth);
  inst.range_limit = options.range_factor * options.side_length;
  const auto pairs = interfering_beam_pairs(inst.layout, inst.range_limit);
  const CollisionRegion region(inst.layout, pairs, inst.range_limit);
  inst.nodes = sample_nodes(scenario, nodes, inst.layout, region, seed, options.sampling);
  inst.velocity = options.velocity;
  inst.robots = robots;
  inst.collisions = collision_matrix(inst.nodes, inst.layout, pairs);
  return inst;
}

}  // namespace mrpath
