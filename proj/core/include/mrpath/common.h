#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace mrpath {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Time constraints are checked with this slack (seconds).
inline constexpr double kTimeTolerance = 1e-6;
// Relative tolerance for objective comparisons.
inline constexpr double kObjectiveTolerance = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Azimuth of `v` in [0, 2*pi), counterclockwise from +x.
inline double azimuth(Vec2 v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

enum class Variant { kCollisionUnaware, kCollisionAware };
enum class Scenario { kA, kB };

std::string_view to_string(Variant v);
std::string_view to_string(Scenario s);
Variant parse_variant(std::string_view text);
Scenario parse_scenario(std::string_view text);

/// SplitMix64 step; used to derive independent per-purpose seeds from one
/// base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64(base ^ splitmix64(tag));
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
/// Platform-independent, unlike std::uniform_real_distribution.
template <class Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

template <class Engine>
double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

}  // namespace mrpath
