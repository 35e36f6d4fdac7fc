#include "mrpath/common.h"

#include <stdexcept>
#include <string>

namespace mrpath {

std::string_view to_string(Variant v) {
  return v == Variant::kCollisionAware ? "ca" : "cua";
}

std::string_view to_string(Scenario s) { return s == Scenario::kA ? "A" : "B"; }

Variant parse_variant(std::string_view text) {
  if (text == "cua" || text == "CUA" || text == "MP-CUA") return Variant::kCollisionUnaware;
  if (text == "ca" || text == "CA" || text == "MP-CA") return Variant::kCollisionAware;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "' (expected cua|ca)");
}

Scenario parse_scenario(std::string_view text) {
  if (text == "A" || text == "a") return Scenario::kA;
  if (text == "B" || text == "b") return Scenario::kB;
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "' (expected A|B)");
}

}  // namespace mrpath
