#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "enduse/core/errors.hpp"

namespace enduse {

/// Occupant categories, each owning a fixed set of appliances, plus nominal ON power
/// draws per appliance class.
struct BuildingProfile {
  std::map<std::string, std::map<std::string, std::uint64_t>> categories;  // label -> class -> count per occupant
  std::map<std::string, std::uint64_t> occupants;                          // label -> occupants
  std::map<std::string, double> power_watts;                               // class -> watts when ON

  /// Appliances per class, summed over categories. Classes with a zero total are kept.
  std::map<std::string, std::uint64_t> appliance_counts() const {
    std::map<std::string, std::uint64_t> n;
    for (const auto& [label, per_occupant] : categories) {
      const auto it = occupants.find(label);
      const std::uint64_t people = it == occupants.end() ? 0 : it->second;
      for (const auto& [cls, count] : per_occupant) n[cls] += people * count;
    }
    return n;
  }

  void validate() const {
    for (const auto& [label, people] : occupants)
      if (!categories.count(label))
        throw ConfigError("occupants given for unknown category '" + label + "'");
    for (const auto& [cls, w] : power_watts)
      if (!(w >= 0.0)) throw ConfigError("power draw of '" + cls + "' must be >= 0");
  }
};

/// Office floor with six occupant categories that together hold 11 monitors,
/// 14 laptops and 5 desktops.
inline BuildingProfile office_building_fixture() {
  BuildingProfile b;
  b.categories = {
      {"A", {{"laptop", 1}, {"monitor", 1}, {"desktop", 1}}},
      {"B", {{"desktop", 1}, {"monitor", 1}}},
      {"C", {{"laptop", 1}, {"monitor", 1}}},
      {"D", {{"laptop", 1}, {"monitor", 2}}},
      {"E", {{"laptop", 2}, {"monitor", 1}}},
      {"F", {{"laptop", 1}}},
  };
  b.occupants = {{"A", 3}, {"B", 2}, {"C", 2}, {"D", 1}, {"E", 2}, {"F", 4}};
  b.power_watts = {{"desktop", 120.0}, {"laptop", 45.0}, {"monitor", 30.0}};
  return b;
}

}  // namespace enduse
