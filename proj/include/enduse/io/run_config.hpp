#pragma once

// Run configuration: one JSON document driving every CLI subcommand.
//
//   {
//     "format": "enduse.config", "version": 1,
//     "grid":       {"step_minutes": 5},
//     "smoothing":  {"kernel": "gaussian", "bandwidth_steps": 3, "circular": false},
//     "slots":      null | [0, 96, ...],
//     "ingest":     {"threshold_watts": 5, "weekdays_only": true, "appliance_classes": {...}},
//     "building":   {"categories": {...}, "occupants": {...}, "power_watts": {...}},
//     "simulation": {"runs": 10000, "seed": 0},
//     "validation": {"synthetic_classes": ["monitor"], "synthetic_days": 500,
//                    "appliances_per_class": 2, "perturb_p_on": 0},
//     "io":         {"state_csv": "", "power_csv": "", "profiles_dir": "", "correlations": ""}
//   }
//
// Every section is optional on input and always present on output. Relative io paths
// are resolved against the directory of the config file.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/slots.hpp"
#include "enduse/estimation/smoothing.hpp"
#include "enduse/io/digest.hpp"
#include "enduse/io/json_documents.hpp"
#include "enduse/simulation/building.hpp"

namespace enduse::io {

inline constexpr const char* kConfigFormat = "enduse.config";

struct IngestConfig {
  double threshold_watts = 5.0;
  bool weekdays_only = true;
  std::map<std::string, std::string> appliance_classes;  // appliance id -> class id
  friend bool operator==(const IngestConfig&, const IngestConfig&) = default;
};

struct ValidationConfig {
  std::vector<std::string> synthetic_classes{"monitor"};
  std::uint64_t synthetic_days = 500;
  std::uint64_t appliances_per_class = 2;
  double perturb_p_on = 0.0;
  friend bool operator==(const ValidationConfig&, const ValidationConfig&) = default;
};

struct IoPaths {
  std::string state_csv;
  std::string power_csv;
  std::string profiles_dir;
  std::string correlations;
  friend bool operator==(const IoPaths&, const IoPaths&) = default;
};

struct BuildingEq {
  static bool equal(const BuildingProfile& a, const BuildingProfile& b) {
    return a.categories == b.categories && a.occupants == b.occupants && a.power_watts == b.power_watts;
  }
};

struct RunConfig {
  TimeGrid grid{};
  SmootherConfig smoothing{};
  std::optional<std::vector<std::size_t>> slots;
  IngestConfig ingest{};
  BuildingProfile building{};
  std::uint64_t runs = 10'000;
  std::uint64_t seed = 0;
  ValidationConfig validation{};
  IoPaths io{};

  std::vector<std::size_t> slot_boundaries() const {
    return slots ? *slots : default_slot_boundaries(grid);
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.grid == b.grid && a.smoothing == b.smoothing && a.slots == b.slots && a.ingest == b.ingest &&
           BuildingEq::equal(a.building, b.building) && a.runs == b.runs && a.seed == b.seed &&
           a.validation == b.validation && a.io == b.io;
  }
};

inline json to_json(const RunConfig& c) {
  json j;
  j["format"] = kConfigFormat;
  j["version"] = kDocumentVersion;
  j["grid"] = {{"step_minutes", c.grid.step_minutes}};
  j["smoothing"] = to_json(c.smoothing);
  j["slots"] = c.slots ? json(*c.slots) : json(nullptr);
  j["ingest"] = {{"threshold_watts", c.ingest.threshold_watts},
                 {"weekdays_only", c.ingest.weekdays_only},
                 {"appliance_classes", c.ingest.appliance_classes}};
  j["building"] = {{"categories", c.building.categories},
                   {"occupants", c.building.occupants},
                   {"power_watts", c.building.power_watts}};
  j["simulation"] = {{"runs", c.runs}, {"seed", c.seed}};
  j["validation"] = {{"synthetic_classes", c.validation.synthetic_classes},
                     {"synthetic_days", c.validation.synthetic_days},
                     {"appliances_per_class", c.validation.appliances_per_class},
                     {"perturb_p_on", c.validation.perturb_p_on}};
  j["io"] = {{"state_csv", c.io.state_csv},
             {"power_csv", c.io.power_csv},
             {"profiles_dir", c.io.profiles_dir},
             {"correlations", c.io.correlations}};
  return j;
}

namespace detail {

inline void only_keys(const json& j, const char* where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

}  // namespace detail

inline RunConfig run_config_from_json(const json& j) {
  if (!j.is_object() || j.value("format", std::string(kConfigFormat)) != kConfigFormat)
    throw ConfigError("not an enduse.config document");
  if (j.value("version", kDocumentVersion) != kDocumentVersion)
    throw ConfigError("unsupported config version");
  detail::only_keys(j, "config", {"format", "version", "grid", "smoothing", "slots", "ingest", "building",
                                  "simulation", "validation", "io"});
  RunConfig c;
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      detail::only_keys(g, "grid", {"step_minutes"});
      c.grid = TimeGrid::from_step_minutes(g.value("step_minutes", 5));
    }
    if (j.contains("smoothing")) {
      const auto& s = j["smoothing"];
      detail::only_keys(s, "smoothing", {"kernel", "bandwidth_steps", "circular"});
      c.smoothing.kernel = kernel_from_string(s.value("kernel", std::string("gaussian")));
      c.smoothing.bandwidth_steps = s.value("bandwidth_steps", 3.0);
      c.smoothing.circular = s.value("circular", false);
      c.smoothing.validate();
    }
    if (j.contains("slots") && !j["slots"].is_null()) {
      c.slots = j["slots"].get<std::vector<std::size_t>>();
      validate_slot_boundaries(*c.slots, c.grid);
    }
    if (j.contains("ingest")) {
      const auto& in = j["ingest"];
      detail::only_keys(in, "ingest", {"threshold_watts", "weekdays_only", "appliance_classes"});
      c.ingest.threshold_watts = in.value("threshold_watts", 5.0);
      c.ingest.weekdays_only = in.value("weekdays_only", true);
      if (in.contains("appliance_classes"))
        c.ingest.appliance_classes = in["appliance_classes"].get<std::map<std::string, std::string>>();
      if (!(c.ingest.threshold_watts >= 0.0)) throw ConfigError("threshold_watts must be >= 0");
    }
    if (j.contains("building")) {
      const auto& b = j["building"];
      detail::only_keys(b, "building", {"categories", "occupants", "power_watts"});
      if (b.contains("categories"))
        c.building.categories =
            b["categories"].get<std::map<std::string, std::map<std::string, std::uint64_t>>>();
      if (b.contains("occupants"))
        c.building.occupants = b["occupants"].get<std::map<std::string, std::uint64_t>>();
      if (b.contains("power_watts"))
        c.building.power_watts = b["power_watts"].get<std::map<std::string, double>>();
      c.building.validate();
    }
    if (j.contains("simulation")) {
      const auto& s = j["simulation"];
      detail::only_keys(s, "simulation", {"runs", "seed"});
      c.runs = s.value("runs", std::uint64_t{10'000});
      c.seed = s.value("seed", std::uint64_t{0});
      if (c.runs < 1) throw ConfigError("simulation.runs must be >= 1");
    }
    if (j.contains("validation")) {
      const auto& v = j["validation"];
      detail::only_keys(v, "validation",
                        {"synthetic_classes", "synthetic_days", "appliances_per_class", "perturb_p_on"});
      if (v.contains("synthetic_classes"))
        c.validation.synthetic_classes = v["synthetic_classes"].get<std::vector<std::string>>();
      c.validation.synthetic_days = v.value("synthetic_days", std::uint64_t{500});
      c.validation.appliances_per_class = v.value("appliances_per_class", std::uint64_t{2});
      c.validation.perturb_p_on = v.value("perturb_p_on", 0.0);
    }
    if (j.contains("io")) {
      const auto& io = j["io"];
      detail::only_keys(io, "io", {"state_csv", "power_csv", "profiles_dir", "correlations"});
      c.io.state_csv = io.value("state_csv", "");
      c.io.power_csv = io.value("power_csv", "");
      c.io.profiles_dir = io.value("profiles_dir", "");
      c.io.correlations = io.value("correlations", "");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

/// Canonical text of a config; its SHA-256 is the config digest recorded in outputs.
inline std::string canonical_text(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

inline std::string config_digest(const RunConfig& c) { return sha256_hex(canonical_text(c)); }

struct LoadedConfig {
  RunConfig config;
  std::filesystem::path base_dir;

  /// Resolves a configured path relative to the config file. Empty stays empty.
  std::string resolve(const std::string& p) const {
    if (p.empty()) return p;
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (base_dir / path).lexically_normal().string();
  }
};

inline LoadedConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return {run_config_from_json(j), std::filesystem::absolute(path).parent_path()};
}

}  // namespace enduse::io
