#pragma once

// Versioned JSON documents written by `enduse estimate` and read by `enduse simulate`.
// A profile document carries everything the simulator needs for one class.

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/correlation.hpp"
#include "enduse/estimation/durations.hpp"
#include "enduse/estimation/probability_profile.hpp"
#include "enduse/estimation/rou.hpp"
#include "enduse/estimation/slots.hpp"
#include "enduse/estimation/smoothing.hpp"

namespace enduse::io {

using json = nlohmann::ordered_json;

inline constexpr int kDocumentVersion = 1;
inline constexpr const char* kProfileFormat = "enduse.profile";
inline constexpr const char* kCorrelationFormat = "enduse.correlations";

struct InputDigest {
  std::string path;
  std::string sha256;
  friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

struct Provenance {
  std::vector<InputDigest> inputs;
  std::string config_sha256;
  std::optional<std::uint64_t> seed;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ProfileDocument {
  ProbabilityProfile profile;
  TimeGrid grid;
  std::optional<SmootherConfig> smoothing;  // empty for raw estimates
  Provenance provenance;
};

inline json to_json(const Provenance& p) {
  json inputs = json::array();
  for (const auto& in : p.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  json j{{"inputs", inputs}, {"config_sha256", p.config_sha256}};
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  return j;
}

inline Provenance provenance_from_json(const json& j) {
  Provenance p;
  for (const auto& in : j.at("inputs")) p.inputs.push_back({in.at("path"), in.at("sha256")});
  p.config_sha256 = j.at("config_sha256");
  if (!j.at("seed").is_null()) p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

inline json to_json(const SmootherConfig& s) {
  return {{"kernel", std::string(to_string(s.kernel))},
          {"bandwidth_steps", s.bandwidth_steps},
          {"circular", s.circular}};
}

inline SmootherConfig smoother_from_json(const json& j) {
  SmootherConfig s;
  s.kernel = kernel_from_string(j.at("kernel").get<std::string>());
  s.bandwidth_steps = j.at("bandwidth_steps");
  s.circular = j.at("circular");
  s.validate();
  return s;
}

inline void check_format(const json& j, const char* format) {
  if (!j.is_object() || j.value("format", "") != format)
    throw ParseError(std::string("not an ") + format + " document");
  if (j.value("version", 0) != kDocumentVersion)
    throw ParseError(std::string(format) + ": unsupported version " + j.value("version", json(0)).dump());
}

inline json to_json(const ProfileDocument& doc) {
  const auto& p = doc.profile;
  json j;
  j["format"] = kProfileFormat;
  j["version"] = kDocumentVersion;
  j["class_id"] = p.class_id;
  j["step_minutes"] = doc.grid.step_minutes;
  j["steps_per_day"] = doc.grid.steps_per_day;
  j["p_pres"] = p.p_pres;
  j["p_init"] = p.p_init;
  j["p_on"] = p.p_on;
  j["p_off"] = p.p_off;
  j["on_support"] = p.on_support;
  j["off_support"] = p.off_support;
  j["smoothing"] = doc.smoothing ? to_json(*doc.smoothing) : json(nullptr);
  j["provenance"] = to_json(doc.provenance);
  return j;
}

inline ProfileDocument profile_document_from_json(const json& j) {
  check_format(j, kProfileFormat);
  try {
    ProfileDocument doc;
    doc.grid = TimeGrid{j.at("step_minutes"), j.at("steps_per_day")};
    doc.grid.validate();
    auto& p = doc.profile;
    p.class_id = j.at("class_id");
    p.p_pres = j.at("p_pres");
    p.p_init = j.at("p_init");
    p.p_on = j.at("p_on").get<std::vector<double>>();
    p.p_off = j.at("p_off").get<std::vector<double>>();
    p.on_support = j.at("on_support").get<std::vector<std::uint64_t>>();
    p.off_support = j.at("off_support").get<std::vector<std::uint64_t>>();
    if (!j.at("smoothing").is_null()) doc.smoothing = smoother_from_json(j.at("smoothing"));
    doc.provenance = provenance_from_json(j.at("provenance"));
    validate(p, doc.grid.size());
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("profile document: ") + e.what());
  }
}

inline json to_json(const CorrelationTable& t, const Provenance& prov) {
  json j;
  j["format"] = kCorrelationFormat;
  j["version"] = kDocumentVersion;
  j["classes"] = t.classes;
  j["rho"] = t.rho;
  j["pair_counts"] = t.pair_counts;
  j["defined"] = t.defined;
  j["provenance"] = to_json(prov);
  return j;
}

inline CorrelationTable correlation_table_from_json(const json& j) {
  check_format(j, kCorrelationFormat);
  try {
    CorrelationTable t;
    t.classes = j.at("classes").get<std::vector<std::string>>();
    t.rho = j.at("rho").get<std::vector<std::vector<double>>>();
    t.pair_counts = j.at("pair_counts").get<std::vector<std::vector<std::uint64_t>>>();
    t.defined = j.at("defined").get<std::vector<std::vector<bool>>>();
    const std::size_t K = t.classes.size();
    const auto square = [K](const auto& m) {
      if (m.size() != K) return false;
      for (const auto& row : m)
        if (row.size() != K) return false;
      return true;
    };
    if (!square(t.rho) || !square(t.pair_counts) || !square(t.defined))
      throw ParseError("correlation matrices must be " + std::to_string(K) + "x" + std::to_string(K));
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b)
        if (t.rho[a][b] != t.rho[b][a] || t.rho[a][b] < -1.0 || t.rho[a][b] > 1.0)
          throw ParseError("correlations must be symmetric and inside [-1, 1]");
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("correlation document: ") + e.what());
  }
}

inline json to_json(const SlotModel& m) {
  return {{"class_id", m.class_id}, {"boundaries", m.boundaries}, {"p_pw", m.p_pw},
          {"n_pw", m.n_pw},         {"days", m.days}};
}

inline json to_json(const std::vector<SlotDiagnostic>& diags) {
  json out = json::array();
  for (const auto& d : diags) {
    json j{{"slot", d.slot}, {"start", d.start}, {"width", d.width}, {"events", d.events}};
    if (d.insufficient_data()) {
      j["status"] = "insufficient data";
      j["total_variation"] = nullptr;
    } else {
      j["status"] = "ok";
      j["total_variation"] = *d.total_variation;
      j["empirical"] = d.empirical;
    }
    j["geometric"] = d.geometric;
    out.push_back(std::move(j));
  }
  return out;
}

inline json to_json(const DurationModel& m) {
  json hist = json::object();
  for (const auto& [len, c] : m.histogram) hist[std::to_string(len)] = c;
  json j{{"class_id", m.class_id}, {"histogram", hist}};
  if (m.gamma)
    j["gamma"] = {{"shape", m.gamma->shape}, {"scale", m.gamma->scale}, {"method", "moments"}};
  else
    j["gamma"] = nullptr;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace enduse::io
