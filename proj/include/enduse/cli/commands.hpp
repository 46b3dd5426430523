#pragma once

// Subcommands of the `enduse` tool. Each takes parsed options, writes its files under
// the output directory and returns a process exit code.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "enduse/enduse.hpp"
#include "enduse/io/digest.hpp"
#include "enduse/io/json_documents.hpp"
#include "enduse/io/run_config.hpp"
#include "enduse/io/summary_csv.hpp"
#include "enduse/io/svg.hpp"
#include "enduse/validation/checks.hpp"

namespace enduse::cli {

namespace fs = std::filesystem;
using io::json;

enum ExitCode : int { kOk = 0, kInputError = 2, kConfigError = 3, kValidationFailure = 4 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  std::optional<double> threshold;
  bool plot = false;
  std::string out_dir = ".";
  std::string input;  // positional input overriding the configured path
};

/// Effective configuration after command-line overrides, with its digest.
struct Context {
  io::LoadedConfig loaded;
  std::string digest;
  fs::path out;
  std::ostream* log;
  std::ostream* warnings;

  const io::RunConfig& config() const { return loaded.config; }
  std::uint64_t seed() const { return loaded.config.seed; }

  void warn(const std::string& msg) const { *warnings << "warning: " << msg << '\n'; }
  void info(const std::string& msg) const { *log << msg << '\n'; }

  io::Provenance provenance(std::vector<std::string> inputs = {}) const {
    io::Provenance p{{}, digest, seed()};
    for (const auto& in : inputs) p.inputs.push_back({in, io::sha256_file(in)});
    return p;
  }

  std::string stamp() const {
    return "seed=" + std::to_string(seed()) + " config_sha256=" + digest;
  }

  std::string path(const std::string& name) const { return (out / name).string(); }

  /// The positional input if given, else the configured path; empty if neither.
  std::string input_or(const std::string& configured, const Options& opt) const {
    return opt.input.empty() ? loaded.resolve(configured) : opt.input;
  }
};

inline Context make_context(const Options& opt, std::ostream& log, std::ostream& warn) {
  io::LoadedConfig loaded{io::RunConfig{}, fs::current_path()};
  if (!opt.config_path.empty()) loaded = io::load_run_config(opt.config_path);
  auto& c = loaded.config;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.runs) {
    if (*opt.runs < 1) throw ConfigError("--runs must be >= 1");
    c.runs = *opt.runs;
  }
  if (opt.threshold) {
    if (!(*opt.threshold >= 0.0)) throw ConfigError("--threshold must be >= 0");
    c.ingest.threshold_watts = *opt.threshold;
  }
  fs::create_directories(opt.out_dir);
  auto digest = io::config_digest(c);
  return {std::move(loaded), std::move(digest), fs::path(opt.out_dir), &log, &warn};
}

inline std::string require_input(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " given (positional argument or config io)");
  return path;
}

// ---------------------------------------------------------------- ingest

inline int cmd_ingest(const Options& opt, std::ostream& log, std::ostream& warn) {
  const auto ctx = make_context(opt, log, warn);
  const auto& c = ctx.config();
  const auto source = require_input(ctx.input_or(c.io.power_csv, opt), "power CSV");
  const auto traces = parse_power_csv(source, c.grid);

  std::vector<StateSeries> states;
  std::uint64_t days = 0, on_steps = 0;
  for (const auto& trace : traces) {
    const auto it = c.ingest.appliance_classes.find(trace.appliance_id);
    auto s = threshold_extract(trace, c.ingest.threshold_watts,
                               it == c.ingest.appliance_classes.end() ? std::string{} : it->second);
    if (c.ingest.weekdays_only) s = filter_weekdays(s);
    for (const auto& d : s.days) {
      ++days;
      for (auto v : d.states) on_steps += v;
    }
    states.push_back(std::move(s));
  }
  std::ostringstream text;
  std::ostringstream threshold;
  threshold << c.ingest.threshold_watts;
  write_state_csv(text, states,
                  "enduse.states v1 source_sha256=" + io::sha256_file(source) + " threshold_watts=" +
                      threshold.str() + " " + ctx.stamp());
  io::write_text_file(ctx.path("states.csv"), text.str());
  ctx.info("ingest: " + std::to_string(states.size()) + " appliances, " + std::to_string(days) + " days, " +
           std::to_string(on_steps) + " ON steps -> " + ctx.path("states.csv"));
  return kOk;
}

// ---------------------------------------------------------------- estimate

/// Steps whose value is the fallback because no transition could be counted.
inline json fallback_report(const ProbabilityProfile& p) {
  json on = json::array(), off = json::array();
  for (std::size_t t = 1; t < p.size(); ++t) {
    if (!p.on_support[t]) on.push_back(t);
    if (!p.off_support[t]) off.push_back(t);
  }
  const double transitions = p.size() > 1 ? static_cast<double>(p.size() - 1) : 1.0;
  const double share = static_cast<double>(on.size() + off.size()) / (2.0 * transitions);
  return {{"fallback_on_steps", on},
          {"fallback_off_steps", off},
          {"fallback_share", share},
          {"fallback_dominated", share > 0.5}};
}

inline int cmd_estimate(const Options& opt, std::ostream& log, std::ostream& warn) {
  const auto ctx = make_context(opt, log, warn);
  const auto& c = ctx.config();
  const auto source = require_input(ctx.input_or(c.io.state_csv, opt), "state CSV");
  const auto all = parse_state_csv(source, c.grid);
  const auto prov = ctx.provenance({source});
  const auto boundaries = c.slot_boundaries();
  const std::size_t T = c.grid.size();

  std::vector<std::string> classes;
  std::vector<StateSeries> kept;
  std::vector<RouProfile> rous;
  json slots = json::array(), durations = json::array(), diagnostics = json::object();
  for (const auto& [cls, group] : group_by_class(all)) {
    std::uint64_t days = 0;
    for (const auto& s : group) days += s.num_days();
    if (days == 0) {
      ctx.warn("class '" + cls + "' has no observed days; skipped");
      continue;
    }
    json diag;
    json warnings = json::array();
    const auto raw = estimate_empirical_probs(group, c.grid);
    if (raw.p_pres == 0.0) {
      const auto msg = "class '" + cls + "' is never ON; profile written with p_pres = 0";
      ctx.warn(msg);
      warnings.push_back(msg);
    }
    const auto smooth = smooth_profile(raw, c.smoothing);
    io::write_json_file(ctx.path(cls + ".raw.profile.json"), io::to_json(io::ProfileDocument{raw, c.grid, {}, prov}));
    io::write_json_file(ctx.path(cls + ".profile.json"),
                        io::to_json(io::ProfileDocument{smooth, c.grid, c.smoothing, prov}));

    rous.push_back(estimate_rou(group, c.grid));
    const auto slot_model = build_slot_model(group, boundaries, c.grid);
    slots.push_back({{"model", io::to_json(slot_model)},
                     {"diagnostics", io::to_json(slot_geometric_diagnostic(group, slot_model, c.grid))}});
    try {
      durations.push_back(io::to_json(estimate_durations(group)));
    } catch (const EstimationError& e) {
      const auto msg = "class '" + cls + "': no duration model (" + e.what() + ")";
      ctx.warn(msg);
      warnings.push_back(msg);
      durations.push_back({{"class_id", cls}, {"histogram", json::object()}, {"gamma", nullptr}});
    }
    diag["appliances"] = group.size();
    diag["days"] = days;
    std::uint64_t present = 0;
    for (const auto& s : group) present += s.num_present_days();
    diag["present_days"] = present;
    diag["raw"] = fallback_report(raw);
    diag["smoothed"] = fallback_report(smooth);
    diag["warnings"] = warnings;
    if (diag["raw"]["fallback_dominated"].get<bool>())
      ctx.warn("class '" + cls + "': most raw steps use the fallback probability");
    diagnostics[cls] = diag;

    classes.push_back(cls);
    kept.insert(kept.end(), group.begin(), group.end());
  }
  for (const auto& [cls, n] : c.building.appliance_counts())
    if (n > 0 && std::find(classes.begin(), classes.end(), cls) == classes.end())
      ctx.warn("building class '" + cls + "' has no observations");

  CorrelationTable table = CorrelationTable::zeros(classes);
  if (!classes.empty()) {
    try {
      table = estimate_correlations(kept, c.grid, classes);
    } catch (const EstimationError& e) {
      ctx.warn(std::string("correlations left undefined: ") + e.what());
    }
  }
  io::write_json_file(ctx.path("correlations.json"), io::to_json(table, prov));

  std::ostringstream rou;
  rou << "# enduse.rou v1 " << ctx.stamp() << "\nstep";
  for (const auto& r : rous) rou << ',' << r.class_id;
  rou << '\n';
  for (std::size_t t = 0; t < T; ++t) {
    rou << t;
    for (const auto& r : rous) rou << ',' << io::fmt_number(r.rou[t]);
    rou << '\n';
  }
  io::write_text_file(ctx.path("rou.csv"), rou.str());

  const json p = io::to_json(prov);
  io::write_json_file(ctx.path("slots.json"), {{"format", "enduse.slots"}, {"version", 1}, {"classes", slots}, {"provenance", p}});
  io::write_json_file(ctx.path("durations.json"),
                      {{"format", "enduse.durations"}, {"version", 1}, {"classes", durations}, {"provenance", p}});
  io::write_json_file(ctx.path("diagnostics.json"),
                      {{"format", "enduse.diagnostics"}, {"version", 1}, {"classes", diagnostics}, {"provenance", p}});
  ctx.info("estimate: " + std::to_string(classes.size()) + " classes -> " + ctx.out.string());
  return kOk;
}

// ---------------------------------------------------------------- simulate

inline std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline void write_plots(const Context& ctx, const SimulationSummary& s) {
  const auto note = "enduse.plot v1 runs=" + std::to_string(s.num_runs) + " " + ctx.stamp();
  const auto& grid = ctx.config().grid;
  for (const auto& cls : s.classes) {
    if (!s.counts.at(cls)) continue;
    const auto& mean = s.per_class_mean.at(cls);
    io::write_text_file(
        ctx.path(cls + ".svg"),
        io::line_chart_svg(cls + " (" + std::to_string(s.counts.at(cls)) + " appliances)", "appliances ON", grid,
                           {{"mean", mean, "#1f77b4", false},
                            {"mean + std", add(mean, s.per_class_std.at(cls)), "#d62728", true}},
                           note));
  }
  io::write_text_file(ctx.path("aggregate.svg"),
                      io::line_chart_svg("building aggregate", "watts", grid,
                                         {{"mean", s.aggregate_mean_watts, "#1f77b4", false},
                                          {"mean + std (independent)", add(s.aggregate_mean_watts, s.aggregate_std_raw),
                                           "#7f7f7f", true},
                                          {"mean + std (corrected)",
                                           add(s.aggregate_mean_watts, s.aggregate_std_corrected), "#d62728", true}},
                                         note));
}

inline int cmd_simulate(const Options& opt, std::ostream& log, std::ostream& warn) {
  const auto ctx = make_context(opt, log, warn);
  const auto& c = ctx.config();
  const auto counts = c.building.appliance_counts();
  const auto dir = ctx.input_or(c.io.profiles_dir, opt);

  std::map<std::string, ProbabilityProfile> profiles;
  for (const auto& [cls, n] : counts) {
    if (!n) continue;
    if (!c.building.power_watts.count(cls)) throw ConfigError("no power_watts entry for class '" + cls + "'");
    const auto file = (fs::path(dir) / (cls + ".profile.json")).string();
    if (dir.empty() || !fs::exists(file)) throw ConfigError("missing profile for class '" + cls + "': " + file);
    auto doc = io::profile_document_from_json(io::read_json_file(file));
    if (!(doc.grid == c.grid))
      throw ConfigError("profile '" + file + "' uses " + std::to_string(doc.grid.step_minutes) +
                        "-minute steps, config uses " + std::to_string(c.grid.step_minutes));
    profiles.emplace(cls, std::move(doc.profile));
  }

  std::string corr_path = c.io.correlations.empty() ? std::string{} : ctx.loaded.resolve(c.io.correlations);
  if (corr_path.empty() && !dir.empty() && fs::exists(fs::path(dir) / "correlations.json"))
    corr_path = (fs::path(dir) / "correlations.json").string();
  std::vector<std::string> names;
  for (const auto& [cls, n] : counts) names.push_back(cls);
  CorrelationTable table = CorrelationTable::zeros(names);
  if (corr_path.empty())
    ctx.warn("no correlation table; corrected std equals the independent sum");
  else
    table = io::correlation_table_from_json(io::read_json_file(corr_path));

  const SimulationConfig sim{c.runs, c.seed, c.grid, threads_from_env()};
  const auto summary = simulate_building(c.building, profiles, sim, table);
  if (!corr_path.empty())
    for (const auto& [a, b] : summary.undefined_correlations)
        ctx.warn("correlation " + a + "/" + b + " undefined; read as 0");
  const auto clamped = std::count(summary.count_correction_clamped.begin(), summary.count_correction_clamped.end(), true);
  if (clamped) ctx.warn(std::to_string(clamped) + " steps with negative corrected variance clamped to 0");

  std::ostringstream sum_csv, agg_csv;
  io::write_summary_csv(sum_csv, summary, ctx.digest);
  io::write_aggregate_csv(agg_csv, summary, ctx.digest);
  io::write_text_file(ctx.path("summary.csv"), sum_csv.str());
  io::write_text_file(ctx.path("aggregate.csv"), agg_csv.str());
  if (opt.plot) write_plots(ctx, summary);
  ctx.info("simulate: " + std::to_string(summary.num_runs) + " runs, " + std::to_string(profiles.size()) +
           " classes -> " + ctx.out.string());
  return kOk;
}

// ---------------------------------------------------------------- synth

/// Observations drawn from built-in profiles, one group per configured class.
inline std::vector<StateSeries> synthetic_observations(const io::RunConfig& c) {
  std::vector<StateSeries> out;
  const auto& v = c.validation;
  for (std::size_t k = 0; k < v.synthetic_classes.size(); ++k) {
    const auto truth = demo_profile(v.synthetic_classes[k], c.grid);
    for (std::uint64_t i = 0; i < v.appliances_per_class; ++i)
      out.push_back(generate_synthetic(
          {truth, v.synthetic_days, stream_key(c.seed, k, i), truth.class_id + "-" + std::to_string(i)}, c.grid));
  }
  return out;
}

inline int cmd_synth(const Options& opt, std::ostream& log, std::ostream& warn) {
  const auto ctx = make_context(opt, log, warn);
  const auto& c = ctx.config();
  fs::create_directories(ctx.out / "truth");
  for (const auto& cls : c.validation.synthetic_classes)
    io::write_json_file((ctx.out / "truth" / (cls + ".profile.json")).string(),
                        io::to_json(io::ProfileDocument{demo_profile(cls, c.grid), c.grid, {}, ctx.provenance()}));
  const auto obs = synthetic_observations(c);
  std::ostringstream text;
  write_state_csv(text, obs, "enduse.states v1 synthetic " + ctx.stamp());
  io::write_text_file(ctx.path("states.csv"), text.str());
  ctx.info("synth: " + std::to_string(obs.size()) + " appliances x " + std::to_string(c.validation.synthetic_days) +
           " days -> " + ctx.out.string());
  return kOk;
}

// ---------------------------------------------------------------- validate

inline int cmd_validate(const Options& opt, std::ostream& log, std::ostream& warn) {
  const auto ctx = make_context(opt, log, warn);
  const auto& c = ctx.config();
  const auto source = ctx.input_or(c.io.state_csv, opt);
  const auto obs = source.empty() ? synthetic_observations(c) : parse_state_csv(source, c.grid);
  const double perturb = c.validation.perturb_p_on;

  std::vector<validation::CheckResult> checks;
  for (const auto& [cls, group] : group_by_class(obs)) {
    auto exact = validation::check_mean_identity(group, c.grid, perturb);
    auto mc = validation::check_monte_carlo_mean(group, c.grid, c.runs, c.seed, perturb);
    exact.name += " [" + cls + "]";
    mc.name += " [" + cls + "]";
    checks.push_back(std::move(exact));
    checks.push_back(std::move(mc));
  }
  checks.push_back(validation::check_consistency_ladder(
      ProbabilityProfile::constant("constant-0.1", c.grid.size(), 0.1, 0.1, 1.0, 0.1), c.grid, c.seed));
  checks.push_back(validation::check_variance_correction(c.grid, c.seed));

  bool failed = false;
  json report = json::array();
  for (const auto& r : checks) {
    failed |= r.status == validation::Status::failed;
    std::ostringstream line;
    line << validation::to_string(r.status) << "  " << r.name << ": measured " << std::setprecision(6) << r.measured
         << " (tolerance " << r.tolerance << ")" << (r.detail.empty() ? "" : "; " + r.detail);
    ctx.info(line.str());
    report.push_back({{"name", r.name},
                      {"status", validation::to_string(r.status)},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  io::write_json_file(ctx.path("validation.json"),
                      {{"format", "enduse.validation"},
                       {"version", 1},
                       {"passed", !failed},
                       {"checks", report},
                       {"provenance", io::to_json(ctx.provenance(source.empty() ? std::vector<std::string>{}
                                                                                 : std::vector<std::string>{source}))}});
  return failed ? kValidationFailure : kOk;
}

// ---------------------------------------------------------------- dispatch

template <typename Fn>
int run_guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const IntegrityError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const EstimationError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace enduse::cli
