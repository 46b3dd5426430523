#pragma once

// Long-format CSV readers and writers for state and power observations.
//
//   state: appliance_id,class_id,date,step,state
//   power: appliance_id,date,step,watts
//
// Lines starting with '#' are comments (used for provenance) and blank lines are
// ignored. Fields are unquoted; identifiers must not contain commas.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

inline constexpr std::string_view kStateCsvHeader = "appliance_id,class_id,date,step,state";
inline constexpr std::string_view kPowerCsvHeader = "appliance_id,date,step,watts";

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view chomp(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

inline long parse_int(std::string_view s, std::size_t line, const char* what) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
  return v;
}

inline double parse_double(std::string_view s, std::size_t line, const char* what) {
  // std::from_chars for double is not in libstdc++ 11; strtod on a bounded copy instead.
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw ParseError(std::string("bad ") + what + " '" + tmp + "'", line);
  return v;
}

/// Calls fn(fields, line_number) for every data row after validating the header.
template <typename Fn>
void for_each_row(std::istream& in, std::string_view header, Fn&& fn) {
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;
  const std::size_t ncols = split_fields(header).size();
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header)
        throw ParseError("expected header '" + std::string(header) + "'", line_no);
      seen_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != ncols)
      throw ParseError("expected " + std::to_string(ncols) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    fn(fields, line_no);
  }
  if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'");
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Reads a state CSV. Returns one series per appliance, in order of first appearance,
/// with days sorted by date. Every (appliance, date) pair must cover all steps.
inline std::vector<StateSeries> parse_state_csv(std::istream& in, const TimeGrid& grid) {
  grid.validate();
  struct Pending {
    std::string class_id;
    std::size_t first_line = 0;
    std::map<Date, std::vector<std::int8_t>> days;  // -1 marks a missing step
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> by_appliance;

  detail::for_each_row(in, kStateCsvHeader, [&](const auto& f, std::size_t line) {
    const std::string appliance(f[0]);
    if (appliance.empty()) throw ParseError("empty appliance_id", line);
    const Date date = [&] {
      try {
        return parse_date(f[2]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
      }
    }();
    const long step = detail::parse_int(f[3], line, "step");
    if (step < 0 || step >= grid.steps_per_day)
      throw ParseError("step " + std::to_string(step) + " outside [0, " +
                           std::to_string(grid.steps_per_day - 1) + "]",
                       line);
    if (f[4] != "0" && f[4] != "1")
      throw ParseError("state must be 0 or 1, got '" + std::string(f[4]) + "'", line);

    auto [it, inserted] = by_appliance.try_emplace(appliance);
    Pending& p = it->second;
    if (inserted) {
      order.push_back(appliance);
      p.class_id = std::string(f[1]);
      p.first_line = line;
    } else if (p.class_id != f[1]) {
      throw ParseError("appliance '" + appliance + "' changes class from '" + p.class_id +
                           "' to '" + std::string(f[1]) + "'",
                       line);
    }
    auto& states = p.days.try_emplace(date, grid.size(), std::int8_t{-1}).first->second;
    if (states[step] != -1)
      throw ParseError("duplicate step " + std::to_string(step) + " for appliance '" + appliance +
                           "' on " + format_date(date),
                       line);
    states[step] = static_cast<std::int8_t>(f[4] == "1");
  });

  std::vector<StateSeries> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    const Pending& p = by_appliance.at(id);
    StateSeries s{id, p.class_id, {}};
    for (const auto& [date, raw] : p.days) {
      const auto missing = std::count(raw.begin(), raw.end(), std::int8_t{-1});
      if (missing)
        throw IntegrityError("appliance '" + id + "' on " + format_date(date) + ": " +
                             std::to_string(missing) + " of " + std::to_string(grid.size()) +
                             " steps missing");
      DayRecord d{date, false, std::vector<std::uint8_t>(raw.begin(), raw.end())};
      d.present = any_on(d.states);
      s.days.push_back(std::move(d));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<StateSeries> parse_state_csv(const std::string& path, const TimeGrid& grid) {
  auto in = detail::open_input(path);
  return parse_state_csv(in, grid);
}

/// Writes series in long format, ordered by appliance, date, step.
inline void write_state_csv(std::ostream& out, const std::vector<StateSeries>& series,
                            std::string_view comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << kStateCsvHeader << '\n';
  for (const auto& s : series)
    for (const auto& d : s.days) {
      const auto date = format_date(d.date);
      for (std::size_t t = 0; t < d.states.size(); ++t)
        out << s.appliance_id << ',' << s.class_id << ',' << date << ',' << t << ','
            << static_cast<int>(d.states[t]) << '\n';
    }
}

/// Reads a power CSV into one trace per appliance.
inline std::vector<PowerTrace> parse_power_csv(std::istream& in, const TimeGrid& grid) {
  grid.validate();
  std::vector<std::string> order;
  std::map<std::string, std::map<Date, std::vector<double>>> by_appliance;
  std::map<std::string, std::map<Date, std::vector<bool>>> seen;

  detail::for_each_row(in, kPowerCsvHeader, [&](const auto& f, std::size_t line) {
    const std::string appliance(f[0]);
    if (appliance.empty()) throw ParseError("empty appliance_id", line);
    const Date date = [&] {
      try {
        return parse_date(f[1]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
      }
    }();
    const long step = detail::parse_int(f[2], line, "step");
    if (step < 0 || step >= grid.steps_per_day)
      throw ParseError("step " + std::to_string(step) + " outside [0, " +
                           std::to_string(grid.steps_per_day - 1) + "]",
                       line);
    const double w = detail::parse_double(f[3], line, "watts");
    if (!(w >= 0.0) || w > std::numeric_limits<double>::max())
      throw ParseError("watts must be finite and >= 0, got '" + std::string(f[3]) + "'", line);

    if (!by_appliance.count(appliance)) order.push_back(appliance);
    auto& watts = by_appliance[appliance].try_emplace(date, grid.size(), 0.0).first->second;
    auto& mask = seen[appliance].try_emplace(date, grid.size(), false).first->second;
    if (mask[step])
      throw ParseError("duplicate step " + std::to_string(step) + " for appliance '" + appliance +
                           "' on " + format_date(date),
                       line);
    mask[step] = true;
    watts[step] = w;
  });

  std::vector<PowerTrace> out;
  for (const auto& id : order) {
    PowerTrace trace{id, {}};
    for (const auto& [date, watts] : by_appliance.at(id)) {
      const auto& mask = seen.at(id).at(date);
      const auto missing = std::count(mask.begin(), mask.end(), false);
      if (missing)
        throw IntegrityError("appliance '" + id + "' on " + format_date(date) + ": " +
                             std::to_string(missing) + " of " + std::to_string(grid.size()) +
                             " steps missing");
      trace.days.push_back({date, watts});
    }
    out.push_back(std::move(trace));
  }
  return out;
}

inline std::vector<PowerTrace> parse_power_csv(const std::string& path, const TimeGrid& grid) {
  auto in = detail::open_input(path);
  return parse_power_csv(in, grid);
}

inline void write_power_csv(std::ostream& out, const std::vector<PowerTrace>& traces) {
  out << kPowerCsvHeader << '\n';
  std::ostringstream num;
  for (const auto& trace : traces)
    for (const auto& d : trace.days) {
      const auto date = format_date(d.date);
      for (std::size_t t = 0; t < d.watts.size(); ++t) {
        num.str({});
        num.precision(17);
        num << d.watts[t];
        out << trace.appliance_id << ',' << date << ',' << t << ',' << num.str() << '\n';
      }
    }
}

}  // namespace enduse
