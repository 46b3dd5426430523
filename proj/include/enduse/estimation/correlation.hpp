#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

/// Average pairwise state correlation within and between appliance classes.
///
/// rho[a][a] averages over pairs of distinct appliances of class a (never an appliance
/// with itself). Entries with no usable (pair, step) sample are undefined: they read as
/// 0 and defined[a][b] is false.
struct CorrelationTable {
  std::vector<std::string> classes;
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<std::uint64_t>> pair_counts;
  std::vector<std::vector<bool>> defined;

  static CorrelationTable zeros(std::vector<std::string> classes) {
    const std::size_t K = classes.size();
    return {std::move(classes), std::vector<std::vector<double>>(K, std::vector<double>(K, 0.0)),
            std::vector<std::vector<std::uint64_t>>(K, std::vector<std::uint64_t>(K, 0)),
            std::vector<std::vector<bool>>(K, std::vector<bool>(K, false))};
  }

  std::size_t size() const noexcept { return classes.size(); }

  std::optional<std::size_t> index_of(const std::string& class_id) const {
    const auto it = std::find(classes.begin(), classes.end(), class_id);
    if (it == classes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - classes.begin());
  }

  /// Correlation used downstream: undefined or unknown classes read as 0.
  double value(const std::string& a, const std::string& b) const {
    const auto ia = index_of(a), ib = index_of(b);
    if (!ia || !ib || !defined[*ia][*ib]) return 0.0;
    return rho[*ia][*ib];
  }

  bool is_defined(const std::string& a, const std::string& b) const {
    const auto ia = index_of(a), ib = index_of(b);
    return ia && ib && defined[*ia][*ib];
  }
};

namespace detail {

struct PairMoments {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> sx, sy, sxy;
};

/// Per-step co-occurrence counts of two appliances over the days both were present.
inline PairMoments pair_moments(const StateSeries& x, const StateSeries& y, std::size_t T) {
  PairMoments m{0, std::vector<std::uint64_t>(T, 0), std::vector<std::uint64_t>(T, 0),
                std::vector<std::uint64_t>(T, 0)};
  auto ix = x.days.begin(), iy = y.days.begin();
  while (ix != x.days.end() && iy != y.days.end()) {
    if (ix->date < iy->date) {
      ++ix;
    } else if (iy->date < ix->date) {
      ++iy;
    } else {
      if (ix->present && iy->present) {
        ++m.n;
        const auto* a = ix->states.data();
        const auto* b = iy->states.data();
        for (std::size_t t = 0; t < T; ++t) {
          m.sx[t] += a[t];
          m.sy[t] += b[t];
          m.sxy[t] += a[t] & b[t];
        }
      }
      ++ix;
      ++iy;
    }
  }
  return m;
}

}  // namespace detail

/// Averages the per-step Pearson correlation of the ON indicators of every distinct
/// appliance pair, over the days both appliances were present. Steps where either
/// indicator is constant are skipped. Pairs are visited in a fixed order so the result
/// is bit-stable.
inline CorrelationTable estimate_correlations(std::span<const StateSeries> observations,
                                              const TimeGrid& grid,
                                              std::vector<std::string> class_order = {}) {
  const std::size_t T = grid.size();
  for (const auto& s : observations) {
    validate(s, grid);
    if (std::find(class_order.begin(), class_order.end(), s.class_id) == class_order.end())
      class_order.push_back(s.class_id);
  }
  if (observations.size() < 2) throw EstimationError("correlations need at least two appliances");

  auto table = CorrelationTable::zeros(std::move(class_order));
  const std::size_t K = table.size();
  std::vector<std::vector<double>> sum(K, std::vector<double>(K, 0.0));

  for (std::size_t i = 0; i < observations.size(); ++i) {
    const std::size_t a = *table.index_of(observations[i].class_id);
    for (std::size_t j = i + 1; j < observations.size(); ++j) {
      const std::size_t b = *table.index_of(observations[j].class_id);
      const auto m = detail::pair_moments(observations[i], observations[j], T);
      const auto n = static_cast<std::int64_t>(m.n);
      for (std::size_t t = 0; t < T; ++t) {
        const auto sx = static_cast<std::int64_t>(m.sx[t]);
        const auto sy = static_cast<std::int64_t>(m.sy[t]);
        const auto sxy = static_cast<std::int64_t>(m.sxy[t]);
        const auto vx = sx * (n - sx), vy = sy * (n - sy);
        if (vx == 0 || vy == 0) continue;
        const double r = static_cast<double>(n * sxy - sx * sy) /
                         std::sqrt(static_cast<double>(vx) * static_cast<double>(vy));
        sum[a][b] += r;
        ++table.pair_counts[a][b];
        if (a != b) {
          sum[b][a] += r;
          ++table.pair_counts[b][a];
        }
      }
    }
  }
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b)
      if (table.pair_counts[a][b]) {
        table.rho[a][b] =
            std::clamp(sum[a][b] / static_cast<double>(table.pair_counts[a][b]), -1.0, 1.0);
        table.defined[a][b] = true;
      }
  return table;
}

}  // namespace enduse
