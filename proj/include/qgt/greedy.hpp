#pragma once

// Greedy (thresholding) approximation in the trigonometric system, plus the
// decreasing rearrangement and the Lorentz sequence norms l^{2,inf}, l^{2,1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qgt/fourier.hpp"
#include "qgt/grid.hpp"
#include "qgt/weights.hpp"

namespace qgt {

/// Coefficients with modulus below this are treated as zero when ordering.
inline constexpr double default_coefficient_floor = 1e-13;

/// rho(1), rho(2), ... as natural-ordering indices.
struct GreedyOrdering {
  std::vector<std::int64_t> rho;
};

/// Orders the nonzero coefficients by nonincreasing modulus; equal moduli go
/// to the smaller natural index first.
inline GreedyOrdering greedy_ordering(const CoefficientVector& c,
                                      double floor = default_coefficient_floor) {
  std::vector<std::pair<double, std::int64_t>> keyed;
  keyed.reserve(c.size());
  for (const auto& [k, a] : c.entries()) {
    const double mod = std::abs(a);
    if (mod > 0.0 && mod >= floor) keyed.emplace_back(mod, freq_to_natural_index(k));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  GreedyOrdering out;
  out.rho.reserve(keyed.size());
  for (const auto& kv : keyed) out.rho.push_back(kv.second);
  return out;
}

/// G_m: synthesis of the first m terms of the greedy ordering.
inline SampledFunction greedy_approximant(const CoefficientVector& c, std::size_t m, const Grid& grid,
                                          double floor = default_coefficient_floor) {
  const auto order = greedy_ordering(c, floor);
  const CharacterTable table(grid);
  SampledFunction out(grid);
  const std::size_t terms = std::min(m, order.rho.size());
  for (std::size_t i = 0; i < terms; ++i) {
    const auto k = natural_index_to_freq(order.rho[i]);
    table.accumulate(k, c[k] * inv_sqrt_two_pi, out.values());
  }
  return out;
}

/// a_n^*: the moduli sorted in nonincreasing order.
inline std::vector<double> decreasing_rearrangement(std::span<const double> moduli) {
  std::vector<double> out(moduli.size());
  std::transform(moduli.begin(), moduli.end(), out.begin(), [](double v) { return std::abs(v); });
  std::sort(out.begin(), out.end(), std::greater<>{});
  return out;
}

inline std::vector<double> decreasing_rearrangement(const CoefficientVector& c) {
  std::vector<double> moduli;
  moduli.reserve(c.size());
  for (const auto& [k, a] : c.entries()) moduli.push_back(std::abs(a));
  return decreasing_rearrangement(moduli);
}

struct LorentzNorms {
  double l21 = 0.0;    ///< sum_n n^{-1/2} a_n^*
  double l2inf = 0.0;  ///< sup_n n^{1/2} a_n^*
};

inline LorentzNorms lorentz_norms(std::span<const double> values) {
  const auto a = decreasing_rearrangement(values);
  LorentzNorms out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    out.l21 += a[i] / std::sqrt(n);
    out.l2inf = std::max(out.l2inf, std::sqrt(n) * a[i]);
  }
  return out;
}

inline LorentzNorms lorentz_norms(const CoefficientVector& c) {
  return lorentz_norms(decreasing_rearrangement(c));
}

struct ErrorPoint {
  std::size_t m = 0;
  double error = 0.0;
};

/// ||f - G_m f||_{p,w} for m = 0..m_max, with all coefficients up to the
/// largest alias-free band M/2 - 1 computed from the samples of f.
inline std::vector<ErrorPoint> greedy_error_curve(const SampledFunction& f, const Weight& w, double p,
                                                  std::size_t m_max,
                                                  double floor = default_coefficient_floor) {
  const Grid& grid = f.grid();
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);
  const auto band = static_cast<std::int64_t>(grid.size() / 2) - 1;
  const auto c = fourier_coefficients(f, band, table);
  const auto order = greedy_ordering(c, floor);

  std::vector<ErrorPoint> out;
  out.reserve(m_max + 1);
  SampledFunction residual = f;
  out.push_back({0, weighted_lp_norm(residual, wv, p)});
  for (std::size_t m = 1; m <= m_max; ++m) {
    if (m <= order.rho.size()) {
      const auto k = natural_index_to_freq(order.rho[m - 1]);
      table.accumulate(k, -c[k] * inv_sqrt_two_pi, residual.values());
      out.push_back({m, weighted_lp_norm(residual, wv, p)});
    } else {
      out.push_back({m, out.back().error});
    }
  }
  return out;
}

/// ||f - T_{M/2-1} f||_{p,w}: what the alias-free band cannot represent.
inline double truncation_error(const SampledFunction& f, const Weight& w, double p) {
  const CharacterTable table(f.grid());
  const auto band = static_cast<std::int64_t>(f.grid().size() / 2) - 1;
  const auto c = fourier_coefficients(f, band, table);
  auto residual = f - synthesize_if(c, table, [](std::int64_t) { return true; });
  return weighted_lp_norm(residual, w.sample(f.grid()), p);
}

}  // namespace qgt
