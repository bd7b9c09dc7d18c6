#pragma once

// The trigonometric system e_k(t) = (2pi)^{-1/2} e^{ikt} in its natural
// ordering 0, -1, 1, -2, 2, ..., Fourier coefficients, the partial-sum
// operators T_N (symmetric) and S_N (natural order), and Dirichlet kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgt/detail/parallel.hpp"
#include "qgt/detail/random.hpp"
#include "qgt/grid.hpp"
#include "qgt/weights.hpp"

namespace qgt {

/// n_j for j >= 1: n_1 = 0, n_{2i} = -i, n_{2i+1} = i.
inline std::int64_t natural_index_to_freq(std::int64_t j) {
  if (j < 1) throw std::invalid_argument("natural index must be >= 1, got " + std::to_string(j));
  return j % 2 == 0 ? -(j / 2) : (j - 1) / 2;
}

inline std::int64_t freq_to_natural_index(std::int64_t k) noexcept {
  return k > 0 ? 2 * k + 1 : (k < 0 ? -2 * k : 1);
}

/// Finite map k -> a_k; absent frequencies are zero.
class CoefficientVector {
public:
  using Map = std::map<std::int64_t, complex>;

  CoefficientVector() = default;

  void set(std::int64_t k, complex a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::domain_error("non-finite coefficient at frequency " + std::to_string(k));
    entries_[k] = a;
  }

  complex operator[](std::int64_t k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? complex{0.0, 0.0} : it->second;
  }

  const Map& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::int64_t max_freq() const noexcept {
    std::int64_t m = 0;
    for (const auto& [k, a] : entries_) m = std::max(m, k < 0 ? -k : k);
    return m;
  }

  double l2_norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto& [k, a] : entries_) acc += std::norm(a);
    return acc;
  }

private:
  Map entries_;
};

/// sum_k c_k e_k on the grid, for the entries accepted by keep(k).
template <class Keep>
SampledFunction synthesize_if(const CoefficientVector& c, const CharacterTable& table, Keep&& keep) {
  SampledFunction out(table.grid());
  for (const auto& [k, a] : c.entries())
    if (keep(k)) table.accumulate(k, a * inv_sqrt_two_pi, out.values());
  return out;
}

inline SampledFunction synthesize(const CoefficientVector& c, const Grid& grid) {
  const CharacterTable table(grid);
  return synthesize_if(c, table, [](std::int64_t) { return true; });
}

/// <f, e_k> for |k| <= N by midpoint quadrature. Requires N < M/2.
inline CoefficientVector fourier_coefficients(const SampledFunction& f, std::int64_t n,
                                              const CharacterTable& table) {
  const auto m = static_cast<std::int64_t>(f.grid().size());
  if (n < 0) throw std::invalid_argument("coefficient band must be >= 0");
  if (2 * n >= m)
    throw std::invalid_argument("coefficient band " + std::to_string(n) +
                                " aliases on a grid of size " + std::to_string(m));
  if (!(table.grid() == f.grid())) throw std::invalid_argument("character table grid mismatch");
  CoefficientVector c;
  const double scale = f.grid().step() * inv_sqrt_two_pi;
  for (std::int64_t k = -n; k <= n; ++k) c.set(k, table.correlate(k, f.values()) * scale);
  return c;
}

inline CoefficientVector fourier_coefficients(const SampledFunction& f, std::int64_t n) {
  return fourier_coefficients(f, n, CharacterTable(f.grid()));
}

/// T_N: sum over |k| <= N.
inline SampledFunction partial_sum_symmetric(const CoefficientVector& c, std::int64_t n, const Grid& grid) {
  const CharacterTable table(grid);
  return synthesize_if(c, table, [n](std::int64_t k) { return k >= -n && k <= n; });
}

/// S_N: sum over the first N frequencies of the natural ordering.
inline SampledFunction partial_sum_natural(const CoefficientVector& c, std::int64_t n, const Grid& grid) {
  const CharacterTable table(grid);
  return synthesize_if(c, table, [n](std::int64_t k) { return freq_to_natural_index(k) <= n; });
}

/// Samples of D_N(t - u) = sum_{j=1}^N e_{n_j}(t - u).
inline SampledFunction dirichlet_kernel(std::int64_t n, double shift, const CharacterTable& table) {
  if (n < 1) throw std::invalid_argument("Dirichlet kernel needs N >= 1");
  SampledFunction out(table.grid());
  for (std::int64_t j = 1; j <= n; ++j) {
    const std::int64_t k = natural_index_to_freq(j);
    // e_k(t - u) = e^{-iku} e_k(t)
    const complex phase = std::polar(inv_sqrt_two_pi, -static_cast<double>(k) * shift);
    table.accumulate(k, phase, out.values());
  }
  return out;
}

inline SampledFunction dirichlet_kernel(std::int64_t n, double shift, const Grid& grid) {
  return dirichlet_kernel(n, shift, CharacterTable(grid));
}

// ---------------------------------------------------------------------------
// Operator-norm probe

struct ProbePoint {
  std::int64_t n = 0;
  /// max over the test family of ||T_N f||_{p,w} / ||f||_{p,w}: a lower bound
  /// on the operator norm, never the norm itself.
  double ratio = 0.0;
  std::string best_test;
};

struct ProbeOptions {
  std::size_t grid_size = 4096;
  unsigned threads = 1;
};

namespace detail {

/// Indicator of the arc |t - u| <= width/2 with raised-cosine edges of
/// length width/4.
inline double smoothed_step(double t, double u, double width) {
  const double d = std::abs(wrap_angle(t - u));
  const double half = 0.5 * width;
  const double ramp = 0.25 * width;
  if (d <= half) return 1.0;
  if (d >= half + ramp) return 0.0;
  return 0.5 * (1.0 + std::cos(pi * (d - half) / ramp));
}

}  // namespace detail

/// Lower bounds on ||T_N||_{p,w} for each N in ns.
///
/// Test family per N, all keyed by (seed, N, trial): trial 0 is a random
/// polynomial of degree <= N, further trials random polynomials of degree
/// <= 2N (coefficients uniform on the unit disc); then smoothed steps of
/// widths pi/N, 2pi/N, 4pi/N centred at 0, pi, and the grid argmin/argmax of
/// w, where singular weights concentrate.
inline std::vector<ProbePoint> operator_norm_probe(const Weight& w, double p,
                                                   const std::vector<std::int64_t>& ns, int trials,
                                                   std::uint64_t seed, const ProbeOptions& opts = {}) {
  if (trials < 1) throw std::invalid_argument("probe needs trials >= 1");
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  const Grid grid(opts.grid_size);
  for (auto n : ns)
    if (n < 1 || 4 * n >= static_cast<std::int64_t>(grid.size()))
      throw std::invalid_argument("probe frequency " + std::to_string(n) + " needs 4N < grid size");
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);
  const auto bounds = essential_bounds(w, grid);
  const std::vector<double> centres{0.0, -pi, bounds.argmin, bounds.argmax};

  std::vector<ProbePoint> out(ns.size());
  detail::parallel_for(ns.size(), opts.threads, [&](std::size_t idx) {
    const std::int64_t n = ns[idx];
    ProbePoint best{n, 0.0, {}};
    auto consider = [&](const SampledFunction& f, const std::string& label) {
      const double denom = weighted_lp_norm(f, wv, p);
      if (!(denom > 0.0)) return;
      const auto c = fourier_coefficients(f, n, table);
      const auto tn = synthesize_if(c, table, [](std::int64_t) { return true; });
      const double ratio = weighted_lp_norm(tn, wv, p) / denom;
      if (ratio > best.ratio) {
        best.ratio = ratio;
        best.best_test = label;
      }
    };
    for (int trial = 0; trial < trials; ++trial) {
      detail::KeyedRng rng(seed, {0x70726f6265ULL, static_cast<std::uint64_t>(n),
                                  static_cast<std::uint64_t>(trial)});
      const std::int64_t degree = trial == 0 ? n : 2 * n;
      CoefficientVector c;
      for (std::int64_t k = -degree; k <= degree; ++k) c.set(k, rng.unit_disc());
      consider(synthesize_if(c, table, [](std::int64_t) { return true; }),
               "random-poly(trial=" + std::to_string(trial) + ")");
    }
    for (double u : centres) {
      for (double width : {pi / double(n), 2.0 * pi / double(n), 4.0 * pi / double(n)}) {
        auto f = sample([&](double t) { return detail::smoothed_step(t, u, width); }, grid);
        consider(f, "step(u=" + detail::format_double(u) + ",width=" + detail::format_double(width) + ")");
      }
    }
    out[idx] = std::move(best);
  });
  return out;
}

/// Convenience overload probing every N = 1..n_max.
inline std::vector<ProbePoint> operator_norm_probe(const Weight& w, double p, std::int64_t n_max,
                                                   int trials, std::uint64_t seed,
                                                   const ProbeOptions& opts = {}) {
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 1; n <= n_max; ++n) ns.push_back(n);
  return operator_norm_probe(w, p, ns, trials, seed, opts);
}

}  // namespace qgt
