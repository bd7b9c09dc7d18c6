#pragma once

// Uniform midpoint sampling of 2pi-periodic functions on [-pi, pi) and the
// quadrature every other module is built on.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgt {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
/// (2 pi)^{-1/2}, the normalization of e_k(t) = (2 pi)^{-1/2} e^{ikt}.
inline const double inv_sqrt_two_pi = 1.0 / std::sqrt(two_pi);

/// Reduce t modulo 2pi into [-pi, pi).
inline double wrap_angle(double t) {
  if (t >= -pi && t < pi) return t;
  double r = std::fmod(t + pi, two_pi);
  if (r < 0.0) r += two_pi;
  double out = r - pi;
  return out >= pi ? -pi : out;
}

/// Midpoint grid t_j = -pi + (j + 1/2) 2pi/M, j = 0..M-1. M is even, so
/// neither 0 nor +-pi is ever a node.
class Grid {
public:
  explicit Grid(std::size_t size) : size_(size) {
    if (size < 2 || size % 2 != 0)
      throw std::invalid_argument("grid size must be even and >= 2, got " +
                                  std::to_string(size));
  }

  std::size_t size() const noexcept { return size_; }
  double step() const noexcept { return two_pi / static_cast<double>(size_); }
  double node(std::size_t j) const noexcept {
    return -pi + (static_cast<double>(j) + 0.5) * step();
  }

  /// Index of the node whose cell [t_j - h/2, t_j + h/2) contains t (after
  /// periodic reduction).
  std::size_t nearest_node(double t) const noexcept {
    double x = (wrap_angle(t) + pi) / step();
    auto j = static_cast<std::size_t>(std::floor(x));
    return j >= size_ ? size_ - 1 : j;
  }

  std::vector<double> nodes() const {
    std::vector<double> out(size_);
    for (std::size_t j = 0; j < size_; ++j) out[j] = node(j);
    return out;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  std::size_t size_;
};

/// Complex samples f(t_j) of a periodic function on a Grid.
class SampledFunction {
public:
  explicit SampledFunction(Grid grid)
      : grid_(grid), values_(grid.size(), complex{0.0, 0.0}) {}

  SampledFunction(Grid grid, std::vector<complex> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("sample count does not match grid size");
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag()))
        throw std::domain_error("non-finite sample at node " + std::to_string(j));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const complex> values() const noexcept { return values_; }
  std::span<complex> values() noexcept { return values_; }
  const complex& operator[](std::size_t j) const noexcept { return values_[j]; }
  complex& operator[](std::size_t j) noexcept { return values_[j]; }

  SampledFunction& operator+=(const SampledFunction& rhs) {
    check_same_grid(rhs);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += rhs.values_[j];
    return *this;
  }
  SampledFunction& operator-=(const SampledFunction& rhs) {
    check_same_grid(rhs);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= rhs.values_[j];
    return *this;
  }
  SampledFunction& operator*=(complex c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
  friend SampledFunction operator*(complex c, SampledFunction a) { return a *= c; }

  void check_same_grid(const SampledFunction& other) const {
    if (!(grid_ == other.grid_))
      throw std::invalid_argument("sampled functions live on different grids");
  }

private:
  Grid grid_;
  std::vector<complex> values_;
};

/// Sample a pointwise-evaluable periodic function at the grid nodes. The
/// callable may return a real or complex value.
template <class F>
SampledFunction sample(F&& f, const Grid& grid) {
  std::vector<complex> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid.node(j);
    complex v = complex(f(t));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("non-finite value at node " + std::to_string(j) +
                              " (t = " + std::to_string(t) + ")");
    values[j] = v;
  }
  return SampledFunction(grid, std::move(values));
}

/// Midpoint rule (2pi/M) sum_j g(t_j).
inline complex integrate(const SampledFunction& g) {
  complex acc{0.0, 0.0};
  for (const auto& v : g.values()) acc += v;
  return acc * g.grid().step();
}

inline double integrate(std::span<const double> values, const Grid& grid) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * grid.step();
}

namespace detail {
inline void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent p must be a finite real >= 1");
}
}  // namespace detail

/// (int |f|^p w)^{1/p} for real nonnegative weight samples on f's grid.
/// p = 1 is admitted here for Lebesgue-constant style L^1 norms.
inline double weighted_lp_norm(const SampledFunction& f, std::span<const double> w, double p) {
  detail::check_exponent(p);
  if (w.size() != f.size())
    throw std::invalid_argument("weight and function are sampled on different grids");
  double acc = 0.0;
  const auto vals = f.values();
  if (p == 2.0) {
    for (std::size_t j = 0; j < vals.size(); ++j) acc += std::norm(vals[j]) * w[j];
  } else if (p == 1.0) {
    for (std::size_t j = 0; j < vals.size(); ++j) acc += std::abs(vals[j]) * w[j];
  } else {
    for (std::size_t j = 0; j < vals.size(); ++j) acc += std::pow(std::abs(vals[j]), p) * w[j];
  }
  return std::pow(acc * f.grid().step(), 1.0 / p);
}

inline double weighted_lp_norm(const SampledFunction& f, const SampledFunction& w, double p) {
  f.check_same_grid(w);
  std::vector<double> wr(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j].real() < 0.0) throw std::invalid_argument("weight samples must be nonnegative");
    wr[j] = w[j].real();
  }
  return weighted_lp_norm(f, wr, p);
}

/// Unweighted L^p(T) norm.
inline double lp_norm(const SampledFunction& f, double p) {
  std::vector<double> ones(f.size(), 1.0);
  return weighted_lp_norm(f, ones, p);
}

/// Exact table of e^{i k t_j} for all integer k on a fixed grid.
///
/// k t_j = pi (k (2j + 1) - k M) / M, so every character value is one of the
/// 2M roots of unity e^{i pi q / M}. Looking them up avoids the drift of
/// repeated complex multiplication.
class CharacterTable {
public:
  explicit CharacterTable(const Grid& grid) : grid_(grid), roots_(2 * grid.size()) {
    const auto two_m = static_cast<std::int64_t>(2 * grid.size());
    for (std::int64_t q = 0; q < two_m; ++q) {
      // Use symmetric angles so that real/imag parts are exactly mirrored.
      const std::int64_t qq = q <= two_m / 2 ? q : q - two_m;
      const double angle = pi * static_cast<double>(qq) / static_cast<double>(grid.size());
      roots_[static_cast<std::size_t>(q)] = std::polar(1.0, angle);
    }
  }

  const Grid& grid() const noexcept { return grid_; }

  /// Phase index q with e^{i k t_j} = root(q).
  std::int64_t phase(std::int64_t k, std::size_t j) const noexcept {
    const auto m = static_cast<std::int64_t>(grid_.size());
    const std::int64_t two_m = 2 * m;
    std::int64_t kk = k % two_m;
    std::int64_t q = (kk * (2 * static_cast<std::int64_t>(j) + 1 - m)) % two_m;
    return q < 0 ? q + two_m : q;
  }

  complex root(std::int64_t q) const noexcept { return roots_[static_cast<std::size_t>(q)]; }

  /// e^{i k t_j}
  complex character(std::int64_t k, std::size_t j) const noexcept { return root(phase(k, j)); }

  /// Accumulate coeff * e^{i k t_j} into out for every node.
  void accumulate(std::int64_t k, complex coeff, std::span<complex> out) const noexcept {
    const auto m = static_cast<std::int64_t>(grid_.size());
    const std::int64_t two_m = 2 * m;
    std::int64_t kk = k % two_m;
    if (kk < 0) kk += two_m;
    std::int64_t q = phase(k, 0);
    const std::int64_t stride = (2 * kk) % two_m;
    const double cr = coeff.real(), ci = coeff.imag();
    for (std::size_t j = 0; j < out.size(); ++j) {
      // Written out: std::complex operator* takes the slow NaN-recovery path.
      const complex r = roots_[static_cast<std::size_t>(q)];
      out[j] += complex(cr * r.real() - ci * r.imag(), cr * r.imag() + ci * r.real());
      q += stride;
      if (q >= two_m) q -= two_m;
    }
  }

  /// sum_j g_j e^{-i k t_j}
  complex correlate(std::int64_t k, std::span<const complex> g) const noexcept {
    const auto m = static_cast<std::int64_t>(grid_.size());
    const std::int64_t two_m = 2 * m;
    std::int64_t kk = k % two_m;
    if (kk < 0) kk += two_m;
    std::int64_t q = phase(k, 0);
    const std::int64_t stride = (2 * kk) % two_m;
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const complex r = roots_[static_cast<std::size_t>(q)];
      re += g[j].real() * r.real() + g[j].imag() * r.imag();
      im += g[j].imag() * r.real() - g[j].real() * r.imag();
      q += stride;
      if (q >= two_m) q -= two_m;
    }
    return {re, im};
  }

private:
  Grid grid_;
  std::vector<complex> roots_;
};

}  // namespace qgt
