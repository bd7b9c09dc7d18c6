#pragma once

// Symbolic 2pi-periodic weights, their pointwise evaluation, and a brute-force
// estimate of the Muckenhoupt A_p constant
//
//   sup_I (1/|I| int_I w) (1/|I| int_I w^{-1/(p-1)})^{p-1}.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qgt/grid.hpp"

namespace qgt {

namespace weight_family {
struct Constant {
  double c = 1.0;
};
/// |t|^alpha
struct Power {
  double alpha = 0.0;
};
/// |P(t)|^mu, P given by ascending-degree coefficients.
struct PolyPower {
  std::vector<double> coeffs;
  double mu = 0.0;
};
/// a0 + sum_j a_j cos(jt) + b_j sin(jt); index 0 of cos/sin holds j = 1.
struct Trig {
  double a0 = 1.0;
  std::vector<double> cos;
  std::vector<double> sin;
};
/// Values on a midpoint grid, evaluated at the nearest node.
struct Tabulated {
  Grid grid{2};
  std::vector<double> values;
  std::string source;
};
}  // namespace weight_family

namespace detail {

inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty())
    throw std::invalid_argument("cannot parse '" + std::string(s) + "' as a number for " +
                                std::string(what));
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double horner(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace detail

class Weight {
public:
  using Variant = std::variant<weight_family::Constant, weight_family::Power,
                               weight_family::PolyPower, weight_family::Trig,
                               weight_family::Tabulated>;

  static Weight constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("constant weight needs c > 0");
    return Weight(weight_family::Constant{c});
  }

  static Weight power(double alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("power weight needs finite alpha");
    return Weight(weight_family::Power{alpha});
  }

  static Weight poly_power(std::vector<double> coeffs, double mu) {
    if (coeffs.empty()) throw std::invalid_argument("polypower needs at least one coefficient");
    for (double c : coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("polypower coefficients must be finite");
    if (!std::isfinite(mu)) throw std::invalid_argument("polypower needs finite mu");
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const double left = std::abs(detail::horner(coeffs, -pi));
    const double right = std::abs(detail::horner(coeffs, pi));
    if (std::abs(left - right) > 1e-12 * std::max({1.0, left, right}))
      throw std::invalid_argument("polypower requires |P(-pi)| = |P(pi)|, got " +
                                  detail::format_double(left) + " vs " +
                                  detail::format_double(right));
    return Weight(weight_family::PolyPower{std::move(coeffs), mu});
  }

  static Weight trig(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    Weight w(weight_family::Trig{a0, std::move(cos_coeffs), std::move(sin_coeffs)});
    const Grid check(8192);
    for (std::size_t j = 0; j < check.size(); ++j) {
      const double v = w.evaluate(check.node(j));
      if (!(v >= 0.0))
        throw std::invalid_argument("trigonometric weight is negative at t = " +
                                    detail::format_double(check.node(j)));
    }
    return w;
  }

  static Weight tabulated(Grid grid, std::vector<double> values, std::string source = {}) {
    if (values.size() != grid.size())
      throw std::invalid_argument("tabulated weight needs one value per grid node");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("tabulated weight values must be finite and >= 0");
    return Weight(weight_family::Tabulated{grid, std::move(values), std::move(source)});
  }

  /// Reads a two-column CSV (t,value). An optional non-numeric header line is
  /// skipped. Rows must sit on a midpoint grid with one row per node.
  static Weight tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tabulated weight file '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto cols = detail::split(line, ',');
      if (cols.size() != 2)
        throw std::invalid_argument("tabulated weight rows need exactly two columns: " + line);
      try {
        rows.emplace_back(detail::parse_double(cols[0], "t"), detail::parse_double(cols[1], "value"));
      } catch (const std::invalid_argument&) {
        if (!first) throw;
      }
      first = false;
    }
    std::sort(rows.begin(), rows.end());
    const Grid grid(rows.size());
    std::vector<double> values(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (std::abs(rows[j].first - grid.node(j)) > 0.5 * grid.step())
        throw std::invalid_argument("tabulated weight row " + std::to_string(j) +
                                    " is not at the midpoint node " +
                                    detail::format_double(grid.node(j)));
      values[j] = rows[j].second;
    }
    return tabulated(grid, std::move(values), path);
  }

  /// Parses `constant:c=1.0`, `power:alpha=0.5`, `polypower:coeffs=1,0,-1:mu=0.25`,
  /// `trig:a0=1:cos1=0.5:sin2=0.1`, `tabulated:file=PATH`. Every variant also
  /// accepts `scale=s` (s > 0) multiplying the weight.
  static Weight parse(std::string_view spec);

  const Variant& family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }

  /// The same weight multiplied by c > 0.
  Weight scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale must be > 0");
    Weight out = *this;
    out.scale_ *= c;
    return out;
  }

  /// Pointwise value after reducing t into [-pi, pi). May be +inf at isolated
  /// points (zeros of the base with a negative exponent).
  double evaluate(double t) const {
    const double x = wrap_angle(t);
    return scale_ * std::visit([x](const auto& f) { return eval(f, x); }, family_);
  }

  std::vector<double> sample(const Grid& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = evaluate(grid.node(j));
    return out;
  }

  /// Tabulated weights cannot be re-sampled at nodes they were not given on.
  bool is_symbolic() const noexcept {
    return !std::holds_alternative<weight_family::Tabulated>(family_);
  }

  /// Canonical spec string; parse(describe()) reproduces the weight.
  std::string describe() const;

private:
  explicit Weight(Variant v) : family_(std::move(v)) {}

  static double eval(const weight_family::Constant& f, double) { return f.c; }
  static double eval(const weight_family::Power& f, double x) {
    return std::pow(std::abs(x), f.alpha);
  }
  static double eval(const weight_family::PolyPower& f, double x) {
    return std::pow(std::abs(detail::horner(f.coeffs, x)), f.mu);
  }
  static double eval(const weight_family::Trig& f, double x) {
    double v = f.a0;
    for (std::size_t j = 0; j < f.cos.size(); ++j) v += f.cos[j] * std::cos(double(j + 1) * x);
    for (std::size_t j = 0; j < f.sin.size(); ++j) v += f.sin[j] * std::sin(double(j + 1) * x);
    return v;
  }
  static double eval(const weight_family::Tabulated& f, double x) {
    return f.values[f.grid.nearest_node(x)];
  }

  Variant family_;
  double scale_ = 1.0;
};

inline Weight Weight::parse(std::string_view spec) {
  auto parts = detail::split(spec, ':');
  const std::string_view kind = parts.front();
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("weight parameter '" + std::string(parts[i]) +
                                  "' is not of the form key=value");
    kv.emplace_back(parts[i].substr(0, eq), parts[i].substr(eq + 1));
  }

  double scale = 1.0;
  auto take = [&](std::string_view key) -> std::string_view {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
      if (it->first == key) {
        auto v = it->second;
        kv.erase(it);
        return v;
      }
    }
    throw std::invalid_argument("weight '" + std::string(kind) + "' needs parameter '" +
                                std::string(key) + "'");
  };
  auto take_scale = [&] {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
      if (it->first == "scale") {
        scale = detail::parse_double(it->second, "scale");
        kv.erase(it);
        return;
      }
    }
  };
  auto finish = [&](Weight w) {
    if (!kv.empty())
      throw std::invalid_argument("unknown parameter '" + std::string(kv.front().first) +
                                  "' for weight '" + std::string(kind) + "'");
    return scale == 1.0 ? w : w.scaled(scale);
  };

  take_scale();
  if (kind == "constant") {
    const double c = detail::parse_double(take("c"), "c");
    return finish(constant(c));
  }
  if (kind == "power") {
    const double a = detail::parse_double(take("alpha"), "alpha");
    return finish(power(a));
  }
  if (kind == "polypower") {
    std::vector<double> coeffs;
    for (auto c : detail::split(take("coeffs"), ',')) coeffs.push_back(detail::parse_double(c, "coeffs"));
    const double mu = detail::parse_double(take("mu"), "mu");
    return finish(poly_power(std::move(coeffs), mu));
  }
  if (kind == "trig") {
    double a0 = 0.0;
    std::vector<double> cs, ss;
    for (auto it = kv.begin(); it != kv.end();) {
      const auto key = it->first;
      auto harmonic = [&](std::string_view prefix, std::vector<double>& dst) {
        if (key.substr(0, prefix.size()) != prefix || key.size() == prefix.size()) return false;
        std::size_t j = 0;
        auto digits = key.substr(prefix.size());
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), j);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || j == 0)
          throw std::invalid_argument("bad harmonic index in '" + std::string(key) + "'");
        if (dst.size() < j) dst.resize(j, 0.0);
        dst[j - 1] = detail::parse_double(it->second, key);
        return true;
      };
      if (key == "a0") {
        a0 = detail::parse_double(it->second, "a0");
      } else if (!harmonic("cos", cs) && !harmonic("sin", ss)) {
        ++it;
        continue;
      }
      it = kv.erase(it);
    }
    return finish(trig(a0, std::move(cs), std::move(ss)));
  }
  if (kind == "tabulated") {
    const std::string path(take("file"));
    return finish(tabulated_from_csv(path));
  }
  throw std::invalid_argument("unknown weight variant '" + std::string(kind) + "'");
}

inline std::string Weight::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, weight_family::Constant>) {
          os << "constant:c=" << detail::format_double(f.c);
        } else if constexpr (std::is_same_v<T, weight_family::Power>) {
          os << "power:alpha=" << detail::format_double(f.alpha);
        } else if constexpr (std::is_same_v<T, weight_family::PolyPower>) {
          os << "polypower:coeffs=";
          for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            os << (i ? "," : "") << detail::format_double(f.coeffs[i]);
          os << ":mu=" << detail::format_double(f.mu);
        } else if constexpr (std::is_same_v<T, weight_family::Trig>) {
          os << "trig:a0=" << detail::format_double(f.a0);
          for (std::size_t j = 0; j < f.cos.size(); ++j)
            if (f.cos[j] != 0.0) os << ":cos" << j + 1 << '=' << detail::format_double(f.cos[j]);
          for (std::size_t j = 0; j < f.sin.size(); ++j)
            if (f.sin[j] != 0.0) os << ":sin" << j + 1 << '=' << detail::format_double(f.sin[j]);
        } else {
          os << "tabulated:file=" << f.source;
        }
      },
      family_);
  if (scale_ != 1.0) os << ":scale=" << detail::format_double(scale_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Essential bounds

struct EssentialBounds {
  double lower = 0.0;
  double upper = 0.0;
  double argmin = 0.0;  ///< node where the minimum is attained
  double argmax = 0.0;
};

/// Min and max of w over the probe grid nodes: a grid approximation of
/// (ess inf w, ess sup w) for weights that are continuous almost everywhere.
inline EssentialBounds essential_bounds(const Weight& w, const Grid& probe) {
  EssentialBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                    0.0, 0.0};
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double t = probe.node(j);
    const double v = w.evaluate(t);
    if (v < b.lower) {
      b.lower = v;
      b.argmin = t;
    }
    if (v > b.upper) {
      b.upper = v;
      b.argmax = t;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// A_p constant

struct ApOptions {
  /// K_hat above this, or a non-finite prefix sum, flags divergence.
  double cap = 1e8;
  /// Growth factor between consecutive estimates that flags divergence.
  double growth_factor = 2.0;
  /// The refinement check compares the fine grid against one this many times
  /// coarser. 0 or 1 disables it.
  std::size_t refinement = 16;
};

struct ApEstimate {
  double p = 2.0;
  double k_hat = 0.0;
  double argmax_center = 0.0;
  double argmax_length = 0.0;
  int interval_family_depth = 0;
  bool diverging = false;
  /// K_hat restricted to interval levels 0..d, for d = 0..depth.
  std::vector<double> by_depth;
  /// K_hat on the fine grid divided by K_hat on the coarse comparison grid
  /// (1 when the check was not run).
  double refinement_ratio = 1.0;
  std::size_t fine_grid_size = 0;
};

namespace detail {

struct ApScan {
  std::vector<double> by_depth;
  double k_hat = 0.0;
  double center = 0.0;
  double length = 0.0;
  bool overflow = false;
};

/// Supremum of the A_p quotient over dyadic lengths 2pi 2^{-l}, l = 0..depth,
/// centers on a quarter-length lattice, with periodic wrap-around.
inline ApScan ap_scan(const std::vector<double>& wv, const Grid& grid, double p, int depth,
                      double cap) {
  const std::size_t m = grid.size();
  const double dual_exp = -1.0 / (p - 1.0);
  ApScan out;
  out.by_depth.assign(static_cast<std::size_t>(depth) + 1, 0.0);

  // Prefix sums over two periods so wrapped intervals are contiguous.
  std::vector<long double> pw(2 * m + 1, 0.0L), pv(2 * m + 1, 0.0L);
  for (std::size_t j = 0; j < 2 * m; ++j) {
    const double w = wv[j % m];
    const double v = std::pow(w, dual_exp);
    pw[j + 1] = pw[j] + static_cast<long double>(w);
    pv[j + 1] = pv[j] + static_cast<long double>(v);
  }
  const long double total_w = pw[m];
  const long double total_v = pv[m];
  if (!std::isfinite(static_cast<double>(total_v)) || !std::isfinite(static_cast<double>(total_w)) ||
      static_cast<double>(total_v) * grid.step() > cap) {
    out.overflow = true;
    out.k_hat = std::numeric_limits<double>::infinity();
    std::fill(out.by_depth.begin(), out.by_depth.end(), out.k_hat);
    return out;
  }

  double best = 0.0;
  for (int level = 0; level <= depth; ++level) {
    const double exact_len = static_cast<double>(m) / std::ldexp(1.0, level);
    const std::size_t len = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(exact_len)));
    const std::size_t stride = std::max<std::size_t>(1, len / 4);
    for (std::size_t start = 0; start < m; start += stride) {
      const long double sw = pw[start + len] - pw[start];
      const long double sv = pv[start + len] - pv[start];
      const double avg_w = static_cast<double>(sw) / static_cast<double>(len);
      const double avg_v = static_cast<double>(sv) / static_cast<double>(len);
      // 0 * inf = 0 convention for intervals where w vanishes identically.
      const double q = avg_w == 0.0 ? 0.0 : avg_w * std::pow(avg_v, p - 1.0);
      if (q > best) {
        best = q;
        out.center = wrap_angle(-pi + (static_cast<double>(start) + 0.5 * static_cast<double>(len)) *
                                          grid.step());
        out.length = static_cast<double>(len) * grid.step();
      }
    }
    out.by_depth[static_cast<std::size_t>(level)] = best;
  }
  out.k_hat = best;
  return out;
}

}  // namespace detail

/// Brute-force A_p constant of w sampled on fine_grid.
///
/// Divergence is reported, never thrown: it is flagged when K_hat exceeds the
/// cap, when the prefix sums of w^{-1/(p-1)} overflow it, when K_hat grows by
/// more than growth_factor between the last two depths, or when re-estimating
/// on a grid `refinement` times coarser shows growth by more than
/// growth_factor under refinement (a non-integrable w^{-1/(p-1)} makes the
/// discrete quotient grow with resolution instead of with depth).
inline ApEstimate ap_constant(const Weight& w, double p, int depth, const Grid& fine_grid,
                              const ApOptions& opts = {}) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  const auto wv = w.sample(fine_grid);
  if (std::all_of(wv.begin(), wv.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("weight vanishes identically on the grid");

  ApEstimate est;
  est.p = p;
  est.interval_family_depth = depth;
  est.fine_grid_size = fine_grid.size();

  const auto scan = detail::ap_scan(wv, fine_grid, p, depth, opts.cap);
  est.k_hat = scan.k_hat;
  est.by_depth = scan.by_depth;
  est.argmax_center = scan.center;
  est.argmax_length = scan.length;
  if (scan.overflow || !(scan.k_hat <= opts.cap)) {
    est.diverging = true;
    return est;
  }
  const double prev = scan.by_depth[scan.by_depth.size() - 2];
  if (prev > 0.0 && scan.k_hat > opts.growth_factor * prev) est.diverging = true;

  const std::size_t coarse_size =
      opts.refinement > 1 ? fine_grid.size() / opts.refinement : 0;
  if (w.is_symbolic() && coarse_size >= 2 && coarse_size % 2 == 0) {
    const Grid coarse(coarse_size);
    const auto coarse_scan = detail::ap_scan(w.sample(coarse), coarse, p, depth, opts.cap);
    if (coarse_scan.overflow) {
      est.diverging = true;
    } else if (coarse_scan.k_hat > 0.0) {
      est.refinement_ratio = scan.k_hat / coarse_scan.k_hat;
      if (est.refinement_ratio > opts.growth_factor) est.diverging = true;
    }
  }
  return est;
}

}  // namespace qgt
