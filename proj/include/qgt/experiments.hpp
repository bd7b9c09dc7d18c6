#pragma once

// Numerical experiments probing when the trigonometric system can be
// quasi-greedy in L^p(T; w), and the composite verdict procedure built from
// them. Every experiment returns an ExperimentReport whose params fully
// determine its rows; per-row randomness is keyed by (seed, row identity), so
// reports do not depend on the worker count.
//
// All verdicts are numerical evidence at finite resolution, never proofs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qgt/detail/fit.hpp"
#include "qgt/detail/parallel.hpp"
#include "qgt/detail/random.hpp"
#include "qgt/fourier.hpp"
#include "qgt/greedy.hpp"
#include "qgt/grid.hpp"
#include "qgt/report.hpp"
#include "qgt/weights.hpp"

namespace qgt {

struct ExperimentOptions {
  std::size_t grid_size = 4096;
  /// Worker threads; never recorded in reports.
  unsigned threads = 1;
};

/// A finite set of natural-ordering indices.
struct IndexSet {
  std::string label;
  std::vector<std::int64_t> natural;
};

/// {1..n} for each n.
inline std::vector<IndexSet> block_sets(const std::vector<std::int64_t>& ns) {
  std::vector<IndexSet> out;
  for (auto n : ns) {
    IndexSet s{"block", {}};
    for (std::int64_t j = 1; j <= n; ++j) s.natural.push_back(j);
    out.push_back(std::move(s));
  }
  return out;
}

/// n distinct indices drawn uniformly from {1..min(n^2, cap)}, keyed by (seed, n).
inline std::vector<IndexSet> random_sets(const std::vector<std::int64_t>& ns, std::int64_t cap,
                                         std::uint64_t seed) {
  std::vector<IndexSet> out;
  for (auto n : ns) {
    detail::KeyedRng rng(seed, {0x72616e64ULL, static_cast<std::uint64_t>(n)});
    const std::int64_t pool = std::max(n, std::min(n * n, cap));
    std::vector<std::int64_t> idx(static_cast<std::size_t>(pool));
    std::iota(idx.begin(), idx.end(), 1);
    for (std::int64_t i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(pool - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(n));
    std::sort(idx.begin(), idx.end());
    out.push_back({"random", std::move(idx)});
  }
  return out;
}

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void common_params(ExperimentReport& r, const Weight& w, const Grid& grid) {
  r.params["weight"] = w.describe();
  r.params["grid"] = static_cast<std::int64_t>(grid.size());
}

inline void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
}

/// Samples of e_{n_j}(t) for each natural index of a set, one row per index.
inline std::vector<std::vector<complex>> index_columns(const IndexSet& set, const CharacterTable& table) {
  const auto m = table.grid().size();
  std::vector<std::vector<complex>> cols;
  cols.reserve(set.natural.size());
  for (auto j : set.natural) {
    std::vector<complex> col(m, complex{0.0, 0.0});
    table.accumulate(natural_index_to_freq(j), complex(inv_sqrt_two_pi, 0.0), col);
    cols.push_back(std::move(col));
  }
  return cols;
}

inline double signed_sum_norm(const std::vector<std::vector<complex>>& cols, const std::vector<int>& signs,
                              const Grid& grid, const std::vector<double>& wv, double p) {
  SampledFunction f(grid);
  auto vals = f.values();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double s = signs[i];
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] += s * cols[i][j];
  }
  return weighted_lp_norm(f, wv, p);
}

inline double set_norm(const IndexSet& set, const CharacterTable& table, const std::vector<double>& wv, double p) {
  SampledFunction f(table.grid());
  for (auto j : set.natural)
    table.accumulate(natural_index_to_freq(j), complex(inv_sqrt_two_pi, 0.0), f.values());
  return weighted_lp_norm(f, wv, p);
}

inline double slope_of(const ExperimentReport& r, std::string_view x, std::string_view y) {
  const auto xs = r.numbers(x);
  const auto ys = r.numbers(y);
  return loglog_slope(xs, ys);
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Extremes of ||sum_{k in A} eps_k e_{n_k}||_{p,w} over sign patterns eps.
/// Sets with at most 12 indices are enumerated exactly; larger sets use
/// `trials` patterns with the all-plus pattern always first.
inline ExperimentReport sign_unconditionality(const Weight& w, double p, const std::vector<IndexSet>& sets,
                                              int trials, std::uint64_t seed, const ExperimentOptions& opts = {}) {
  detail::check_p(p);
  if (trials < 2) throw std::invalid_argument("sign_unconditionality needs trials >= 2");
  const Grid grid(opts.grid_size);
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);
  for (const auto& s : sets) {
    if (s.natural.empty()) throw std::invalid_argument("index sets must be nonempty");
    for (auto j : s.natural)
      if (j < 1 || 2 * std::abs(natural_index_to_freq(j)) >= static_cast<std::int64_t>(grid.size()))
        throw std::invalid_argument("index " + std::to_string(j) + " aliases on the grid");
  }

  ExperimentReport r;
  r.experiment = "sign-uncond";
  detail::common_params(r, w, grid);
  r.params["p"] = p;
  r.params["seed"] = static_cast<std::int64_t>(seed);
  r.params["trials"] = static_cast<std::int64_t>(trials);
  r.params["exact_enumeration_max_size"] = std::int64_t{12};
  r.params["rng"] = std::string(detail::rng_algorithm);
  r.columns = {"set", "size", "patterns", "exact", "all_plus_norm", "min_norm", "max_norm", "mean_norm", "ratio"};
  r.notes =
      "ratio = max/min of the norm of signed sums of basis elements over sign patterns; quasi-greedy "
      "bases keep this ratio bounded uniformly in the set";

  std::vector<std::vector<Value>> rows(sets.size());
  detail::parallel_for(sets.size(), opts.threads, [&](std::size_t si) {
    const auto& set = sets[si];
    const auto cols = detail::index_columns(set, table);
    const std::size_t n = set.natural.size();
    const bool exact = n <= 12;
    const std::size_t patterns = exact ? (std::size_t{1} << n) : static_cast<std::size_t>(trials);
    detail::KeyedRng rng(seed, {0x7369676eULL, static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(n)});
    std::vector<int> signs(n, 1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0, all_plus = 0.0;
    for (std::size_t pat = 0; pat < patterns; ++pat) {
      for (std::size_t i = 0; i < n; ++i)
        signs[i] = exact ? (((pat >> i) & 1u) ? -1 : 1) : (pat == 0 ? 1 : rng.sign());
      const double v = detail::signed_sum_norm(cols, signs, grid, wv, p);
      if (pat == 0) all_plus = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    rows[si] = {set.label, static_cast<std::int64_t>(n), static_cast<std::int64_t>(patterns), exact, all_plus,
                lo, hi, sum / static_cast<double>(patterns), hi / lo};
  });
  for (auto& row : rows) r.add_row(std::move(row));

  const double slope = r.rows.size() >= 2 ? detail::slope_of(r, "size", "ratio") : std::nan("");
  r.params["ratio_loglog_slope"] = slope;
  r.params["ratio_per_dyadic_factor"] = std::exp2(slope);
  return r;
}

/// Norms of constant-coefficient sums over blocks {1..n}, an arithmetic
/// progression, and random n-subsets of {1..min(n^2, M/2)}: an empirical
/// fundamental function phi_hat(n), compared with n^{1/2}.
inline ExperimentReport democracy(const Weight& w, double p, const std::vector<std::int64_t>& ns, int trials,
                                  std::uint64_t seed, const ExperimentOptions& opts = {}) {
  detail::check_p(p);
  if (trials < 1) throw std::invalid_argument("democracy needs trials >= 1");
  const Grid grid(opts.grid_size);
  const auto m = static_cast<std::int64_t>(grid.size());
  for (auto n : ns)
    if (n < 1 || 4 * n >= m) throw std::invalid_argument("democracy needs 1 <= n < M/4, got " + std::to_string(n));
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);

  ExperimentReport r;
  r.experiment = "democracy";
  detail::common_params(r, w, grid);
  r.params["p"] = p;
  r.params["seed"] = static_cast<std::int64_t>(seed);
  r.params["trials"] = static_cast<std::int64_t>(trials);
  r.params["rng"] = std::string(detail::rng_algorithm);
  r.columns = {"n", "block_norm", "progression_norm", "min_random", "max_random",
               "phi_hat", "phi_hat_over_sqrt_n", "block_over_sqrt_n"};
  r.notes =
      "norms of sums of n basis elements over several index sets; a quasi-greedy trigonometric system "
      "would need every such norm to be comparable to n^(1/2)";

  const std::int64_t cap = m / 2;
  std::vector<std::vector<Value>> rows(ns.size());
  detail::parallel_for(ns.size(), opts.threads, [&](std::size_t ni) {
    const std::int64_t n = ns[ni];
    const double block = detail::set_norm(block_sets({n}).front(), table, wv, p);
    IndexSet prog{"progression", {}};
    const std::int64_t step = n > 1 ? std::max<std::int64_t>(1, std::min<std::int64_t>(3, (cap - 1) / (n - 1))) : 1;
    for (std::int64_t i = 0; i < n; ++i) prog.natural.push_back(1 + step * i);
    const double progression = detail::set_norm(prog, table, wv, p);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto set = random_sets({n}, cap, detail::splitmix64(seed) ^ static_cast<std::uint64_t>(t)).front();
      const double v = detail::set_norm(set, table, wv, p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double phi = std::max({block, progression, hi});
    const double root = std::sqrt(static_cast<double>(n));
    rows[ni] = {n, block, progression, lo, hi, phi, phi / root, block / root};
  });
  for (auto& row : rows) r.add_row(std::move(row));

  const bool fit = r.rows.size() >= 2;
  r.params["block_loglog_slope"] = fit ? detail::slope_of(r, "n", "block_norm") : std::nan("");
  r.params["phi_loglog_slope"] = fit ? detail::slope_of(r, "n", "phi_hat") : std::nan("");
  r.params["min_random_loglog_slope"] = fit ? detail::slope_of(r, "n", "min_random") : std::nan("");
  r.params["block_over_sqrt_n_loglog_slope"] = fit ? detail::slope_of(r, "n", "block_over_sqrt_n") : std::nan("");
  return r;
}

/// Relative rounding slack allowed by the holder_ok column: at N = 1 the
/// kernel has constant modulus and the inequality is an equality.
inline constexpr double holder_tolerance = 1e-10;

/// Growth of the Dirichlet kernel D_N = sum_{k<=N} e_{n_k}: weighted L^1, L^2
/// and L^p norms, the Hoelder interpolation slack through L^1 and L^2, and
/// the unweighted Lebesgue constant (2 pi)^{-1/2} ||D_N||_{L^1(T)}, whose
/// slope against log N is fitted over the rows with N >= fit_min.
inline ExperimentReport dirichlet_growth(const Weight& w, const std::vector<double>& ps,
                                         const std::vector<std::int64_t>& ns, const ExperimentOptions& opts = {},
                                         std::int64_t fit_min = 64) {
  for (double p : ps) detail::check_p(p);
  const Grid grid(opts.grid_size);
  const auto m = static_cast<std::int64_t>(grid.size());
  for (auto n : ns)
    if (n < 1 || 4 * n >= m)
      throw std::invalid_argument("dirichlet_growth needs 1 <= N < M/4, got " + std::to_string(n));
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);
  const std::vector<double> ones(grid.size(), 1.0);

  ExperimentReport r;
  r.experiment = "dirichlet-growth";
  detail::common_params(r, w, grid);
  std::string plist;
  for (double p : ps) plist += (plist.empty() ? "" : ",") + detail::format_real(p);
  r.params["p_list"] = plist;
  r.params["lebesgue_fit_min_n"] = fit_min;
  r.params["lebesgue_classical_constant"] = 4.0 / (pi * pi);
  r.params["holder_relative_tolerance"] = holder_tolerance;
  r.columns = {"n", "l1_w", "l2_w"};
  for (double p : ps) r.columns.push_back("lp_w_p" + detail::format_real(p));
  r.columns.push_back("l2_w_sq_over_n");
  for (double p : ps) r.columns.push_back("holder_slack_p" + detail::format_real(p));
  for (const char* c : {"holder_ok", "l1_unweighted", "l1_over_log_n", "lebesgue_constant"}) r.columns.emplace_back(c);
  r.notes =
      "Hoelder slack is ||D||_1^th ||D||_2^(1-th) - ||D||_p (1<p<2, th=2/p-1) or "
      "||D||_1^th ||D||_p^(1-th) - ||D||_2 (p>2, th=(p-2)/(2p-2)), all in L^q(w); "
      "lebesgue_constant grows like (4/pi^2) log N";

  std::vector<std::vector<Value>> rows(ns.size());
  detail::parallel_for(ns.size(), opts.threads, [&](std::size_t ni) {
    const std::int64_t n = ns[ni];
    const auto d = dirichlet_kernel(n, 0.0, table);
    const double l1 = weighted_lp_norm(d, wv, 1.0);
    const double l2 = weighted_lp_norm(d, wv, 2.0);
    std::vector<Value> row{n, l1, l2};
    std::vector<double> slack;
    bool ok = true;
    for (double p : ps) {
      const double lp = weighted_lp_norm(d, wv, p);
      row.emplace_back(lp);
      double bound = 0.0, value = 0.0;
      if (p < 2.0) {
        const double th = 2.0 / p - 1.0;
        bound = std::pow(l1, th) * std::pow(l2, 1.0 - th);
        value = lp;
      } else if (p > 2.0) {
        const double th = (p - 2.0) / (2.0 * p - 2.0);
        bound = std::pow(l1, th) * std::pow(lp, 1.0 - th);
        value = l2;
      }
      slack.push_back(bound - value);
      ok = ok && bound - value >= -holder_tolerance * bound;
    }
    row.emplace_back(l2 * l2 / static_cast<double>(n));
    for (double s : slack) row.emplace_back(s);
    row.emplace_back(ok);
    const double l1u = weighted_lp_norm(d, ones, 1.0);
    row.emplace_back(l1u);
    row.emplace_back(n > 1 ? l1u / std::log(static_cast<double>(n)) : std::nan(""));
    row.emplace_back(l1u * inv_sqrt_two_pi);
    rows[ni] = std::move(row);
  });
  for (auto& row : rows) r.add_row(std::move(row));

  std::vector<double> lx, ly;
  double min_slack = std::numeric_limits<double>::infinity();
  bool holder_holds = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double n = r.number(i, "n");
    if (n >= static_cast<double>(fit_min)) {
      lx.push_back(std::log(n));
      ly.push_back(r.number(i, "lebesgue_constant"));
    }
    for (double p : ps) min_slack = std::min(min_slack, r.number(i, "holder_slack_p" + detail::format_real(p)));
    holder_holds = holder_holds && std::get<bool>(r.rows[i][r.column("holder_ok")]);
  }
  r.params["holder_holds"] = holder_holds;
  r.params["lebesgue_slope"] = lx.size() >= 2 ? detail::ls_slope(lx, ly) : std::nan("");
  r.params["holder_min_slack"] = ps.empty() ? std::nan("") : min_slack;
  return r;
}

/// F_N(u) = int (1/N) |D_N(t - u)|^2 w(t) dt, an approximate identity that
/// converges to w(u) at Lebesgue points of w.
inline ExperimentReport fejer_weight_recovery(const Weight& w, const std::vector<double>& us,
                                              const std::vector<std::int64_t>& ns,
                                              const ExperimentOptions& opts = {}) {
  const Grid grid(opts.grid_size);
  const auto m = static_cast<std::int64_t>(grid.size());
  for (auto n : ns)
    if (n < 1 || 8 * n >= m)
      throw std::invalid_argument("fejer_weight_recovery needs 1 <= N < M/8, got " + std::to_string(n));
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);

  ExperimentReport r;
  r.experiment = "fejer-recover";
  detail::common_params(r, w, grid);
  r.columns = {"u", "n", "f_n", "w_u", "abs_error"};
  r.notes =
      "F_N(u) = int (1/N)|D_N(t-u)|^2 w(t) dt; bounded-above-and-below weights keep F_N(u) between "
      "the same bounds, and F_N(u) -> w(u) at Lebesgue points";

  const std::size_t cells = us.size() * ns.size();
  std::vector<std::vector<Value>> rows(cells);
  detail::parallel_for(cells, opts.threads, [&](std::size_t idx) {
    const double u = us[idx / ns.size()];
    const std::int64_t n = ns[idx % ns.size()];
    const auto d = dirichlet_kernel(n, u, table);
    const double fn = std::pow(weighted_lp_norm(d, wv, 2.0), 2) / static_cast<double>(n);
    const double wu = w.evaluate(u);
    rows[idx] = {u, n, fn, wu, std::abs(fn - wu)};
  });
  for (auto& row : rows) r.add_row(std::move(row));

  for (std::size_t ui = 0; ui < us.size(); ++ui) {
    std::vector<double> xs, ys;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
      xs.push_back(static_cast<double>(ns[ni]));
      ys.push_back(r.number(ui * ns.size() + ni, "f_n"));
    }
    r.params["u" + std::to_string(ui)] = us[ui];
    r.params["loglog_slope_u" + std::to_string(ui)] = ns.size() >= 2 ? detail::loglog_slope(xs, ys) : std::nan("");
  }
  return r;
}

/// Ratios R = ||sum a_k e_k||_{2,w}^2 / sum |a_k|^2 for coefficient vectors
/// supported in |k| <= K. Trials mix random coefficients (uniform on the unit
/// disc) with translated Fejer bumps a_k = (1 - |k|/(K+1)) e^{-iku} centred
/// at the grid argmin and argmax of w, at 0, and at random points.
inline ExperimentReport riesz_bounds(const Weight& w, const std::vector<std::int64_t>& max_freqs, int trials,
                                     std::uint64_t seed, const ExperimentOptions& opts = {}) {
  if (trials < 10) throw std::invalid_argument("riesz_bounds needs trials >= 10");
  const Grid grid(opts.grid_size);
  const auto m = static_cast<std::int64_t>(grid.size());
  for (auto k : max_freqs)
    if (k < 1 || 2 * k >= m) throw std::invalid_argument("riesz_bounds needs 1 <= K < M/2");
  const CharacterTable table(grid);
  const auto wv = w.sample(grid);
  const auto bounds = essential_bounds(w, grid);

  ExperimentReport r;
  r.experiment = "riesz-bounds";
  detail::common_params(r, w, grid);
  r.params["seed"] = static_cast<std::int64_t>(seed);
  r.params["trials"] = static_cast<std::int64_t>(trials);
  r.params["rng"] = std::string(detail::rng_algorithm);
  r.params["ess_lower"] = bounds.lower;
  r.params["ess_upper"] = bounds.upper;
  r.params["argmin_u"] = bounds.argmin;
  r.params["argmax_u"] = bounds.argmax;
  r.columns = {"max_freq", "trials", "min_r", "max_r", "min_r_random", "max_r_random",
               "min_r_concentrated", "max_r_concentrated", "ess_lower", "ess_upper"};
  r.notes =
      "R is a weighted average of w against |g|^2, so R lies in [ess inf w, ess sup w]; a Riesz basis "
      "needs 0 < inf R <= sup R < infinity";

  struct TrialResult {
    double ratio = 0.0;
    bool concentrated = false;
  };
  for (auto k_max : max_freqs) {
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    detail::parallel_for(results.size(), opts.threads, [&](std::size_t t) {
      detail::KeyedRng rng(seed, {0x7269657aULL, static_cast<std::uint64_t>(k_max), t});
      CoefficientVector c;
      bool concentrated = true;
      if (t < 3 || t % 2 == 1) {
        const double u = t == 0 ? bounds.argmin : t == 1 ? bounds.argmax : t == 2 ? 0.0 : rng.uniform(-pi, pi);
        for (std::int64_t k = -k_max; k <= k_max; ++k) {
          const double fejer = 1.0 - static_cast<double>(std::abs(k)) / static_cast<double>(k_max + 1);
          c.set(k, std::polar(fejer, -static_cast<double>(k) * u));
        }
      } else {
        concentrated = false;
        for (std::int64_t k = -k_max; k <= k_max; ++k) c.set(k, rng.unit_disc());
      }
      const auto g = synthesize_if(c, table, [](std::int64_t) { return true; });
      const double num = std::pow(weighted_lp_norm(g, wv, 2.0), 2);
      results[t] = {num / c.l2_norm_squared(), concentrated};
    });
    const double inf = std::numeric_limits<double>::infinity();
    double lo = inf, hi = -inf, lo_r = inf, hi_r = -inf, lo_c = inf, hi_c = -inf;
    for (const auto& tr : results) {
      lo = std::min(lo, tr.ratio);
      hi = std::max(hi, tr.ratio);
      if (tr.concentrated) {
        lo_c = std::min(lo_c, tr.ratio);
        hi_c = std::max(hi_c, tr.ratio);
      } else {
        lo_r = std::min(lo_r, tr.ratio);
        hi_r = std::max(hi_r, tr.ratio);
      }
    }
    r.add_row({k_max, static_cast<std::int64_t>(trials), lo, hi, lo_r, hi_r, lo_c, hi_c, bounds.lower, bounds.upper});
  }
  return r;
}

/// One row per depth d: the A_p estimate restricted to interval levels 0..d.
inline ExperimentReport ap_constant_report(const Weight& w, double p, int depth, const Grid& fine_grid,
                                           const ApOptions& ap_opts = {}) {
  const auto est = ap_constant(w, p, depth, fine_grid, ap_opts);
  ExperimentReport r;
  r.experiment = "ap-constant";
  detail::common_params(r, w, fine_grid);
  r.params["p"] = p;
  r.params["depth"] = static_cast<std::int64_t>(depth);
  r.params["k_hat"] = est.k_hat;
  r.params["argmax_center"] = est.argmax_center;
  r.params["argmax_length"] = est.argmax_length;
  r.params["diverging"] = est.diverging;
  r.params["refinement_ratio"] = est.refinement_ratio;
  r.params["cap"] = ap_opts.cap;
  r.params["growth_factor"] = ap_opts.growth_factor;
  r.params["refinement"] = static_cast<std::int64_t>(ap_opts.refinement);
  r.columns = {"depth", "k_hat"};
  for (std::size_t d = 0; d < est.by_depth.size(); ++d) r.add_row({static_cast<std::int64_t>(d), est.by_depth[d]});
  r.notes =
      "K_hat is the maximum A_p quotient over dyadic intervals with quarter-length shifts; the system is "
      "a Schauder basis of L^p(w) exactly when this supremum is finite";
  return r;
}

// ---------------------------------------------------------------------------
// Greedy runs on named test functions

/// Test functions for greedy runs: `sawtooth:degree=D` (truncated Fourier
/// series of t), `random:degree=D` (coefficients uniform on the unit disc,
/// keyed by seed), `sign` (sign(t), sampled), `dirichlet:n=N` (D_N).
inline SampledFunction make_test_function(std::string_view spec, const Grid& grid, std::uint64_t seed,
                                          bool* symbolic = nullptr) {
  auto parts = detail::split(spec, ':');
  const auto kind = parts.front();
  auto param = [&](std::string_view key) -> std::int64_t {
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq != std::string_view::npos && parts[i].substr(0, eq) == key) {
        return static_cast<std::int64_t>(detail::parse_double(parts[i].substr(eq + 1), key));
      }
    }
    throw std::invalid_argument("test function '" + std::string(kind) + "' needs '" + std::string(key) + "'");
  };
  if (symbolic) *symbolic = false;
  if (kind == "sawtooth") {
    const auto degree = param("degree");
    CoefficientVector c;
    for (std::int64_t k = -degree; k <= degree; ++k)
      if (k != 0) c.set(k, complex(0.0, (k % 2 == 0 ? 1.0 : -1.0) * std::sqrt(two_pi) / static_cast<double>(k)));
    return synthesize(c, grid);
  }
  if (kind == "random") {
    const auto degree = param("degree");
    detail::KeyedRng rng(seed, {0x66756e63ULL, static_cast<std::uint64_t>(degree)});
    CoefficientVector c;
    for (std::int64_t k = -degree; k <= degree; ++k) c.set(k, rng.unit_disc());
    return synthesize(c, grid);
  }
  if (kind == "sign") {
    if (symbolic) *symbolic = true;
    return sample([](double t) { return t >= 0.0 ? 1.0 : -1.0; }, grid);
  }
  if (kind == "dirichlet") return dirichlet_kernel(param("n"), 0.0, grid);
  throw std::invalid_argument("unknown test function '" + std::string(kind) + "'");
}

inline ExperimentReport greedy_run(const Weight& w, double p, std::string_view function_spec, std::size_t m_max,
                                   std::uint64_t seed, const ExperimentOptions& opts = {},
                                   double floor = default_coefficient_floor) {
  detail::check_p(p);
  const Grid grid(opts.grid_size);
  bool symbolic = false;
  const auto f = make_test_function(function_spec, grid, seed, &symbolic);
  const auto curve = greedy_error_curve(f, w, p, m_max, floor);

  ExperimentReport r;
  r.experiment = "greedy-run";
  detail::common_params(r, w, grid);
  r.params["p"] = p;
  r.params["function"] = std::string(function_spec);
  r.params["seed"] = static_cast<std::int64_t>(seed);
  r.params["coefficient_floor"] = floor;
  r.params["rng"] = std::string(detail::rng_algorithm);
  if (symbolic) r.params["truncation_error"] = truncation_error(f, w, p);
  r.columns = {"m", "error", "relative_error"};
  const double base = curve.front().error;
  for (const auto& pt : curve)
    r.add_row({static_cast<std::int64_t>(pt.m), pt.error, base > 0.0 ? pt.error / base : 0.0});
  r.notes = "error = ||f - G_m f||_{p,w}, G_m the m-term greedy (thresholding) approximant of the sampled f";
  return r;
}

// ---------------------------------------------------------------------------
// Verdict

struct VerdictConfig {
  std::uint64_t seed = 1;
  int ap_depth = 12;
  std::size_t ap_grid_size = 65536;
  ApOptions ap;

  std::vector<std::int64_t> democracy_ns{16, 32, 64, 128, 256};
  int democracy_trials = 8;
  /// |block slope - 1/2| above fire flags failure; below quiet passes.
  double sqrt_slope_fire = 0.1;
  double sqrt_slope_quiet = 0.05;
  std::vector<std::int64_t> dirichlet_ns{16, 32, 64, 128, 256};

  std::vector<std::int64_t> fejer_ns{32, 64, 128, 256, 512, 1024};
  double decay_fire = -0.2;
  double decay_quiet = -0.1;
  double growth_fire = 0.2;
  double growth_quiet = 0.1;

  std::vector<std::int64_t> sign_ns{8, 16, 32, 64, 128};
  int sign_patterns = 64;
  double sign_slope_fire = 0.1;
  double sign_slope_quiet = 0.05;

  std::vector<std::int64_t> riesz_freqs{64};
  int riesz_trials = 50;
  double riesz_ratio_cap = 1e3;
};

namespace detail {

enum class Outcome { fires, quiet, ambiguous, skipped };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::fires: return "fires";
    case Outcome::quiet: return "quiet";
    case Outcome::ambiguous: return "ambiguous";
    case Outcome::skipped: return "skipped";
  }
  return "skipped";
}

/// Fires when value > fire, quiet when value < quiet (for increasing tests).
inline Outcome classify_above(double value, double fire, double quiet) {
  if (std::isnan(value)) return Outcome::ambiguous;
  if (value > fire) return Outcome::fires;
  if (value < quiet) return Outcome::quiet;
  return Outcome::ambiguous;
}

inline std::vector<std::int64_t> admissible(const std::vector<std::int64_t>& ns, std::int64_t factor, std::int64_t m) {
  std::vector<std::int64_t> out;
  for (auto n : ns)
    if (n >= 1 && factor * n < m) out.push_back(n);
  return out;
}

}  // namespace detail

/// Composite decision procedure:
///  1. A_p estimate at p: divergence means not even a Schauder basis.
///  2. p != 2: the block-sum slope must be 1/2 for quasi-greedy; deviation
///     witnesses failure.
///  3. p == 2: F_N at the weight's minimum (decay) and maximum (growth); if
///     neither moves, Riesz ratios and sign-unconditionality must stay bounded.
/// Any firing test gives witnesses-failure; ambiguous trends or too few
/// admissible sizes give inconclusive.
inline ExperimentReport quasi_greedy_verdict(const Weight& w, double p, const VerdictConfig& cfg = {},
                                             const ExperimentOptions& opts = {}) {
  detail::check_p(p);
  const Grid grid(opts.grid_size);
  const auto m = static_cast<std::int64_t>(grid.size());

  ExperimentReport r;
  r.experiment = "verdict";
  detail::common_params(r, w, grid);
  r.params["p"] = p;
  r.params["seed"] = static_cast<std::int64_t>(cfg.seed);
  r.params["ap_depth"] = static_cast<std::int64_t>(cfg.ap_depth);
  r.params["ap_grid"] = static_cast<std::int64_t>(cfg.ap_grid_size);
  r.params["rng"] = std::string(detail::rng_algorithm);
  r.columns = {"check", "experiment", "statistic", "value", "fire_threshold", "quiet_threshold", "outcome"};

  bool any_fire = false, any_ambiguous = false;
  auto record = [&](const std::string& check, const std::string& exp, const std::string& stat, double value,
                    double fire, double quiet, detail::Outcome o) {
    any_fire |= o == detail::Outcome::fires;
    any_ambiguous |= o == detail::Outcome::ambiguous;
    r.add_row({check, exp, stat, value, fire, quiet, detail::to_string(o)});
  };
  auto finish = [&]() {
    r.verdict = any_fire ? Verdict::witnesses_failure
                         : (any_ambiguous ? Verdict::inconclusive : Verdict::consistent_with_quasi_greedy);
    if (p != 2.0 && !any_fire) r.verdict = Verdict::inconclusive;
    return r;
  };
  r.notes =
      "numerical evidence, not proof. Checks: finite A_p constant (Schauder basis); block sums comparable to "
      "n^(1/2) (democracy with fundamental function n^(1/2), forced for p != 2); Fejer-type averages of w "
      "bounded above and below (w bounded above and below); bounded Riesz ratios and sign ratios";

  // 1. Schauder gate.
  const auto ap = ap_constant_report(w, p, cfg.ap_depth, Grid(cfg.ap_grid_size), cfg.ap);
  const bool diverging = std::get<bool>(ap.params.at("diverging"));
  record("schauder", "ap-constant", "k_hat", ap.param_number("k_hat"), cfg.ap.cap, cfg.ap.cap,
         diverging ? detail::Outcome::fires : detail::Outcome::quiet);
  r.sub_reports.push_back(ap);
  if (diverging) return finish();

  if (p != 2.0) {
    // 2. Block sums must scale like n^{1/2}.
    const auto ns = detail::admissible(cfg.democracy_ns, 4, m);
    const auto dns = detail::admissible(cfg.dirichlet_ns, 4, m);
    if (!dns.empty()) r.sub_reports.push_back(dirichlet_growth(w, {p}, dns, opts));
    if (ns.size() < 3) {
      record("sqrt-n-democracy", "democracy", "block_loglog_slope", std::nan(""), cfg.sqrt_slope_fire,
             cfg.sqrt_slope_quiet, detail::Outcome::skipped);
      any_ambiguous = true;
      return finish();
    }
    auto dem = democracy(w, p, ns, cfg.democracy_trials, cfg.seed, opts);
    const double slope = dem.param_number("block_loglog_slope");
    record("sqrt-n-democracy", "democracy", "abs(block_loglog_slope - 0.5)", std::abs(slope - 0.5),
           cfg.sqrt_slope_fire, cfg.sqrt_slope_quiet,
           detail::classify_above(std::abs(slope - 0.5), cfg.sqrt_slope_fire, cfg.sqrt_slope_quiet));
    r.sub_reports.push_back(std::move(dem));
    return finish();
  }

  // 3. p == 2: w must be bounded above and below.
  const auto bounds = essential_bounds(w, grid);
  r.params["ess_lower"] = bounds.lower;
  r.params["ess_upper"] = bounds.upper;
  const auto fns = detail::admissible(cfg.fejer_ns, 8, m);
  if (fns.size() < 3) {
    record("bounded-below", "fejer-recover", "loglog_slope_u0", std::nan(""), cfg.decay_fire, cfg.decay_quiet,
           detail::Outcome::skipped);
    any_ambiguous = true;
    return finish();
  }
  auto fejer = fejer_weight_recovery(w, {bounds.argmin, bounds.argmax}, fns, opts);
  const double decay = fejer.param_number("loglog_slope_u0");
  const double growth = fejer.param_number("loglog_slope_u1");
  // Decay is a negative slope: classify -slope against -thresholds.
  const auto decay_outcome = detail::classify_above(-decay, -cfg.decay_fire, -cfg.decay_quiet);
  const auto growth_outcome = detail::classify_above(growth, cfg.growth_fire, cfg.growth_quiet);
  record("bounded-below", "fejer-recover", "loglog_slope_at_argmin", decay, cfg.decay_fire, cfg.decay_quiet,
         decay_outcome);
  record("bounded-above", "fejer-recover", "loglog_slope_at_argmax", growth, cfg.growth_fire, cfg.growth_quiet,
         growth_outcome);
  r.sub_reports.push_back(std::move(fejer));
  if (any_fire) return finish();

  auto riesz = riesz_bounds(w, cfg.riesz_freqs, cfg.riesz_trials, cfg.seed, opts);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < riesz.rows.size(); ++i) {
    rmin = std::min(rmin, riesz.number(i, "min_r"));
    rmax = std::max(rmax, riesz.number(i, "max_r"));
  }
  const double spread = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
  record("riesz", "riesz-bounds", "max_r/min_r", spread, cfg.riesz_ratio_cap, cfg.riesz_ratio_cap,
         spread > cfg.riesz_ratio_cap ? detail::Outcome::fires : detail::Outcome::quiet);
  r.sub_reports.push_back(std::move(riesz));

  const auto sns = detail::admissible(cfg.sign_ns, 2, m);
  auto sign = sign_unconditionality(w, p, block_sets(sns), cfg.sign_patterns, cfg.seed, opts);
  const double sslope = sign.param_number("ratio_loglog_slope");
  record("sign-unconditional", "sign-uncond", "ratio_loglog_slope", sslope, cfg.sign_slope_fire,
         cfg.sign_slope_quiet, detail::classify_above(sslope, cfg.sign_slope_fire, cfg.sign_slope_quiet));
  r.sub_reports.push_back(std::move(sign));
  return finish();
}

}  // namespace qgt
