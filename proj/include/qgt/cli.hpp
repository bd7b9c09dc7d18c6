#pragma once

// Command-line front end: flag parsing into a RunConfig, dispatch to the
// experiments, and report serialization.
//
//   qgt <subcommand> --weight SPEC --p P [--grid M] [--seed S] [--N RANGE] ...
//
// RANGE is either "a:b" (the dyadic list 2^a..2^b) or a comma list.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgt/experiments.hpp"
#include "qgt/report.hpp"
#include "qgt/weights.hpp"

namespace qgt::cli {

inline const std::vector<std::string> subcommands{"ap-constant", "greedy-run",   "dirichlet-growth", "democracy",
                                                  "sign-uncond", "fejer-recover", "riesz-bounds",    "verdict"};

struct RunConfig {
  std::string subcommand;
  std::string weight_spec = "constant:c=1";
  std::vector<double> p{2.0};
  std::size_t grid_size = 4096;
  std::uint64_t seed = 1;
  int depth = 12;
  std::size_t ap_grid_size = 65536;
  std::string range;  ///< as given; empty selects the subcommand default
  std::vector<std::int64_t> ns;
  std::size_t m = 128;
  int trials = 0;  ///< 0 selects the subcommand default
  std::vector<double> us{0.0};
  std::string function = "sawtooth:degree=64";
  std::string index_set = "block";
  std::string format = "csv";
  std::string output;  ///< empty writes to stdout
  unsigned threads = 1;
};

/// Bad flags or values. exit_code is 0 for --help.
class UsageError : public std::runtime_error {
public:
  UsageError(const std::string& what, int exit_code = 2) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

/// "a:b" -> {2^a, ..., 2^b}; "x,y,z" -> {x, y, z}.
inline std::vector<std::int64_t> parse_range(std::string_view spec) {
  std::vector<std::int64_t> out;
  auto integer = [&](std::string_view s) {
    const double v = detail::parse_double(s, "range");
    if (v != std::floor(v) || v < 0 || v > 1e15) throw std::invalid_argument("range entry '" + std::string(s) + "' is not a count");
    return static_cast<std::int64_t>(v);
  };
  if (auto colon = spec.find(':'); colon != std::string_view::npos) {
    const auto a = integer(spec.substr(0, colon));
    const auto b = integer(spec.substr(colon + 1));
    if (a > b || b > 40) throw std::invalid_argument("dyadic range '" + std::string(spec) + "' needs 0 <= a <= b <= 40");
    for (auto e = a; e <= b; ++e) out.push_back(std::int64_t{1} << e);
  } else {
    for (auto item : detail::split(spec, ',')) {
      const auto v = integer(item);
      if (v < 1) throw std::invalid_argument("range entries must be positive");
      out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("range '" + std::string(spec) + "' is empty");
  return out;
}

inline std::vector<double> parse_reals(std::string_view spec, std::string_view what) {
  std::vector<double> out;
  for (auto item : detail::split(spec, ',')) {
    if (item == "pi") out.push_back(pi);
    else if (item == "-pi") out.push_back(-pi);
    else out.push_back(detail::parse_double(item, what));
  }
  return out;
}

namespace detail {

inline std::string describe(const std::string& sub) {
  if (sub == "ap-constant") return "Estimate the A_p constant of a weight over dyadic intervals";
  if (sub == "greedy-run") return "Greedy m-term error curve of a test function";
  if (sub == "dirichlet-growth") return "Weighted norms of Dirichlet kernels and the Lebesgue constant";
  if (sub == "democracy") return "Norms of constant-coefficient sums against n^(1/2)";
  if (sub == "sign-uncond") return "Extremes of signed sums over sign patterns";
  if (sub == "fejer-recover") return "Fejer-type averages F_N(u) of the weight";
  if (sub == "riesz-bounds") return "Ratios of weighted L^2 norm to coefficient l^2 norm";
  return "Composite quasi-greedy verdict with all sub-reports";
}

inline std::string default_range(const std::string& sub) {
  if (sub == "democracy") return "4:8";
  if (sub == "dirichlet-growth") return "0:8";
  if (sub == "fejer-recover") return "5:8";
  if (sub == "riesz-bounds") return "6";
  if (sub == "sign-uncond") return "3:7";
  return "";
}

inline int default_trials(const std::string& sub) {
  if (sub == "democracy") return 8;
  if (sub == "sign-uncond") return 64;
  if (sub == "riesz-bounds") return 200;
  return 0;
}

}  // namespace detail

inline RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string p_text = "2", u_text = "0";
  CLI::App app{"Greedy trigonometric approximation in weighted L^p: experiments and verdicts", "qgt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  for (const auto& name : subcommands) {
    auto* sub = app.add_subcommand(name, detail::describe(name));
    sub->add_option("--weight", cfg.weight_spec, "Weight spec, e.g. power:alpha=0.8");
    sub->add_option("--p", p_text, name == "dirichlet-growth" ? "Exponents, comma separated" : "Exponent p > 1");
    sub->add_option("--grid", cfg.grid_size, "Quadrature grid size (even, >= 64)")->envname("QGT_GRID_SIZE");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output, "Output file (default: standard output)");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    if (name == "ap-constant" || name == "verdict") sub->add_option("--depth", cfg.depth, "Dyadic interval depth");
    if (name == "verdict") sub->add_option("--ap-grid", cfg.ap_grid_size, "Fine grid for the A_p estimate");
    if (name == "greedy-run") {
      sub->add_option("--m", cfg.m, "Largest number of greedy terms");
      sub->add_option("--function", cfg.function, "sawtooth:degree=D, random:degree=D, sign, dirichlet:n=N");
    }
    if (!detail::default_range(name).empty()) sub->add_option("--N", cfg.range, "Sizes: a:b for 2^a..2^b, or a list");
    if (detail::default_trials(name) > 0) sub->add_option("--trials", cfg.trials, "Trials per row");
    if (name == "fejer-recover") sub->add_option("--u", u_text, "Points u, comma separated");
    if (name == "sign-uncond") sub->add_option("--set", cfg.index_set, "Index sets")->check(CLI::IsMember({"block", "random"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  try {
    cfg.p = parse_reals(p_text, "--p");
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
  check(!cfg.p.empty(), "--p: no exponent given");
  check(cfg.subcommand == "dirichlet-growth" || cfg.p.size() == 1, "--p: a single exponent is expected");
  for (double p : cfg.p) check(p > 1.0 && std::isfinite(p), "p must exceed 1");
  check(cfg.grid_size >= 64 && cfg.grid_size % 2 == 0, "--grid: grid size must be even and at least 64");
  check(cfg.ap_grid_size >= 64 && cfg.ap_grid_size % 2 == 0, "--ap-grid: grid size must be even and at least 64");
  check(cfg.depth >= 1, "--depth: must be at least 1");
  try {
    (void)Weight::parse(cfg.weight_spec);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--weight: ") + e.what());
  }
  if (cfg.range.empty()) cfg.range = detail::default_range(cfg.subcommand);
  if (!cfg.range.empty()) {
    try {
      cfg.ns = parse_range(cfg.range);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--N: ") + e.what());
    }
  }
  if (cfg.trials == 0) cfg.trials = detail::default_trials(cfg.subcommand);
  check(cfg.trials >= 0, "--trials: must be positive");
  try {
    cfg.us = parse_reals(u_text, "--u");
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--u: ") + e.what());
  }
  return cfg;
}

inline ExperimentReport run(const RunConfig& cfg) {
  const auto w = Weight::parse(cfg.weight_spec);
  const ExperimentOptions opts{cfg.grid_size, cfg.threads};
  const double p = cfg.p.front();
  const auto& sub = cfg.subcommand;
  if (sub == "ap-constant") return ap_constant_report(w, p, cfg.depth, Grid(cfg.grid_size));
  if (sub == "greedy-run") return greedy_run(w, p, cfg.function, cfg.m, cfg.seed, opts);
  if (sub == "dirichlet-growth") return dirichlet_growth(w, cfg.p, cfg.ns, opts);
  if (sub == "democracy") return democracy(w, p, cfg.ns, cfg.trials, cfg.seed, opts);
  if (sub == "sign-uncond") {
    const auto sets = cfg.index_set == "random" ? random_sets(cfg.ns, static_cast<std::int64_t>(cfg.grid_size / 2) - 1, cfg.seed)
                                                : block_sets(cfg.ns);
    auto r = sign_unconditionality(w, p, sets, cfg.trials, cfg.seed, opts);
    r.params["set"] = cfg.index_set;
    return r;
  }
  if (sub == "fejer-recover") return fejer_weight_recovery(w, cfg.us, cfg.ns, opts);
  if (sub == "riesz-bounds") return riesz_bounds(w, cfg.ns, cfg.trials, cfg.seed, opts);
  if (sub == "verdict") {
    VerdictConfig vc;
    vc.seed = cfg.seed;
    vc.ap_depth = cfg.depth;
    vc.ap_grid_size = cfg.ap_grid_size;
    return quasi_greedy_verdict(w, p, vc, opts);
  }
  throw std::invalid_argument("unknown subcommand '" + sub + "'");
}

inline std::string serialize(const ExperimentReport& r, const std::string& format) {
  return format == "json" ? to_json_string(r) : to_csv(r);
}

/// Writes the report; returns the process exit status.
inline int emit(const ExperimentReport& r, const std::string& format, const std::string& path,
                std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const auto text = serialize(r, format);
  if (path.empty()) {
    out << text;
    out.flush();
    return out ? 0 : 1;
  }
  std::ofstream file(path, std::ios::binary);
  if (file) file << text;
  if (!file) {
    err << "qgt: cannot write '" << path << "'\n";
    return 1;
  }
  return 0;
}

/// Full entry point. The verdict never affects the exit status.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageError& e) {
    if (e.exit_code() == 0) {
      out << e.what();
      return 0;
    }
    err << "qgt: " << e.what() << "\nRun with --help for usage.\n";
    return e.exit_code();
  }
  try {
    return emit(run(cfg), cfg.format, cfg.output, out, err);
  } catch (const std::exception& e) {
    err << "qgt: " << cfg.subcommand << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qgt::cli
