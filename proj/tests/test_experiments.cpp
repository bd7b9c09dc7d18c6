#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qgt/experiments.hpp"

using namespace qgt;

namespace {

const Weight one = Weight::constant(1);
const Weight bumpy = Weight::parse("trig:a0=1:cos1=0.5");
const Weight zero_at_origin = Weight::power(0.8);

ExperimentOptions grid_of(std::size_t m, unsigned threads = 1) { return {m, threads}; }

}  // namespace

TEST(IndexSets, BlocksAndRandomSubsets) {
  const auto blocks = block_sets({1, 3});
  EXPECT_EQ(blocks[1].natural, (std::vector<std::int64_t>{1, 2, 3}));
  for (std::int64_t n : {1, 5, 40}) {
    const auto s = random_sets({n}, 2048, 9).front();
    ASSERT_EQ(s.natural.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(std::set<std::int64_t>(s.natural.begin(), s.natural.end()).size(), s.natural.size());
    EXPECT_GE(s.natural.front(), 1);
    EXPECT_LE(s.natural.back(), std::min<std::int64_t>(n * n, 2048));
    EXPECT_EQ(random_sets({n}, 2048, 9).front().natural, s.natural);
  }
}

TEST(SignUnconditionality, OrthonormalNormIsSignInvariant) {
  auto sets = block_sets({3, 10, 40});
  sets.push_back(random_sets({20}, 1024, 4).front());
  const auto r = sign_unconditionality(one, 2.0, sets, 16, 1, grid_of(1024));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_NEAR(r.number(i, "ratio"), 1.0, 1e-10);
    EXPECT_NEAR(r.number(i, "min_norm"), std::sqrt(r.number(i, "size")), 1e-10);
  }
  EXPECT_EQ(r.number(1, "patterns"), 1024.0);
  EXPECT_EQ(r.number(2, "patterns"), 16.0);
}

TEST(SignUnconditionality, AllPlusPatternIsIncluded) {
  const auto r = sign_unconditionality(one, 4.0, block_sets({6, 50}), 8, 3, grid_of(1024));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_LE(r.number(i, "all_plus_norm"), r.number(i, "max_norm"));
    EXPECT_GE(r.number(i, "all_plus_norm"), r.number(i, "min_norm"));
  }
  // For the block, all-plus is the peaked Dirichlet kernel and the maximum.
  EXPECT_EQ(r.number(1, "all_plus_norm"), r.number(1, "max_norm"));
}

TEST(SignUnconditionality, LebesgueFourRatioGrowsPerDyadicStep) {
  const auto r = sign_unconditionality(one, 4.0, block_sets({8, 16, 32, 64, 128}), 64, 1, grid_of(4096));
  EXPECT_GE(r.param_number("ratio_per_dyadic_factor"), 1.15);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GT(r.number(i, "ratio"), r.number(i - 1, "ratio"));
}

TEST(SignUnconditionality, RieszWeightRatioStaysBounded) {
  const auto r = sign_unconditionality(bumpy, 2.0, block_sets({8, 16, 32, 64, 128}), 64, 1, grid_of(4096));
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_LE(r.number(i, "ratio"), 2.0);
}

TEST(SignUnconditionality, RejectsBadInput) {
  EXPECT_THROW(sign_unconditionality(one, 2.0, block_sets({4}), 1, 1, grid_of(256)), std::invalid_argument);
  EXPECT_THROW(sign_unconditionality(one, 1.0, block_sets({4}), 8, 1, grid_of(256)), std::invalid_argument);
  EXPECT_THROW(sign_unconditionality(one, 2.0, block_sets({300}), 8, 1, grid_of(256)), std::invalid_argument);
}

TEST(Democracy, ParsevalGivesSqrtN) {
  const auto r = democracy(one, 2.0, {4, 16, 60}, 5, 2, grid_of(256));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double root = std::sqrt(r.number(i, "n"));
    for (const char* col : {"block_norm", "progression_norm", "min_random", "max_random", "phi_hat"})
      EXPECT_NEAR(r.number(i, col), root, 1e-10) << col;
    EXPECT_NEAR(r.number(i, "phi_hat_over_sqrt_n"), 1.0, 1e-10);
  }
}

TEST(Democracy, LebesgueFourBlockGrowsFasterThanSqrtN) {
  const auto r = democracy(one, 4.0, {16, 32, 64, 128, 256}, 8, 1, grid_of(4096));
  EXPECT_NEAR(r.param_number("block_over_sqrt_n_loglog_slope"), 0.25, 0.05);
  EXPECT_NEAR(r.param_number("block_loglog_slope"), 0.75, 0.05);
}

TEST(Democracy, VanishingWeightBlockDecaysAgainstSqrtN) {
  const auto r = democracy(zero_at_origin, 2.0, {16, 32, 64, 128, 256, 512}, 4, 1, grid_of(4096));
  EXPECT_NEAR(r.param_number("block_over_sqrt_n_loglog_slope"), -0.4, 0.08);
}

TEST(Democracy, RejectsLargeN) {
  EXPECT_THROW(democracy(one, 2.0, {64}, 2, 1, grid_of(256)), std::invalid_argument);
  EXPECT_THROW(democracy(one, 2.0, {16}, 0, 1, grid_of(256)), std::invalid_argument);
}

TEST(DirichletGrowth, ParsevalAndHoelder) {
  const auto r = dirichlet_growth(one, {1.5, 3.0}, {1, 2, 8, 64, 255}, grid_of(1024));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_NEAR(r.number(i, "l2_w"), std::sqrt(r.number(i, "n")), 1e-10);
    EXPECT_NEAR(r.number(i, "l2_w_sq_over_n"), 1.0, 1e-10);
  }
  EXPECT_TRUE(std::get<bool>(r.params.at("holder_holds")));
  EXPECT_THROW(dirichlet_growth(one, {2.0}, {256}, grid_of(1024)), std::invalid_argument);
}

TEST(DirichletGrowth, HoelderHoldsForWeightedNorms) {
  for (const auto& w : {bumpy, zero_at_origin, Weight::power(-0.5)}) {
    const auto r = dirichlet_growth(w, {1.5, 3.0}, {1, 4, 16, 64, 256}, grid_of(2048));
    EXPECT_TRUE(std::get<bool>(r.params.at("holder_holds"))) << w.describe();
    for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GT(r.number(i, "holder_slack_p3"), 0.0);
  }
}

// ||D_N||_{L^1}/sqrt(2 pi) = (4/pi^2) log N + O(1): the slope of the fit
// against log N recovers the classical constant.
TEST(DirichletGrowth, LebesgueConstantSlope) {
  const auto r = dirichlet_growth(one, {}, {64, 128, 256, 512, 1024, 2048, 4096}, grid_of(65536));
  EXPECT_NEAR(r.param_number("lebesgue_slope"), 4.0 / (pi * pi), 0.1 * 4.0 / (pi * pi));
  EXPECT_NEAR(r.number(0, "lebesgue_constant") * std::sqrt(two_pi), r.number(0, "l1_unweighted"), 1e-12);
}

TEST(FejerRecovery, ConstantWeightIsReproducedExactly) {
  const auto r = fejer_weight_recovery(Weight::constant(2.5), {0.0, 1.0, -3.0}, {1, 7, 32}, grid_of(512));
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_NEAR(r.number(i, "f_n"), 2.5, 1e-10);
}

TEST(FejerRecovery, SmoothPointsConverge) {
  const auto r = fejer_weight_recovery(bumpy, {0.0, pi / 2}, {256}, grid_of(4096));
  EXPECT_NEAR(r.number(0, "w_u"), 1.5, 1e-15);
  EXPECT_LT(r.number(0, "abs_error"), 0.05);
  EXPECT_LT(r.number(1, "abs_error"), 0.05);
}

TEST(FejerRecovery, DecaysAtZeroOfPowerWeight) {
  const auto r = fejer_weight_recovery(zero_at_origin, {0.0}, {32, 64, 128, 256, 512, 1024}, grid_of(16384));
  EXPECT_NEAR(r.param_number("loglog_slope_u0"), -0.8, 0.12);
  EXPECT_THROW(fejer_weight_recovery(one, {0.0}, {2048}, grid_of(16384)), std::invalid_argument);
}

TEST(RieszBounds, ParsevalGivesUnitRatios) {
  const auto r = riesz_bounds(one, {8, 40}, 20, 3, grid_of(512));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_NEAR(r.number(i, "min_r"), 1.0, 1e-10);
    EXPECT_NEAR(r.number(i, "max_r"), 1.0, 1e-10);
  }
  EXPECT_THROW(riesz_bounds(one, {8}, 9, 3, grid_of(512)), std::invalid_argument);
}

TEST(RieszBounds, BoundedWeightIsSharpAndContained) {
  const auto r = riesz_bounds(bumpy, {64}, 200, 1, grid_of(4096));
  EXPECT_GE(r.number(0, "min_r"), 0.5 - 1e-6);
  EXPECT_LE(r.number(0, "max_r"), 1.5 + 1e-6);
  EXPECT_LT(r.number(0, "min_r"), 0.7);
  EXPECT_GT(r.number(0, "max_r"), 1.3);
}

TEST(RieszBounds, VanishingWeightHasNoLowerBound) {
  const auto r = riesz_bounds(zero_at_origin, {64}, 20, 1, grid_of(4096));
  EXPECT_LT(r.number(0, "min_r_concentrated"), 0.1);
}

TEST(ApConstantReport, RowsFollowDepth) {
  const auto r = ap_constant_report(Weight::power(0.5), 2.0, 6, Grid(4096));
  ASSERT_EQ(r.rows.size(), 7u);
  EXPECT_EQ(r.number(6, "k_hat"), r.param_number("k_hat"));
  EXPECT_FALSE(std::get<bool>(r.params.at("diverging")));
}

TEST(GreedyRun, SawtoothAndSign) {
  const auto saw = greedy_run(bumpy, 2.0, "sawtooth:degree=64", 128, 1, grid_of(1024));
  EXPECT_LT(saw.number(128, "relative_error"), 1e-8);
  EXPECT_EQ(saw.number(0, "relative_error"), 1.0);
  const auto sign = greedy_run(one, 2.0, "sign", 32, 1, grid_of(1024));
  EXPECT_TRUE(sign.params.count("truncation_error"));
  const auto rnd = greedy_run(one, 3.0, "random:degree=10", 30, 5, grid_of(256));
  EXPECT_LT(rnd.number(21, "error"), 1e-10);
  EXPECT_THROW(greedy_run(one, 2.0, "wave", 4, 1, grid_of(256)), std::invalid_argument);
  EXPECT_THROW(greedy_run(one, 2.0, "sawtooth", 4, 1, grid_of(256)), std::invalid_argument);
}

TEST(Verdict, OrthonormalCaseIsConsistent) {
  const auto r = quasi_greedy_verdict(one, 2.0);
  ASSERT_TRUE(r.verdict);
  EXPECT_EQ(*r.verdict, Verdict::consistent_with_quasi_greedy);
  EXPECT_EQ(r.sub_reports.size(), 4u);
}

TEST(Verdict, BoundedWeightIsConsistent) {
  EXPECT_EQ(*quasi_greedy_verdict(bumpy, 2.0).verdict, Verdict::consistent_with_quasi_greedy);
}

TEST(Verdict, PNotTwoWitnessesFailure) {
  for (double p : {1.5, 3.0, 4.0}) {
    const auto r = quasi_greedy_verdict(one, p);
    EXPECT_EQ(*r.verdict, Verdict::witnesses_failure) << p;
    EXPECT_EQ(std::get<std::string>(r.rows.back()[r.column("outcome")]), "fires");
  }
}

TEST(Verdict, VanishingWeightWitnessesFailure) {
  const auto r = quasi_greedy_verdict(zero_at_origin, 2.0);
  EXPECT_EQ(*r.verdict, Verdict::witnesses_failure);
  EXPECT_EQ(std::get<std::string>(r.rows[1][r.column("check")]), "bounded-below");
  EXPECT_EQ(std::get<std::string>(r.rows[1][r.column("outcome")]), "fires");
}

TEST(Verdict, NonApWeightStopsAtSchauderGate) {
  const auto r = quasi_greedy_verdict(Weight::power(1.5), 2.0);
  EXPECT_EQ(*r.verdict, Verdict::witnesses_failure);
  EXPECT_EQ(r.rows.size(), 1u);
}

TEST(Verdict, TooCoarseGridIsInconclusive) {
  const auto r = quasi_greedy_verdict(one, 2.0, {}, grid_of(64));
  EXPECT_EQ(*r.verdict, Verdict::inconclusive);
}

TEST(Determinism, ThreadCountDoesNotChangeReports) {
  for (unsigned threads : {2u, 8u}) {
    const auto a = grid_of(2048, 1), b = grid_of(2048, threads);
    EXPECT_EQ(to_csv(sign_unconditionality(one, 4.0, block_sets({4, 16, 64}), 16, 3, a)),
              to_csv(sign_unconditionality(one, 4.0, block_sets({4, 16, 64}), 16, 3, b)));
    EXPECT_EQ(to_csv(democracy(bumpy, 3.0, {8, 16, 32}, 4, 3, a)), to_csv(democracy(bumpy, 3.0, {8, 16, 32}, 4, 3, b)));
    EXPECT_EQ(to_csv(dirichlet_growth(bumpy, {1.5, 3.0}, {1, 8, 64}, a)),
              to_csv(dirichlet_growth(bumpy, {1.5, 3.0}, {1, 8, 64}, b)));
    EXPECT_EQ(to_csv(fejer_weight_recovery(bumpy, {0.0, 2.0}, {8, 16}, a)),
              to_csv(fejer_weight_recovery(bumpy, {0.0, 2.0}, {8, 16}, b)));
    EXPECT_EQ(to_csv(riesz_bounds(bumpy, {16}, 30, 3, a)), to_csv(riesz_bounds(bumpy, {16}, 30, 3, b)));
    EXPECT_EQ(to_json_string(quasi_greedy_verdict(bumpy, 2.0, {}, a)),
              to_json_string(quasi_greedy_verdict(bumpy, 2.0, {}, b)));
  }
}
