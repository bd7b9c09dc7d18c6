#include <gtest/gtest.h>

#include <cmath>

#include "qgt/detail/random.hpp"
#include "qgt/fourier.hpp"

using namespace qgt;

namespace {

SampledFunction character(std::int64_t k, const Grid& g) {
  return sample([k](double t) { return std::polar(inv_sqrt_two_pi, double(k) * t); }, g);
}

CoefficientVector random_coefficients(std::int64_t degree, std::uint64_t seed) {
  detail::KeyedRng rng(seed, {17});
  CoefficientVector c;
  for (std::int64_t k = -degree; k <= degree; ++k) c.set(k, rng.unit_disc());
  return c;
}

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(NaturalOrdering, FirstValues) {
  const std::int64_t expected[] = {0, -1, 1, -2, 2, -3, 3};
  for (int j = 1; j <= 7; ++j) EXPECT_EQ(natural_index_to_freq(j), expected[j - 1]);
  EXPECT_EQ(natural_index_to_freq(4), -2);
  EXPECT_EQ(freq_to_natural_index(7), 15);
  EXPECT_THROW(natural_index_to_freq(0), std::invalid_argument);
}

TEST(NaturalOrdering, MapsAreMutuallyInverse) {
  for (std::int64_t j = 1; j < 5000; ++j) EXPECT_EQ(freq_to_natural_index(natural_index_to_freq(j)), j);
  for (std::int64_t k = -2500; k <= 2500; ++k) EXPECT_EQ(natural_index_to_freq(freq_to_natural_index(k)), k);
}

TEST(FourierCoefficients, OrthonormalCharacter) {
  const Grid g(256);
  const auto c = fourier_coefficients(character(5, g), 8);
  for (std::int64_t k = -8; k <= 8; ++k) {
    if (k == 5) {
      EXPECT_NEAR(std::abs(c[k] - complex(1.0, 0.0)), 0.0, 1e-12);
    } else {
      EXPECT_LT(std::abs(c[k]), 1e-12) << k;
    }
  }
}

TEST(FourierCoefficients, ConstantFunction) {
  const auto c = fourier_coefficients(sample([](double) { return 1.0; }, Grid(64)), 2);
  EXPECT_NEAR(c[0].real(), std::sqrt(two_pi), 1e-13);
  for (std::int64_t k : {-2, -1, 1, 2}) EXPECT_LT(std::abs(c[k]), 1e-13);
}

// Oracle: <sign, e_1> = (2 pi)^{-1/2} (int_0^pi e^{-it} - int_{-pi}^0 e^{-it}) = -4i / sqrt(2 pi).
TEST(FourierCoefficients, SignFunctionAgainstAnalyticIntegral) {
  const auto f = sample([](double t) { return t > 0 ? 1.0 : -1.0; }, Grid(4096));
  const auto c = fourier_coefficients(f, 1);
  const complex expected(0.0, -4.0 / std::sqrt(two_pi));
  EXPECT_LT(std::abs(c[1] - expected), 1e-5);
  EXPECT_LT(std::abs(c[-1] + c[1]), 1e-12);
  EXPECT_LT(std::abs(c[0]), 1e-12);
}

TEST(FourierCoefficients, AliasingBandRejected) {
  const auto f = sample([](double) { return 1.0; }, Grid(16));
  EXPECT_THROW(fourier_coefficients(f, 8), std::invalid_argument);
  EXPECT_NO_THROW(fourier_coefficients(f, 7));
}

TEST(PartialSums, SymmetricReproducesAndExcludes) {
  const Grid g(128);
  const auto e3 = character(3, g);
  const auto c = fourier_coefficients(e3, 5);
  EXPECT_LT(max_abs_diff(partial_sum_symmetric(c, 5, g), e3), 1e-12);
  EXPECT_LT(max_abs_diff(partial_sum_symmetric(c, 2, g), SampledFunction(g)), 1e-12);

  CoefficientVector dc;
  dc.set(0, std::sqrt(two_pi));
  const auto one = partial_sum_symmetric(dc, 0, g);
  for (const auto& v : one.values()) EXPECT_NEAR(std::abs(v - complex(1.0, 0.0)), 0.0, 1e-14);
}

TEST(PartialSums, NaturalOrderFirstHit) {
  const Grid g(64);
  const auto c = fourier_coefficients(character(-2, g), 10);
  for (std::int64_t n = 1; n <= 3; ++n)
    EXPECT_LT(max_abs_diff(partial_sum_natural(c, n, g), SampledFunction(g)), 1e-12);
  EXPECT_GT(max_abs_diff(partial_sum_natural(c, 4, g), SampledFunction(g)), 0.1);

  const auto s1 = partial_sum_natural(random_coefficients(6, 3), 1, g);
  for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LT(std::abs(s1[j] - s1[0]), 1e-14);
}

TEST(PartialSums, NaturalOddMatchesSymmetric) {
  const Grid g(512);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = random_coefficients(120, seed);
    for (std::int64_t n : {1, 7, 50, 100})
      EXPECT_LT(max_abs_diff(partial_sum_natural(c, 2 * n + 1, g), partial_sum_symmetric(c, n, g)), 1e-12);
  }
}

TEST(Dirichlet, TrivialAndClosedForm) {
  const Grid g(256);
  const auto d1 = dirichlet_kernel(1, 0.0, g);
  for (const auto& v : d1.values()) EXPECT_NEAR(std::abs(v - complex(inv_sqrt_two_pi, 0.0)), 0.0, 1e-15);
  // Frequencies {0, -1, 1}: (2 pi)^{-1/2} (1 + 2 cos t).
  const auto d3 = dirichlet_kernel(3, 0.0, g);
  for (std::size_t j = 0; j < g.size(); ++j)
    EXPECT_LT(std::abs(d3[j] - complex(inv_sqrt_two_pi * (1.0 + 2.0 * std::cos(g.node(j))), 0.0)), 1e-12);
}

TEST(Dirichlet, ParsevalNorm) {
  const Grid g(4096);
  const CharacterTable table(g);
  for (std::int64_t n : {1, 4, 64, 511})
    EXPECT_NEAR(lp_norm(dirichlet_kernel(n, 0.0, table), 2.0), std::sqrt(double(n)), 1e-10);
}

TEST(Dirichlet, ShiftIsTranslation) {
  const Grid g(128);
  const double u = 2.0 * g.step();
  const auto shifted = dirichlet_kernel(9, u, g);
  const auto base = dirichlet_kernel(9, 0.0, g);
  for (std::size_t j = 2; j < g.size(); ++j) EXPECT_LT(std::abs(shifted[j] - base[j - 2]), 1e-12);
}

TEST(FourierProperties, ParsevalAndReproduction) {
  const Grid g(512);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_coefficients(200, seed);
    const auto f = synthesize(c, g);
    const auto back = fourier_coefficients(f, 255);
    for (std::int64_t k = -255; k <= 255; ++k) EXPECT_LT(std::abs(back[k] - c[k]), 1e-10);
    EXPECT_NEAR(back.l2_norm_squared(), std::pow(lp_norm(f, 2.0), 2), 1e-10 * back.l2_norm_squared());
  }
}

TEST(FourierProperties, TranslationCovariance) {
  const Grid g(256);
  const auto c = random_coefficients(40, 11);
  CoefficientVector shifted_c;
  const double u = 0.7;
  for (const auto& [k, a] : c.entries()) shifted_c.set(k, a * std::polar(1.0, -double(k) * u));
  // f(. - u) re-sampled from the symbolic trigonometric polynomial.
  const auto fu = sample(
      [&](double t) {
        complex v{0.0, 0.0};
        for (const auto& [k, a] : c.entries()) v += a * std::polar(inv_sqrt_two_pi, double(k) * (t - u));
        return v;
      },
      g);
  const auto got = fourier_coefficients(fu, 60);
  for (std::int64_t k = -60; k <= 60; ++k) EXPECT_LT(std::abs(got[k] - shifted_c[k]), 1e-10);
}

TEST(OperatorNormProbe, UnweightedL2IsProjection) {
  const auto pts = operator_norm_probe(Weight::constant(1), 2.0, {1, 2, 4, 8, 16, 32}, 3, 1, {1024, 1});
  for (const auto& pt : pts) EXPECT_NEAR(pt.ratio, 1.0, 1e-10) << pt.n;
}

TEST(OperatorNormProbe, UnweightedL4Bounded) {
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 1; n <= 64; ++n) ns.push_back(n);
  const auto pts = operator_norm_probe(Weight::constant(1), 4.0, ns, 3, 1, {1024, 1});
  for (const auto& pt : pts) {
    EXPECT_GE(pt.ratio, 1.0 - 1e-12);
    EXPECT_LT(pt.ratio, 3.0) << pt.n;
  }
}

TEST(OperatorNormProbe, CubicPowerWeightGrows) {
  std::vector<std::int64_t> ns{8, 16, 32, 64, 128, 256, 512};
  const auto pts = operator_norm_probe(Weight::power(3.0), 2.0, ns, 2, 5, {4096, 1});
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GT(pts[i].ratio, pts[i - 1].ratio) << pts[i].n;
  EXPECT_GT(pts.back().ratio, 10.0 * pts.front().ratio);
}

TEST(OperatorNormProbe, ThreadCountDoesNotChangeResults) {
  const std::vector<std::int64_t> ns{2, 4, 8, 16};
  const auto a = operator_norm_probe(Weight::power(0.5), 3.0, ns, 3, 9, {512, 1});
  const auto b = operator_norm_probe(Weight::power(0.5), 3.0, ns, 3, 9, {512, 8});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ratio, b[i].ratio);
    EXPECT_EQ(a[i].best_test, b[i].best_test);
  }
}
