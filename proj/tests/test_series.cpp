#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hplus/experiments.hpp"
#include "hplus/series.hpp"

using namespace hplus;

namespace {

// O(N^2) convolution through explicit divisibility tests
std::vector<complex> naive_product(const DirichletSeries& a, const DirichletSeries& b, std::size_t N) {
  std::vector<complex> c(N);
  for (std::size_t n = 1; n <= N; ++n)
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) c[n - 1] += a[d] * b[n / d];
  return c;
}

// ||D||_{4,k}^4 = sum_n |sum_{ab=n} a_a a_b (ab)^{-1/k}|^2, summed over pairs directly
double naive_norm4(const DirichletSeries& d, std::uint32_t k) {
  const std::size_t s = d.support_max();
  std::vector<complex> sq(s * s + 1);
  for (std::size_t a = 1; a <= s; ++a)
    for (std::size_t b = 1; b <= s; ++b)
      sq[a * b] += d[a] * d[b] * std::pow(static_cast<double>(a * b), -1.0 / k);
  double sum = 0.0;
  for (const auto& c : sq) sum += std::norm(c);
  return std::pow(sum, 0.25);
}

std::vector<DirichletSeries> corpus_of(std::size_t count, std::size_t max_index, std::size_t N,
                                       std::uint64_t seed = 11) {
  return corpus::polynomials(seed, count, max_index, 15, N);
}

} // namespace

TEST(Series, ConstructionAndIndexing) {
  DirichletSeries d(std::vector<complex>{1.0, 0.0, {2.0, -1.0}});
  EXPECT_EQ(d.truncation(), 3u);
  EXPECT_EQ(d[3], complex(2.0, -1.0));
  EXPECT_EQ(d[0], complex{});
  EXPECT_EQ(d[4], complex{});
  EXPECT_EQ(d.support_max(), 3u);
  EXPECT_TRUE(zero(5).is_zero());
  EXPECT_EQ(zero(5).support_max(), 0u);
  EXPECT_THROW(DirichletSeries(0), invalid_argument);
  EXPECT_THROW(DirichletSeries(std::vector<complex>{}), invalid_argument);
  EXPECT_THROW(DirichletSeries(std::vector<complex>{std::nan("")}), invalid_argument);
  EXPECT_THROW(monomial(4, 1.0, 3), invalid_argument);
}

TEST(Series, LinearOpsUseMinimumTruncation) {
  auto a = ones(5), b = monomial(2, 3.0, 3);
  auto s = add(a, b);
  EXPECT_EQ(s.truncation(), 3u);
  EXPECT_EQ(s[2], complex(4.0));
  EXPECT_EQ(subtract(s, b), retruncate(a, 3));
  EXPECT_EQ(scale({0, 1}, b)[2], complex(0, 3));
  EXPECT_EQ(retruncate(b, 6).truncation(), 6u);
  EXPECT_EQ(retruncate(b, 6)[2], complex(3.0));
}

TEST(Series, MultiplyMatchesNaiveProduct) {
  auto polys = corpus_of(20, 60, 300);
  for (std::size_t i = 0; i + 1 < polys.size(); i += 2) {
    auto p = multiply(polys[i], polys[i + 1]);
    auto ref = naive_product(polys[i], polys[i + 1], 300);
    for (std::size_t n = 1; n <= 300; ++n) ASSERT_LT(std::abs(p[n] - ref[n - 1]), 1e-12);
  }
}

TEST(Series, OnesSquaredIsDivisorCount) {
  auto z2 = multiply(ones(500), ones(500));
  auto d2 = divisor_power_table(2, 500);
  for (std::size_t n = 1; n <= 500; ++n) ASSERT_EQ(z2[n], complex(static_cast<double>(d2[n])));
  auto z4 = power(ones(500), 4, 500);
  auto d4 = divisor_power_table(4, 500);
  for (std::size_t n = 1; n <= 500; ++n) ASSERT_EQ(z4[n], complex(static_cast<double>(d4[n])));
  EXPECT_EQ(power(ones(10), 0, 10), monomial(1, 1.0, 10));
}

TEST(Series, ProductIsCommutativeAndAssociative) {
  auto polys = corpus_of(9, 30, 2000);
  for (std::size_t i = 0; i + 2 < polys.size(); i += 3) {
    const auto &a = polys[i], &b = polys[i + 1], &c = polys[i + 2];
    auto ab = multiply(a, b), ba = multiply(b, a);
    for (std::size_t n = 1; n <= 2000; ++n) ASSERT_LT(std::abs(ab[n] - ba[n]), 1e-12);
    auto l = multiply(ab, c), r = multiply(a, multiply(b, c));
    for (std::size_t n = 1; n <= 2000; ++n) ASSERT_LT(std::abs(l[n] - r[n]), 1e-12);
  }
}

TEST(Series, TranslateAndEvaluate) {
  auto polys = corpus_of(10, 50, 50);
  const complex s{0.7, 3.1};
  for (const auto& d : polys) {
    auto t = translate(d, 0.4);
    EXPECT_LT(std::abs(evaluate(t, s) - evaluate(d, s + 0.4)), 1e-12);
    auto tt = translate(translate(d, 0.25), 0.5);
    auto t3 = translate(d, 0.75);
    for (std::size_t n = 1; n <= 50; ++n) EXPECT_LT(std::abs(tt[n] - t3[n]), 1e-14);
  }
  EXPECT_THROW(translate(ones(3), -0.1), invalid_argument);
  // D(s) for zeta truncated at 2, s = 1: 1 + 1/2
  EXPECT_NEAR(evaluate(ones(2), 1.0).real(), 1.5, 1e-15);
}

TEST(Seminorm, FrozenAllOnes) {
  EXPECT_DOUBLE_EQ(seminorm_2(ones(3), 1), std::sqrt(1.0 + 0.25 + 1.0 / 9.0));
  EXPECT_DOUBLE_EQ(seminorm_2(monomial(1, {3, 4}, 10), 7), 5.0);
  EXPECT_THROW(seminorm_2(ones(3), 0), invalid_argument);
}

TEST(Seminorm, KoetheIdentity) {
  for (const auto& d : corpus_of(20, 200, 200))
    for (std::uint32_t k = 1; k <= 5; ++k)
      EXPECT_NEAR(weighted_l2_norm(d.coeffs(), koethe_weights(k, 200)), seminorm_2(d, k), 1e-12);
}

TEST(Seminorm, MonotoneInK) {
  for (const auto& d : corpus_of(30, 100, 100))
    for (std::uint32_t k = 1; k < 8; ++k) EXPECT_LE(seminorm_2(d, k), seminorm_2(d, k + 1) * (1 + 1e-15));
}

TEST(Seminorm, TriangleAndHomogeneity) {
  auto polys = corpus_of(20, 100, 100);
  for (std::size_t i = 0; i + 1 < polys.size(); ++i)
    for (std::uint32_t k : {1u, 3u}) {
      const auto &a = polys[i], &b = polys[i + 1];
      EXPECT_LE(seminorm_2(add(a, b), k), (seminorm_2(a, k) + seminorm_2(b, k)) * (1 + 1e-12));
      EXPECT_NEAR(seminorm_2(scale({-2, 1}, a), k), std::sqrt(5.0) * seminorm_2(a, k), 1e-12);
      auto e4 = seminorm_even(add(a, b), 2, k, 10000).value;
      EXPECT_LE(e4, (seminorm_even(a, 2, k, 10000).value + seminorm_even(b, 2, k, 10000).value) * (1 + 1e-12));
    }
}

TEST(Seminorm, EvenMatchesPairSum) {
  for (const auto& d : corpus_of(15, 40, 40))
    for (std::uint32_t k = 1; k <= 4; ++k) {
      auto v = seminorm_even(d, 2, k, 1600);
      EXPECT_TRUE(v.exact);
      EXPECT_NEAR(v.value, naive_norm4(d, k), 1e-12 * v.value);
    }
}

TEST(Seminorm, EvenExactnessFlag) {
  auto d = monomial(40, 1.0, 40);
  EXPECT_TRUE(seminorm_even(d, 2, 1, 1600).exact);
  EXPECT_FALSE(seminorm_even(d, 2, 1, 1599).exact);
  // truncated values are lower bounds
  auto polys = corpus_of(10, 40, 40);
  for (const auto& p : polys)
    EXPECT_LE(seminorm_even(p, 2, 2, 500).value, seminorm_even(p, 2, 2, 1600).value * (1 + 1e-15));
  EXPECT_EQ(seminorm_even(d, 1, 3, 1).value, seminorm_2(d, 3));
}

TEST(Seminorm, ComparisonConstantFrozen) {
  EXPECT_DOUBLE_EQ(seminorm_comparison_constant(1, 2, 4), 1.0 / (1.0 - std::pow(2.0, -0.5)));
  // (q/p)^k = 8: primes 2, 3, 5, 7
  double c = 1.0;
  for (double p : {2.0, 3.0, 5.0, 7.0}) c /= 1.0 - std::pow(p, -1.0 / 6.0);
  EXPECT_NEAR(seminorm_comparison_constant(3, 1, 2), c, 1e-12 * c);
  // (q/p)^k < 2: empty product
  EXPECT_EQ(seminorm_comparison_constant(1, 3, 4), 1.0);
  EXPECT_THROW(seminorm_comparison_constant(1, 4, 2), invalid_argument);
  EXPECT_THROW(seminorm_comparison_constant(40, 1, 2), invalid_argument);
}

TEST(Seminorm, ChainOnCorpus) {
  for (const auto& d : corpus_of(30, 100, 10000, 5))
    for (std::uint32_t k = 1; k <= 4; ++k) {
      const double n2 = seminorm_2(d, k);
      const auto n4 = seminorm_even(d, 2, k, 10000);
      ASSERT_TRUE(n4.exact);
      EXPECT_LE(n2, n4.value * (1 + 1e-9));
      EXPECT_LE(n4.value, seminorm_comparison_constant(k, 2, 4) * seminorm_2(d, 2 * k) * (1 + 1e-9));
    }
}

TEST(Abscissa, KnownGrowthRates) {
  EXPECT_NEAR(abscissa_estimates(ones(4096)).sigma_a_estimate, 1.0, 1e-3);
  EXPECT_NEAR(abscissa_estimates(translate(ones(4096), 0.5)).sigma_a_estimate, 0.5, 0.05);
  EXPECT_NEAR(abscissa_estimates(translate(ones(1 << 16), 2.0)).sigma_a_estimate, -1.0, 0.05);
  std::vector<complex> alt(4096);
  for (std::size_t n = 1; n <= alt.size(); ++n) alt[n - 1] = n % 2 ? 1.0 : -1.0;
  auto r = abscissa_estimates(DirichletSeries(alt));
  EXPECT_NEAR(r.sigma_a_estimate, 1.0, 1e-3);
  EXPECT_LE(r.sigma_c_estimate, 0.0 + 1e-9);
  EXPECT_NE(r.notes.find("HEURISTIC"), std::string::npos);
}

TEST(Abscissa, DegenerateInputs) {
  EXPECT_THROW(abscissa_estimates(zero(64)), undefined_abscissa);
  EXPECT_THROW(abscissa_estimates(ones(16)), invalid_argument);
  auto r = abscissa_estimates(monomial(3, 1.0, 64));
  EXPECT_TRUE(std::isinf(r.sigma_a_estimate) && r.sigma_a_estimate < 0);
  EXPECT_LE(r.sigma_c_estimate, r.sigma_a_estimate);
}

TEST(Abscissa, HarmonicAndSparse) {
  // |a_n| = 1/n: windows of equal mass, exponent 0
  std::vector<complex> h(1 << 14);
  for (std::size_t n = 1; n <= h.size(); ++n) h[n - 1] = 1.0 / static_cast<double>(n);
  EXPECT_NEAR(abscissa_estimates(DirichletSeries(h)).sigma_a_estimate, 0.0, 1e-3);
  // coefficients only at powers of 2 are a finite sum per window: exponent 0
  std::vector<complex> p2(1024);
  for (std::size_t n = 1; n <= 1024; n *= 2) p2[n - 1] = 1.0;
  EXPECT_NEAR(abscissa_estimates(DirichletSeries(p2)).sigma_a_estimate, 0.0, 1e-12);
}
