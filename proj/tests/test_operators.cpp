#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "hplus/experiments.hpp"
#include "hplus/operators.hpp"

using namespace hplus;

namespace {

// exp(-log n * E) as prod_{j>=2} sum_r (-log n c_j)^r / r! j^{-rs}, each factor
// multiplied in with an explicit divisibility loop
std::vector<complex> product_form_exp(const DirichletSeries& varphi, double log_n, std::size_t M) {
  std::vector<complex> acc(M + 1);
  acc[1] = 1.0;
  for (std::size_t j = 2; j <= varphi.truncation(); ++j) {
    const complex c = varphi[j];
    if (c == complex{}) continue;
    std::vector<complex> factor(M + 1);
    complex term = 1.0;
    std::size_t idx = 1;
    for (std::uint32_t r = 0; idx <= M; ++r) {
      factor[idx] = term;
      term *= -log_n * c / static_cast<double>(r + 1);
      if (idx > M / j) break;
      idx *= j;
    }
    std::vector<complex> next(M + 1);
    for (std::size_t n = 1; n <= M; ++n)
      for (std::size_t d = 1; d <= n; ++d)
        if (n % d == 0 && acc[d] != complex{} && factor[n / d] != complex{}) next[n] += acc[d] * factor[n / d];
    acc.swap(next);
  }
  return acc;
}

DirichletSeries oracle_compose(const DirichletSeries& d, const Symbol& phi, std::size_t M) {
  std::vector<complex> out(M);
  for (std::size_t n = 1; n <= d.truncation(); ++n) {
    if (d[n] == complex{}) continue;
    std::uint64_t shift = 1;
    for (std::uint32_t i = 0; i < phi.c0; ++i) shift *= n;
    if (shift > M) continue;
    const double log_n = std::log(static_cast<double>(n));
    auto ex = product_form_exp(phi.varphi, log_n, M);
    const complex w = d[n] * std::exp(-phi.varphi[1] * log_n);
    for (std::size_t j = 1; shift * j <= M; ++j) out[shift * j - 1] += w * ex[j];
  }
  return DirichletSeries(std::move(out));
}

Symbol random_symbol(std::mt19937_64& rng, std::uint32_t c0, std::size_t varphi_trunc, double scale_c) {
  std::vector<complex> v(varphi_trunc);
  for (auto& c : v) c = scale_c * complex(corpus::symmetric_unit(rng), corpus::symmetric_unit(rng));
  return {c0, DirichletSeries(std::move(v))};
}

double max_diff(const DirichletSeries& a, const DirichletSeries& b) {
  double m = 0.0;
  for (std::size_t n = 1; n <= std::max(a.truncation(), b.truncation()); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

Character random_character(std::mt19937_64& rng, std::size_t n_primes) {
  std::vector<complex> v(n_primes);
  for (auto& c : v) c = std::polar(1.0, 2.0 * std::numbers::pi * detail::unit_double(rng()));
  return Character(std::move(v));
}

} // namespace

TEST(ComposeAffine, MovesCoefficients) {
  auto d = ones(10);
  auto r = compose_affine(d, 2, 0.0);
  EXPECT_EQ(r[1], complex(1.0));
  EXPECT_EQ(r[4], complex(1.0));
  EXPECT_EQ(r[9], complex(1.0));
  EXPECT_EQ(r[2], complex{});
  auto t = compose_affine(d, 1, 0.5);
  EXPECT_NEAR(std::abs(t[4] - 0.5), 0.0, 1e-15);
  EXPECT_THROW(compose_affine(d, 0, 0.0), invalid_argument);
}

TEST(ComposeAffine, ContractionWhenConstantVanishes) {
  for (const auto& d : corpus::polynomials(3, 25, 200, 20, 200))
    for (std::uint32_t c0 = 1; c0 <= 3; ++c0)
      for (std::uint32_t k = 1; k <= 6; ++k)
        EXPECT_LE(seminorm_2(compose_affine(d, c0, 0.0), k), seminorm_2(d, k));
}

TEST(ComposeGeneral, ConstantVarphiIsAffine) {
  std::mt19937_64 rng(17);
  for (const auto& d : corpus::polynomials(4, 10, 100, 20, 300))
    for (std::uint32_t c0 = 1; c0 <= 2; ++c0) {
      const complex c1{corpus::symmetric_unit(rng) + 1.0, corpus::symmetric_unit(rng)};
      Symbol phi{c0, monomial(1, c1, 5)};
      auto r = compose_general(d, phi, 300);
      EXPECT_TRUE(r.exact);
      EXPECT_EQ(r.series, compose_affine(d, c0, c1));
    }
}

TEST(ComposeGeneral, MatchesProductFormOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const std::uint32_t c0 = 1 + trial % 2;
    const std::size_t vt = 2 + trial % 7;
    const std::size_t M = trial % 3 == 0 ? 512 : 200;
    auto phi = random_symbol(rng, c0, vt, 0.6);
    auto d = corpus::random_polynomial(rng, 12, 6, 12);
    auto r = compose_general(d, phi, M);
    auto o = oracle_compose(d, phi, M);
    EXPECT_TRUE(r.exact);
    EXPECT_LT(max_diff(r.series, o), 1e-10) << trial;
  }
}

TEST(ComposeGeneral, ClosedFormForTwoToMinusS) {
  // D = 2^{-s}, phi = s + c 2^{-s}: coefficient (-c log 2)^j / j! at 2^{j+1}
  const complex c{0.3, -0.7};
  Symbol phi{1, monomial(2, c, 2)};
  auto r = compose_general(monomial(2, 1.0, 2), phi, 1024).series;
  complex term = 1.0;
  for (std::uint32_t j = 0; j < 10; ++j) {
    EXPECT_LT(std::abs(r[std::size_t{1} << (j + 1)] - term), 1e-14) << j;
    term *= -c * std::log(2.0) / static_cast<double>(j + 1);
  }
  double others = 0.0;
  for (std::size_t n = 1; n <= 1024; ++n)
    if (std::popcount(n) != 1 || n == 1) others += std::abs(r[n]);
  EXPECT_EQ(others, 0.0);
}

TEST(ComposeGeneral, PointwiseAtThree) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = random_symbol(rng, 1 + trial % 2, 6, 0.3);
    auto d = corpus::random_polynomial(rng, 8, 5, 8);
    auto r = compose_general(d, phi, 20000);
    const complex direct = evaluate(d, evaluate(phi, complex(3.0)));
    EXPECT_LT(std::abs(evaluate(r.series, 3.0) - direct), 1e-6) << trial;
  }
}

TEST(ComposeGeneral, ConstantSymbolNeedsCutoff) {
  Symbol phi{0, DirichletSeries(std::vector<complex>{1.0, 0.25})};
  auto d = ones(50);
  EXPECT_THROW(compose_general(d, phi, 100), missing_cutoff);
  auto full = compose_general(monomial(3, 1.0, 50), phi, 100, 10);
  EXPECT_TRUE(full.exact);
  auto cut = compose_general(d, phi, 100, 10);
  EXPECT_FALSE(cut.exact);
  // a_3 3^{-phi(s)}: 3^{-1} exp(-0.25 log 3 2^{-s}) at s = 2
  const complex expect = std::exp(-evaluate(phi, complex(2.0)) * std::log(3.0));
  EXPECT_LT(std::abs(evaluate(full.series, 2.0) - expect), 1e-12);
}

TEST(Character, MultiplicativeAndUnimodular) {
  auto t = sieve(1000);
  std::mt19937_64 rng(5);
  auto chi = random_character(rng, prime_pi(1000, t));
  auto v = chi.values_up_to(1000, t);
  for (std::size_t a = 1; a <= 31; ++a)
    for (std::size_t b = 1; a * b <= 1000; ++b) ASSERT_LT(std::abs(v[a * b] - v[a] * v[b]), 1e-12);
  for (std::size_t n = 1; n <= 1000; ++n) ASSERT_NEAR(std::abs(v[n]), 1.0, 1e-12);
  EXPECT_LT(std::abs(chi(360, t) - v[360]), 1e-14);
  EXPECT_THROW(Character({complex(0.5, 0.0)}), invalid_argument);
  EXPECT_THROW(Character::trivial(3).values_up_to(100, t), table_too_small);
  auto sq = chi.pow(2);
  EXPECT_LT(std::abs(sq(7, t) - v[7] * v[7]), 1e-14);
}

TEST(VerticalLimit, PreservesSeminorms) {
  auto t = sieve(400);
  std::mt19937_64 rng(8);
  auto chi = random_character(rng, prime_pi(400, t));
  for (const auto& d : corpus::polynomials(6, 10, 400, 40, 400)) {
    auto dc = vertical_limit(d, chi, t);
    for (std::uint32_t k = 1; k <= 5; ++k) EXPECT_NEAR(seminorm_2(dc, k), seminorm_2(d, k), 1e-12);
  }
  EXPECT_EQ(vertical_limit(ones(50), Character::trivial(15), t), ones(50));
}

TEST(VerticalLimit, CompositionRelation) {
  // (D o phi)_chi = D_{chi^{c0}} o phi_chi
  auto t = sieve(5000);
  std::mt19937_64 rng(12);
  auto chi = random_character(rng, prime_pi(5000, t));
  for (int trial = 0; trial < 8; ++trial) {
    const std::uint32_t c0 = 1 + trial % 3;
    auto phi = random_symbol(rng, c0, 6, 0.4);
    auto d = corpus::random_polynomial(rng, 10, 5, 10);
    const std::size_t M = 5000;
    auto lhs = vertical_limit(compose_general(d, phi, M).series, chi, t);
    auto rhs = compose_general(vertical_limit(d, chi.pow(c0), t), twist_symbol(phi, chi, t), M).series;
    EXPECT_LT(max_diff(lhs, rhs), 1e-12) << trial;
    for (complex s : {complex(2.0, 0.0), complex(2.5, 7.0), complex(4.0, -3.0)})
      EXPECT_LT(std::abs(evaluate(lhs, s) - evaluate(rhs, s)), 1e-8);
  }
}

TEST(Classify, AffineSymbols) {
  auto good = classify_symbol({1, monomial(1, 1.0, 3)});
  EXPECT_TRUE(good.continuous.value);
  EXPECT_TRUE(good.bounded.value);
  EXPECT_TRUE(good.into_hp.value);
  EXPECT_TRUE(good.into_h_infinity.value);
  auto boundary = classify_symbol({1, zero(3)});
  EXPECT_TRUE(boundary.continuous.value);
  EXPECT_FALSE(boundary.bounded.value);
  auto shifted_left = classify_symbol({1, monomial(1, -0.2, 3)});
  EXPECT_FALSE(shifted_left.continuous.value);
  EXPECT_NE(good.note.find("HEURISTIC"), std::string::npos);
}

TEST(Classify, ConstantTermSymbols) {
  // phi = 1 + 0.25 * 2^{-s}: Re phi >= 0.75 on C_+
  auto r = classify_symbol({0, DirichletSeries(std::vector<complex>{1.0, 0.25})});
  EXPECT_NEAR(r.inf_re_estimate, 0.75, 1e-3);
  EXPECT_TRUE(r.continuous.value);
  EXPECT_TRUE(r.bounded.value);
  EXPECT_TRUE(r.into_h_infinity_plus.value);
  // phi = 0.6 + 0.3 * 2^{-s}: inf Re = 0.3 < 1/2
  auto bad = classify_symbol({0, DirichletSeries(std::vector<complex>{0.6, 0.3})});
  EXPECT_FALSE(bad.continuous.value);
  EXPECT_FALSE(bad.into_hp.value);
  EXPECT_THROW(classify_symbol({1, zero(1)}, GridSpec{0.0}), invalid_argument);
}

TEST(Differentiation, InversePairOnHPlusZero) {
  for (auto d : corpus::polynomials(13, 20, 300, 30, 300)) {
    auto d0 = subtract(d, monomial(1, d[1], d.truncation()));
    EXPECT_LT(max_diff(differentiate(integrate(d0)), d0), 1e-15);
    auto back = integrate(differentiate(d0));
    EXPECT_LT(max_diff(back, d0), 1e-15);
    EXPECT_THROW(integrate(monomial(1, 1.0, 5)), not_in_h_plus_zero);
    for (std::uint32_t k = 1; k <= 4; ++k) {
      EXPECT_LE(seminorm_2(differentiate(d), k), 2.0 * k / std::numbers::e * seminorm_2(d, 2 * k) * (1 + 1e-12));
      EXPECT_LE(seminorm_2(integrate(d0), k), seminorm_2(d0, k) / std::log(2.0) * (1 + 1e-12));
    }
  }
  auto j2 = integrate(monomial(2, 1.0, 4));
  EXPECT_DOUBLE_EQ(j2[2].real(), -1.0 / std::log(2.0));
}

TEST(Volterra, HandComputedAndIdentities) {
  // D = 2^{-s} + 3^{-s}, E = zeta: (D'E)_6 = -log 2 - log 3, so V_D(E)_6 = 1
  std::vector<complex> a(10);
  a[1] = a[2] = 1.0;
  auto v = volterra(DirichletSeries(a), ones(10));
  EXPECT_NEAR(v[6].real(), 1.0, 1e-15);
  EXPECT_NEAR(v[4].real(), 0.5, 1e-15); // -(-log 2) / log 4
  EXPECT_EQ(v[1], complex{});
  EXPECT_TRUE(volterra(monomial(1, 5.0, 10), ones(10)).is_zero());
  auto d = corpus::polynomials(2, 1, 30, 10, 30).front();
  auto ident = volterra(d, monomial(1, 1.0, 30));
  EXPECT_LT(max_diff(ident, subtract(d, monomial(1, d[1], 30))), 1e-14);
}

TEST(Resolvent, SpectrumPointsAndRoundTrip) {
  auto d = subtract(ones(50), monomial(1, 1.0, 50));
  for (std::size_t n = 2; n <= 50; ++n) {
    try {
      resolvent(-std::log(static_cast<double>(n)), d);
      FAIL() << n;
    } catch (const spectrum_point& e) {
      EXPECT_EQ(e.n(), n);
    }
  }
  EXPECT_NEAR(resolvent(1.0, monomial(2, 1.0, 5))[2].real(), 1.0 / (1.0 + std::log(2.0)), 1e-15);
  for (complex lambda : {complex(1.0, 0.0), complex(-2.0, 0.5), complex(-std::log(7.5), 0.0)}) {
    auto r = resolvent(lambda, d);
    EXPECT_LT(max_diff(shifted_differentiation(lambda, r), d), 1e-12);
  }
  EXPECT_THROW(resolvent(1.0, ones(5)), not_in_h_plus_zero);
}

TEST(BackwardTranslate, UndoesTranslate) {
  auto d = corpus::polynomials(40, 1, 60, 20, 60).front();
  EXPECT_LT(max_diff(detail::backward_translate(translate(d, 0.3), 0.3), d), 1e-12);
  EXPECT_THROW(detail::backward_translate(d, -1.0), invalid_argument);
}
