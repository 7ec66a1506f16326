#pragma once

// Composition operators D -> D o phi for symbols phi(s) = c0 s + varphi(s),
// vertical limits by characters, heuristic symbol classification, and the
// differentiation / integration / Volterra / resolvent operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hplus/errors.hpp"
#include "hplus/numtheory.hpp"
#include "hplus/series.hpp"

namespace hplus {

/// phi(s) = c0 s + varphi(s). varphi[1] is the constant c1, varphi[n] = c_n for n >= 2.
struct Symbol {
  std::uint32_t c0 = 0;
  DirichletSeries varphi{1};
};

inline complex evaluate(const Symbol& phi, complex s) {
  return static_cast<double>(phi.c0) * s + evaluate(phi.varphi, s);
}

/// Completely multiplicative unimodular function fixed by its values on the first primes.
class Character {
public:
  explicit Character(std::vector<complex> prime_values) : values_(std::move(prime_values)) {
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (!(std::abs(std::abs(values_[j]) - 1.0) <= 1e-12))
        throw invalid_argument("Character: value at prime #" + std::to_string(j + 1) + " is not unimodular");
  }

  /// chi == 1 on the first `n_primes` primes.
  static Character trivial(std::size_t n_primes) { return Character(std::vector<complex>(n_primes, 1.0)); }

  std::span<const complex> prime_values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// chi^e, again a character.
  Character pow(std::uint32_t e) const {
    std::vector<complex> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(values_[j], static_cast<int>(e));
    return Character(std::move(v));
  }

  complex operator()(std::uint64_t n, const PrimeTable& table) const {
    complex v = 1.0;
    const auto alpha = factorize(n, table);
    if (alpha.size() > values_.size()) throw table_too_small(alpha.size(), values_.size());
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (std::uint32_t e = 0; e < alpha[j]; ++e) v *= values_[j];
    return v;
  }

  /// chi(1..N), built multiplicatively along the smallest-prime-factor table.
  std::vector<complex> values_up_to(std::size_t N, const PrimeTable& table) const {
    if (N > table.limit()) throw table_too_small(N, table.limit());
    const std::size_t needed = N >= 2 ? prime_pi(static_cast<double>(N), table) : 0;
    if (needed > values_.size()) throw table_too_small(needed, values_.size());
    std::vector<complex> chi(N + 1);
    if (N >= 1) chi[1] = 1.0;
    for (std::size_t n = 2; n <= N; ++n) {
      const std::uint32_t p = table.spf()[n];
      chi[n] = chi[n / p] * values_[table.prime_position(p)];
    }
    return chi;
  }

private:
  std::vector<complex> values_;
};

// ---------------------------------------------------------------------------
// Composition

/// phi(s) = c0 s + c1 with c0 >= 1: coefficient a_n n^{-c1} moves to index n^{c0}.
inline DirichletSeries compose_affine(const DirichletSeries& d, std::uint32_t c0, complex c1) {
  if (c0 == 0) throw invalid_argument("compose_affine: c0 must be at least 1");
  const std::size_t N = d.truncation();
  std::vector<complex> out(N);
  for (std::size_t n = 1; n <= N; ++n) {
    std::uint64_t m = 1;
    bool fits = true;
    for (std::uint32_t i = 0; i < c0 && fits; ++i)
      if (__builtin_mul_overflow(m, static_cast<std::uint64_t>(n), &m) || m > N) fits = false;
    if (!fits) break;
    const complex a = d.coeffs()[n - 1];
    if (a == complex{}) continue;
    out[m - 1] = n == 1 ? a : a * std::exp(-c1 * std::log(static_cast<double>(n)));
  }
  return DirichletSeries(std::move(out));
}

struct CompositionResult {
  DirichletSeries series;
  /// true when every coefficient up to the output truncation equals that of the
  /// composition of the stored polynomial D with phi
  bool exact = true;
};

namespace detail {

/// Dirichlet series of exp(E) truncated at M, for E supported on indices >= 2.
/// E^r vanishes below 2^r, so the sum over r <= floor(log2 M) is exact.
inline std::vector<complex> dirichlet_exp(std::span<const complex> e, std::size_t M) {
  std::vector<complex> sum(M), term(M);
  sum[0] = term[0] = 1.0;
  bool e_zero = std::all_of(e.begin(), e.end(), [](complex c) { return c == complex{}; });
  if (e_zero || M < 2) return sum;
  const auto depth = static_cast<std::uint32_t>(std::floor(std::log2(static_cast<double>(M))));
  for (std::uint32_t r = 1; r <= depth; ++r) {
    term = convolve(e, term, M);
    const double inv_r = 1.0 / static_cast<double>(r);
    for (std::size_t i = 0; i < M; ++i) {
      term[i] *= inv_r;
      sum[i] += term[i];
    }
  }
  return sum;
}

inline bool checked_pow(std::uint64_t base, std::uint32_t e, std::uint64_t& out) {
  out = 1;
  for (std::uint32_t i = 0; i < e; ++i)
    if (__builtin_mul_overflow(out, base, &out)) return false;
  return true;
}

} // namespace detail

/// D o phi truncated at M. Each n contributes a_n n^{-c1} n^{-c0 s} exp(-log n * E(s)),
/// E = sum_{j>=2} c_j j^{-s}, expanded exactly. With c0 >= 1 only n <= M^{1/c0}
/// contribute; with c0 = 0 every n does, and the sum stops at n_cutoff.
inline CompositionResult compose_general(const DirichletSeries& d, const Symbol& phi, std::size_t M,
                                         std::optional<std::size_t> n_cutoff = std::nullopt) {
  if (M == 0) throw invalid_argument("compose_general: output truncation must be positive");
  if (phi.c0 == 0 && !n_cutoff) throw missing_cutoff();
  const complex c1 = phi.varphi[1];
  std::vector<complex> out(M);
  std::size_t n_last = d.truncation();
  if (phi.c0 == 0) n_last = std::min(n_last, *n_cutoff);

  for (std::size_t n = 1; n <= n_last; ++n) {
    const complex a = d.coeffs()[n - 1];
    if (a == complex{}) continue;
    std::uint64_t shift = 1;
    if (!detail::checked_pow(n, phi.c0, shift) || shift > M) break;
    const std::size_t local = M / shift;
    const double log_n = std::log(static_cast<double>(n));
    std::vector<complex> e(std::min(phi.varphi.truncation(), local));
    for (std::size_t j = 2; j <= e.size(); ++j) e[j - 1] = -log_n * phi.varphi[j];
    const auto ex = detail::dirichlet_exp(e, local);
    const complex w = n == 1 ? a : a * std::exp(-c1 * log_n);
    for (std::size_t j = 1; j <= local; ++j)
      if (ex[j - 1] != complex{}) out[shift * j - 1] += w * ex[j - 1];
  }
  const bool exact = phi.c0 >= 1 || d.support_max() <= n_last;
  return {DirichletSeries(std::move(out)), exact};
}

// ---------------------------------------------------------------------------
// Classification

struct GridSpec {
  double re_min = 1e-4;  ///< smallest Re s sampled, close to the imaginary axis
  double re_max = 4.0;
  std::size_t n_re = 40; ///< log-spaced real parts
  double im_max = 50.0;
  std::size_t n_im = 201; ///< uniformly spaced imaginary parts in [-im_max, im_max]
  double epsilon = 1e-2;  ///< margin standing in for "some eps > 0"
};

struct Verdict {
  bool value = false;
  std::string basis;
};

struct ClassificationReport {
  double inf_re_estimate = 0.0;
  complex argmin{};
  GridSpec grid;
  std::uint32_t c0 = 0;
  Verdict well_defined, continuous, bounded, into_hp, into_h_infinity, into_h_infinity_plus;
  std::string note;
};

/// Screens phi against the half-plane conditions of the composition theorems
/// using inf Re phi over a finite grid. HEURISTIC: the grid infimum is an upper
/// bound on the true infimum, so a failed condition is conclusive while a
/// passed one is only suggestive.
inline ClassificationReport classify_symbol(const Symbol& phi, const GridSpec& grid = {}) {
  if (!(grid.re_min > 0.0) || !(grid.re_max >= grid.re_min) || grid.n_re == 0 || grid.n_im == 0)
    throw invalid_argument("classify_symbol: invalid grid");
  ClassificationReport r;
  r.grid = grid;
  r.c0 = phi.c0;
  r.inf_re_estimate = std::numeric_limits<double>::infinity();
  const double lr0 = std::log(grid.re_min), lr1 = std::log(grid.re_max);
  for (std::size_t i = 0; i < grid.n_re; ++i) {
    const double t = grid.n_re == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(grid.n_re - 1);
    const double re = std::exp(lr0 + t * (lr1 - lr0));
    for (std::size_t j = 0; j < grid.n_im; ++j) {
      const double u = grid.n_im == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(grid.n_im - 1);
      const complex s{re, -grid.im_max + 2.0 * grid.im_max * u};
      const double v = evaluate(phi, s).real();
      if (v < r.inf_re_estimate) {
        r.inf_re_estimate = v;
        r.argmin = s;
      }
    }
  }

  const double inf = r.inf_re_estimate, eps = grid.epsilon;
  const bool linear = phi.c0 >= 1;
  r.well_defined = {true, "symbol has the form c0 s + Dirichlet series with c0 in N_0"};
  if (linear) {
    r.continuous = {inf >= 0.0, "c0 >= 1: continuous iff phi(C_+) in C_+ (inf Re >= 0)"};
    r.bounded = {inf >= eps, "c0 >= 1: bounded iff phi(C_+) in C_eps (inf Re >= eps)"};
  } else {
    r.continuous = {inf >= 0.5, "c0 = 0: continuous iff phi(C_+) in C_1/2 (inf Re >= 1/2)"};
    r.bounded = {inf >= 0.5 + eps, "c0 = 0: bounded iff phi(C_+) in C_{1/2+eps} (inf Re >= 1/2 + eps)"};
  }
  r.into_h_infinity = {inf >= 0.5 + eps, "into H^inf iff phi(C_+) in C_{1/2+eps}"};
  r.into_h_infinity_plus = {inf >= 0.5, "into H^inf_+ iff phi(C_+) in C_1/2"};
  if (linear)
    r.into_hp = {inf >= eps || r.into_h_infinity.value,
                 "c0 >= 1 and phi(C_+) in C_eps suffices for every H^p (or via H^inf)"};
  else
    r.into_hp = {r.into_h_infinity.value, "c0 = 0: via the H^inf criterion only"};
  r.note = "HEURISTIC: grid infimum is an upper bound of inf Re phi over C_+; "
           "a false verdict is a disproof on the grid, a true verdict is a screening only";
  return r;
}

// ---------------------------------------------------------------------------
// Vertical limits

/// D_chi: b_n = a_n chi(n).
inline DirichletSeries vertical_limit(const DirichletSeries& d, const Character& chi, const PrimeTable& table) {
  const auto values = chi.values_up_to(d.truncation(), table);
  std::vector<complex> out(d.truncation());
  for (std::size_t n = 1; n <= d.truncation(); ++n) out[n - 1] = d.coeffs()[n - 1] * values[n];
  return DirichletSeries(std::move(out));
}

/// phi_chi(s) = c0 s + varphi_chi(s). This is not a vertical limit of phi.
inline Symbol twist_symbol(const Symbol& phi, const Character& chi, const PrimeTable& table) {
  return {phi.c0, vertical_limit(phi.varphi, chi, table)};
}

// ---------------------------------------------------------------------------
// Differentiation and friends

/// D': b_1 = 0, b_n = -a_n log n.
inline DirichletSeries differentiate(const DirichletSeries& d) {
  std::vector<complex> out(d.truncation());
  for (std::size_t n = 2; n <= out.size(); ++n) out[n - 1] = -d.coeffs()[n - 1] * std::log(static_cast<double>(n));
  return DirichletSeries(std::move(out));
}

/// Inverse of differentiation on series with a_1 = 0: b_n = -a_n / log n.
inline DirichletSeries integrate(const DirichletSeries& d) {
  if (d[1] != complex{}) throw not_in_h_plus_zero();
  std::vector<complex> out(d.truncation());
  for (std::size_t n = 2; n <= out.size(); ++n) out[n - 1] = -d.coeffs()[n - 1] / std::log(static_cast<double>(n));
  return DirichletSeries(std::move(out));
}

/// V_D(E) = J(D' E).
inline DirichletSeries volterra(const DirichletSeries& d, const DirichletSeries& e) {
  return integrate(multiply(differentiate(d), e));
}

/// (lambda I - D): b_n = (lambda + log n) a_n.
inline DirichletSeries shifted_differentiation(complex lambda, const DirichletSeries& d) {
  std::vector<complex> out(d.truncation());
  for (std::size_t n = 1; n <= out.size(); ++n)
    out[n - 1] = (lambda + std::log(static_cast<double>(n))) * d.coeffs()[n - 1];
  return DirichletSeries(std::move(out));
}

inline constexpr double default_spectrum_tolerance = 1e-9;

/// (lambda I - D)^{-1} on H+,0: b_n = a_n / (lambda + log n).
/// Throws spectrum_point(n) when |lambda + log n| <= tol for some 2 <= n <= N.
inline DirichletSeries resolvent(complex lambda, const DirichletSeries& d,
                                 double tol = default_spectrum_tolerance) {
  if (d[1] != complex{}) throw not_in_h_plus_zero();
  std::vector<complex> out(d.truncation());
  for (std::size_t n = 2; n <= out.size(); ++n) {
    const complex denom = lambda + std::log(static_cast<double>(n));
    if (std::abs(denom) <= tol) throw spectrum_point(n);
    out[n - 1] = d.coeffs()[n - 1] / denom;
  }
  return DirichletSeries(std::move(out));
}

namespace detail {

/// Left translation b_n = a_n n^{delta}, only meaningful on finite supports
/// (the truncated series is one).
inline DirichletSeries backward_translate(const DirichletSeries& d, double delta) {
  if (!(delta >= 0.0)) throw invalid_argument("backward_translate: shift must be non-negative");
  std::vector<complex> out(d.coeffs().begin(), d.coeffs().end());
  for (std::size_t n = 2; n <= out.size(); ++n) out[n - 1] *= std::pow(static_cast<double>(n), delta);
  return DirichletSeries(std::move(out));
}

} // namespace detail

} // namespace hplus
