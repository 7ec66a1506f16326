#pragma once

// Superposition operators D -> phi(D) and the growth diagnostics for powers D^k:
// the composition criterion r_k = ||D^k||_{2,m}^{1/k}, the constructive power-norm
// chain, and the log-space witnesses built on exact pi / theta values.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hplus/errors.hpp"
#include "hplus/numtheory.hpp"
#include "hplus/series.hpp"

namespace hplus {

/// Taylor coefficients a_0, a_1, ... of an entire function.
struct EntireCoeffs {
  std::string tag;
  std::function<complex(std::uint32_t)> coeff;
  /// log|a_k|, available when the closed form allows magnitudes below double range
  std::function<double(std::uint32_t)> log_abs;
};

/// a_k = e^{-k^k} (with 0^0 = 1).
inline EntireCoeffs exp_neg_k_pow_k() {
  auto la = [](std::uint32_t k) { return -std::pow(static_cast<double>(k), static_cast<double>(k)); };
  return {"exp(-k^k)", [la](std::uint32_t k) { return complex{std::exp(la(k)), 0.0}; }, la};
}

/// a_k = e^{-k^C}.
inline EntireCoeffs exp_neg_k_pow_c(double C) {
  auto la = [C](std::uint32_t k) { return -std::pow(static_cast<double>(k), C); };
  return {"exp(-k^C) with C=" + std::to_string(C), [la](std::uint32_t k) { return complex{std::exp(la(k)), 0.0}; },
          la};
}

/// a_k = 1/k!, the exponential function.
inline EntireCoeffs inverse_factorial() {
  auto la = [](std::uint32_t k) { return -std::lgamma(static_cast<double>(k) + 1.0); };
  return {"1/k!", [la](std::uint32_t k) { return complex{std::exp(la(k)), 0.0}; }, la};
}

/// Finitely many coefficients, zero afterwards.
inline EntireCoeffs polynomial_coeffs(std::vector<complex> b) {
  return {"polynomial",
          [b](std::uint32_t k) { return k < b.size() ? b[k] : complex{}; },
          [b](std::uint32_t k) {
            return k < b.size() && b[k] != complex{} ? std::log(std::abs(b[k]))
                                                      : -std::numeric_limits<double>::infinity();
          }};
}

/// sum_j b_j D^j at the truncation of D, by Horner's scheme.
inline DirichletSeries superpose_poly(const DirichletSeries& d, std::span<const complex> b) {
  const std::size_t N = d.truncation();
  if (b.empty()) return zero(N);
  auto acc = monomial(1, b.back(), N);
  for (std::size_t j = b.size() - 1; j-- > 0;)
    acc = add(multiply(acc, d), monomial(1, b[j], N));
  return acc;
}

// ---------------------------------------------------------------------------
// Constructive power-norm chain

struct PowerChainConstant {
  /// number of primes p with p^{-1/(4m)} > sqrt(2/k)
  std::size_t j_km = 0;
  /// log prod_{j<=j_km} (1 - p_j^{-1/(4m)})^{-1}
  double log_prime_product = 0.0;
};

/// j_{k,m} is the least j0 >= 0 with p_j^{-1/(4m)} <= sqrt(2/k) for every j > j0,
/// i.e. the primes below (k/2)^{2m}.
inline PowerChainConstant power_chain_constant(std::uint32_t k, std::uint32_t m) {
  if (k == 0 || m == 0) throw invalid_argument("power_chain_constant: k and m must be positive");
  const double bound = std::pow(static_cast<double>(k) / 2.0, 2.0 * m);
  if (bound > 4.0e9) throw invalid_argument("power_chain_constant: prime bound (k/2)^{2m} too large");
  PowerChainConstant c;
  const double threshold = std::sqrt(2.0 / k);
  for (auto p : primes_up_to(static_cast<std::uint64_t>(std::ceil(bound)))) {
    const double t = std::pow(static_cast<double>(p), -1.0 / (4.0 * m));
    if (t <= threshold) break;
    ++c.j_km;
    c.log_prime_product -= std::log1p(-t);
  }
  return c;
}

struct PowerChainReport {
  double lhs = 0.0;         ///< ||P^k||_{2,m}
  double c_m = 0.0;         ///< comparison constant C_{m,1,2}
  std::size_t j_km = 0;
  double prime_product = 0.0;
  double norm_4m = 0.0;     ///< ||P||_{2,4m}
  double rhs = 0.0;         ///< c_m * prime_product^k * norm_4m^k
  bool holds = false;
  double slack_factor = 0.0; ///< rhs / lhs
};

/// ||P^k||_{2,m} <= C_m (prod_{j<=j_{k,m}} (1 - p_j^{-1/(4m)})^{-1})^k ||P||_{2,4m}^k,
/// with P^k computed exactly at truncation N.
inline PowerChainReport power_norm_chain_check(const DirichletSeries& p, std::uint32_t m, std::uint32_t k,
                                               std::size_t N) {
  if (k == 0 || m == 0) throw invalid_argument("power_norm_chain_check: k and m must be positive");
  if (!detail::mul_le(p.support_max(), k, N))
    throw support_overflow("power_norm_chain_check: P^" + std::to_string(k) + " does not fit below truncation " +
                           std::to_string(N) + " (inexact power)");
  PowerChainReport r;
  r.lhs = seminorm_2(power(p, k, N), m);
  r.c_m = seminorm_comparison_constant(m, 1.0, 2.0);
  const auto c = power_chain_constant(k, m);
  r.j_km = c.j_km;
  r.prime_product = std::exp(c.log_prime_product);
  r.norm_4m = seminorm_2(p, 4 * m);
  r.rhs = r.c_m * std::pow(r.prime_product * r.norm_4m, static_cast<double>(k));
  r.holds = r.lhs <= r.rhs;
  r.slack_factor = r.lhs > 0.0 ? r.rhs / r.lhs : std::numeric_limits<double>::infinity();
  return r;
}

// ---------------------------------------------------------------------------
// Entire superposition

struct TailDiagnostic {
  std::uint32_t k_prime = 0;
  /// ||sum_{k_prime < k <= K} a_k D^k||_{2,m_check}
  double tail_seminorm = 0.0;
  /// sum_{k_prime < k <= K} |a_k| * (power-chain bound of ||D^k||_{2,m_check});
  /// NaN when the coefficients carry no log-magnitude or the prime bound is out of reach
  double majorant = std::numeric_limits<double>::quiet_NaN();
};

struct SuperpositionResult {
  DirichletSeries series;
  std::vector<TailDiagnostic> diagnostics; ///< k_prime = 0, 1, ..., K-1
};

/// Partial sum sum_{k<=K} a_k D^k at the truncation of D, with Cauchy tail diagnostics.
inline SuperpositionResult superpose_entire(const DirichletSeries& d, const EntireCoeffs& phi, std::uint32_t K,
                                            std::uint32_t m_check) {
  if (K == 0) throw invalid_argument("superpose_entire: K must be positive");
  if (m_check == 0) throw invalid_argument("superpose_entire: m_check must be positive");
  const std::size_t N = d.truncation();
  std::vector<DirichletSeries> terms;
  terms.reserve(K + 1);
  auto pw = monomial(1, 1.0, N);
  for (std::uint32_t k = 0; k <= K; ++k) {
    if (k > 0) pw = multiply(pw, d);
    terms.push_back(scale(phi.coeff(k), pw));
  }
  auto sum = zero(N);
  for (const auto& t : terms) sum = add(sum, t);

  // log of the chain bound for ||D^k||_{2,m}, NaN where unavailable
  std::vector<double> log_bound(K + 1, std::numeric_limits<double>::quiet_NaN());
  if (phi.log_abs) {
    const double log_cm = std::log(seminorm_comparison_constant(m_check, 1.0, 2.0));
    const double log_norm = std::log(seminorm_2(d, 4 * m_check));
    for (std::uint32_t k = 1; k <= K; ++k) {
      if (std::pow(k / 2.0, 2.0 * m_check) > 5.0e7) break;
      const auto c = power_chain_constant(k, m_check);
      log_bound[k] = phi.log_abs(k) + log_cm + k * (c.log_prime_product + log_norm);
    }
  }

  SuperpositionResult r{std::move(sum), {}};
  auto tail = zero(N);
  double maj = 0.0;
  bool maj_ok = true;
  std::vector<TailDiagnostic> rev;
  for (std::uint32_t kp = K; kp-- > 0;) {
    tail = add(tail, terms[kp + 1]);
    const double lb = log_bound[kp + 1];
    if (std::isnan(lb)) maj_ok = false;
    else maj += std::exp(lb);
    rev.push_back({kp, seminorm_2(tail, m_check), maj_ok ? maj : std::numeric_limits<double>::quiet_NaN()});
  }
  r.diagnostics.assign(rev.rbegin(), rev.rend());
  return r;
}

// ---------------------------------------------------------------------------
// Composition criterion

struct GrowthEntry {
  std::uint32_t k = 0;
  double norm = 0.0; ///< ||D^k||_{2,m} at the truncation of D (a lower bound)
  double r = 0.0;    ///< norm^{1/k}
};

struct GrowthReport {
  std::uint32_t m = 0;
  std::size_t truncation = 0;
  std::vector<GrowthEntry> entries;
};

inline GrowthReport composition_criterion(const DirichletSeries& d, std::uint32_t m, std::uint32_t k_max) {
  if (m == 0) throw invalid_argument("composition_criterion: m must be positive");
  if (k_max < 1) throw invalid_argument("composition_criterion: k_max must be positive");
  GrowthReport rep{m, d.truncation(), {}};
  auto pw = d;
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    if (k > 1) pw = multiply(pw, d);
    const double norm = seminorm_2(pw, m);
    rep.entries.push_back({k, norm, std::pow(norm, 1.0 / k)});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Log-space witnesses

struct WitnessRow {
  std::uint32_t k = 0;
  double x = 0.0;
  std::uint64_t pi = 0;
  double theta = 0.0;
  double log_dk = 0.0; ///< log d_k(n_k) = pi(x_k) log k, n_k the primorial of x_k
  double log_nk = 0.0; ///< log n_k = theta(x_k)
  double value = 0.0;
  double target = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
};

struct WitnessTable {
  double omega = 0.0;
  bool omega_positive = false;
  std::vector<WitnessRow> rows;
};

/// For x_k = k^{1+delta} and n_k = prod_{p<=x_k} p:
///   L_k = (2 pi(x_k) log k - (1 + 1/(2m)) theta(x_k)) / (2k) = log (d_k(n_k)^2 / n_k^{1+1/(2m)})^{1/(2k)},
/// a lower bound for log ||D^k||_{2,4m}^{1/k} with D = zeta(s + 1/2). Target omega k^delta / 2
/// with omega = 2(1-delta)/(1+delta) - (1+1/(2m))(1+delta), reported when omega > 0.
inline WitnessTable zeta_growth_witness(std::uint32_t m, double delta, std::uint32_t k_lo, std::uint32_t k_hi,
                                        const PrimeTable& table) {
  if (m == 0) throw invalid_argument("zeta_growth_witness: m must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw invalid_argument("zeta_growth_witness: delta must lie in (0,1)");
  if (k_lo == 0 || k_hi < k_lo) throw invalid_argument("zeta_growth_witness: invalid k range");
  const double sigma = 1.0 / (2.0 * m);
  WitnessTable t;
  t.omega = 2.0 * (1.0 - delta) / (1.0 + delta) - (1.0 + sigma) * (1.0 + delta);
  t.omega_positive = t.omega > 0.0;
  for (std::uint32_t k = k_lo; k <= k_hi; ++k) {
    WitnessRow row;
    row.k = k;
    row.x = std::pow(static_cast<double>(k), 1.0 + delta);
    row.pi = prime_pi(row.x, table);
    row.theta = chebyshev_theta(row.x, table);
    row.log_dk = static_cast<double>(row.pi) * std::log(static_cast<double>(k));
    row.log_nk = row.theta;
    row.value = (2.0 * row.log_dk - (1.0 + sigma) * row.log_nk) / (2.0 * k);
    if (t.omega_positive) {
      row.target = t.omega * std::pow(static_cast<double>(k), delta) / 2.0;
      row.margin = row.value - row.target;
    }
    t.rows.push_back(row);
  }
  return t;
}

struct NoncompositionRow {
  std::uint32_t k = 0;
  double x = 0.0;
  std::uint64_t pi = 0;
  double theta = 0.0;
  double exponent = 0.0;           ///< log k pi(x) - k^C - theta(x)(1/2 + eps)
  double factorial_exponent = 0.0; ///< same with log(1/k!) in place of -k^C
  double target = 0.0;             ///< omega k^{C'} - k^C
  double margin = 0.0;             ///< exponent - target
};

struct NoncompositionTable {
  double omega = 0.0;
  bool omega_positive = false;
  std::vector<NoncompositionRow> rows;
};

/// log of the single term d_k(n) a_k / n^{1/2+eps} at n = prod_{p<=x} p, x = k^{C'}.
inline NoncompositionTable noncomposition_exponent(double C, double C_prime, double eps, double delta,
                                                   std::uint32_t k_lo, std::uint32_t k_hi, const PrimeTable& table) {
  if (!(C > 0.0 && C < 2.0)) throw invalid_argument("noncomposition_exponent: C must lie in (0,2)");
  if (!(C_prime > C && C_prime < 2.0)) throw invalid_argument("noncomposition_exponent: C' must lie in (C,2)");
  if (!(eps > 0.0) || !(delta > 0.0)) throw invalid_argument("noncomposition_exponent: eps, delta must be positive");
  if (k_lo == 0 || k_hi < k_lo) throw invalid_argument("noncomposition_exponent: invalid k range");
  NoncompositionTable t;
  t.omega = (1.0 - delta) / C_prime - (0.5 + eps) * (1.0 + delta);
  t.omega_positive = t.omega > 0.0;
  for (std::uint32_t k = k_lo; k <= k_hi; ++k) {
    NoncompositionRow row;
    const double kd = static_cast<double>(k);
    row.k = k;
    row.x = std::pow(kd, C_prime);
    row.pi = prime_pi(row.x, table);
    row.theta = chebyshev_theta(row.x, table);
    const double common = std::log(kd) * static_cast<double>(row.pi) - row.theta * (0.5 + eps);
    row.exponent = common - std::pow(kd, C);
    row.factorial_exponent = common - std::lgamma(kd + 1.0);
    row.target = t.omega * std::pow(kd, C_prime) - std::pow(kd, C);
    row.margin = row.exponent - row.target;
    t.rows.push_back(row);
  }
  return t;
}

} // namespace hplus
