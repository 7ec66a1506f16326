#pragma once

// Truncated Dirichlet series sum_{n<=N} a_n n^{-s} with exact coefficient
// arithmetic, translations and the seminorms ||.||_{p,k}.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hplus/errors.hpp"
#include "hplus/numtheory.hpp"

namespace hplus {

using complex = std::complex<double>;

/// Immutable truncated Dirichlet series. Coefficients are indexed from 1;
/// storage is zero-based, so coeffs()[n-1] is a_n.
class DirichletSeries {
public:
  explicit DirichletSeries(std::size_t truncation) : coeffs_(check_truncation(truncation)) {}

  explicit DirichletSeries(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw invalid_argument("DirichletSeries: truncation must be positive");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (!std::isfinite(coeffs_[i].real()) || !std::isfinite(coeffs_[i].imag()))
        throw invalid_argument("DirichletSeries: coefficient a_" + std::to_string(i + 1) + " is not finite");
  }

  std::size_t truncation() const noexcept { return coeffs_.size(); }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }

  /// a_n for 1 <= n <= N, and 0 beyond the truncation.
  complex operator[](std::size_t n) const noexcept {
    return (n >= 1 && n <= coeffs_.size()) ? coeffs_[n - 1] : complex{};
  }

  /// Largest n with a_n != 0, or 0 for the zero series.
  std::size_t support_max() const noexcept {
    for (std::size_t n = coeffs_.size(); n >= 1; --n)
      if (coeffs_[n - 1] != complex{}) return n;
    return 0;
  }

  bool is_zero() const noexcept { return support_max() == 0; }

  friend bool operator==(const DirichletSeries&, const DirichletSeries&) = default;

private:
  static std::size_t check_truncation(std::size_t n) {
    if (n == 0) throw invalid_argument("DirichletSeries: truncation must be positive");
    return n;
  }

  std::vector<complex> coeffs_;
};

// ---------------------------------------------------------------------------
// Linear structure

inline DirichletSeries zero(std::size_t N) { return DirichletSeries(N); }

inline DirichletSeries monomial(std::size_t n, complex c, std::size_t N) {
  if (n == 0 || n > N)
    throw invalid_argument("monomial: index " + std::to_string(n) + " outside 1.." + std::to_string(N));
  std::vector<complex> a(N);
  a[n - 1] = c;
  return DirichletSeries(std::move(a));
}

/// zeta truncated at N: a_n = 1.
inline DirichletSeries ones(std::size_t N) {
  if (N == 0) throw invalid_argument("ones: truncation must be positive");
  return DirichletSeries(std::vector<complex>(N, complex{1.0, 0.0}));
}

/// Same coefficients, cut or zero-padded to a new truncation.
inline DirichletSeries retruncate(const DirichletSeries& d, std::size_t N) {
  if (N == 0) throw invalid_argument("retruncate: truncation must be positive");
  std::vector<complex> a(N);
  for (std::size_t i = 0; i < std::min(N, d.truncation()); ++i) a[i] = d.coeffs()[i];
  return DirichletSeries(std::move(a));
}

inline DirichletSeries add(const DirichletSeries& d, const DirichletSeries& e) {
  const std::size_t N = std::min(d.truncation(), e.truncation());
  std::vector<complex> a(N);
  for (std::size_t i = 0; i < N; ++i) a[i] = d.coeffs()[i] + e.coeffs()[i];
  return DirichletSeries(std::move(a));
}

inline DirichletSeries scale(complex c, const DirichletSeries& d) {
  std::vector<complex> a(d.truncation());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = c * d.coeffs()[i];
  return DirichletSeries(std::move(a));
}

inline DirichletSeries subtract(const DirichletSeries& d, const DirichletSeries& e) {
  return add(d, scale(-1.0, e));
}

/// b_n = a_n n^{-delta}: the series shifted right by delta.
inline DirichletSeries translate(const DirichletSeries& d, double delta) {
  if (!(delta >= 0.0)) throw invalid_argument("translate: shift must be non-negative");
  std::vector<complex> a(d.coeffs().begin(), d.coeffs().end());
  if (delta == 0.0) return DirichletSeries(std::move(a));
  for (std::size_t n = 2; n <= a.size(); ++n) a[n - 1] *= std::pow(static_cast<double>(n), -delta);
  return DirichletSeries(std::move(a));
}

// ---------------------------------------------------------------------------
// Multiplicative structure

namespace detail {

/// Dirichlet convolution of two coefficient arrays (zero beyond their length),
/// truncated at out_n. Summation order: ascending d, then ascending m.
inline std::vector<complex> convolve(std::span<const complex> a, std::span<const complex> b, std::size_t out_n) {
  std::vector<complex> c(out_n);
  const std::size_t na = std::min(a.size(), out_n);
  for (std::size_t d = 1; d <= na; ++d) {
    const complex ad = a[d - 1];
    if (ad == complex{}) continue;
    const std::size_t mmax = std::min(b.size(), out_n / d);
    for (std::size_t m = 1; m <= mmax; ++m) {
      const complex bm = b[m - 1];
      if (bm == complex{}) continue;
      c[d * m - 1] += ad * bm;
    }
  }
  return c;
}

inline bool mul_le(std::uint64_t base, std::uint32_t exp, std::uint64_t bound) {
  std::uint64_t acc = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(acc, base, &acc)) return false;
    if (acc > bound) return false;
  }
  return true;
}

} // namespace detail

/// c_n = sum_{d|n} a_d b_{n/d} for n <= min(N_D, N_E). Every stored coefficient is exact.
inline DirichletSeries multiply(const DirichletSeries& d, const DirichletSeries& e) {
  return DirichletSeries(detail::convolve(d.coeffs(), e.coeffs(), std::min(d.truncation(), e.truncation())));
}

/// k-fold product of d (viewed as the polynomial of its stored coefficients)
/// truncated at out_truncation. power(d, 0, N) is the unit 1.
inline DirichletSeries power(const DirichletSeries& d, std::uint32_t k, std::size_t out_truncation) {
  if (out_truncation == 0) throw invalid_argument("power: truncation must be positive");
  std::vector<complex> acc(out_truncation);
  acc[0] = 1.0;
  for (std::uint32_t j = 0; j < k; ++j) acc = detail::convolve(d.coeffs(), acc, out_truncation);
  return DirichletSeries(std::move(acc));
}

/// Partial sum sum_{n<=N} a_n n^{-s}, accumulated in ascending n.
inline complex evaluate(const DirichletSeries& d, complex s) {
  complex sum{};
  for (std::size_t n = 1; n <= d.truncation(); ++n) {
    const complex a = d.coeffs()[n - 1];
    if (a == complex{}) continue;
    sum += n == 1 ? a : a * std::exp(-s * std::log(static_cast<double>(n)));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Seminorms

/// ||D||_{2,k} = (sum |a_n|^2 n^{-2/k})^{1/2}, the H^2 norm of the 1/k translate.
inline double seminorm_2(const DirichletSeries& d, std::uint32_t k) {
  if (k == 0) throw invalid_argument("seminorm_2: k must be positive");
  const double e = -2.0 / static_cast<double>(k);
  double sum = 0.0;
  for (std::size_t n = 1; n <= d.truncation(); ++n) {
    const double m = std::norm(d.coeffs()[n - 1]);
    if (m == 0.0) continue;
    sum += n == 1 ? m : m * std::pow(static_cast<double>(n), e);
  }
  return std::sqrt(sum);
}

/// Koethe weights b_k(n) = n^{-1/k}, n = 1..N.
inline std::vector<double> koethe_weights(std::uint32_t k, std::size_t N) {
  if (k == 0) throw invalid_argument("koethe_weights: k must be positive");
  std::vector<double> w(N);
  for (std::size_t n = 1; n <= N; ++n) w[n - 1] = std::pow(static_cast<double>(n), -1.0 / k);
  return w;
}

/// (sum |x_n w_n|^2)^{1/2}
inline double weighted_l2_norm(std::span<const complex> x, std::span<const double> w) {
  if (w.size() < x.size()) throw invalid_argument("weighted_l2_norm: fewer weights than coefficients");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::norm(x[i]) * w[i] * w[i];
  return std::sqrt(sum);
}

/// Value of a truncated seminorm. A truncated value is always a lower bound of
/// the true one; `exact` says whether the truncation lost nothing.
struct SeminormValue {
  double value = 0.0;
  bool exact = true;
};

/// ||D||_{2q,k} = ||(D_k)^q||_{H^2}^{1/q}, where D_k is the 1/k translate.
/// Exact when D is supported on n with n^q <= out_truncation.
inline SeminormValue seminorm_even(const DirichletSeries& d, std::uint32_t q, std::uint32_t k,
                                   std::size_t out_truncation) {
  if (q == 0) throw invalid_argument("seminorm_even: q must be positive");
  if (k == 0) throw invalid_argument("seminorm_even: k must be positive");
  if (q == 1) return {seminorm_2(d, k), true};
  const auto p = power(translate(d, 1.0 / k), q, out_truncation);
  double sum = 0.0;
  for (const auto& c : p.coeffs()) sum += std::norm(c);
  return {std::pow(sum, 0.5 / q), detail::mul_le(d.support_max(), q, out_truncation)};
}

/// prod_{j<=j0} (1 - p_j^{-1/(2k)})^{-1}, where j0 counts the primes with
/// p_j^{-1/(2k)} >= sqrt(p/q), i.e. p_j <= (q/p)^k.
inline double seminorm_comparison_constant(std::uint32_t k, double p, double q) {
  if (k == 0) throw invalid_argument("seminorm_comparison_constant: k must be positive");
  if (!(p >= 1.0) || !(q >= 1.0)) throw invalid_argument("seminorm_comparison_constant: need p, q >= 1");
  if (p > q) throw invalid_argument("seminorm_comparison_constant: need p <= q");
  const double bound = std::pow(q / p, static_cast<double>(k));
  if (bound > 4.0e9) throw invalid_argument("seminorm_comparison_constant: prime bound (q/p)^k too large");
  // relative slack absorbs rounding of non-dyadic ratios raised to the k-th power
  const auto limit = static_cast<std::uint64_t>(std::floor(bound * (1.0 + 1e-12)));
  double c = 1.0;
  for (auto prime : primes_up_to(limit))
    c /= 1.0 - std::pow(static_cast<double>(prime), -1.0 / (2.0 * k));
  return c;
}

// ---------------------------------------------------------------------------
// Abscissae

struct AbscissaReport {
  double sigma_a_estimate = 0.0;
  double sigma_c_estimate = 0.0;
  std::string notes;
};

namespace detail {

inline constexpr double abscissa_report_slack = 1e-9;

/// Growth exponent of |a_n| from the last two full dyadic windows below N:
/// if |a_n| ~ n^{sigma-1} then sum_{x<n<=2x} |a_n| ~ x^sigma, for either sign of sigma.
inline double dyadic_window_exponent(std::span<const double> magnitudes, std::string& notes) {
  const std::size_t N = magnitudes.size();
  const std::size_t P = std::bit_floor(N);
  auto window = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t n = lo + 1; n <= hi; ++n) s += magnitudes[n - 1];
    return s;
  };
  if (window(P / 2, N) == 0.0) {
    notes += "sigma_a: no coefficients in the last window, reported as -inf; ";
    return -std::numeric_limits<double>::infinity();
  }
  const double w_hi = window(P / 2, P), w_lo = window(P / 4, P / 2);
  if (w_hi > 0.0 && w_lo > 0.0) return std::log2(w_hi / w_lo);
  notes += "sigma_a: an empty dyadic window, slope of the absolute partial sums used; ";
  const double s_hi = window(0, N), s_lo = window(0, P / 2);
  if (s_lo == 0.0) {
    notes += "sigma_a: all coefficients in the last window, undetermined, reported as 0; ";
    return 0.0;
  }
  return std::log(s_hi / s_lo) / std::log(static_cast<double>(N) / static_cast<double>(P / 2));
}

} // namespace detail

/// Heuristic abscissa estimates. sigma_a from dyadic window sums of |a_n|, sigma_c
/// from the growth of |sum_{n<=x} a_n| on the ladder 2^4, 2^5, ..., N. Both depend
/// on the truncation; they are slopes, not limits.
inline AbscissaReport abscissa_estimates(const DirichletSeries& d) {
  if (d.is_zero()) throw undefined_abscissa();
  const std::size_t N = d.truncation();
  if (N < 32) throw invalid_argument("abscissa_estimates: truncation must be at least 32");
  std::vector<std::size_t> ladder;
  for (std::size_t m = 16; m <= N; m *= 2) ladder.push_back(m);
  if (ladder.back() != N) ladder.push_back(N);

  std::vector<double> mags(N), cond_running(N + 1, 0.0);
  complex partial{};
  for (std::size_t n = 1; n <= N; ++n) {
    mags[n - 1] = std::abs(d.coeffs()[n - 1]);
    partial += d.coeffs()[n - 1];
    cond_running[n] = std::abs(partial);
  }

  AbscissaReport r;
  r.notes = "HEURISTIC: truncation-dependent slopes, dyadic windows and ladder 2^4..N=" + std::to_string(N) + "; ";
  r.sigma_a_estimate = detail::dyadic_window_exponent(mags, r.notes);
  // conditional sums: growth of |sum_{n<=N'} a_n|
  const std::size_t L = ladder.size();
  const double c_hi = cond_running[ladder[L - 1]], c_lo = cond_running[ladder[L - 2]];
  if (std::isinf(r.sigma_a_estimate)) {
    r.sigma_c_estimate = r.sigma_a_estimate;
  } else if (c_hi > 0.0 && c_lo > 0.0) {
    r.sigma_c_estimate = (std::log(c_hi) - std::log(c_lo)) /
                         (std::log(static_cast<double>(ladder[L - 1])) - std::log(static_cast<double>(ladder[L - 2])));
  } else {
    r.sigma_c_estimate = 0.0;
    r.notes += "sigma_c: vanishing partial sums, reported as 0; ";
  }
  if (r.sigma_c_estimate > r.sigma_a_estimate + detail::abscissa_report_slack) {
    r.sigma_c_estimate = r.sigma_a_estimate;
    r.notes += "sigma_c clamped to sigma_a; ";
  }
  return r;
}

} // namespace hplus
