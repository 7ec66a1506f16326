#pragma once

// Bohr lift n = p^alpha  <->  z^alpha between Dirichlet series and polynomials
// on prime-scaled polydiscs, Monte Carlo estimation of
//   rho_{k,p}(f) = ( int_{T^N} |f(p_1^{-1/k} z_1, ..., p_N^{-1/k} z_N)|^p dz )^{1/p},
// and the exact Parseval value at p = 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "hplus/errors.hpp"
#include "hplus/numtheory.hpp"
#include "hplus/series.hpp"

namespace hplus {

/// Polynomial sum c_alpha z^alpha in n_vars variables. Only nonzero terms are stored.
struct MultiPoly {
  std::size_t n_vars = 0;
  std::map<MultiIndex, complex> terms;
};

struct LiftResult {
  MultiPoly poly;
  /// Nonzero coefficients at indices with a prime factor beyond p_{n_vars}.
  std::size_t dropped_terms = 0;
  /// sum |a_n|^2 over the dropped coefficients.
  double dropped_l2_mass = 0.0;
};

inline LiftResult lift(const DirichletSeries& d, std::size_t n_vars, const PrimeTable& table) {
  if (n_vars == 0) throw invalid_argument("lift: n_vars must be positive");
  if (d.truncation() > table.limit()) throw table_too_small(d.truncation(), table.limit());
  LiftResult r;
  r.poly.n_vars = n_vars;
  for (std::size_t n = 1; n <= d.truncation(); ++n) {
    const complex a = d.coeffs()[n - 1];
    if (a == complex{}) continue;
    auto alpha = factorize(n, table);
    if (alpha.size() <= n_vars) {
      r.poly.terms.emplace(std::move(alpha), a);
    } else {
      ++r.dropped_terms;
      r.dropped_l2_mass += std::norm(a);
    }
  }
  return r;
}

/// The series keeping only the coefficients at p_{n_vars}-smooth indices.
inline DirichletSeries restrict_to_smooth(const DirichletSeries& d, std::size_t n_vars, const PrimeTable& table) {
  if (d.truncation() > table.limit()) throw table_too_small(d.truncation(), table.limit());
  std::vector<complex> a(d.truncation());
  for (std::size_t n = 1; n <= d.truncation(); ++n)
    if (factorize(n, table).size() <= n_vars) a[n - 1] = d.coeffs()[n - 1];
  return DirichletSeries(std::move(a));
}

/// The series with a_{p^alpha} = c_alpha, truncated at N. Terms with p^alpha > N are dropped.
inline DirichletSeries unlift(const MultiPoly& f, std::size_t N) {
  auto primes = first_primes(f.n_vars);
  std::vector<complex> a(N);
  for (const auto& [alpha, c] : f.terms) {
    std::uint64_t n = 0;
    try {
      n = index_value(alpha, primes);
    } catch (const std::overflow_error&) {
      continue;
    }
    if (n <= N) a[n - 1] = c;
  }
  return DirichletSeries(std::move(a));
}

inline complex evaluate(const MultiPoly& f, std::span<const complex> z) {
  if (z.size() < f.n_vars) throw invalid_argument("evaluate: point has fewer coordinates than variables");
  complex sum{};
  for (const auto& [alpha, c] : f.terms) {
    complex term = c;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (std::uint32_t e = 0; e < alpha[j]; ++e) term *= z[j];
    sum += term;
  }
  return sum;
}

/// Exact rho_{k,2}(f) = (sum |c_alpha|^2 prod_j p_j^{-2 alpha_j / k})^{1/2}.
inline double parseval_norm(const MultiPoly& f, std::uint32_t k) {
  if (k == 0) throw invalid_argument("parseval_norm: k must be positive");
  auto primes = first_primes(f.n_vars);
  std::vector<double> radius(f.n_vars);
  for (std::size_t j = 0; j < f.n_vars; ++j) radius[j] = std::pow(static_cast<double>(primes[j]), -1.0 / k);
  double sum = 0.0;
  for (const auto& [alpha, c] : f.terms) {
    double w = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (std::uint32_t e = 0; e < alpha[j]; ++e) w *= radius[j] * radius[j];
    sum += std::norm(c) * w;
  }
  return std::sqrt(sum);
}

/// ||D||_{2,k} computed through the lift: summed over multi-indices with
/// prime-by-prime weights, independently of seminorm_2's n^{-2/k} path.
inline double weighted_h2_norm(const DirichletSeries& d, std::uint32_t k, const PrimeTable& table) {
  const std::size_t all_primes = prime_pi(static_cast<double>(d.truncation()), table);
  if (all_primes == 0) return std::abs(d[1]);
  return parseval_norm(lift(d, all_primes, table).poly, k);
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct RhoEstimate {
  double estimate = 0.0;
  /// delta-method standard error of the p-th root of the mean
  double std_error = 0.0;
  /// mean of |f|^p and its standard error, before the root
  double mean_power = 0.0;
  double mean_power_std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t mc_chunk = 8192;

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

} // namespace detail

/// Estimates rho_{k,p}(f) from `samples` i.i.d. uniform points of the torus.
/// Sample i belongs to chunk i / 8192; chunk c draws its angles from
/// mt19937_64 seeded with seed_seq{seed_lo, seed_hi, c}. Chunks are reduced in
/// ascending order, so the result does not depend on the thread count.
inline RhoEstimate rho_estimate(const MultiPoly& f, std::uint32_t k, double p, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 0) {
  if (k == 0) throw invalid_argument("rho_estimate: k must be positive");
  if (!(p >= 1.0)) throw invalid_argument("rho_estimate: p must be at least 1");
  if (samples == 0) throw invalid_argument("rho_estimate: samples must be positive");

  const std::size_t nv = f.n_vars;
  auto primes = first_primes(nv);
  std::vector<double> radius(nv);
  for (std::size_t j = 0; j < nv; ++j) radius[j] = std::pow(static_cast<double>(primes[j]), -1.0 / k);

  const std::uint64_t chunks = (samples + detail::mc_chunk - 1) / detail::mc_chunk;
  std::vector<detail::Moments> partial(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t begin = c * detail::mc_chunk;
    const std::uint64_t end = std::min(samples, begin + detail::mc_chunk);
    std::vector<complex> z(nv);
    detail::Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < nv; ++j)
        z[j] = std::polar(radius[j], 2.0 * std::numbers::pi * detail::unit_double(rng()));
      m.push(std::pow(std::abs(evaluate(f, z)), p));
    }
    partial[c] = m;
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += workers) run_chunk(c);
      });
  }

  detail::Moments total;
  for (const auto& m : partial) total.merge(m);

  RhoEstimate r;
  r.samples = samples;
  r.seed = seed;
  r.mean_power = total.mean;
  const double var = samples > 1 ? total.m2 / static_cast<double>(samples - 1) : 0.0;
  r.mean_power_std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  r.estimate = std::pow(total.mean, 1.0 / p);
  r.std_error = total.mean > 0.0 ? r.mean_power_std_error * std::pow(total.mean, 1.0 / p - 1.0) / p : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Non-surjectivity of the lift onto H^p_+(l2 cap D^N)

struct NonextensionRow {
  std::uint64_t M = 0;
  /// S(M) = sum_{n<=M} z_n / sqrt(p_n)
  double partial_sum = 0.0;
  /// sum_{3<=n<=M} C / (n log n log log n) with C = 1/sqrt(2)
  double lower_bound_sum = 0.0;
  /// every n in 3..M satisfied p_n <= 2 n log n and the term-wise bound
  bool termwise_bound_holds = true;
};

/// z_1 = z_2 = 1/2, z_n = 1/(sqrt(n log n) log log n) for n >= 3.
inline double nonextension_point(std::uint64_t n) {
  if (n <= 2) return 0.5;
  const double x = static_cast<double>(n);
  return 1.0 / (std::sqrt(x * std::log(x)) * std::log(std::log(x)));
}

/// Partial sums on the ladder 10, 100, ..., plus n_max itself.
inline std::vector<NonextensionRow> nonextension_partial_sums(std::uint64_t n_max) {
  if (n_max < 3) throw invalid_argument("nonextension_partial_sums: n_max must be at least 3");
  auto primes = first_primes(n_max);
  std::vector<std::uint64_t> ladder;
  for (std::uint64_t m = 10; m < n_max; m *= 10) ladder.push_back(m);
  ladder.push_back(n_max);

  const double C = 1.0 / std::numbers::sqrt2;
  std::vector<NonextensionRow> rows;
  double s = 0.0, lb = 0.0;
  bool ok = true;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double term = nonextension_point(n) / std::sqrt(static_cast<double>(primes[n - 1]));
    s += term;
    if (n >= 3) {
      const double x = static_cast<double>(n);
      const double bound = C / (x * std::log(x) * std::log(std::log(x)));
      lb += bound;
      if (static_cast<double>(primes[n - 1]) > 2.0 * x * std::log(x) || term < bound) ok = false;
    }
    if (next < ladder.size() && n == ladder[next]) {
      rows.push_back({n, s, lb, ok});
      ++next;
    }
  }
  return rows;
}

} // namespace hplus
