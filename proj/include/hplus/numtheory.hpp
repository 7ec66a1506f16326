#pragma once

// Prime sieve, Bohr exponents, divisor functions d_k and the prime counting
// functions pi and theta.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hplus/errors.hpp"

namespace hplus {

/// Bohr exponent alpha: position j holds the exponent of the (j+1)-th prime.
/// Trailing zeros are always trimmed, so n = 1 has the empty index.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {
    trim();
  }

  std::span<const std::uint32_t> exponents() const noexcept { return exponents_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  bool empty() const noexcept { return exponents_.empty(); }

  std::uint32_t operator[](std::size_t j) const noexcept {
    return j < exponents_.size() ? exponents_[j] : 0;
  }

  std::uint64_t degree() const noexcept {
    std::uint64_t d = 0;
    for (auto e : exponents_) d += e;
    return d;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.exponents_ <=> b.exponents_;
  }

private:
  void trim() {
    while (!exponents_.empty() && exponents_.back() == 0) exponents_.pop_back();
  }

  std::vector<std::uint32_t> exponents_;
};

/// Primes up to `limit` together with the smallest prime factor of every n <= limit.
class PrimeTable {
public:
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes, std::vector<std::uint32_t> spf)
    : limit_(limit), primes_(std::move(primes)), spf_(std::move(spf)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  /// spf()[n] for 2 <= n <= limit; entries 0 and 1 are 0.
  std::span<const std::uint32_t> spf() const noexcept { return spf_; }

  std::uint32_t smallest_prime_factor(std::uint64_t n) const {
    if (n < 2) throw invalid_argument("smallest_prime_factor: n must be at least 2");
    if (n > limit_) throw table_too_small(n, limit_);
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) throw table_too_small(n, limit_);
    return n >= 2 && spf_[n] == n;
  }

  /// Zero-based position j of prime p, so that p is the (j+1)-th prime.
  std::size_t prime_position(std::uint64_t p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) throw invalid_argument("prime_position: not a tabulated prime");
    return static_cast<std::size_t>(it - primes_.begin());
  }

private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint32_t> spf_;
};

/// Linear sieve producing the prime list and smallest-prime-factor array.
inline PrimeTable sieve(std::uint64_t limit) {
  if (limit < 2) throw invalid_argument("sieve: limit must be at least 2");
  if (limit > std::numeric_limits<std::uint32_t>::max())
    throw invalid_argument("sieve: limit exceeds 32-bit smallest-prime-factor storage");
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(i);
    }
    for (std::uint64_t p : primes) {
      if (p > spf[i] || i * p > limit) break;
      spf[i * p] = static_cast<std::uint32_t>(p);
    }
  }
  return PrimeTable(limit, std::move(primes), std::move(spf));
}

/// Plain Eratosthenes returning only the primes <= limit. Used where the
/// smallest-prime-factor array would be wasted memory.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    if (i <= limit / i)
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// The first `count` primes.
inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  if (count == 0) return {};
  // p_n < n (log n + log log n) for n >= 6
  double n = static_cast<double>(count);
  std::uint64_t bound = 15;
  if (count >= 6) bound = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
  auto primes = primes_up_to(bound);
  primes.resize(count);
  return primes;
}

inline MultiIndex factorize(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw invalid_argument("factorize: n must be positive");
  if (n > table.limit()) throw table_too_small(n, table.limit());
  std::vector<std::uint32_t> exps;
  while (n > 1) {
    std::uint32_t p = table.spf()[n];
    std::size_t j = table.prime_position(p);
    if (exps.size() <= j) exps.resize(j + 1, 0);
    while (n % p == 0) {
      n /= p;
      ++exps[j];
    }
  }
  return MultiIndex(std::move(exps));
}

/// n = prod_j p_j^{alpha_j}. Throws std::overflow_error if n does not fit in 64 bits.
inline std::uint64_t index_value(const MultiIndex& alpha, std::span<const std::uint64_t> primes) {
  if (alpha.size() > primes.size()) throw table_too_small(alpha.size(), primes.size());
  std::uint64_t n = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (std::uint32_t e = 0; e < alpha[j]; ++e)
      if (__builtin_mul_overflow(n, primes[j], &n))
        throw std::overflow_error("index_value: n overflows 64 bits");
  return n;
}

/// d_k(1..N) as exact 64-bit counts; entry 0 is unused and zero.
/// d_0 is the indicator of n = 1, d_1 is identically 1, and d_{j+1} = d_j * 1.
inline std::vector<std::uint64_t> divisor_power_table(std::uint32_t k, std::uint64_t N) {
  if (N == 0) throw invalid_argument("divisor_power_table: N must be positive");
  std::vector<std::uint64_t> d(N + 1, 0);
  if (k == 0) {
    d[1] = 1;
    return d;
  }
  std::fill(d.begin() + 1, d.end(), 1);
  std::vector<std::uint64_t> next(N + 1);
  for (std::uint32_t j = 1; j < k; ++j) {
    std::fill(next.begin(), next.end(), 0);
    for (std::uint64_t a = 1; a <= N; ++a)
      for (std::uint64_t m = a; m <= N; m += a)
        if (__builtin_add_overflow(next[m], d[a], &next[m]))
          throw std::overflow_error("divisor_power_table: d_" + std::to_string(j + 1) + "(" +
                                    std::to_string(m) + ") overflows 64 bits");
    d.swap(next);
  }
  return d;
}

namespace detail {
inline std::size_t prime_count_through(double x, const PrimeTable& table) {
  if (!(x >= 0.0)) throw invalid_argument("prime counting: x must be non-negative");
  auto fx = static_cast<std::uint64_t>(std::floor(x));
  if (fx > table.limit()) throw table_too_small(fx, table.limit());
  auto primes = table.primes();
  return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), fx) - primes.begin());
}
} // namespace detail

inline std::uint64_t prime_pi(double x, const PrimeTable& table) {
  return detail::prime_count_through(x, table);
}

/// theta(x) = sum of log p over primes p <= x, summed in ascending order.
inline double chebyshev_theta(double x, const PrimeTable& table) {
  std::size_t count = detail::prime_count_through(x, table);
  double theta = 0.0;
  for (std::size_t i = 0; i < count; ++i) theta += std::log(static_cast<double>(table.primes()[i]));
  return theta;
}

/// All n <= limit whose prime factors are among the first `n_primes` primes.
inline std::vector<std::uint64_t> smooth_numbers(std::size_t n_primes, std::uint64_t limit,
                                                 const PrimeTable& table) {
  if (limit > table.limit()) throw table_too_small(limit, table.limit());
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    std::uint64_t m = n;
    while (m > 1 && table.prime_position(table.spf()[m]) < n_primes) m /= table.spf()[m];
    if (m == 1) out.push_back(n);
  }
  return out;
}

} // namespace hplus
