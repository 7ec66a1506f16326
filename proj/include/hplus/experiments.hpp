#pragma once

// Named experiment drivers. Each driver produces CSV tables and a manifest
// echoing the version, every resolved parameter and the sieve limit. Outputs
// carry no timestamps, so identical configurations give identical bytes.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hplus/bohr.hpp"
#include "hplus/errors.hpp"
#include "hplus/io.hpp"
#include "hplus/numtheory.hpp"
#include "hplus/operators.hpp"
#include "hplus/series.hpp"
#include "hplus/sieve_cache.hpp"
#include "hplus/superposition.hpp"
#include "hplus/version.hpp"

namespace hplus {

// ---------------------------------------------------------------------------
// Seeded random corpora

namespace corpus {

/// Uniform in [-1, 1).
inline double symmetric_unit(std::mt19937_64& rng) { return 2.0 * detail::unit_double(rng()) - 1.0; }

/// Between 1 and max_terms distinct indices drawn from `pool`, coefficients
/// uniform in the square [-1,1) + i[-1,1), stored at the given truncation.
inline DirichletSeries random_series_on(std::mt19937_64& rng, std::span<const std::uint64_t> pool,
                                        std::size_t max_terms, std::size_t truncation) {
  if (pool.empty() || max_terms == 0) throw invalid_argument("random_series_on: empty pool or zero terms");
  std::vector<std::uint64_t> idx(pool.begin(), pool.end());
  const std::size_t terms = 1 + static_cast<std::size_t>(rng() % std::min(max_terms, idx.size()));
  // partial Fisher-Yates with explicit draws keeps the stream portable
  for (std::size_t i = 0; i < terms; ++i) std::swap(idx[i], idx[i + rng() % (idx.size() - i)]);
  std::vector<complex> a(truncation);
  for (std::size_t i = 0; i < terms; ++i) {
    if (idx[i] > truncation) throw invalid_argument("random_series_on: index beyond truncation");
    const double re = symmetric_unit(rng);
    const double im = symmetric_unit(rng);
    a[idx[i] - 1] = {re, im};
  }
  return DirichletSeries(std::move(a));
}

/// Random polynomial supported on 1..max_index.
inline DirichletSeries random_polynomial(std::mt19937_64& rng, std::size_t max_index, std::size_t max_terms,
                                         std::size_t truncation) {
  std::vector<std::uint64_t> pool(max_index);
  for (std::size_t i = 0; i < max_index; ++i) pool[i] = i + 1;
  return random_series_on(rng, pool, max_terms, truncation);
}

inline std::vector<DirichletSeries> polynomials(std::uint64_t seed, std::size_t count, std::size_t max_index,
                                                std::size_t max_terms, std::size_t truncation) {
  std::mt19937_64 rng(seed);
  std::vector<DirichletSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_polynomial(rng, max_index, max_terms, truncation));
  return out;
}

} // namespace corpus

// ---------------------------------------------------------------------------
// Configuration

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"inequality-suite", "bohr-parseval", "nonextension",
                                              "ejemplo-growth",   "noncomposition", "superpose-exp"};
  return names;
}

/// Unset optional fields take the experiment's default (see resolve).
struct ExperimentConfig {
  std::string name;
  std::optional<std::size_t> truncation;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::size_t> count;
  std::optional<std::uint32_t> m;
  std::optional<std::uint32_t> k_min;
  std::optional<std::uint32_t> k_max;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<double> C;
  std::optional<double> C_prime;
  std::optional<std::uint32_t> witness_m;
  std::optional<std::uint32_t> witness_k_min;
  std::optional<std::uint32_t> witness_k_max;
  std::optional<double> tail_tolerance;
  std::filesystem::path out;
  std::filesystem::path cache_dir;
  /// Monte Carlo workers; results do not depend on it, so it is not echoed.
  unsigned threads = 0;
};

/// Defaults:
///   inequality-suite  truncation 10000, seed 1, count 100, m 1, k 1..4
///   bohr-parseval     seed 7, samples 100000, count 10, k 1..2
///   nonextension      truncation 1000000
///   ejemplo-growth    truncation 100000, m 4, k_max 6, witness_m 1, delta 0.3, witness_k 20..60
///   noncomposition    C 1.2, C' 1.6, epsilon 0.05, delta 0.05, k 40..200
///   superpose-exp     truncation 1000, k_max (K) 6, tail_tolerance 1e-12, m_check 1, 2, 4
inline ExperimentConfig resolve(ExperimentConfig c) {
  auto set = [](auto& field, auto value) {
    if (!field) field = value;
  };
  const auto& n = c.name;
  if (n == "inequality-suite") {
    set(c.truncation, std::size_t{10000});
    set(c.seed, std::uint64_t{1});
    set(c.count, std::size_t{100});
    set(c.m, 1u);
    set(c.k_min, 1u);
    set(c.k_max, 4u);
  } else if (n == "bohr-parseval") {
    set(c.seed, std::uint64_t{7});
    set(c.samples, std::uint64_t{100000});
    set(c.count, std::size_t{10});
    set(c.k_min, 1u);
    set(c.k_max, 2u);
  } else if (n == "nonextension") {
    set(c.truncation, std::size_t{1000000});
  } else if (n == "ejemplo-growth") {
    set(c.truncation, std::size_t{100000});
    set(c.m, 4u);
    set(c.k_max, 6u);
    set(c.witness_m, 1u);
    set(c.delta, 0.3);
    set(c.witness_k_min, 20u);
    set(c.witness_k_max, 60u);
  } else if (n == "noncomposition") {
    set(c.C, 1.2);
    set(c.C_prime, 1.6);
    set(c.epsilon, 0.05);
    set(c.delta, 0.05);
    set(c.k_min, 40u);
    set(c.k_max, 200u);
  } else if (n == "superpose-exp") {
    set(c.truncation, std::size_t{1000});
    set(c.k_max, 6u);
    set(c.tail_tolerance, 1e-12);
  } else {
    throw invalid_argument("unknown experiment '" + n + "'");
  }
  return c;
}

inline json parameters_json(const ExperimentConfig& c) {
  json j = json::object();
  auto put = [&](const char* key, const auto& field) {
    if (field) j[key] = *field;
  };
  put("truncation", c.truncation);
  put("seed", c.seed);
  put("samples", c.samples);
  put("count", c.count);
  put("m", c.m);
  put("k_min", c.k_min);
  put("k_max", c.k_max);
  put("delta", c.delta);
  put("epsilon", c.epsilon);
  put("C", c.C);
  put("C_prime", c.C_prime);
  put("witness_m", c.witness_m);
  put("witness_k_min", c.witness_k_min);
  put("witness_k_max", c.witness_k_max);
  put("tail_tolerance", c.tail_tolerance);
  return j;
}

struct ExperimentOutput {
  json manifest;
  /// (file name, CSV text), in output order
  std::vector<std::pair<std::string, std::string>> tables;
};

namespace detail {

inline ExperimentOutput start_output(const ExperimentConfig& c, std::uint64_t sieve_limit) {
  ExperimentOutput o;
  o.manifest = {{"experiment", c.name},
                {"version", version},
                {"parameters", parameters_json(c)},
                {"sieve_limit", sieve_limit},
                {"tables", json::array()},
                {"summary", json::object()}};
  return o;
}

inline void add_table(ExperimentOutput& o, std::string file, const CsvWriter& w) {
  o.manifest["tables"].push_back(file);
  o.tables.emplace_back(std::move(file), w.str());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Drivers. `c` must already be resolved.

/// Seminorm chain (p = 2, q = 4), algebra inequality and power-norm chain on a
/// seeded corpus of polynomials supported on n <= 100 (n <= 20 for the powers).
inline ExperimentOutput run_inequality_suite(const ExperimentConfig& c) {
  const std::size_t N = *c.truncation;
  auto out = detail::start_output(c, 0);
  auto polys = corpus::polynomials(*c.seed, *c.count, 100, 20, N);

  CsvWriter chain({"instance", "k", "norm_2_k", "norm_4_k", "constant", "norm_2_2k", "exact", "lower_margin",
                   "upper_margin"});
  std::size_t chain_fail = 0, inexact = 0;
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::uint32_t k = *c.k_min; k <= *c.k_max; ++k) {
      const double n2 = seminorm_2(polys[i], k);
      const auto n4 = seminorm_even(polys[i], 2, k, N);
      const double ck = seminorm_comparison_constant(k, 2.0, 4.0);
      const double n22k = seminorm_2(polys[i], 2 * k);
      const double lo = n4.value - n2, hi = ck * n22k - n4.value;
      const double tol = 1e-9 * std::max(n4.value, 1e-300);
      chain_fail += (lo < -tol || hi < -tol);
      inexact += !n4.exact;
      chain.row(i, k, n2, n4.value, ck, n22k, n4.exact, lo, hi);
    }
  detail::add_table(out, "seminorm_chain.csv", chain);

  CsvWriter alg({"instance", "m", "lhs", "constant", "rhs", "margin"});
  std::size_t alg_fail = 0;
  for (std::size_t i = 0; i + 1 < polys.size(); i += 2)
    for (std::uint32_t m = 1; m <= 2; ++m) {
      const double lhs = seminorm_2(multiply(polys[i], polys[i + 1]), m);
      const double cm = seminorm_comparison_constant(m, 1.0, 2.0);
      const double rhs = cm * seminorm_2(polys[i], 2 * m) * seminorm_2(polys[i + 1], 2 * m);
      alg_fail += lhs > rhs * (1.0 + 1e-9);
      alg.row(i / 2, m, lhs, cm, rhs, rhs - lhs);
    }
  detail::add_table(out, "algebra.csv", alg);

  const std::size_t power_N = 160000; // 20^4
  auto small = corpus::polynomials(*c.seed + 1, std::min<std::size_t>(*c.count, 50), 20, 10, power_N);
  CsvWriter pc({"instance", "k", "lhs", "c_m", "j_km", "prime_product", "norm_4m", "rhs", "slack_factor"});
  std::size_t pc_fail = 0;
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::uint32_t k = 1; k <= 4; ++k) {
      const auto r = power_norm_chain_check(small[i], *c.m, k, power_N);
      pc_fail += r.lhs > r.rhs * (1.0 + 1e-9);
      pc.row(i, k, r.lhs, r.c_m, r.j_km, r.prime_product, r.norm_4m, r.rhs, r.slack_factor);
    }
  detail::add_table(out, "power_chain.csv", pc);

  out.manifest["summary"] = {{"seminorm_chain_violations", chain_fail},
                             {"seminorm_chain_inexact", inexact},
                             {"algebra_violations", alg_fail},
                             {"power_chain_violations", pc_fail},
                             {"power_chain_truncation", power_N}};
  return out;
}

/// Random polynomials in the variables z_1, z_2, z_3 (indices 2^a 3^b 5^c <= 1000,
/// at most 20 terms); Monte Carlo rho_{k,p} for p = 1, 2, 4 next to the exact
/// Parseval value at p = 2.
inline ExperimentOutput run_bohr_parseval(const ExperimentConfig& c) {
  const std::uint64_t limit = 1000;
  auto table = load_or_build_sieve(limit, c.cache_dir);
  auto out = detail::start_output(c, limit);
  const auto pool = smooth_numbers(3, limit, table);
  std::mt19937_64 rng(*c.seed);

  CsvWriter w({"instance", "k", "p", "samples", "estimate", "std_err", "exact_value_if_p2"});
  double worst = 0.0;
  for (std::size_t i = 0; i < *c.count; ++i) {
    const auto d = corpus::random_series_on(rng, pool, 20, limit);
    const auto f = lift(d, 3, table).poly;
    for (std::uint32_t k = *c.k_min; k <= *c.k_max; ++k)
      for (double p : {1.0, 2.0, 4.0}) {
        const std::uint64_t s = *c.seed ^ (i << 32) ^ (std::uint64_t{k} << 16) ^ static_cast<std::uint64_t>(p);
        const auto est = rho_estimate(f, k, p, *c.samples, s, c.threads);
        double exact = std::numeric_limits<double>::quiet_NaN();
        if (p == 2.0) {
          exact = parseval_norm(f, k);
          worst = std::max(worst, std::abs(est.estimate - exact) / exact);
        }
        w.row(i, k, p, *c.samples, est.estimate, est.std_error, exact);
      }
  }
  detail::add_table(out, "bohr.csv", w);
  out.manifest["summary"] = {{"max_relative_error_p2", worst}};
  return out;
}

inline ExperimentOutput run_nonextension(const ExperimentConfig& c) {
  const auto rows = nonextension_partial_sums(*c.truncation);
  auto out = detail::start_output(c, 0);
  out.manifest["prime_count"] = *c.truncation;
  CsvWriter w({"M", "partial_sum", "lower_bound_sum", "termwise_bound_holds"});
  bool increasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    w.row(rows[i].M, rows[i].partial_sum, rows[i].lower_bound_sum, rows[i].termwise_bound_holds);
    if (i > 0 && !(rows[i].partial_sum > rows[i - 1].partial_sum)) increasing = false;
  }
  detail::add_table(out, "nonextension.csv", w);
  double ratio = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows)
    if (r.M == 1000) ratio = rows.back().partial_sum / r.partial_sum;
  out.manifest["summary"] = {{"strictly_increasing", increasing},
                             {"ratio_last_to_1000", ratio},
                             {"termwise_bound_holds", rows.back().termwise_bound_holds}};
  return out;
}

/// r_k = ||D^k||_{2,m}^{1/k} for D = zeta(s + 1/2) at the given truncation, and the
/// log-space witness L_k for k in witness_k_min..witness_k_max.
inline ExperimentOutput run_ejemplo_growth(const ExperimentConfig& c) {
  const std::uint32_t wk_lo = *c.witness_k_min, wk_hi = *c.witness_k_max;
  const std::uint64_t limit = std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(wk_hi), 1.0 + *c.delta))) + 1);
  auto table = load_or_build_sieve(limit, c.cache_dir);
  auto out = detail::start_output(c, limit);

  const auto zeta = translate(ones(*c.truncation), 0.5);
  const auto rep = composition_criterion(zeta, *c.m, *c.k_max);
  CsvWriter g({"k", "value", "target", "margin"});
  bool increasing = true;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    const double target = i ? rep.entries[i - 1].r : std::numeric_limits<double>::quiet_NaN();
    g.row(e.k, e.r, target, e.r - target);
    if (i && !(e.r > target)) increasing = false;
  }
  detail::add_table(out, "growth.csv", g);

  const auto wt = zeta_growth_witness(*c.witness_m, *c.delta, wk_lo, wk_hi, table);
  CsvWriter w({"k", "x", "pi", "theta", "log_dk", "log_nk", "value", "target", "margin"});
  bool w_increasing = true;
  std::optional<std::uint32_t> first_positive;
  for (std::size_t i = 0; i < wt.rows.size(); ++i) {
    const auto& r = wt.rows[i];
    w.row(r.k, r.x, r.pi, r.theta, r.log_dk, r.log_nk, r.value, r.target, r.margin);
    if (i && !(r.value > wt.rows[i - 1].value)) w_increasing = false;
    if (!first_positive && r.value > 0.0) first_positive = r.k;
  }
  detail::add_table(out, "witness.csv", w);
  out.manifest["summary"] = {{"r_strictly_increasing", increasing},
                             {"witness_strictly_increasing", w_increasing},
                             {"witness_omega", wt.omega},
                             {"witness_first_positive_k", first_positive ? json(*first_positive) : json(nullptr)}};
  return out;
}

inline ExperimentOutput run_noncomposition(const ExperimentConfig& c) {
  const std::uint64_t limit = std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(*c.k_max), *c.C_prime))) + 1);
  auto table = load_or_build_sieve(limit, c.cache_dir);
  auto out = detail::start_output(c, limit);
  const auto t = noncomposition_exponent(*c.C, *c.C_prime, *c.epsilon, *c.delta, *c.k_min, *c.k_max, table);
  CsvWriter w({"k", "x", "pi", "theta", "value", "target", "margin", "factorial_exponent"});
  bool increasing = true, f_increasing = true;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    w.row(r.k, r.x, r.pi, r.theta, r.exponent, r.target, r.margin, r.factorial_exponent);
    if (i && !(r.exponent > t.rows[i - 1].exponent)) increasing = false;
    if (i && !(r.factorial_exponent > t.rows[i - 1].factorial_exponent)) f_increasing = false;
  }
  detail::add_table(out, "noncomposition.csv", w);
  out.manifest["summary"] = {{"omega", t.omega},
                             {"exponent_strictly_increasing", increasing},
                             {"exponent_positive_at_k_max", t.rows.back().exponent > 0.0},
                             {"factorial_strictly_increasing", f_increasing},
                             {"factorial_positive_at_k_max", t.rows.back().factorial_exponent > 0.0}};
  return out;
}

/// phi(z) = sum e^{-k^k} z^k applied to D = translate(ones, 1), tail diagnostics
/// for m_check = 1, 2, 4.
inline ExperimentOutput run_superpose_exp(const ExperimentConfig& c) {
  auto out = detail::start_output(c, 0);
  const auto d = translate(ones(*c.truncation), 1.0);
  const auto phi = exp_neg_k_pow_k();
  CsvWriter w({"m", "k", "value", "target", "margin", "majorant"});
  json below = json::object();
  for (std::uint32_t m : {1u, 2u, 4u}) {
    const auto r = superpose_entire(d, phi, *c.k_max, m);
    bool ok = false;
    for (const auto& t : r.diagnostics) {
      w.row(m, t.k_prime, t.tail_seminorm, *c.tail_tolerance, *c.tail_tolerance - t.tail_seminorm, t.majorant);
      if (t.tail_seminorm < *c.tail_tolerance) ok = true;
    }
    below[std::to_string(m)] = ok;
  }
  detail::add_table(out, "superposition.csv", w);
  out.manifest["summary"] = {{"tail_below_tolerance", below}, {"coefficients", phi.tag}};
  return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& config) {
  const auto c = resolve(config);
  if (c.name == "inequality-suite") return run_inequality_suite(c);
  if (c.name == "bohr-parseval") return run_bohr_parseval(c);
  if (c.name == "nonextension") return run_nonextension(c);
  if (c.name == "ejemplo-growth") return run_ejemplo_growth(c);
  if (c.name == "noncomposition") return run_noncomposition(c);
  return run_superpose_exp(c);
}

/// Writes every table, then manifest.json, each atomically, into `dir`.
inline void write_experiment(const std::filesystem::path& dir, const ExperimentOutput& o) {
  std::filesystem::create_directories(dir);
  for (const auto& [file, text] : o.tables) write_file_atomic(dir / file, text);
  write_file_atomic(dir / "manifest.json", o.manifest.dump(2) + "\n");
}

} // namespace hplus
