#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process through run_cli with captured streams.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hplus/bohr.hpp"
#include "hplus/errors.hpp"
#include "hplus/experiments.hpp"
#include "hplus/io.hpp"
#include "hplus/numtheory.hpp"
#include "hplus/operators.hpp"
#include "hplus/series.hpp"
#include "hplus/sieve_cache.hpp"
#include "hplus/superposition.hpp"
#include "hplus/version.hpp"

namespace hplus::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_domain = 3;

/// "3", "1..8" or "1,2,4".
inline std::vector<std::uint32_t> parse_k_list(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint32_t {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v == 0 || v > 1000000)
      throw parse_error("--k: expected a positive integer, a range a..b or a list a,b,c; got '" + text + "'");
    return static_cast<std::uint32_t>(v);
  };
  std::vector<std::uint32_t> ks;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = number(text.substr(0, dots)), hi = number(text.substr(dots + 2));
    if (hi < lo) throw parse_error("--k: empty range '" + text + "'");
    for (auto k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) ks.push_back(number(item));
  if (ks.empty()) throw parse_error("--k: empty list");
  return ks;
}

/// "re" or "re,im".
inline complex parse_complex_flag(const std::string& flag, const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw parse_error(flag + ": expected re or re,im; got '" + text + "'");
    return v;
  };
  if (auto comma = text.find(','); comma != std::string::npos)
    return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
  return {number(text), 0.0};
}

inline EntireCoeffs entire_by_name(const std::string& name, double C) {
  if (name == "exp-k-k") return exp_neg_k_pow_k();
  if (name == "exp-k-C") return exp_neg_k_pow_c(C);
  if (name == "inverse-factorial") return inverse_factorial();
  throw parse_error("--entire: expected exp-k-k, exp-k-C or inverse-factorial; got '" + name + "'");
}

struct Options {
  std::string in, out, symbol, character, symbol_out, coeffs, entire = "exp-k-k", lambda, k = "1..8";
  std::optional<std::size_t> truncation, cutoff, count;
  std::optional<std::uint64_t> seed, samples;
  std::optional<std::uint32_t> m, kmax, kmin, K;
  std::optional<double> p, delta, epsilon, C, C_prime;
  std::string cache_dir;
  unsigned threads = 0;
  bool classify = false;
};

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file_atomic(path, text);
}

inline DirichletSeries read_series(const std::string& path, const char* flag) {
  if (path.empty()) throw parse_error(std::string(flag) + ": required");
  return series_from_json(read_json_file(path), flag);
}

inline std::filesystem::path cache_dir(const Options& o) { return resolve_cache_dir(o.cache_dir); }

// ---------------------------------------------------------------------------

inline int cmd_norms(const Options& o, std::ostream& out) {
  const auto d = read_series(o.in, "--in");
  const auto ks = parse_k_list(o.k);
  const double p = o.p.value_or(2.0);
  if (!(p >= 1.0)) throw parse_error("--p: must be at least 1");
  CsvWriter w({"k", "p", "value", "exactness"});
  const bool even = p == std::floor(p) && static_cast<std::uint64_t>(p) % 2 == 0;
  if (p == 2.0) {
    for (auto k : ks) w.row(k, p, seminorm_2(d, k), "exact");
  } else if (even) {
    const auto q = static_cast<std::uint32_t>(p / 2);
    std::size_t M = d.truncation();
    if (o.truncation) M = *o.truncation;
    else {
      std::uint64_t full = 0;
      if (detail::checked_pow(d.support_max(), q, full) && full <= 50'000'000) M = std::max<std::size_t>(M, full);
    }
    for (auto k : ks) {
      const auto v = seminorm_even(d, q, k, M);
      w.row(k, p, v.value, v.exact ? "exact" : "lower-bound");
    }
  } else {
    const auto table = load_or_build_sieve(std::max<std::size_t>(d.truncation(), 2), cache_dir(o));
    const auto n_vars = std::max<std::size_t>(1, prime_pi(static_cast<double>(d.truncation()), table));
    const auto f = lift(d, n_vars, table).poly;
    for (auto k : ks) {
      const auto e = rho_estimate(f, k, p, o.samples.value_or(100000), o.seed.value_or(1), o.threads);
      w.row(k, p, e.estimate, "monte-carlo");
    }
  }
  emit(o.out, w.str(), out);
  return exit_ok;
}

inline int cmd_compose(const Options& o, std::ostream& out) {
  const auto d = read_series(o.in, "--in");
  if (o.symbol.empty()) throw parse_error("--symbol: required");
  const auto phi = symbol_from_json(read_json_file(o.symbol), "--symbol");
  if (o.classify) {
    out << to_json(classify_symbol(phi)).dump(2) << "\n";
    return exit_ok;
  }
  const auto r = compose_general(d, phi, o.truncation.value_or(d.truncation()), o.cutoff);
  emit(o.out, to_json(r.series).dump() + "\n", out);
  if (!r.exact && !o.out.empty()) out << "warning: truncated composition (support beyond the cutoff)\n";
  return exit_ok;
}

inline int cmd_superpose(const Options& o, std::ostream& out) {
  const auto d = read_series(o.in, "--in");
  if (!o.coeffs.empty()) {
    const auto b = detail::parse_complex_array(read_json_file(o.coeffs), "--coeffs");
    emit(o.out, to_json(superpose_poly(d, b)).dump() + "\n", out);
    return exit_ok;
  }
  const auto phi = entire_by_name(o.entire, o.C.value_or(1.5));
  const auto r = superpose_entire(d, phi, o.K.value_or(6), o.m.value_or(1));
  CsvWriter w({"k", "tail_seminorm", "majorant"});
  for (const auto& t : r.diagnostics) w.row(t.k_prime, t.tail_seminorm, t.majorant);
  if (o.out.empty()) {
    out << to_json(r.series).dump() << "\n";
  } else {
    write_file_atomic(o.out, to_json(r.series).dump() + "\n");
  }
  out << w.str();
  return exit_ok;
}

inline int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto d = read_series(o.in, "--in");
  if (o.lambda.empty()) throw parse_error("--lambda: required");
  const auto lambda = parse_complex_flag("--lambda", o.lambda);
  emit(o.out, to_json(resolvent(lambda, d)).dump() + "\n", out);
  return exit_ok;
}

inline int cmd_vertical_limit(const Options& o, std::ostream& out) {
  const auto d = read_series(o.in, "--in");
  if (o.character.empty()) throw parse_error("--character: required");
  const auto chi = character_from_json(read_json_file(o.character), "--character");
  const auto table = load_or_build_sieve(std::max<std::size_t>(d.truncation(), 2), cache_dir(o));
  emit(o.out, to_json(vertical_limit(d, chi, table)).dump() + "\n", out);
  if (!o.symbol.empty()) {
    const auto phi = symbol_from_json(read_json_file(o.symbol), "--symbol");
    const auto twisted = twist_symbol(phi, chi, load_or_build_sieve(std::max<std::size_t>(phi.varphi.truncation(), 2), cache_dir(o)));
    if (o.symbol_out.empty()) out << to_json(twisted).dump() << "\n";
    else write_file_atomic(o.symbol_out, to_json(twisted).dump() + "\n");
  }
  return exit_ok;
}

inline int cmd_experiment(const std::string& name, const Options& o, std::ostream& out) {
  ExperimentConfig c;
  c.name = name;
  c.truncation = o.truncation;
  c.seed = o.seed;
  c.samples = o.samples;
  c.count = o.count;
  c.m = o.m;
  c.delta = o.delta;
  c.epsilon = o.epsilon;
  c.C = o.C;
  c.C_prime = o.C_prime;
  c.k_max = o.kmax;
  c.k_min = o.kmin;
  if (o.K) c.k_max = o.K;
  c.cache_dir = cache_dir(o);
  c.threads = o.threads;
  if (o.out.empty()) throw parse_error("--out: required (output directory)");
  const auto result = run_experiment(c);
  write_experiment(o.out, result);
  out << result.manifest.dump(2) << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truncated Dirichlet series toolkit: seminorms, composition, superposition and experiments", "hplus"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--in", o.in, "input series JSON");
    s->add_option("--out", o.out, "output file (directory for experiments); stdout when omitted");
    s->add_option("--truncation", o.truncation, "output truncation");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--samples", o.samples, "Monte Carlo samples");
    s->add_option("--k", o.k, "k values: 3, 1..8 or 1,2,4");
    s->add_option("--p", o.p, "seminorm exponent p");
    s->add_option("--m", o.m, "seminorm index m");
    s->add_option("--kmax", o.kmax, "largest k");
    s->add_option("--delta", o.delta, "experiment parameter delta");
    s->add_option("--epsilon", o.epsilon, "experiment parameter epsilon");
    s->add_option("--cache-dir", o.cache_dir, "sieve cache directory (overrides $HPLUS_CACHE_DIR)");
    s->add_option("--threads", o.threads, "Monte Carlo worker threads (0: hardware)");
  };

  auto* norms = app.add_subcommand("norms", "seminorm table of a series (CSV: k,p,value,exactness)");
  common(norms);
  auto* compose = app.add_subcommand("compose", "composition D o phi");
  common(compose);
  compose->add_option("--symbol", o.symbol, "symbol JSON");
  compose->add_option("--cutoff", o.cutoff, "index cutoff for c0 = 0 symbols");
  compose->add_flag("--classify", o.classify, "print the heuristic symbol classification instead");
  auto* superpose = app.add_subcommand("superpose", "superposition phi o D");
  common(superpose);
  superpose->add_option("--coeffs", o.coeffs, "polynomial coefficients JSON [[re,im],...], lowest degree first");
  superpose->add_option("--entire", o.entire, "exp-k-k, exp-k-C or inverse-factorial");
  superpose->add_option("--C", o.C, "exponent for exp-k-C");
  superpose->add_option("--K", o.K, "number of Taylor terms beyond the constant");
  auto* spectrum = app.add_subcommand("spectrum", "resolvent (lambda - D)^{-1} applied to a series");
  common(spectrum);
  spectrum->add_option("--lambda", o.lambda, "lambda as re or re,im");
  auto* vlimit = app.add_subcommand("vertical-limit", "twist of a series (and optionally a symbol) by a character");
  common(vlimit);
  vlimit->add_option("--character", o.character, "character JSON");
  vlimit->add_option("--symbol", o.symbol, "symbol JSON to twist as well");
  vlimit->add_option("--symbol-out", o.symbol_out, "output for the twisted symbol");
  auto* experiment = app.add_subcommand("experiment", "run a named experiment");
  common(experiment);
  std::string exp_name;
  experiment->add_option("name", exp_name, "experiment name")->required()->check(CLI::IsMember(experiment_names()));
  experiment->add_option("--count", o.count, "corpus size");
  experiment->add_option("--kmin", o.kmin, "smallest k");
  experiment->add_option("--C", o.C, "exponent C");
  experiment->add_option("--Cprime", o.C_prime, "exponent C'");
  experiment->add_option("--K", o.K, "number of Taylor terms (superpose-exp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*norms) return cmd_norms(o, out);
    if (*compose) return cmd_compose(o, out);
    if (*superpose) return cmd_superpose(o, out);
    if (*spectrum) return cmd_spectrum(o, out);
    if (*vlimit) return cmd_vertical_limit(o, out);
    return cmd_experiment(exp_name, o, out);
  } catch (const hplus::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_domain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace hplus::cli
