#pragma once

// On-disk cache of smallest-prime-factor tables.
//
// File layout (little-endian host order, one file per limit, "sieve-<limit>.bin"):
//   8 bytes   magic "HPSIEVE1"
//   u64       limit
//   u32[limit+1] smallest prime factor array
//   u64       FNV-1a checksum of the array bytes
// Any mismatch (magic, size, checksum, spf sanity) is treated as corruption and
// the table is recomputed and rewritten.

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hplus/numtheory.hpp"

namespace hplus {

inline constexpr const char* cache_dir_env = "HPLUS_CACHE_DIR";

namespace detail {

inline constexpr char sieve_magic[8] = {'H', 'P', 'S', 'I', 'E', 'V', 'E', '1'};

inline std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  auto p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::optional<PrimeTable> read_sieve_file(const std::filesystem::path& file, std::uint64_t limit) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t stored_limit = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, sieve_magic, 8) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&stored_limit), sizeof stored_limit) || stored_limit != limit)
    return std::nullopt;
  std::vector<std::uint32_t> spf(limit + 1);
  const auto bytes = static_cast<std::streamsize>(spf.size() * sizeof(std::uint32_t));
  std::uint64_t checksum = 0;
  if (!in.read(reinterpret_cast<char*>(spf.data()), bytes)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&checksum), sizeof checksum)) return std::nullopt;
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  if (checksum != fnv1a(spf.data(), static_cast<std::size_t>(bytes))) return std::nullopt;

  std::vector<std::uint64_t> primes;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    std::uint32_t p = spf[n];
    if (p < 2 || p > n || n % p != 0) return std::nullopt;
    if (p == n) primes.push_back(n);
  }
  return PrimeTable(limit, std::move(primes), std::move(spf));
}

inline void write_sieve_file(const std::filesystem::path& file, const PrimeTable& table) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    std::uint64_t limit = table.limit();
    auto spf = table.spf();
    const auto bytes = spf.size() * sizeof(std::uint32_t);
    std::uint64_t checksum = fnv1a(spf.data(), bytes);
    out.write(sieve_magic, 8);
    out.write(reinterpret_cast<const char*>(&limit), sizeof limit);
    out.write(reinterpret_cast<const char*>(spf.data()), static_cast<std::streamsize>(bytes));
    out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

} // namespace detail

/// An explicit directory wins; otherwise $HPLUS_CACHE_DIR; otherwise none (no caching).
inline std::filesystem::path resolve_cache_dir(const std::filesystem::path& explicit_dir = {}) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv(cache_dir_env); env && *env) return env;
  return {};
}

inline std::filesystem::path sieve_cache_file(const std::filesystem::path& dir, std::uint64_t limit) {
  return dir / ("sieve-" + std::to_string(limit) + ".bin");
}

/// Loads the table for `limit` from `dir`, recomputing (and rewriting the cache)
/// when the file is missing or corrupt. An empty `dir` disables caching.
/// Cache I/O failures never propagate; they only cost a recomputation.
inline PrimeTable load_or_build_sieve(std::uint64_t limit, const std::filesystem::path& dir) {
  if (dir.empty()) return sieve(limit);
  auto file = sieve_cache_file(dir, limit);
  if (auto cached = detail::read_sieve_file(file, limit)) return std::move(*cached);
  auto table = sieve(limit);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) detail::write_sieve_file(file, table);
  return table;
}

} // namespace hplus
