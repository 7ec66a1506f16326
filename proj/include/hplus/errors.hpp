#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hplus {

// Usage problems (bad arguments) derive from std::invalid_argument; mathematical
// domain failures derive from domain_error so callers can map them to distinct
// exit statuses.

class invalid_argument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A prime table or character does not cover the requested range.
class table_too_small : public domain_error {
public:
  table_too_small(std::uint64_t needed, std::uint64_t available)
    : domain_error("table too small: need coverage up to " + std::to_string(needed) +
                   ", have " + std::to_string(available)),
      needed_(needed), available_(available) {}

  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t available() const noexcept { return available_; }

private:
  std::uint64_t needed_;
  std::uint64_t available_;
};

/// lambda lies within tolerance of -log(n), a point of the spectrum of differentiation.
class spectrum_point : public domain_error {
public:
  explicit spectrum_point(std::uint64_t n)
    : domain_error("spectrum point: lambda is within tolerance of -log(" + std::to_string(n) + ")"),
      n_(n) {}

  std::uint64_t n() const noexcept { return n_; }

private:
  std::uint64_t n_;
};

class support_overflow : public domain_error {
public:
  using domain_error::domain_error;
};

class not_in_h_plus_zero : public domain_error {
public:
  not_in_h_plus_zero() : domain_error("series has nonzero first coefficient (not in H+,0)") {}
};

class missing_cutoff : public domain_error {
public:
  missing_cutoff() : domain_error("composition with c0 = 0 requires an explicit n_cutoff") {}
};

class undefined_abscissa : public domain_error {
public:
  undefined_abscissa() : domain_error("abscissa of the zero series is undefined") {}
};

} // namespace hplus
