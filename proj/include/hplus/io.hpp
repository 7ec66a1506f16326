#pragma once

// JSON and CSV formats shared by the library and the command line.
//
// Series:     {"truncation": N, "coeffs": [[re, im], ...]}   coeffs[i] is a_{i+1}
// Symbol:     {"c0": int, "varphi": <series>}                varphi a_1 is the constant c1
// Character:  {"prime_values": [[re, im], ...]}               entry j is chi(p_{j+1})

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "hplus/errors.hpp"
#include "hplus/operators.hpp"
#include "hplus/series.hpp"

namespace hplus {

using json = nlohmann::json;

/// Malformed input; the message names the offending field.
class parse_error : public invalid_argument {
public:
  using invalid_argument::invalid_argument;
};

namespace detail {

inline const json& require(const json& j, const char* field, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + ": expected a JSON object");
  auto it = j.find(field);
  if (it == j.end()) throw parse_error(where + ": missing field '" + field + "'");
  return *it;
}

inline complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw parse_error(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<complex> parse_complex_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw parse_error(where + ": expected an array");
  std::vector<complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json complex_array(std::span<const complex> v) {
  json arr = json::array();
  for (const auto& c : v) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

} // namespace detail

inline json to_json(const DirichletSeries& d) {
  return {{"truncation", d.truncation()}, {"coeffs", detail::complex_array(d.coeffs())}};
}

inline DirichletSeries series_from_json(const json& j, const std::string& where = "series") {
  const auto& t = detail::require(j, "truncation", where);
  if (!t.is_number_integer() || t.get<long long>() <= 0)
    throw parse_error(where + ".truncation: expected a positive integer");
  auto coeffs = detail::parse_complex_array(detail::require(j, "coeffs", where), where + ".coeffs");
  if (coeffs.size() != t.get<std::size_t>())
    throw parse_error(where + ".coeffs: length " + std::to_string(coeffs.size()) + " does not match truncation " +
                      std::to_string(t.get<std::size_t>()));
  try {
    return DirichletSeries(std::move(coeffs));
  } catch (const invalid_argument& e) {
    throw parse_error(where + ".coeffs: " + e.what());
  }
}

inline json to_json(const Symbol& phi) { return {{"c0", phi.c0}, {"varphi", to_json(phi.varphi)}}; }

inline Symbol symbol_from_json(const json& j, const std::string& where = "symbol") {
  const auto& c0 = detail::require(j, "c0", where);
  if (!c0.is_number_integer() || c0.get<long long>() < 0)
    throw parse_error(where + ".c0: expected a non-negative integer");
  return {c0.get<std::uint32_t>(), series_from_json(detail::require(j, "varphi", where), where + ".varphi")};
}

inline json to_json(const Character& chi) { return {{"prime_values", detail::complex_array(chi.prime_values())}}; }

inline Character character_from_json(const json& j, const std::string& where = "character") {
  auto v = detail::parse_complex_array(detail::require(j, "prime_values", where), where + ".prime_values");
  try {
    return Character(std::move(v));
  } catch (const invalid_argument& e) {
    throw parse_error(where + ".prime_values: " + e.what());
  }
}

inline json to_json(const Verdict& v) { return {{"value", v.value}, {"basis", v.basis}}; }

inline json to_json(const ClassificationReport& r) {
  return {{"heuristic", true},
          {"note", r.note},
          {"c0", r.c0},
          {"inf_re_estimate", r.inf_re_estimate},
          {"argmin", json::array({r.argmin.real(), r.argmin.imag()})},
          {"grid",
           {{"re_min", r.grid.re_min},
            {"re_max", r.grid.re_max},
            {"n_re", r.grid.n_re},
            {"re_spacing", "log"},
            {"im_max", r.grid.im_max},
            {"n_im", r.grid.n_im},
            {"epsilon", r.grid.epsilon}}},
          {"verdicts",
           {{"well_defined", to_json(r.well_defined)},
            {"continuous", to_json(r.continuous)},
            {"bounded", to_json(r.bounded)},
            {"into_hp", to_json(r.into_hp)},
            {"into_h_infinity", to_json(r.into_h_infinity)},
            {"into_h_infinity_plus", to_json(r.into_h_infinity_plus)}}}};
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip representation; "nan", "inf", "-inf" for non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row_strings(header); }

  template <class... Cells>
  CsvWriter& row(const Cells&... cells) {
    static_assert(sizeof...(Cells) > 0);
    std::vector<std::string> out{cell(cells)...};
    if (out.size() != columns_) throw std::logic_error("CsvWriter: row width does not match header");
    row_strings(out);
    return *this;
  }

  const std::string& str() const noexcept { return text_; }

private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  std::size_t columns_;
  std::string text_;
};

} // namespace hplus
