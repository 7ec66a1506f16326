#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hplus/experiments.hpp"
#include "hplus/io.hpp"

using namespace hplus;

TEST(Json, SeriesRoundTripIsLossless) {
  for (const auto& d : corpus::polynomials(77, 10, 50, 30, 64)) {
    auto text = to_json(d).dump();
    EXPECT_EQ(series_from_json(json::parse(text)), d);
  }
  DirichletSeries awkward(std::vector<complex>{{0.1, 1e-300}, {-0.0, 5e-324}, {1.0 / 3.0, -2.0 / 3.0}});
  EXPECT_EQ(series_from_json(json::parse(to_json(awkward).dump())), awkward);
}

TEST(Json, SeriesErrorsNameTheField) {
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      series_from_json(json::parse(text));
      FAIL() << text;
    } catch (const parse_error& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  expect_field(R"({"coeffs": [[1,0]]})", "truncation");
  expect_field(R"({"truncation": 1})", "coeffs");
  expect_field(R"({"truncation": 2, "coeffs": [[1,0]]})", "coeffs");
  expect_field(R"({"truncation": 0, "coeffs": []})", "truncation");
  expect_field(R"({"truncation": 2, "coeffs": [[1,0],[1]]})", "coeffs[1]");
  expect_field(R"([1,2])", "series");
}

TEST(Json, SymbolAndCharacter) {
  Symbol phi{2, DirichletSeries(std::vector<complex>{{0.5, 0.0}, {0.0, 0.1}})};
  auto back = symbol_from_json(json::parse(to_json(phi).dump()));
  EXPECT_EQ(back.c0, 2u);
  EXPECT_EQ(back.varphi, phi.varphi);
  EXPECT_THROW(symbol_from_json(json::parse(R"({"c0": -1, "varphi": {"truncation":1,"coeffs":[[0,0]]}})")),
               parse_error);
  Character chi({complex(0, 1), complex(-1, 0)});
  auto c2 = character_from_json(json::parse(to_json(chi).dump()));
  EXPECT_EQ(c2.prime_values()[0], complex(0, 1));
  EXPECT_THROW(character_from_json(json::parse(R"({"prime_values": [[2,0]]})")), parse_error);
}

TEST(Json, ClassificationReportCarriesGrid) {
  auto j = to_json(classify_symbol({1, monomial(1, 1.0, 2)}));
  EXPECT_EQ(j["grid"]["n_re"], 40);
  EXPECT_EQ(j["grid"]["re_spacing"], "log");
  EXPECT_TRUE(j["heuristic"].get<bool>());
  EXPECT_TRUE(j["verdicts"]["bounded"]["value"].get<bool>());
}

TEST(Csv, ShortestRoundTripFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
  CsvWriter w({"k", "p", "value", "exactness"});
  w.row(1u, 2.0, 0.5, "exact");
  EXPECT_EQ(w.str(), "k,p,value,exactness\n1,2,0.5,exact\n");
  EXPECT_THROW(w.row(1, 2), std::logic_error);
}

TEST(Files, AtomicWriteReplacesContent) {
  auto path = std::filesystem::temp_directory_path() / "hplus-atomic-test.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(s, "second");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), parse_error);
}

TEST(Experiments, DeterministicAndEchoParameters) {
  ExperimentConfig c;
  c.name = "noncomposition";
  c.k_max = 60;
  auto a = run_experiment(c), b = run_experiment(c);
  EXPECT_EQ(a.manifest.dump(), b.manifest.dump());
  ASSERT_EQ(a.tables.size(), 1u);
  EXPECT_EQ(a.tables[0].second, b.tables[0].second);
  const auto& p = a.manifest["parameters"];
  EXPECT_EQ(p["C"], 1.2);
  EXPECT_EQ(p["C_prime"], 1.6);
  EXPECT_EQ(p["k_max"], 60);
  EXPECT_EQ(a.manifest["version"], version);
  EXPECT_GT(a.manifest["sieve_limit"].get<std::uint64_t>(), 0u);
  c.name = "no-such-experiment";
  EXPECT_THROW(run_experiment(c), invalid_argument);
}

TEST(Experiments, GrowthTableMatchesLibrary) {
  ExperimentConfig c;
  c.name = "ejemplo-growth";
  c.truncation = 5000;
  c.k_max = 4;
  auto out = run_experiment(c);
  auto rep = composition_criterion(translate(ones(5000), 0.5), 4, 4);
  std::string expect = "k,value,target,margin\n";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const double r = rep.entries[i].r, t = i ? rep.entries[i - 1].r : std::nan("");
    expect += std::to_string(i + 1) + "," + format_double(r) + "," + format_double(t) + "," + format_double(r - t) + "\n";
  }
  EXPECT_EQ(out.tables[0].first, "growth.csv");
  EXPECT_EQ(out.tables[0].second, expect);
}
