#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <random>

#include <json.hpp>

#include "deltaprime/error.hpp"
#include "deltaprime/render.hpp"

using namespace deltaprime;

TEST_SUITE("render") {

TEST_CASE("full precision numbers") {
  CHECK(format_full(0.0) == "0.0");
  CHECK(format_full(1.0) == "1.0");
  CHECK(format_full(-54.0) == "-54.0");
  CHECK(format_full(0.1) == "0.1");
  CHECK(format_full(1e300) == "1e+300");
  CHECK(format_full(NAN) == "nan");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::bit_cast<double>(rng() & 0x7fefffffffffffffULL);
    const std::string s = format_full(x);
    CHECK(std::bit_cast<std::uint64_t>(std::strtod(s.c_str(), nullptr)) ==
          std::bit_cast<std::uint64_t>(x));
  }
}

TEST_CASE("six significant digits") {
  CHECK(format_short(-54.937581650) == "-54.9376");
  CHECK(format_short(755822.9833) == "755823");
  CHECK(format_short(0.00132444321) == "0.00132444");
  CHECK(format_short(-0.0) == "0");
  CHECK(format_short(2.18568e-06) == "2.18568e-06");
}

TEST_CASE("csv row with header") {
  Report r;
  r.columns = {"alpha", "theta", "abs_T2"};
  r.add_row({0.0, 1.0, 1.0});
  r.add_row({18.5, -54.25, 0.00125});
  CHECK(render(r, Format::Csv) == "alpha,theta,abs_T2\n0.0,1.0,1.0\n18.5,-54.25,0.00125\n");
}

TEST_CASE("csv quoting and metadata") {
  Report r;
  r.meta = {{"note", std::string("a,b")}, {"n", 3LL}};
  r.columns = {"x", "flag", "missing"};
  r.add_row({2.5, true, std::monostate{}});
  CHECK(render(r, Format::Csv) == "# note=\"a,b\"\n# n=3\nx,flag,missing\n2.5,true,\n");
}

TEST_CASE("record renders as key=value in tables") {
  Report r;
  r.columns = {"m0", "m1"};
  r.add_row({0.0, -1.0});
  CHECK(render(r, Format::Table) == "m0=0 m1=-1\n");
  CHECK(render(r, Format::Json) == "{\n  \"m0\": 0.0,\n  \"m1\": -1.0\n}\n");
}

TEST_CASE("aligned table") {
  Report r;
  r.columns = {"alpha", "regime"};
  r.add_row({1.0, std::string("limit")});
  r.add_row({-123.456789, std::string("asymptotic")});
  CHECK(render(r, Format::Table) ==
        "   alpha  regime\n"
        "       1  limit\n"
        "-123.457  asymptotic\n");
}

TEST_CASE("json keeps column order and round-trips") {
  Report r;
  r.meta = {{"zeta", 1.5}, {"alpha", std::string("first")}};
  r.columns = {"T_re", "T_im", "R_re", "R_im", "regime"};
  const double vals[] = {-0.036337375563766690, -0.0013867819284183770, -0.9993376254040389,
                         0.0014079860927695056};
  r.add_row({vals[0], vals[1], vals[2], vals[3], std::string("finite-eps")});
  const std::string text = render(r, Format::Json);
  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"zeta", "alpha", "rows"});
  const auto& row = doc["rows"][0];
  keys.clear();
  for (auto it = row.begin(); it != row.end(); ++it) keys.push_back(it.key());
  CHECK(keys == r.columns);
  for (int i = 0; i < 4; ++i) CHECK(row[r.columns[static_cast<std::size_t>(i)]].get<double>() == vals[i]);
  CHECK(row["regime"] == "finite-eps");
  CHECK(render(r, Format::Json) == text);
}

TEST_CASE("non-finite values become null in json") {
  Report r;
  r.columns = {"x"};
  r.add_row({INFINITY});
  CHECK(render(r, Format::Json) == "{\n  \"x\": null\n}\n");
}

TEST_CASE("format names") {
  CHECK(parse_format("table") == Format::Table);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("json") == Format::Json);
  CHECK_THROWS_AS(parse_format("xml"), InvalidInput);
}

}  // TEST_SUITE
