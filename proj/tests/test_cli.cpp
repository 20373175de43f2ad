#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corpus.hpp"
#include "deltaprime/cli.hpp"

using namespace deltaprime;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("DELTAPRIME_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("DELTAPRIME_THREADS"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("moments of the zero profile") {
  const auto r = run_cli({"moments", "--builtin", "zero"});
  CHECK(r.code == 0);
  CHECK(r.out == "m0=0 m1=0\n");
}

TEST_CASE("table6 matches the golden file") {
  const auto r = run_cli({"table6"});
  REQUIRE(r.code == 0);
  CHECK(r.out == read_file(std::filesystem::path(TEST_DATA_DIR) / "golden" / "table6.txt"));
}

TEST_CASE("step resonances") {
  const auto r = run_cli({"resonances", "--builtin", "step", "--alpha-min", "-20", "--alpha-max",
                          "20", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["alpha"].get<double>() == doctest::Approx(-15.4182057169801));
  CHECK(doc["rows"][1]["alpha"].get<double>() == 0.0);
  CHECK(doc["rows"][2]["theta"].get<double>() == doctest::Approx(-35.8745739207592));
}

TEST_CASE("resonance csv starts with the trivial row") {
  const auto r = run_cli({"resonances", "--builtin", "seba-quadratic", "--alpha-min", "0",
                          "--alpha-max", "10", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "alpha,theta,abs_T2,residual,bracket_lo,bracket_hi\n0.0,1.0,1.0,0.0,0.0,0.0\n");
}

TEST_CASE("every subcommand honours --format") {
  const std::vector<std::vector<std::string>> commands{
      {"moments", "--builtin", "step"},
      {"shoot", "--builtin", "step", "--alpha", "3", "--kappa2", "0.5"},
      {"resonances", "--builtin", "step", "--alpha-min", "0", "--alpha-max", "20"},
      {"theta", "--builtin", "seba-quadratic", "--alpha", "18.1747"},
      {"scatter-limit", "--builtin", "seba-quadratic", "--alpha", "18.1747"},
      {"scatter-eps", "--builtin", "seba-quadratic", "--alpha", "18.1747", "--k", "1", "--eps", "0.01"},
      {"scatter-asymptotic", "--builtin", "seba-quadratic", "--alpha", "10", "--k", "1", "--eps", "0.01"},
      {"converge", "--builtin", "seba-quadratic", "--alpha", "10", "--nodes-per-eps", "16"},
      {"table6"},
  };
  for (auto cmd : commands) {
    CAPTURE(join(cmd));
    auto table = run_cli(cmd);
    CHECK(table.code == 0);
    CHECK_FALSE(table.out.empty());
    cmd.insert(cmd.end(), {"--format", "json"});
    auto json = run_cli(cmd);
    CHECK(json.code == 0);
    CHECK(nlohmann::json::accept(json.out));
    cmd.back() = "csv";
    auto csv = run_cli(cmd);
    CHECK(csv.code == 0);
    CHECK(csv.out.find(',') != std::string::npos);
  }
}

TEST_CASE("scatter-limit output") {
  auto r = run_cli({"scatter-limit", "--builtin", "seba-quadratic", "--alpha", "10", "--format", "json"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["resonant"] == false);
  CHECK(doc["theta"].is_null());
  CHECK(doc["R_re"].get<double>() == -1.0);
  r = run_cli({"scatter-limit", "--builtin", "seba-quadratic", "--alpha", "18.1747", "--format", "json"});
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["resonant"] == true);
  CHECK(doc["abs_T2"].get<double>() == doctest::Approx(0.00132444).epsilon(1e-5));
}

TEST_CASE("mirror gives right incidence") {
  const std::vector<std::string> base{"scatter-eps", "--builtin", "seba-quadratic", "--alpha",
                                      "18.1747", "--k", "1", "--eps", "0.05", "--format", "json"};
  auto left = nlohmann::json::parse(run_cli(base).out);
  auto with_mirror = base;
  with_mirror.push_back("--mirror");
  auto right = nlohmann::json::parse(run_cli(with_mirror).out);
  CHECK(right["abs_T2"].get<double>() == doctest::Approx(left["abs_T2"].get<double>()).epsilon(1e-12));
  CHECK(right["R_re"].get<double>() != doctest::Approx(left["R_re"].get<double>()));
}

TEST_CASE("exported profiles load back") {
  const auto path = std::filesystem::temp_directory_path() / "deltaprime_cli_export.json";
  auto r = run_cli({"export-profile", "--builtin", "seba-quadratic", "--mirror"});
  REQUIRE(r.code == 0);
  {
    std::ofstream(path) << r.out;
  }
  auto a = run_cli({"resonances", "--profile", path.string(), "--alpha-min", "-30", "--alpha-max",
                    "30", "--format", "csv"});
  auto b = run_cli({"resonances", "--builtin", "seba-quadratic", "--mirror", "--alpha-min", "-30",
                    "--alpha-max", "30", "--format", "csv"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run_cli({"export-profile", "--profile", path.string()}).out == r.out);
  std::filesystem::remove(path);
}

TEST_CASE("output is deterministic across thread counts") {
  const std::vector<std::vector<std::string>> commands{
      {"resonances", "--builtin", "seba-quadratic", "--format", "csv"},
      {"converge", "--builtin", "seba-quadratic", "--alpha", "10", "--nodes-per-eps", "16",
       "--format", "json"},
  };
  for (const auto& cmd : commands) {
    std::string single, many, again;
    {
      ThreadsEnv env("1");
      single = run_cli(cmd).out;
    }
    {
      ThreadsEnv env("8");
      many = run_cli(cmd).out;
      again = run_cli(cmd).out;
    }
    CHECK(single == many);
    CHECK(many == again);
  }
}

TEST_CASE("help exits 0") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("table6") != std::string::npos);
}

TEST_CASE("malformed inputs exit 2 with a diagnostic") {
  const auto cases = malformed_corpus(TEST_DATA_DIR);
  CHECK(cases.size() >= 20);
  for (const auto& args : cases) {
    CAPTURE(join(args));
    const auto r = run_cli(args);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
  }
}

TEST_CASE("numerical failure exits 3") {
  const auto r = run_cli({"shoot", "--builtin", "seba-quadratic", "--alpha", "1e15"});
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical failure") != std::string::npos);
}

}  // TEST_SUITE
