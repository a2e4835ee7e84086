#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "rikitake/cli.hpp"
#include "rikitake/io.hpp"

using namespace rikitake;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rikitake_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-2) == "-2");
}

TEST_CASE("fnv1a reference values") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::hex64(io::fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("svg plot is self-contained") {
  const std::string svg = io::svg_plot({{"one", "blue", {0, 1, 2}, {0, 1, 0}}, {"two", "red", {1}, {1}}}, "x", "z", "t");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("viewBox=\"0 0 640 400\"") != std::string::npos);
  CHECK(svg.find("stroke=\"blue\"") != std::string::npos);
  CHECK(svg.find("stroke=\"red\"") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  CHECK(io::figure_colors() == std::vector<std::string>{"blue", "green", "black", "orange", "red"});
}

TEST_CASE("projection names") {
  const std::vector<std::string> xyz{"x", "y", "z"}, primed{"x'", "y'", "z'"};
  CHECK(cli::parse_projection("xz", xyz) == std::pair<int, int>{0, 2});
  CHECK(cli::parse_projection("yx", xyz) == std::pair<int, int>{1, 0});
  CHECK(cli::parse_projection("x'z'", primed) == std::pair<int, int>{0, 2});
  CHECK(cli::parse_projection("y':x'", primed) == std::pair<int, int>{1, 0});
  CHECK_THROWS_AS(cli::parse_projection("xw", xyz), cli::ConfigError);
}

TEST_CASE("list") {
  const auto r = run({"list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("case-ab-deformed") != std::string::npos);
  for (const auto& s : catalog()) CHECK(r.out.find(s.anchor) != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"simulate", "--preset", "figure9"}).code == 2);
  CHECK(run({"couple", "--lambda", "2"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify") {
  const auto all = run({"verify", "all"});
  CHECK(all.code == 0);
  CHECK(all.out.find("FAIL") == std::string::npos);

  const auto ab = run({"verify", "case-ab-deformed"});
  CHECK(ab.code == 0);
  CHECK(ab.out.find("bihamiltonian_agreement") != std::string::npos);

  const auto broken = run({"verify", "case-a", "--inject-broken"});
  CHECK(broken.code == 1);
  CHECK(broken.out.find("FAIL broken-fixture jacobi_residual") != std::string::npos);

  const auto js = run({"verify", "case-a", "--json"});
  CHECK(js.code == 0);
  const auto parsed = nlohmann::json::parse(js.out);
  REQUIRE(parsed.is_array());
  CHECK(parsed[0]["property"] == "jacobi_residual");
  CHECK(parsed[0]["pass"] == true);

  CHECK(run({"verify", "no-such-system"}).code == 2);
}

TEST_CASE("cocycle") {
  const auto one = run({"cocycle", "--beta", "1"});
  CHECK(one.code == 0);
  CHECK(one.out.find("nullspace dimension (before co-Jacobi): 2") != std::string::npos);
  CHECK(one.out.find("surviving dimension (after co-Jacobi): 1") != std::string::npos);

  const auto zero = run({"cocycle", "--beta", "0", "--json"});
  CHECK(zero.code == 0);
  const auto j = nlohmann::json::parse(zero.out);
  CHECK(j["pre_filter_dimension"] == 3);
  CHECK(j["book_cocommutator_survives"] == true);
  CHECK(j["cojacobi_identically_satisfied"] == true);

  const auto half = nlohmann::json::parse(run({"cocycle", "--beta", "1", "--json"}).out);
  CHECK(half["pre_filter_dimension"] != j["pre_filter_dimension"]);

  CHECK(run({"cocycle", "--beta", "one"}).code == 2);
}

TEST_CASE("simulate from a config") {
  const auto dir = scratch("simulate");
  const auto cfg = write_config(dir, R"({
    "system": "case-a-book",
    "params": {"eta": 1},
    "integrator": {"t_end": 10, "sample_dt": 0.05},
    "output": {"name": "book", "projections": ["xz", "yx"]}
  })");
  const auto r = run({"simulate", "--config", cfg.string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "book.csv"));
  CHECK(fs::exists(dir / "book_xz.svg"));
  CHECK(fs::exists(dir / "book_yx.svg"));

  const auto table = io::read_csv(dir / "book.csv");
  CHECK(table.header == std::vector<std::string>{"t", "x", "y", "z", "H_A", "C_eta"});
  CHECK(table.rows.size() == 201);
  CHECK(table.rows.front()[1] == 0.5);

  // bit-exact round trip through the writer
  io::write_csv(table, dir / "again.csv");
  CHECK(slurp(dir / "again.csv") == slurp(dir / "book.csv"));
  CHECK(slurp(dir / "book.csv").find('\r') == std::string::npos);

  const auto report = nlohmann::json::parse(slurp(dir / "book_report.json"));
  CHECK(report["status"] == "complete");
  CHECK(report["max_drift"].get<double>() < 1e-6);
  CHECK(report["config_hash"].get<std::string>().size() == 16);

  // deterministic, including the report
  const auto before = slurp(dir / "book.csv"), report_before = slurp(dir / "book_report.json");
  REQUIRE(run({"simulate", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "book.csv") == before);
  CHECK(slurp(dir / "book_report.json") == report_before);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, R"({"system": "case-a", "integrator": {"t_end": 1}, "output": {"dir": "ignored"}})");
  ::setenv("RIKITAKE_OUT_DIR", (dir / "from_env").c_str(), 1);
  const auto r = run({"simulate", "--config", cfg.string()});
  ::unsetenv("RIKITAKE_OUT_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "from_env" / "case-a.csv"));
}

TEST_CASE("config validation") {
  const auto dir = scratch("invalid");
  auto code_and_err = [&](const std::string& body) {
    const auto r = run({"simulate", "--config", write_config(dir, body).string(), "--out", dir.string()});
    return std::make_pair(r.code, r.err);
  };
  auto [c1, e1] = code_and_err(R"({"system": "case-a", "integrator": {"tolerance": 1e-9}})");
  CHECK(c1 == 2);
  CHECK(e1.find("integrator.tolerance") != std::string::npos);

  auto [c2, e2] = code_and_err(R"({"system": "case-a", "params": {"aplha": 1}})");
  CHECK(c2 == 2);
  CHECK(e2.find("aplha") != std::string::npos);

  auto [c3, e3] = code_and_err(R"({"system": "case-q"})");
  CHECK(c3 == 2);
  CHECK(e3.find("system") != std::string::npos);

  CHECK(code_and_err(R"({"params": {}})").first == 2);
  CHECK(code_and_err(R"({"system": "case-a", "initial": [1, 2]})").first == 2);
  CHECK(code_and_err(R"({"system": "case-a", "integrator": {"t_end": -1}})").first == 2);
  CHECK(code_and_err(R"({"system": "case-ab-pencil", "params": {"lambda": 0.5}})").first == 2);
  CHECK(code_and_err(R"({"system": "case-a", "extra": 1})").first == 2);
  CHECK(code_and_err("{not json").first == 2);

  // outside the domain of H_A (x + y > 0): a runtime domain error
  auto [c4, e4] = code_and_err(R"({"system": "case-a", "initial": [-1, 0.5, 0]})");
  CHECK(c4 == 3);
  CHECK(e4.find("domain") != std::string::npos);
}

TEST_CASE("figure preset") {
  const auto dir = scratch("figure1");
  const auto r = run({"simulate", "--preset", "figure1", "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* eta : {"-0.5", "-0.25", "0", "1", "2"})
    CHECK(fs::exists(dir / (std::string("figure1_eta_") + eta + ".csv")));
  CHECK(fs::exists(dir / "figure1_xz.svg"));
  CHECK(fs::exists(dir / "figure1_yz.svg"));
  const auto svg = slurp(dir / "figure1_xz.svg");
  for (const auto& c : io::figure_colors()) CHECK(svg.find("stroke=\"" + c + "\"") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(dir / "figure1_report.json"));
  REQUIRE(report["runs"].size() == 5);
  for (const auto& run : report["runs"]) {
    CHECK(run["max_drift"].get<double>() < 1e-6);
    CHECK_FALSE(run["closure"].is_null());
  }

  // eta = 0 is the undeformed case-a run, sample for sample
  const auto cfg = write_config(dir, R"({"system": "case-a", "integrator": {"t_end": 50, "sample_dt": 0.01}})");
  REQUIRE(run({"simulate", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  const auto limit = io::read_csv(dir / "figure1_eta_0.csv"), plain = io::read_csv(dir / "case-a.csv");
  REQUIRE(limit.rows.size() == plain.rows.size());
  bool same = true;
  for (std::size_t i = 0; i < plain.rows.size(); ++i)
    for (std::size_t j = 0; j < 4; ++j) same = same && limit.rows[i][j] == plain.rows[i][j];
  CHECK(same);
}

TEST_CASE("couple") {
  const auto dir = scratch("couple");
  REQUIRE(run({"couple", "--lambda", "1", "--eta", "1", "--out", dir.string()}).code == 0);
  REQUIRE(run({"couple", "--lambda", "0", "--eta", "1", "--out", dir.string()}).code == 0);
  const auto one = io::read_csv(dir / "couple_lambda1_eta_1.csv"), zero = io::read_csv(dir / "couple_lambda0_eta_1.csv");
  REQUIRE(one.rows.size() == 2001);
  REQUIRE(zero.rows.size() == one.rows.size());
  for (const char* col : {"x+", "y+", "z+", "cluster_residual"}) CHECK(one.column(col) > 0);

  double cluster = 0, internal = 0, residual = 0;
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    for (const char* c : {"x+", "y+", "z+"})
      cluster = std::max(cluster, std::abs(one.rows[i][one.column(c)] - zero.rows[i][zero.column(c)]));
    for (const char* c : {"x'1", "y'1", "z'1"})
      internal = std::max(internal, std::abs(one.rows[i][one.column(c)] - zero.rows[i][zero.column(c)]));
    residual = std::max(residual, one.rows[i][one.column("cluster_residual")]);
  }
  CHECK(cluster < 1e-6);
  CHECK(internal > 1e-2);
  CHECK(residual < 1e-8);

  const auto report = nlohmann::json::parse(slurp(dir / "couple_lambda1_eta_1_report.json"));
  CHECK(report["cluster_vs_one_copy_max_deviation"].get<double>() < 1e-5);
  CHECK(report["max_drift"].get<double>() < 1e-6);

  const auto cfg = write_config(dir, R"({"lambda": 1, "initial_cluster": [0.5, 1, 1, 0.3, 0.8, -0.2],
                                          "integrator": {"t_end": 2}, "output": {"name": "c"}})");
  REQUIRE(run({"couple", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  const auto c = io::read_csv(dir / "c.csv");
  CHECK(c.rows.front()[c.column("x+")] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.rows.front()[c.column("z+")] == doctest::Approx(1).epsilon(1e-15));

  const auto bad = write_config(dir, R"({"lambda": 1, "initial": [1, 2, 3]})");
  CHECK(run({"couple", "--config", bad.string(), "--out", dir.string()}).code == 2);
}
