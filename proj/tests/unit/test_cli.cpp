#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mbqes/cli.hpp"

using namespace mbqes;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    const auto cfg = cli::parse_config("# model\nmodel.r = 2\nmodel.s=1\n\nmodel.k = 1,1,1  # k\nsector.occ = 0,0,1\n");
    CHECK(cfg.at("model.k") == "1,1,1");
    CHECK(cfg.at("sector.occ") == "0,0,1");
    CHECK_THROWS_AS(cli::parse_config("model.r 2\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config("model.r = 2\nmodel.r = 3\n"), cli::ConfigError);

    auto full = cli::parse_config("model.r=1\nmodel.s=1\nmodel.k=1,2\nmodel.w=1/2,0\nmodel.wq.1.2=3\nmodel.g=0.5\n");
    const ModelSpec m = cli::model_from_config(full);
    CHECK(m.w[0] == make_rational(1, 2));
    CHECK(m.quadratic(0, 1) == 3);
    CHECK(m.g == make_rational(1, 2));
    full["model.bogus"] = "1";
    try {
      cli::model_from_config(full);
      CHECK(false);
    } catch (const cli::ConfigError& e) {
      CHECK(e.field() == "model.bogus");
    }
  }

  TEST_CASE("quadratic overrides") {
    ModelSpec m = ModelSpec::zero(1, 1, {1, 1});
    cli::apply_quadratic(m, "1.1=2,2.1=-1/2");
    CHECK(m.quadratic(0, 0) == 2);
    CHECK(m.quadratic(0, 1) == make_rational(-1, 2));
    cli::apply_quadratic(m, "zero");
    CHECK(m.quadratic(0, 0) == 0);
    cli::apply_quadratic(m, "1,2,3");
    CHECK(m.quadratic(1, 1) == 3);
    CHECK_THROWS_AS(cli::apply_quadratic(m, "1,2"), cli::ConfigError);
    CHECK_THROWS_AS(cli::apply_quadratic(m, "3.1=1"), cli::ConfigError);
  }

  TEST_CASE("solve two-level example") {
    const auto r = run({"solve", "--preset", "A", "--w", "0,0,0", "--wq", "zero", "--g", "1", "--occ", "0,0,1"});
    CHECK(r.code == cli::ok);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rfind("level,oracle_energy,", 0) == 0);
    // level,oracle_energy,monomial_energy,bethe_energy,abs_diff
    for (int level = 0; level < 2; ++level) {
      std::istringstream row(rows[static_cast<std::size_t>(level + 1)]);
      std::string cell;
      std::vector<double> v;
      for (int c = 0; c < 5 && std::getline(row, cell, ','); ++c) v.push_back(std::stod(cell));
      CHECK(v[0] == level);
      CHECK(v[1] == doctest::Approx(level == 0 ? -1.0 : 1.0));
      CHECK(v[3] == doctest::Approx(level == 0 ? -1.0 : 1.0));
      CHECK(v[4] < 1e-10);
    }
  }

  TEST_CASE("scan rows") {
    const auto r = run({"scan", "--preset", "C", "--g-range", "0:2:0.1", "--occ", "1,1,0,0", "--threads", "3"});
    CHECK(r.code == cli::ok);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 43);
    CHECK(rows[1] == "g,0,0,0,0,0");
    CHECK(rows[42].rfind("g,2,1,", 0) == 0);
  }

  TEST_CASE("verify subcommands") {
    const auto a = run({"verify-algebra", "--kmax", "4"});
    CHECK(a.code == cli::ok);
    CHECK(lines(a.out).size() == 1 + 4 * 5 + 1);
    CHECK(a.out.find("fail") == std::string::npos);
    const auto p = run({"verify-presets", "--case", "B", "--draws", "5"});
    CHECK(p.code == cli::ok);
    CHECK(p.out.find("B,P0[1],0,5,0,known-discrepancy") != std::string::npos);
  }

  TEST_CASE("roots with operator dump") {
    const auto r = run({"roots", "--preset", "A", "--occ", "0,0,1", "--dump-diffop", "--format", "text"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("P1 1 0 -1") != std::string::npos);
    CHECK(r.out.find("level 0 energy -1") != std::string::npos);
  }

  TEST_CASE("configuration errors name the field") {
    auto r = run({"solve", "--preset", "A", "--occ", "1,2"});
    CHECK(r.code == cli::config_error);
    CHECK(r.err.find("--occ") != std::string::npos);
    r = run({"solve", "--preset", "A", "--r", "1", "--s", "1", "--k", "1,1", "--occ", "0,1"});
    CHECK(r.code == cli::config_error);
    r = run({"solve", "--r", "1", "--s", "1", "--k", "1", "--occ", "0,1"});
    CHECK(r.code == cli::config_error);
    CHECK(r.err.find("k") != std::string::npos);
    r = run({"solve", "--preset", "A", "--occ", "0,0,1", "--w", "1,x,2"});
    CHECK(r.code == cli::config_error);
    CHECK(r.err.find("--w") != std::string::npos);
    r = run({"scan", "--preset", "A", "--occ", "0,0,1", "--param", "w.7", "--range", "0:1:1"});
    CHECK(r.code == cli::config_error);
    r = run({"solve", "--preset", "A", "--occ", "0,0,1", "--format", "xml"});
    CHECK(r.code == cli::config_error);
    r = run({"frobnicate"});
    CHECK(r.code == cli::config_error);
  }

  TEST_CASE("config file and output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "mbqes_cli_test";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "a.cfg";
    std::ofstream(cfg) << "model.r = 2\nmodel.s = 1\nmodel.k = 1,1,1\nmodel.g = 1\nsector.occ = 0,0,1\n";
    const auto inline_run = run({"solve", "--preset", "A", "--occ", "0,0,1"});
    const auto file_run = run({"solve", "--config", cfg.string()});
    CHECK(file_run.code == cli::ok);
    CHECK(file_run.out == inline_run.out);

    setenv("MBQES_OUTPUT_DIR", dir.string().c_str(), 1);
    const auto to_file = run({"solve", "--config", cfg.string(), "--out", "solve.csv"});
    unsetenv("MBQES_OUTPUT_DIR");
    CHECK(to_file.out.empty());
    std::ifstream in(dir / "solve.csv");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == inline_run.out);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("validation failure has its own exit code") {
    // Tolerance below what any double computation can meet.
    const auto r = run({"solve", "--preset", "B", "--w", "1/3,1,-2", "--occ", "1,0,12", "--tol", "1e-300"});
    CHECK(r.code == cli::validation_failure);
  }
}
