#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vfbm/cli.hpp"
#include "vfbm/error.hpp"

using namespace vfbm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("vfbm_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig c;
  apply_config_text(c, R"(
# comment
[run]
subcommand = solve
H = 0.8
max-iter = 50
max_iter = 60
coefficients = "bounded-growth"
lambda = 1024
checks = rs, aux
a = 0.5
)");
  CHECK(c.subcommand == "solve");
  CHECK(c.H == 0.8);
  CHECK(c.max_iter == 60);
  CHECK(c.coefficients == "bounded-growth");
  CHECK(c.lambda == 1024.0);
  CHECK(c.checks == std::vector<std::string>{"rs", "aux"});
  CHECK(c.params.a == 0.5);
  CHECK_THROWS_AS(apply_config_value(c, "colour", "red"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_value(c, "n", "12.5"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_text(c, "just words"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/config.toml"), IoError);

  c.n = 1;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
}

TEST_CASE("admissibility diagnostics") {
  ExperimentConfig c;
  c.subcommand = "solve";
  c.H = 0.6;
  c.beta = 0.3;
  try {
    check_admissibility(c, configured_coefficients(c));
    FAIL("expected an admissibility error");
  } catch (const AdmissibilityError& e) {
    CHECK(std::string(e.what()).find("beta > 1-H violated") != std::string::npos);
  }
  c.beta.reset();
  c.alpha = 0.45;
  CHECK_NOTHROW(check_admissibility(c, configured_coefficients(c)));
  c.alpha = 0.3;
  c.H = 0.65;
  CHECK_THROWS_AS(check_admissibility(c, configured_coefficients(c)), AdmissibilityError);  // alpha <= 1-H
}

TEST_CASE("emit_report") {
  const auto dir = scratch("emit");
  CHECK_THROWS_AS(emit_report({}, ReportFormat::Both, dir), InvalidArgument);

  OutputRecord r{"solution_00000", {{"iterations", 3}}, Table{{"t", "x1"}, {{0.0, 0.5}, {1.0, 0.1}}}};
  emit_report({r}, ReportFormat::Both, dir);
  CHECK(slurp(dir / "solution_00000.csv") ==
        "t,x1\n0,0.5\n1,0.10000000000000001\n");
  const auto j = nlohmann::json::parse(slurp(dir / "solution_00000.json"));
  CHECK(j["run_id"] == "solution_00000");
  CHECK(j["iterations"] == 3);

  // A regular file where the directory should be.
  const auto file = scratch("emit_file");
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(emit_report({r}, ReportFormat::Csv, file / "sub"), IoError);
  fs::remove_all(dir);
  fs::remove(file);
}

TEST_CASE("runs are byte-identical for any worker count") {
  ExperimentConfig c;
  c.subcommand = "solve";
  c.n = 64;
  c.paths = 3;
  c.seed = 5;
  std::ostringstream log;
  const auto one = scratch("det1"), three = scratch("det3");
  c.workers = 1;
  c.out_dir = one.string();
  CHECK(run_experiment(c, log) == 0);
  c.workers = 3;
  c.out_dir = three.string();
  CHECK(run_experiment(c, log) == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(one)) {
    CHECK(slurp(e.path()) == slurp(three / e.path().filename()));
    ++files;
  }
  CHECK(files == 8);  // config, solve, three csv+json solutions
  CHECK(fs::exists(three / "config.json"));
  fs::remove_all(one);
  fs::remove_all(three);
}
