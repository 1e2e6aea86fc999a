#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

const char* cli_path() { return HYPERFLAT_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd =
      std::string("\"") + cli_path() + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

int run_env(const std::string& env, const std::string& args) {
  const std::string cmd = env + " \"" + cli_path() + "\" " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "hyperflat_cli_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Returns the value column of the first tables.csv row with the given prefix.
double table_value(const std::string& csv, const std::string& prefix) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(prefix, 0) == 0) {
      const std::string rest = line.substr(prefix.size());
      return std::stod(rest.substr(0, rest.find(',')));
    }
  }
  FAIL("row not found: " << prefix);
  return 0.0;
}

}  // namespace

TEST_CASE("tables emits the constants table") {
  const auto dir = scratch("tables");
  CHECK(run("tables --d 3 --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "tables.csv");
  CHECK(csv.find("# tool_version=") != std::string::npos);
  CHECK(csv.find("d,k,l,quantity,value,formula") != std::string::npos);
  CHECK(table_value(csv, "2,1,-1,a_dk,") == doctest::Approx(1.0));
  CHECK(table_value(csv, "2,0,-1,sigma_chi,") ==
        doctest::Approx(8.0 / (3.0 * kPi * kPi)).epsilon(1e-14));
  CHECK(table_value(csv, "2,-1,-1,c_d,") == doctest::Approx(2.0));
  CHECK(table_value(csv, "3,-1,-1,c_d,") ==
        doctest::Approx(6.768).epsilon(1e-3));
  CHECK(table_value(csv, "3,1,2,sigma_nu_mixed,") > 0.0);
}

TEST_CASE("reruns with the same seed are byte identical") {
  const auto d1 = scratch("rerun1");
  const auto d2 = scratch("rerun2");
  const std::string flags = "clt --d 2 --r 5 --reps 60 --seed 7 --out ";
  run(flags + d1.string());
  run(flags + d2.string());
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
  CHECK(slurp(d1 / "replicates.csv") == slurp(d2 / "replicates.csv"));
  CHECK(fs::exists(d1 / "qq_z_chi_0.csv"));
  CHECK(fs::exists(d1 / "hist_z_nu_1.csv"));
  // No timestamps anywhere: a different seed does change the bytes.
  const auto d3 = scratch("rerun3");
  run("clt --d 2 --r 5 --reps 60 --seed 8 --out " + d3.string());
  CHECK(slurp(d1 / "replicates.csv") != slurp(d3 / "replicates.csv"));
}

TEST_CASE("estimate report structure") {
  const auto dir = scratch("estimate");
  CHECK(run("estimate --d 2 --lambda 1 --r 50 --seed 3 --out " +
            dir.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["meta"]["tool_version"] == "1.0.0");
  CHECK(j["meta"]["master_seed"] == 3);
  CHECK(j["meta"]["subcommand"] == "estimate");
  const auto& body = j["report"];
  const double hat = body["lambda_hat_k"].get<double>();
  CHECK(hat > 0.0);
  CHECK(body["interval_I"]["lower"].get<double>() <
        body["interval_I"]["upper"].get<double>());
  CHECK(body["interval_J"]["lower"].get<double>() <
        body["interval_J"]["upper"].get<double>());
  CHECK(body["interval_J"]["level"].get<double>() == doctest::Approx(0.95));
  // CSV format emits the flattened report instead.
  const auto cdir = scratch("estimate_csv");
  CHECK(run("estimate --d 2 --r 20 --seed 3 --format csv --out " +
            cdir.string()) == 0);
  const std::string csv = slurp(cdir / "report.csv");
  CHECK(csv.find("key,value") != std::string::npos);
  CHECK(csv.find("lambda_hat_k") != std::string::npos);
}

TEST_CASE("simulate honors the HYPERFLAT_SEED environment default") {
  const auto d1 = scratch("env1");
  const auto d2 = scratch("env2");
  CHECK(run_env("HYPERFLAT_SEED=42",
                "simulate --d 2 --r 5 --out " + d1.string()) == 0);
  CHECK(run("simulate --d 2 --r 5 --seed 42 --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "hyperplanes.csv") == slurp(d2 / "hyperplanes.csv"));
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
}

TEST_CASE("exit code contract") {
  // Unknown subcommand / flag: config error.
  CHECK(run("bogus") == 1);
  CHECK(run("estimate --no-such-flag 3") == 1);
  // Invalid parameter values: config error.
  CHECK(run("estimate --d 2 --lambda -1 --r 10") == 1);
  CHECK(run("tables --d 9") == 1);
  CHECK(run("test --d 3 --r 10") == 1);
  CHECK(run("coverage --method X --reps 20 --r 10") == 1);
  // Well-posed run: success.
  CHECK(run("test --d 2 --lambda 1 --r 100 --seed 12") == 0);
  // Acceptance-band violation: a tiny CLT run cannot satisfy the variance
  // band, so a suitable seed exits with the band code.
  CHECK(run("clt --d 2 --r 3 --reps 21 --seed 1") == 2);
}
