#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgp/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace bgp;

namespace {

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string out_path = "/tmp/bgp_cli_out.txt";
  const std::string command =
      std::string(BGP_CLI_PATH) + " " + args + " >" + out_path + " 2>&1";
  const int status = std::system(command.c_str());
  if (output) {
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    *output = ss.str();
  }
  std::remove(out_path.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config text parses comments, blanks and whitespace") {
  const auto config = Config::from_string(
      "# leading comment\n"
      "\n"
      "  n_rows = 16  # trailing comment\n"
      "name=desk run\n");
  CHECK(config.get_int("n_rows", 0) == 16);
  CHECK(config.get_string("name", "") == "desk run");
  CHECK_FALSE(config.has("missing"));
  CHECK(config.get_double("missing", 2.5) == 2.5);
}

TEST_CASE("malformed config lines are rejected with the line number") {
  CHECK_THROWS_WITH_AS(Config::from_string("a=1\nnot a pair\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_AS(Config::from_string("=value\n"), std::runtime_error);
}

TEST_CASE("typed getters validate their values") {
  const auto config = Config::from_string(
      "f=1.5\ni=7\nu=123\nb=yes\nlist=1, 2,3\nwords=bomp, omp\nbad=zzz\n");
  CHECK(config.get_double("f", 0) == 1.5);
  CHECK(config.get_int("i", 0) == 7);
  CHECK(config.get_u64("u", 0) == 123);
  CHECK(config.get_bool("b", false));
  CHECK(config.get_int_list("list", {}) == std::vector<int>{1, 2, 3});
  CHECK(config.get_string_list("words", {}) ==
        std::vector<std::string>{"bomp", "omp"});
  CHECK_THROWS_AS(config.get_double("bad", 0), std::runtime_error);
  CHECK_THROWS_AS(config.get_int("f", 0), std::runtime_error);
  CHECK_THROWS_AS(config.get_bool("i", false), std::runtime_error);
}

TEST_CASE("overrides replace file values") {
  auto config = Config::from_string("trials=10\n");
  config.apply_override("trials=25");
  config.apply_override("extra=1");
  CHECK(config.get_int("trials", 0) == 25);
  CHECK(config.get_int("extra", 0) == 1);
  CHECK_THROWS_AS(config.apply_override("no_equals"), std::runtime_error);
}

TEST_CASE("serialized config round trips") {
  auto config = Config::from_string("b=2\na=1\n");
  CHECK(config.serialize() == "a=1\nb=2\n");
  const auto back = Config::from_string(config.serialize());
  CHECK(back.entries() == config.entries());
}

TEST_CASE("coefficient variance accepts the infinity sentinel") {
  CHECK(std::isinf(parse_sigma2_x("inf")));
  CHECK(std::isinf(parse_sigma2_x("Infinity")));
  CHECK(parse_sigma2_x("2.5") == 2.5);
  CHECK_THROWS_AS(parse_sigma2_x("huge"), std::runtime_error);
}

TEST_CASE("cli generates data and solves it") {
  REQUIRE(run_cli("gen-data --n 16 --m 32 --k 4 --seed 9 "
                  "--out /tmp/bgp_cli_inst") == 0);
  std::string output;
  const int status = run_cli(
      "solve --dict /tmp/bgp_cli_inst_dict.csv --y /tmp/bgp_cli_inst_y.csv "
      "--algo bomp --sigma2-w 1e-4 --p 0.125 --out /tmp/bgp_cli_sol",
      &output);
  CHECK(status == 0);
  CHECK(output.find("\"stop_reason\"") != std::string::npos);
  for (const char* suffix :
       {"_dict.csv", "_y.csv", "_x.csv", "_s.csv"}) {
    std::remove(("/tmp/bgp_cli_inst" + std::string(suffix)).c_str());
  }
  std::remove("/tmp/bgp_cli_sol_x.csv");
  std::remove("/tmp/bgp_cli_sol_s.csv");
}

TEST_CASE("cli rejects usage errors with exit code 2") {
  CHECK(run_cli("solve --y /tmp/missing.csv") == 2);  // missing --dict
  CHECK(run_cli("solve --dict /tmp/definitely_missing_dict.csv "
                "--y /tmp/missing.csv") == 2);
  CHECK(run_cli("sweep --set n_rows=0 --set trials=0 "
                "--out /tmp/bgp_cli_sweep.csv") == 2);
  CHECK(run_cli("nonsense") == 2);
  std::string output;
  run_cli("sweep --set algorithms=cosamp --out /tmp/bgp_cli_sweep.csv",
          &output);
  CHECK(output.find("valid:") != std::string::npos);
}

TEST_CASE("cli runtime failures exit with code 1") {
  // Valid config, but the output path cannot be created.
  CHECK(run_cli("sweep --set n_rows=8 --set n_cols=12 --set k_grid=2 "
                "--set trials=2 --set algorithms=omp "
                "--out /tmp/no_such_dir_bgp/x.csv") == 1);
}

TEST_CASE("cli sweep writes the csv it reports") {
  std::string output;
  const int status = run_cli(
      "sweep --set n_rows=12 --set n_cols=24 --set k_grid=3 "
      "--set trials=4 --set algorithms=omp --set deterministic_output=true "
      "--out /tmp/bgp_cli_sweep.csv",
      &output);
  REQUIRE(status == 0);
  std::ifstream in("/tmp/bgp_cli_sweep.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("sweep_var") == 0);
  std::remove("/tmp/bgp_cli_sweep.csv");
}

TEST_CASE("the seed environment variable overrides the configured seed") {
  const std::string base =
      " sweep --set n_rows=12 --set n_cols=24 --set k_grid=3 --set trials=2 "
      "--set algorithms=omp --set master_seed=7 --out /tmp/bgp_cli_env.csv";
  std::string with_env;
  const std::string command = "BGPURSUIT_SEED=99 " + std::string(BGP_CLI_PATH) +
                              base + " >/tmp/bgp_env_out.txt 2>&1";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  std::ifstream in("/tmp/bgp_env_out.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  with_env = ss.str();
  CHECK(with_env.find("\"master_seed\": 99") != std::string::npos);
  std::remove("/tmp/bgp_cli_env.csv");
  std::remove("/tmp/bgp_env_out.txt");
}
