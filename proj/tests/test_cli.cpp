#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oscilab/io.hpp"

namespace {

int run(const std::string& args, const std::string& stdout_path = "cli_out.txt") {
  const std::string cmd = std::string(OSCILAB_CLI) + " " + args + " > " + stdout_path + " 2> cli_err.txt";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli gen writes a grid that reads back") {
  REQUIRE(run("gen --kind cosine_mix --d 2 --N 6 --seed 3 -o cli_grid.csv") == 0);
  const auto f = oscilab::io::load_grid("cli_grid.csv");
  CHECK(f.dim() == 2);
  CHECK(f.res() == 6);
  REQUIRE(run("gen --kind indicator --N 4 -p lo=0 -p hi=0.5") == 0);
  std::stringstream ss(slurp("cli_out.txt"));
  CHECK(oscilab::io::read_grid_csv(ss).values() == std::vector<double>{1, 1, 0, 0});
}

TEST_CASE("cli norm and garo emit JSON") {
  REQUIRE(run("gen --kind random_steps --N 12 --seed 2 -o cli_steps.csv") == 0);
  REQUIRE(run("norm -i cli_steps.csv --space lp:1 --space lp:2 --space weak:2") == 0);
  const auto n = nlohmann::json::parse(slurp("cli_out.txt"));
  CHECK(n["norms"].size() == 3);
  CHECK(n["norms"][0]["sharp"].get<double>() >= 0);
  REQUIRE(run("garo -i cli_steps.csv --space lp:1 --exact-small") == 0);
  const auto g = nlohmann::json::parse(slurp("cli_out.txt"));
  const auto& e = g["garo"][0];
  REQUIRE(!e["exact"].is_null());
  CHECK(e["lower"].get<double>() <= e["exact"].get<double>() + 1e-12);
  CHECK(e["exact"].get<double>() <= e["upper"].get<double>() + 1e-12);
}

TEST_CASE("cli maximal and kprofile") {
  REQUIRE(run("maximal --kind checkerboard --d 2 --N 4 --op hl") == 0);
  REQUIRE(run("maximal --kind cosine_mix --N 32 --op local --s 0.3 --profile -o cli_prof.csv") == 0);
  REQUIRE(run("kprofile --kind random_steps --N 8 --seed 4 -m BS -m LP -m L1Linf -t 0.25 -t 0.5 -t 1 -o cli_k.csv "
              "--json cli_k.json") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_k.json"));
  CHECK(j.size() == 3);
  std::ifstream in("cli_k.csv");
  CHECK(oscilab::io::read_kprofile_csv(in).size() == 3);
}

TEST_CASE("cli plot is byte deterministic") {
  REQUIRE(run("kprofile --kind cosine_mix --N 16 -o cli_plot.csv") == 0);
  REQUIRE(run("plot cli_plot.csv --title demo -o cli_a.svg") == 0);
  REQUIRE(run("plot cli_plot.csv --title demo -o cli_b.svg") == 0);
  const std::string a = slurp("cli_a.svg");
  CHECK(!a.empty());
  CHECK(a == slurp("cli_b.svg"));
}

TEST_CASE("cli verify writes a report") {
  REQUIRE(run("verify --suite morrey -o cli_report.json") == 0);
  const auto r = nlohmann::json::parse(slurp("cli_report.json"));
  CHECK(r["schema_version"] == 1);
  CHECK(r["suite"] == "morrey");
  CHECK(r["passed"] == true);
  for (const auto& c : r["checks"]) {
    CHECK(c.contains("paper_anchor"));
    CHECK(c.contains("measured_constant"));
  }
}

TEST_CASE("cli exit codes") {
  CHECK(run("norm") == 2);
  CHECK(run("norm -i does_not_exist.csv") == 2);
  CHECK(run("verify --suite nosuch") == 2);
  CHECK(run("kprofile --kind constant --N 4 -m XYZ") == 2);
  CHECK(run("") != 0);
  CHECK(run("--version") == 0);
}
