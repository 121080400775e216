#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "isingops/suites.hpp"

using namespace isingops;
namespace fs = std::filesystem;

namespace {

int run_tool(const std::string& args) {
  const std::string cmd = std::string(ISINGOPS_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("isingops_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const std::string kConfigs = std::string(ISINGOPS_SOURCE_DIR) + "/configs/";

}  // namespace

TEST_CASE("config parsing: JSON and key = value agree") {
  const RunConfig a = parse_config_text(R"({"grid": {"nodes": 24}, "seed": 5, "locality": {"top_sector": 1}})");
  const RunConfig b = parse_config_text("grid.nodes = 24\nseed = 5  # comment\nlocality.top_sector = 1\n");
  CHECK(a.nodes == 24);
  CHECK(a.seed == 5);
  CHECK(a.to_json() == b.to_json());
  CHECK(parse_config_text("{}").nodes == 32);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("{\"grid\": "), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("{\"bogus\": 1}"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("{\"grid\": {\"nodes\": 4}}"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("{\"nmax\": \"four\"}"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("grid.nodes 32\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("{\"tolerances\": {\"algebraic\": -1}}"), InvalidArgument);
}

TEST_CASE("CLI: verify-modd on defaults exits 0 and writes JSON") {
  const fs::path out = scratch("modd");
  CHECK(run_tool("verify-modd --config " + kConfigs + "default.json --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "verify-modd.json"));
  CHECK(j.at("suite") == "verify-modd");
  REQUIRE(j.at("checks").is_array());
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("paper_ref"));
    CHECK(c.contains("status"));
    CHECK(c.contains("residual"));
    CHECK(c.contains("tolerance"));
  }
  CHECK(j.at("metadata").at("seed") == 1);
  CHECK(fs::exists(out / "verify-modd_pairings.csv"));
}

TEST_CASE("CLI: malformed config and bad arguments exit 2") {
  const fs::path dir = scratch("bad");
  {
    std::ofstream os(dir / "bad.json");
    os << "{ \"grid\": { \"nodes\": ";
  }
  CHECK(run_tool("verify-modd --config " + (dir / "bad.json").string() + " --out " + dir.string()) == 2);
  CHECK(run_tool("verify-modd --config " + (dir / "missing.json").string()) == 2);
  CHECK(run_tool("no-such-suite --config " + kConfigs + "default.json") == 2);
  CHECK(run_tool("verify-modd") == 2);
}

TEST_CASE("CLI: reruns are byte-identical") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run_tool("verify-laurent --config " + kConfigs + "quick.conf --out " + a.string()) == 0);
  REQUIRE(run_tool("verify-laurent --config " + kConfigs + "quick.conf --out " + b.string()) == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files >= 2);
  // a different seed changes the sampled residuals
  const fs::path c = scratch("det_c");
  REQUIRE(run_tool("verify-laurent --config " + kConfigs + "quick.conf --seed 99 --out " + c.string()) == 0);
  CHECK(slurp(a / "verify-laurent.json") != slurp(c / "verify-laurent.json"));
}

TEST_CASE("CLI: overlapping f as the wedge test function is flagged (exit 1)") {
  const fs::path out = scratch("neg");
  CHECK(run_tool("verify-locality --config " + kConfigs + "negative_control.json --out " + out.string()) == 1);
  const auto j = nlohmann::json::parse(slurp(out / "verify-locality.json"));
  bool geometry_failed = false, commutator_failed = false;
  for (const auto& c : j.at("checks")) {
    const std::string name = c.at("name");
    if (name.find("wedge_geometry") != std::string::npos && c.at("status") == "fail") geometry_failed = true;
    if (name.find("spacelike_commutator") != std::string::npos && c.at("status") == "fail") commutator_failed = true;
  }
  CHECK(geometry_failed);
  CHECK(commutator_failed);
  CHECK(fs::exists(out / "verify-locality_commutator.csv"));
}
