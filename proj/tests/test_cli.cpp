#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "cpphase/cli.hpp"
#include "cpphase/error.hpp"
#include "cpphase/graph.hpp"
#include "cpphase/models.hpp"
#include "cpphase/output.hpp"

using namespace cpphase;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto p = fs::temp_directory_path() / "cpphase_cli_test";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("generate round-trips through the edge-list file") {
  const auto g = (scratch() / "g.edges").string();
  const auto r = run_cli({"generate", "--model", "lrp", "--delta", "2.5", "--window", "10001", "--seed", "7", "--out", g});
  REQUIRE(r.code == 0);
  const auto graph = load_edge_list(g);
  CHECK(graph.size() == 10001);
  std::ostringstream a;
  write_edge_list(graph, a);
  const auto again = (scratch() / "g2.edges").string();
  save_edge_list(graph, again);
  CHECK(load_edge_list(again) == graph);
  const auto manifest = nlohmann::json::parse(read_file(g + ".manifest.json"));
  CHECK(manifest["subcommand"] == "generate");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["rng"]["name"] == "philox4x32-10");
}

TEST_CASE("check-conditions reports the harmonic divergence") {
  const auto r = run_cli({"check-conditions", "--model", "lrp", "--delta", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["reports"][1]["name"] == "sum k phi(k)");
  CHECK(j["reports"][1]["verdict"] == "violated");
  CHECK(j["hypothesis"] == "violated");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"generate", "--bogus-flag"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"simulate", "--model", "lrp", "--lambda", "1", "--mode", "annealed", "--replicas", "10"}).code == 2);
  CHECK(run_cli({"check-conditions", "--model", "lrp", "--delta", "0.5"}).code == 2);
  // a path of 5 vertices has too few blocks
  CHECK(run_cli({"cuts", "--model", "path", "--window", "5"}).code == 3);
  CHECK(run_cli({"star", "--leaves", "100000", "--horizon", "1e6"}).code == 4);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("rwre rerun is byte-identical") {
  const auto g = (scratch() / "rw.edges").string();
  REQUIRE(run_cli({"generate", "--model", "lrp", "--window", "3001", "--seed", "3", "--out", g}).code == 0);
  const auto a = run_cli({"rwre", "--graph", g, "--lambda", "0.05", "--replicas", "1000", "--seed", "1"});
  const auto b = run_cli({"rwre", "--graph", g, "--lambda", "0.05", "--replicas", "1000", "--seed", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["verdict"] == "recurrent_indicated");
}

TEST_CASE("empty sweep is a header-only CSV") {
  const auto r = run_cli({"sweep", "--model", "path", "--mode", "annealed", "--lambda-grid", "", "--window", "101", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::size_t data = 0, header = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++(header == 0 ? header : data);
  }
  CHECK(header == 1);
  CHECK(data == 0);
}

TEST_CASE("writes surface the path on failure") {
  try {
    write_file("/nonexistent/dir/out.json", "{}");
    FAIL("no exception");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.json") != std::string::npos);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0 / 0.0) == "inf");
}
