#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
  json report;  // first stdout line when it parses as JSON
};

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "pptp-cli-tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out_path = tmp_dir() / "stdout.txt";
  const fs::path err_path = tmp_dir() / "stderr.txt";
  const std::string cmd = std::string(PPTP_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  const auto eol = r.out.find('\n');
  const std::string first = r.out.substr(0, eol);
  if (!first.empty() && first.front() == '{') {
    r.report = json::parse(first, nullptr, false);
  }
  return r;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << content;
  return p;
}

const char* kSingleCustomer = R"({
  "name": "single",
  "nodes": [
    {"id": 0, "parent": null, "kind": "junction"},
    {"id": 1, "parent": 0, "edge_cost": 4, "kind": "customer", "prize": 6, "prob": 0.5}
  ]
})";

const char* kJunctionsOnly = R"({
  "name": "empty-run",
  "nodes": [
    {"id": 0, "parent": null, "kind": "junction"},
    {"id": 1, "parent": 0, "edge_cost": 2, "kind": "junction"}
  ]
})";

const char* kBadProb = R"({
  "name": "bad",
  "nodes": [
    {"id": 0, "parent": null, "kind": "junction"},
    {"id": 1, "parent": 0, "edge_cost": 2, "kind": "customer", "prize": 3, "prob": 0}
  ]
})";

}  // namespace

TEST_CASE("cli: gen, check, solve, oracle and simulate agree end to end") {
  const fs::path inst = tmp_dir() / "gen.json";
  const auto gen = run_cli("gen --nodes 14 --seed 11 --output " + inst.string());
  REQUIRE(gen.code == 0);
  CHECK(gen.report["command"] == "gen");
  CHECK(gen.report["nodes"] == 14);

  const auto check = run_cli("check " + inst.string());
  CHECK(check.code == 0);
  CHECK(check.report["valid"] == true);

  const auto solved = run_cli("solve " + inst.string());
  REQUIRE(solved.code == 0);
  const auto oracle = run_cli("oracle " + inst.string());
  REQUIRE(oracle.code == 0);
  CHECK(solved.report["selected"] == oracle.report["maximal_optimal_set"]);
  CHECK(std::abs(solved.report["expected_profit"].get<double>() -
                 oracle.report["best_profit"].get<double>()) <= 1e-9);

  const auto sim1 = run_cli("simulate " + inst.string() + " --set solve --samples 20000 --seed 3");
  const auto sim2 = run_cli("simulate " + inst.string() + " --set solve --samples 20000 --seed 3");
  REQUIRE(sim1.code == 0);
  json a = sim1.report, b = sim2.report;
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a == b);  // fixed seed, identical estimate
  CHECK(sim1.report["set"] == solved.report["selected"]);
  CHECK(sim1.report["gap_sigma"].get<double>() < 6.0);
}

TEST_CASE("cli: solve reports the worked single-customer numbers") {
  const fs::path p = write_file("single.json", kSingleCustomer);
  const auto r = run_cli("solve " + p.string());
  REQUIRE(r.code == 0);
  CHECK(r.report["instance_name"] == "single");
  CHECK(r.report["selected"] == json::array({1}));
  CHECK(r.report["expected_profit"].get<double>() == 1.0);
  CHECK(r.report["expected_revenue"].get<double>() == 3.0);
  CHECK(r.report["expected_cost"].get<double>() == 2.0);
  CHECK(r.report["wall_time_ms"].get<double>() >= 0.0);

  const auto tsv = run_cli("solve " + p.string() + " --envelope");
  REQUIRE(tsv.code == 0);
  CHECK(tsv.out.find("\nd_ref=0\n") != std::string::npos);
  CHECK(tsv.out.find("0\t0\t0.5\t1\t1\n") != std::string::npos);

  const auto with_json = run_cli("solve " + p.string() + " --envelope-json");
  REQUIRE(with_json.code == 0);
  const auto& envelope = with_json.report["envelope"];
  REQUIRE(envelope.size() == 1);
  CHECK(envelope[0]["slope"].get<double>() == 0.5);
  CHECK(envelope[0]["added"] == json::array({1}));
}

TEST_CASE("cli: junction-only instance yields the empty plan") {
  const fs::path p = write_file("junctions.json", kJunctionsOnly);
  const auto r = run_cli("solve " + p.string());
  REQUIRE(r.code == 0);
  CHECK(r.report["selected"] == json::array());
  CHECK(r.report["expected_profit"].get<double>() == 0.0);

  const auto o = run_cli("oracle " + p.string());
  CHECK(o.report["best_profit"].get<double>() == 0.0);
  CHECK(o.report["optima_count"] == 1);
}

TEST_CASE("cli: --output redirects the report") {
  const fs::path p = write_file("single2.json", kSingleCustomer);
  const fs::path out = tmp_dir() / "report.json";
  const auto r = run_cli("solve " + p.string() + " --output " + out.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const json report = json::parse(slurp(out));
  CHECK(report["selected"] == json::array({1}));
}

TEST_CASE("cli: validation failures exit with code 2 and name the nodes") {
  const fs::path p = write_file("bad.json", kBadProb);
  const auto check = run_cli("check " + p.string());
  CHECK(check.code == 2);
  CHECK(check.report["valid"] == false);
  REQUIRE(check.report["violations"].size() == 1);
  CHECK(check.report["violations"][0].get<std::string>().find("prob") !=
        std::string::npos);
  CHECK(check.err.find("node 1") != std::string::npos);

  const auto solve_bad = run_cli("solve " + p.string());
  CHECK(solve_bad.code == 2);
  CHECK(solve_bad.err.find("prob") != std::string::npos);

  const auto missing = run_cli("solve /nonexistent/file.json");
  CHECK(missing.code == 2);
  CHECK_FALSE(missing.err.empty());
}

TEST_CASE("cli: usage errors exit with code 1") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate x.json").code == 1);
  CHECK(run_cli("gen --seed 3").code == 1);  // missing required flags
  const fs::path p = write_file("single3.json", kSingleCustomer);
  CHECK(run_cli("simulate " + p.string() + " --set banana").code == 1);
}

TEST_CASE("cli: semantic argument errors exit with code 2") {
  const fs::path p = write_file("single4.json", kSingleCustomer);
  const auto junction_pick = run_cli("simulate " + p.string() + " --set 0");
  CHECK(junction_pick.code == 2);
  const auto stranger = run_cli("simulate " + p.string() + " --set 9");
  CHECK(stranger.code == 2);
}

TEST_CASE("cli: oracle refuses oversized enumeration with code 3") {
  const fs::path inst = tmp_dir() / "big.json";
  const auto gen = run_cli("gen --nodes 27 --seed 5 --junction-fraction 0 --output " +
                           inst.string());
  REQUIRE(gen.code == 0);
  REQUIRE(gen.report["customers"] == 26);
  const auto o = run_cli("oracle " + inst.string());
  CHECK(o.code == 3);
  CHECK(o.err.find("25") != std::string::npos);

  // The solver itself has no such limit.
  CHECK(run_cli("solve " + inst.string()).code == 0);
}

TEST_CASE("cli: simulate with an explicit empty set") {
  const fs::path p = write_file("single5.json", kSingleCustomer);
  const auto r = run_cli("simulate " + p.string() + " --set \"\" --samples 100 --seed 1");
  REQUIRE(r.code == 0);
  CHECK(r.report["set"] == json::array());
  CHECK(r.report["mean_profit"].get<double>() == 0.0);
  CHECK(r.report["std_error"].get<double>() == 0.0);
  CHECK(r.report["gap_sigma"].get<double>() == 0.0);
}
