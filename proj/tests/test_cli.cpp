#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tgl/cli.hpp"

using namespace tgl;
using Json = nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(TGL_FIXTURE_DIR) + "/" + name; }

CommandResult run(std::vector<std::string> args) { return run_cli(args); }

Json run_json(std::vector<std::string> args, int expected = exit_ok) {
  auto r = run_cli(args);
  INFO(r.err);
  CHECK(r.exit_code == expected);
  return Json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("tgl_cli_test_" + name);
  std::ofstream(p) << content;
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("analyze") {
  auto j = run_json({"analyze", fixture("example_2_1_E.json")});
  CHECK(j["spectral_radius"].get<double>() == doctest::Approx(std::cbrt(4.0)).epsilon(1e-9));
  CHECK(j["sinks"].empty());
  CHECK(j["sources"].empty());
  std::size_t nontrivial = 0;
  for (const auto& c : j["components"]) nontrivial += c["vertices"].size() > 1 ? 1 : 0;
  CHECK(nontrivial == 1);

  auto k = run_json({"analyze", fixture("example_3_7_E.json")});
  CHECK(k["sinks"] == Json::array({"u", "v"}));
  CHECK(k["spectral_radius"].get<double>() == 0.0);
  CHECK(k["log_spectral_radius"] == "-inf");

  auto p = temp_file("empty.json", R"({"vertices":["a","b"],"edges":[]})");
  auto e = run_json({"analyze", p.string()});
  CHECK(e["spectral_radius"].get<double>() == 0.0);
  CHECK(e["components"].size() == 2);
}

TEST_CASE("input errors carry context and exit code 2") {
  auto p = temp_file("broken.json", "{\"vertices\": [\"a\",\n  \"b\" \"c\"]}");
  auto r = run({"analyze", p.string()});
  CHECK(r.exit_code == exit_usage);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"analyze", "/nonexistent/graph.json"}).exit_code == exit_usage);
  auto d = temp_file("dangling.json", R"({"vertices":["a"],"edges":[{"id":"e","src":"a","rng":"z"}]})");
  auto dr = run({"analyze", d.string()});
  CHECK(dr.exit_code == exit_usage);
  CHECK(dr.err.find("dangling_endpoint") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).exit_code == exit_usage);
  CHECK(run({"frobnicate"}).exit_code == exit_usage);
  CHECK(run({"kms", fixture("example_3_7_E.json"), "--x", "3/2"}).exit_code == exit_usage);
  CHECK(run({"kms", fixture("example_3_7_E.json"), "--x", "half"}).exit_code == exit_usage);
  CHECK(run({"kms", fixture("example_2_1_E.json"), "--beta-step", "0"}).exit_code == exit_usage);
  CHECK(run({"check", fixture("example_3_7_E.json"), "--L", "1"}).exit_code == exit_usage);
  CHECK(run({"reconstruct", fixture("example_3_7_E.json"), "--variant", "z"}).exit_code == exit_usage);
  CHECK(run({"counterexample", "4.2"}).exit_code == exit_usage);
  CHECK(run({"--help"}).exit_code == exit_ok);
}

TEST_CASE("kms at a fixed x") {
  auto j = run_json({"kms", fixture("example_3_7_E.json"), "--x", "1/2"});
  REQUIRE(j["states"].size() == 3);
  std::map<std::string, std::string> z;
  for (const auto& s : j["states"]) z[s["vertex"]] = s["partition"];
  CHECK(z["w"] == "2/1");
  CHECK(z["u"] == "1/1");
  CHECK(z["v"] == "1/1");
  CHECK(j["states"][2]["values"]["q_u"] == "1/2");
  CHECK(j["unital"] == true);

  auto r = run({"kms", fixture("example_2_1_E.json"), "--x", "2/3"});
  CHECK(r.exit_code == exit_supercritical);
  CHECK(r.err.find("x ≥ 1/ρ(A_E)") != std::string::npos);
}

TEST_CASE("kms profile csv") {
  auto r = run({"kms", fixture("example_2_1_E.json"), "--beta-start", "0", "--beta-stop", "1", "--beta-step", "0.05"});
  CHECK(r.exit_code == exit_ok);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"beta", "count", "kind", "critical"});
  std::vector<double> flagged;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    if (rows[i][3] == "1") flagged.push_back(std::stod(rows[i][0]));
    CHECK((rows[i][2] == "exact" || rows[i][2] == "upper-bound"));
  }
  REQUIRE(flagged.size() == 2);
  double crit = std::log(4.0) / 3.0;
  CHECK(flagged[0] < crit);
  CHECK(crit < flagged[1]);
  CHECK(r.err.find("critical beta in") != std::string::npos);

  auto acyclic = run({"kms", fixture("example_3_7_E.json")});
  CHECK(acyclic.exit_code == exit_ok);
  CHECK(acyclic.err.find("stabilized everywhere") != std::string::npos);
}

TEST_CASE("reconstruct") {
  auto m = run_json({"reconstruct", fixture("example_3_7_F.json"), "--variant", "m"});
  CHECK(m["reference_iso"]["found"] == true);
  CHECK(m["params"]["seed"] == 42);
  CHECK(m["params"]["L"] == 4);

  auto k = run({"reconstruct", fixture("example_3_7_F.json"), "--variant", "kappa"});
  CHECK(k.exit_code == exit_sinks_present);
  CHECK(k.err.find("sinks") != std::string::npos);

  auto s = run_json({"reconstruct", "--variant", "m", "--scramble", "example21"});
  CHECK(s["reference_iso"]["found"] == true);
  std::size_t twos = 0;
  for (const auto& row : s["N"])
    for (const auto& n : row) twos += n.get<int>() == 2 ? 1 : 0;
  CHECK(twos == 1);

  auto kr = run_json({"reconstruct", fixture("example_2_1_E.json"), "--variant", "kappa", "--L", "3"});
  CHECK(kr["reference_iso"]["found"] == true);
}

TEST_CASE("counterexample") {
  auto a = run_json({"counterexample", "2.1"});
  CHECK(a["checks"].size() == 5);
  for (const auto& c : a["checks"]) CHECK(c["passed"] == true);
  auto b = run({"counterexample", "3.7", "--human"});
  CHECK(b.exit_code == exit_ok);
  CHECK(b.out.find("PASS m_membership_fails") != std::string::npos);
  CHECK(b.out.find("FAIL") == std::string::npos);
}

TEST_CASE("check") {
  auto j = run_json({"check", fixture("example_2_1_E.json"), "--L", "3"});
  CHECK(j["passed"] == true);
  CHECK(j["tck"]["isometries"] == true);
  for (const auto& row : j["corner_dimensions"]) CHECK(row["equal"] == true);
  CHECK(j["corner_dimensions"].size() == 6 * 3);

  auto tiny = run({"check", fixture("example_2_1_E.json"), "--L", "2", "--n", "2"});
  CHECK(tiny.exit_code == exit_usage);
  CHECK(tiny.err.find("truncation too small") != std::string::npos);

  auto d = run_json({"check", fixture("example_3_7_E.json"), "--L", "2", "--dump"});
  CHECK(d["operators"]["t"]["e"]["rows"].size() == 1);
  CHECK(d["operators"]["t"]["e"]["vals"][0] == "1/1");

  auto h = run({"check", fixture("example_3_7_E.json"), "--human"});
  CHECK(h.out.find("TCK relations: pass") != std::string::npos);
}

TEST_CASE("output is deterministic and --out writes the report") {
  std::vector<std::string> args{"reconstruct", fixture("example_2_1_F.json"), "--seed", "7", "--L", "3"};
  auto first = run(args);
  auto second = run(args);
  CHECK(first.out == second.out);
  CHECK_FALSE(first.out.empty());

  auto path = std::filesystem::temp_directory_path() / "tgl_cli_test_out.json";
  std::filesystem::remove(path);
  auto with_out = args;
  with_out.push_back("--out");
  with_out.push_back(path.string());
  auto r = run(with_out);
  CHECK(r.exit_code == exit_ok);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == first.out);
}
