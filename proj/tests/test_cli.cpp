#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fqe/cli.hpp"
#include "fqe/presets.hpp"
#include "fqe/scenarios.hpp"

using namespace fqe;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fqe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("presets lists the catalog") {
  const auto r = invoke({"presets"});
  CHECK(r.code == 0);
  for (const char* name : {"zd", "honeycomb", "z_box_p2", "decorated_z_triangle", "z_tensor_c3p4"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("qe-variance CSV and JSON") {
  const auto csv = invoke({"qe-variance", "--preset", "zd", "--dim", "1", "--N", "16,32", "--observable", "quarter",
                           "--basis", "dense"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("N,basis,observable,reference,members,V,sup_gap", 0) == 0);
  const auto js = invoke({"qe-variance", "--preset", "zd", "--dim", "1", "--N", "16,32", "--observable", "quarter",
                          "--basis", "dense", "--json"});
  REQUIRE(js.code == 0);
  const auto j = json::parse(js.out);
  CHECK(j["command"] == "qe-variance");
  CHECK(j["tool"] == "fqe");
  CHECK(j["config"]["basis"] == "dense");
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["variance"].get<double>() > 0.0);
}

TEST_CASE("reports are reproducible bit for bit") {
  const std::vector<std::string> args{"qe-variance", "--preset", "honeycomb", "--N", "6", "--basis", "random:4",
                                      "--observable", "random", "--reference", "opn-abar", "--json"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  auto ja = json::parse(a.out), jt = json::parse(invoke(threaded).out);
  CHECK(ja["results"] == jt["results"]);
}

TEST_CASE("check-assumption flags the tensor product") {
  const auto r = invoke({"check-assumption", "--preset", "z_tensor_c3p4", "--N", "8,16", "--json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["assumption_failure"] == true);
  for (const auto& rep : j["reports"]) CHECK(rep["sup_pair_fraction"].get<double>() == 1.0);
}

TEST_CASE("check-assumption on the cycle graph: root bound and split check") {
  const auto r = invoke({"check-assumption", "--preset", "zd", "--dim", "1", "--N", "8,16", "--alpha", "0.3",
                         "--json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["assumption_failure"] == false);
  CHECK(j["monotone_decay"] == true);
  CHECK(j.contains("root_bound"));
  CHECK(j.contains("charpoly_split"));
  CHECK(j["kronecker"]["zero_count"] == 2);
}

TEST_CASE("counterexample runs scenarios") {
  for (const auto& e : scenario_registry()) {
    if (e.name == "que-z2" || e.name == "correlator-z2") continue;  // slower; covered by acceptance
    CAPTURE(e.name);
    const auto r = invoke({"counterexample", e.name, "--json"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["result"]["passed"] == true);
  }
  CHECK(invoke({"counterexample", "no-such"}).code == 2);
}

TEST_CASE("output directory receives CSV and JSON") {
  const auto dir = std::filesystem::temp_directory_path() / "fqe_cli_test";
  std::filesystem::remove_all(dir);
  const auto r = invoke({"bands", "--preset", "honeycomb", "--grid", "8", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "bands.csv"));
  CHECK(std::filesystem::exists(dir / "bands.json"));
  std::ifstream in(dir / "bands.json");
  CHECK(json::parse(in)["command"] == "bands");
  std::filesystem::remove_all(dir);
}

TEST_CASE("observable specs") {
  const FiniteGraphModel m(build_preset("honeycomb"), 4);
  CHECK(make_observable("constant:2", m, 1).uniform_average() == cplx(2.0));
  CHECK(make_observable("half", m, 1).uniform_average() == cplx(0.5));
  CHECK(make_observable("sublattice:1,0", m, 1).uniform_average() == cplx(0.5));
  CHECK(make_observable("random", m, 3).values() == make_observable("random", m, 3).values());
  CHECK_THROWS(make_observable("sublattice:1", m, 1));
  CHECK_THROWS(make_observable("bogus", m, 1));
  CHECK(is_matrix_observable("nn:0"));
  CHECK(is_matrix_observable("hamiltonian"));
  CHECK_FALSE(is_matrix_observable("half"));
}

TEST_CASE("error exit codes") {
  auto check_error = [](const Result& r, int code) {
    CHECK(r.code == code);
    CHECK(r.out.empty());
    const auto j = json::parse(r.err.substr(r.err.find('{')));
    CHECK(j.contains("error"));
    CHECK(j.contains("message"));
  };
  check_error(invoke({"qe-variance", "--preset", "nope"}), 2);
  check_error(invoke({"qe-variance", "--preset", "zd", "--dim", "2", "--N", "300"}), 3);
  check_error(invoke({"qe-variance", "--preset", "z_even_odd", "--N", "8"}), 2);
  check_error(invoke({"qe-variance", "--preset", "zd", "--window", "50:60", "--N", "8"}), 2);
  check_error(invoke({"qe-variance", "--spec", "/nonexistent/graph.json"}), 2);
  CHECK(invoke({"bogus-command"}).code == 2);
}
