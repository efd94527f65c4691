#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fqe/graph_io.hpp"
#include "fqe/lattice.hpp"
#include "fqe/presets.hpp"
#include "oracles.hpp"

using namespace fqe;

namespace {

std::vector<int> identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

PeriodicGraph zd_(int d) {
  PresetParams p;
  p.dim = d;
  return build_preset("zd", p);
}

}  // namespace

TEST_CASE("construction rejects malformed templates") {
  CHECK_THROWS_AS(PeriodicGraph(1, {"v"}, {0.0}, {{0, 1, {1}, 1}}), GraphError);
  CHECK_THROWS_AS(PeriodicGraph(1, {"v"}, {0.0}, {{0, 0, {1, 0}, 1}}), GraphError);
  CHECK_THROWS_AS(PeriodicGraph(1, {"v"}, {0.0}, {{0, 0, {1}, 0}}), GraphError);
  CHECK_THROWS_AS(PeriodicGraph(1, {"v"}, {0.0}, {{0, 0, {0}, 1}}), GraphError);
  CHECK_THROWS_AS(PeriodicGraph(1, {"v", "w"}, {0.0}, {}), GraphError);
}

TEST_CASE("duplicate templates merge into a multiplicity") {
  const PeriodicGraph g(1, {"v"}, {0.0}, {{0, 0, {1}, 1}, {0, 0, {1}, 1}, {0, 0, {-1}, 2}});
  REQUIRE(g.edges().size() == 2);
  for (const auto& e : g.edges()) CHECK(e.multiplicity == 2);
  CHECK(g.degree(0) == 4);
  CHECK(validate(g).symmetric);
}

TEST_CASE("asymmetric template sets are reported, not thrown") {
  const PeriodicGraph g(1, {"v"}, {0.0}, {{0, 0, {1}, 1}});
  const auto r = validate(g);
  CHECK_FALSE(r.symmetric);
  CHECK_FALSE(r.ok());
}

TEST_CASE("catalog graphs validate with the expected degrees and structure") {
  struct Expect {
    std::string name;
    int degree;
    bool bipartite;
  };
  for (const auto& e : std::vector<Expect>{{"zd", 2, true},
                                           {"triangular", 6, false},
                                           {"kings", 8, false},
                                           {"honeycomb", 3, true},
                                           {"ladder", 3, true},
                                           {"z_range_k", 4, false}}) {
    CAPTURE(e.name);
    const auto g = build_preset(e.name);
    const auto r = validate(g);
    CHECK(r.ok());
    CHECK(r.symmetric);
    CHECK(r.connectivity == Connectivity::connected);
    CHECK(r.regular);
    CHECK(r.degrees.front() == e.degree);
    REQUIRE(r.bipartite.has_value());
    CHECK(*r.bipartite == e.bipartite);
  }
  CHECK(*validate(zd_(2)).half_degree == 2);
  CHECK(*validate(build_preset("triangular")).half_degree == 3);
  CHECK(*validate(zd_(3)).half_degree == 3);
  CHECK(validate(zd_(3)).degrees.front() == 6);
}

TEST_CASE("range-2 chain is disconnected with cycle lattice index 2") {
  const auto g = build_preset("z-even-odd");
  const auto c = check_connectivity(g);
  CHECK(c.verdict == Connectivity::disconnected);
  CHECK(c.lattice_index == 2);
  CHECK_FALSE(validate(g).ok());
  const auto zc = check_connectivity(zd_(2));
  CHECK(zc.verdict == Connectivity::connected);
  CHECK(zc.lattice_index == 1);
}

TEST_CASE("two copies of Z inside one cell are disconnected") {
  const PeriodicGraph g(1, {"a", "b"}, {0.0, 0.0}, {{0, 0, {1}, 1}, {0, 0, {-1}, 1}, {1, 1, {1}, 1}, {1, 1, {-1}, 1}});
  CHECK(check_connectivity(g).verdict == Connectivity::disconnected);
}

TEST_CASE("cell index and coordinates are inverse") {
  for (int d : {1, 2, 3}) {
    const FiniteGraphModel m(zd_(d), 5);
    for (std::size_t c = 0; c < m.cells(); ++c) {
      CHECK(m.cell_index(m.cell_coords(c)) == c);
      CHECK(m.cell_coords(c) == oracle::coords(c, 5, d));
    }
    IntVec neg(d, -1);
    CHECK(m.cell_index(neg) == m.cells() - 1);
  }
}

TEST_CASE("finite factor graphs") {
  const auto c3 = FiniteGraph::cycle(3);
  CHECK_FALSE(c3.bipartite());
  CHECK(c3.connected());
  const auto p4 = FiniteGraph::path(4);
  CHECK(p4.bipartite());
  const Eigen::VectorXd sp = p4.spectrum();
  const double s5 = std::sqrt(5.0);
  Eigen::Vector4d expect((-1 - s5) / 2, (1 - s5) / 2, (s5 - 1) / 2, (1 + s5) / 2);
  CHECK((sp - expect).cwiseAbs().maxCoeff() < 1e-12);
  const auto prod = FiniteGraph::cartesian(c3, p4);
  CHECK(prod.size() == 12);
  CHECK(prod.edges().size() == 3 * 4 + 3 * 3);
  CHECK_THROWS_AS(FiniteGraph({"a", "b"}, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(FiniteGraph({"a", "b"}, {{0, 1}, {1, 0}}), GraphError);
}

TEST_CASE("products reproduce the catalog graphs") {
  const auto z = zd_(1);
  CHECK(same_templates(cartesian_product(z, FiniteGraph::path(2)), build_preset("ladder"), identity(2)));
  CHECK(same_templates(strong_product(z, FiniteGraph::path(2)), build_preset("z_box_p2"), identity(2)));
  CHECK(same_templates(strong_product(z, z), build_preset("kings"), identity(1)));
  CHECK_FALSE(same_templates(build_preset("ladder"), build_preset("z_box_p2"), identity(2)));
}

TEST_CASE("tensor product connectivity follows the odd-cycle criterion") {
  const auto z = zd_(1);
  CHECK_THROWS_AS(tensor_product(z, FiniteGraph::path(2)), GraphError);
  const auto t = tensor_product(z, FiniteGraph::cycle(3));
  CHECK(validate(t).connectivity == Connectivity::connected);
  const auto big = build_preset("z_tensor_c3p4");
  CHECK(big.cell_size() == 12);
  CHECK(validate(big).ok());
}

TEST_CASE("decoration glues a pendant copy at every vertex") {
  const auto g = build_preset("decorated_z_triangle");
  CHECK(g.cell_size() == 3);
  CHECK(g.degree(0) == 4);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 2);
  CHECK(validate(g).ok());
  CHECK_THROWS(decorate(zd_(1), FiniteGraph::cycle(3), 5));
}

TEST_CASE("graph spec JSON round trip and reverse completion") {
  for (const char* name : {"honeycomb", "z_box_p2", "decorated_z_triangle", "kings"}) {
    const auto g = build_preset(name);
    const auto back = graph_from_json(graph_to_json(g));
    CHECK(back.warnings.empty());
    CHECK(same_templates(g, back.graph, identity(g.cell_size())));
    CHECK(back.graph.labels() == g.labels());
  }
  const nlohmann::json spec = {{"dim", 1},
                               {"vertices", {{{"label", "a"}, {"Q", 0.5}}, {{"label", "b"}}}},
                               {"edges", {{{"src", "a"}, {"dst", "b"}, {"offset", {0}}},
                                          {{"src", 0}, {"dst", 0}, {"offset", {1}}},
                                          {{"src", "b"}, {"dst", "b"}, {"offset", {1}}}}}};
  const auto loaded = graph_from_json(spec);
  CHECK(loaded.warnings.size() == 3);
  CHECK(same_templates(loaded.graph,
                       PeriodicGraph(1, {"a", "b"}, {0.5, 0.0},
                                     {{0, 1, {0}, 1}, {1, 0, {0}, 1}, {0, 0, {1}, 1}, {0, 0, {-1}, 1},
                                      {1, 1, {1}, 1}, {1, 1, {-1}, 1}}),
                       identity(2)));
  CHECK(loaded.graph.potential()[0] == 0.5);
  nlohmann::json bad = spec;
  bad["edges"][0]["src"] = "zz";
  CHECK_THROWS_AS(graph_from_json(bad), GraphError);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json{{"dim", 1}}), GraphError);
}

TEST_CASE("preset names accept either separator") {
  CHECK(canonical_preset_name("z-box-p2") == "z_box_p2");
  CHECK(build_preset("z-box-p2").cell_size() == 2);
  CHECK_THROWS_AS(build_preset("no-such-graph"), GraphError);
  PresetParams p;
  p.potential = {1.0, 2.0, 3.0};
  CHECK(build_preset("z-periodic-potential", p).cell_size() == 3);
  p = {};
  p.range = 3;
  CHECK(build_preset("z_range_k", p).degree(0) == 6);
}
