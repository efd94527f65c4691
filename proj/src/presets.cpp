#include "fqe/presets.hpp"

#include <algorithm>
#include <cmath>

namespace fqe {

namespace {

IntVec unit(int d, int i, int sign = 1) {
  IntVec v(d, 0);
  v[i] = sign;
  return v;
}

void add_pair(std::vector<EdgeTemplate>& edges, int src, int dst, IntVec offset) {
  IntVec neg(offset);
  for (int& o : neg) o = -o;
  edges.push_back({src, dst, offset, 1});
  edges.push_back({dst, src, neg, 1});
}

Embedding square_embedding(int d, int nu) {
  Embedding e;
  for (int i = 0; i < d; ++i) {
    std::vector<double> b(d, 0.0);
    b[i] = 1.0;
    e.basis.push_back(b);
  }
  for (int n = 0; n < nu; ++n) e.positions.push_back(std::vector<double>(d, 0.0));
  return e;
}

PeriodicGraph zd(int d) {
  if (d < 1) throw GraphError("zd: dimension must be at least 1");
  std::vector<EdgeTemplate> edges;
  for (int i = 0; i < d; ++i) add_pair(edges, 0, 0, unit(d, i));
  return PeriodicGraph(d, {"v"}, {0.0}, edges, square_embedding(d, 1));
}

PeriodicGraph triangular() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 0, {1, 0});
  add_pair(edges, 0, 0, {0, 1});
  add_pair(edges, 0, 0, {1, 1});
  const double h = std::sqrt(3.0) / 2.0;
  return PeriodicGraph(2, {"v"}, {0.0}, edges, Embedding{{{1.0, 0.0}, {-0.5, h}}, {{0.0, 0.0}}});
}

PeriodicGraph kings() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 0, {1, 0});
  add_pair(edges, 0, 0, {0, 1});
  add_pair(edges, 0, 0, {1, 1});
  add_pair(edges, 0, 0, {1, -1});
  return PeriodicGraph(2, {"v"}, {0.0}, edges, square_embedding(2, 1));
}

PeriodicGraph honeycomb() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 1, {0, 0});
  add_pair(edges, 0, 1, {-1, 0});
  add_pair(edges, 0, 1, {0, -1});
  const double h = std::sqrt(3.0) / 2.0;
  Embedding e{{{1.0, 0.0}, {0.5, h}}, {{0.0, 0.0}, {0.5, h / 3.0}}};
  return PeriodicGraph(2, {"v1", "v2"}, {0.0, 0.0}, edges, e);
}

PeriodicGraph z_range(int k) {
  if (k < 1) throw GraphError("z_range_k: k must be at least 1");
  std::vector<EdgeTemplate> edges;
  for (int j = 1; j <= k; ++j) add_pair(edges, 0, 0, {j});
  return PeriodicGraph(1, {"v"}, {0.0}, edges, square_embedding(1, 1));
}

PeriodicGraph z_periodic_potential(const std::vector<double>& q) {
  const int nu = static_cast<int>(q.size());
  if (nu < 1) throw GraphError("z_periodic_potential: need at least one potential value");
  std::vector<EdgeTemplate> edges;
  std::vector<std::string> labels;
  for (int n = 0; n < nu; ++n) labels.push_back("v" + std::to_string(n + 1));
  if (nu == 1) {
    add_pair(edges, 0, 0, {1});
  } else {
    for (int n = 0; n + 1 < nu; ++n) add_pair(edges, n, n + 1, {0});
    add_pair(edges, 0, nu - 1, {-1});
  }
  Embedding e{{{static_cast<double>(nu)}}, {}};
  for (int n = 0; n < nu; ++n) e.positions.push_back({static_cast<double>(n)});
  return PeriodicGraph(1, labels, q, edges, e);
}

PeriodicGraph ladder() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 1, {0});
  add_pair(edges, 0, 0, {1});
  add_pair(edges, 1, 1, {1});
  return PeriodicGraph(1, {"a", "b"}, {0.0, 0.0}, edges, Embedding{{{1.0}}, {{0.0}, {0.0}}});
}

PeriodicGraph z_box_p2() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 1, {0});
  add_pair(edges, 0, 0, {1});
  add_pair(edges, 1, 1, {1});
  add_pair(edges, 0, 1, {1});
  add_pair(edges, 1, 0, {1});
  return PeriodicGraph(1, {"a", "b"}, {0.0, 0.0}, edges, Embedding{{{1.0}}, {{0.0}, {0.0}}});
}

PeriodicGraph z_even_odd() {
  std::vector<EdgeTemplate> edges;
  add_pair(edges, 0, 0, {2});
  return PeriodicGraph(1, {"v"}, {0.0}, edges, square_embedding(1, 1));
}

}  // namespace

std::string canonical_preset_name(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

PeriodicGraph build_preset(std::string_view raw_name, const PresetParams& params) {
  const std::string name = canonical_preset_name(raw_name);
  if (name == "zd") return zd(params.dim.value_or(1));
  if (name == "triangular") return triangular();
  if (name == "kings") return kings();
  if (name == "honeycomb") return honeycomb();
  if (name == "z_range_k" || name == "z_range") return z_range(params.range.value_or(2));
  if (name == "z_periodic_potential") {
    return z_periodic_potential(params.potential.empty() ? std::vector<double>{0.0, 0.0} : params.potential);
  }
  if (name == "ladder") return ladder();
  if (name == "z_box_p2") return z_box_p2();
  if (name == "decorated_z_triangle" || name == "decorated_z") return decorate(zd(1), FiniteGraph::cycle(3), 0);
  if (name == "z_tensor_c3p4" || name == "tensor") {
    return tensor_product(zd(1), FiniteGraph::cartesian(FiniteGraph::cycle(3), FiniteGraph::path(4)));
  }
  if (name == "z_even_odd") return z_even_odd();
  throw GraphError("unknown preset '" + std::string(raw_name) + "'");
}

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry = {
      {"zd", "1", "dim", "dim", "dim (default 1)", "hypercubic lattice Z^d"},
      {"triangular", "1", "2", "3", "-", "triangular lattice, neighbours (1,0),(0,1),(1,1)"},
      {"kings", "1", "2", "4", "-", "king's graph, neighbours (1,0),(0,1),(1,1),(1,-1)"},
      {"honeycomb", "2", "2", "-", "-", "hexagonal lattice; bands meet at 0 at the Dirac points"},
      {"z_range_k", "1", "1", "k", "k >= 1 (default 2)", "Z with edges up to distance k"},
      {"z_periodic_potential", "len(Q)", "1", "1 if len(Q)=1", "Q list (default 0,0)",
       "Z with a periodic potential of period len(Q)"},
      {"ladder", "2", "1", "-", "-", "Z cartesian P_2"},
      {"z_box_p2", "2", "1", "-", "-", "Z strong P_2; flat band at -1"},
      {"decorated_z_triangle", "3", "1", "-", "-", "Z with a triangle glued at every vertex; flat band at -1"},
      {"z_tensor_c3p4", "12", "1", "-", "-", "Z tensor (C_3 cartesian P_4); coincident bands at shift 1/2"},
      {"z_even_odd", "1", "1", "1", "-", "Z with edges of length 2; disconnected"},
  };
  return registry;
}

}  // namespace fqe
