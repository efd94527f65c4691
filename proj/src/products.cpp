#include <string>

#include "fqe/lattice.hpp"

namespace fqe {

namespace {

void require_single_vertex_cell(const PeriodicGraph& g, const char* op) {
  if (g.cell_size() != 1)
    throw GraphError(std::string(op) + " requires a periodic factor with one vertex per cell");
}

std::optional<Embedding> basis_only(const PeriodicGraph& g) {
  if (!g.embedding()) return std::nullopt;
  return Embedding{g.embedding()->basis, {}};
}

std::vector<std::string> layer_labels(const FiniteGraph& f) { return f.labels(); }

std::vector<double> layer_potential(const PeriodicGraph& g, const FiniteGraph& f) {
  std::vector<double> q(f.size());
  for (int v = 0; v < f.size(); ++v) q[v] = g.potential()[0] + f.potential()[v];
  return q;
}

void add_layer_edges(const FiniteGraph& f, int dim, std::vector<EdgeTemplate>& out) {
  for (auto [a, b] : f.edges()) {
    out.push_back({a, b, IntVec(dim, 0), 1});
    out.push_back({b, a, IntVec(dim, 0), 1});
  }
}

void add_tensor_edges(const PeriodicGraph& g, const FiniteGraph& f, std::vector<EdgeTemplate>& out) {
  for (const auto& e : g.edges()) {
    for (auto [a, b] : f.edges()) {
      out.push_back({a, b, e.offset, e.multiplicity});
      out.push_back({b, a, e.offset, e.multiplicity});
    }
  }
}

}  // namespace

PeriodicGraph cartesian_product(const PeriodicGraph& g, const FiniteGraph& f) {
  require_single_vertex_cell(g, "cartesian_product");
  std::vector<EdgeTemplate> edges;
  add_layer_edges(f, g.dim(), edges);
  for (const auto& e : g.edges())
    for (int v = 0; v < f.size(); ++v) edges.push_back({v, v, e.offset, e.multiplicity});
  return PeriodicGraph(g.dim(), layer_labels(f), layer_potential(g, f), edges, basis_only(g));
}

PeriodicGraph tensor_product(const PeriodicGraph& g, const FiniteGraph& f) {
  require_single_vertex_cell(g, "tensor_product");
  std::vector<EdgeTemplate> edges;
  add_tensor_edges(g, f, edges);
  if (edges.empty()) throw GraphError("tensor_product: finite factor has no edges, product is edgeless");
  PeriodicGraph out(g.dim(), layer_labels(f), layer_potential(g, f), edges, basis_only(g));
  const auto report = validate(out);
  if (report.connectivity != Connectivity::connected) {
    throw GraphError(
        "tensor_product: product is disconnected; a tensor product of connected graphs is connected "
        "only if at least one factor contains an odd cycle (finite factor bipartite: " +
        std::string(f.bipartite() ? "yes" : "no") + ")");
  }
  return out;
}

PeriodicGraph strong_product(const PeriodicGraph& g, const FiniteGraph& f) {
  require_single_vertex_cell(g, "strong_product");
  std::vector<EdgeTemplate> edges;
  add_layer_edges(f, g.dim(), edges);
  for (const auto& e : g.edges())
    for (int v = 0; v < f.size(); ++v) edges.push_back({v, v, e.offset, e.multiplicity});
  add_tensor_edges(g, f, edges);
  return PeriodicGraph(g.dim(), layer_labels(f), layer_potential(g, f), edges, basis_only(g));
}

PeriodicGraph strong_product(const PeriodicGraph& g, const PeriodicGraph& h) {
  const int dg = g.dim(), dh = h.dim();
  const int ng = g.cell_size(), nh = h.cell_size();
  auto idx = [nh](int a, int b) { return a * nh + b; };
  auto join = [&](const IntVec& a, const IntVec& b) {
    IntVec o(a);
    o.insert(o.end(), b.begin(), b.end());
    return o;
  };
  std::vector<std::string> labels;
  std::vector<double> potential;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < nh; ++b) {
      labels.push_back(g.labels()[a] + "," + h.labels()[b]);
      potential.push_back(g.potential()[a] + h.potential()[b]);
    }
  std::vector<EdgeTemplate> edges;
  const IntVec zg(dg, 0), zh(dh, 0);
  for (const auto& e : g.edges())
    for (int b = 0; b < nh; ++b) edges.push_back({idx(e.src, b), idx(e.dst, b), join(e.offset, zh), e.multiplicity});
  for (const auto& e : h.edges())
    for (int a = 0; a < ng; ++a) edges.push_back({idx(a, e.src), idx(a, e.dst), join(zg, e.offset), e.multiplicity});
  for (const auto& e : g.edges())
    for (const auto& k : h.edges())
      edges.push_back({idx(e.src, k.src), idx(e.dst, k.dst), join(e.offset, k.offset),
                       e.multiplicity * k.multiplicity});
  return PeriodicGraph(dg + dh, labels, potential, edges);
}

PeriodicGraph decorate(const PeriodicGraph& g, const FiniteGraph& f, int anchor) {
  if (anchor < 0 || anchor >= f.size()) throw GraphError("decorate: anchor is not a vertex of the factor");
  const int nu = g.cell_size();
  const int pendant = f.size() - 1;
  std::vector<std::string> labels = g.labels();
  std::vector<double> potential = g.potential();
  for (int n = 0; n < nu; ++n) potential[n] += f.potential()[anchor];
  // Vertex v of the copy attached at n maps to n (anchor) or to a new cell index.
  auto map = [&](int n, int v) {
    if (v == anchor) return n;
    const int local = v < anchor ? v : v - 1;
    return nu + n * pendant + local;
  };
  for (int n = 0; n < nu; ++n)
    for (int v = 0; v < f.size(); ++v) {
      if (v == anchor) continue;
      labels.push_back(g.labels()[n] + ":" + f.labels()[v]);
      potential.push_back(f.potential()[v]);
    }
  std::vector<EdgeTemplate> edges = g.edges();
  const IntVec zero(g.dim(), 0);
  for (int n = 0; n < nu; ++n)
    for (auto [a, b] : f.edges()) {
      edges.push_back({map(n, a), map(n, b), zero, 1});
      edges.push_back({map(n, b), map(n, a), zero, 1});
    }
  std::optional<Embedding> emb;
  if (g.embedding()) emb = Embedding{g.embedding()->basis, {}};
  return PeriodicGraph(g.dim(), labels, potential, edges, emb);
}

}  // namespace fqe
