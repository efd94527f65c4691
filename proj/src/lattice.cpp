#include "fqe/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace fqe {

PeriodicGraph::PeriodicGraph(int dim, std::vector<std::string> labels, std::vector<double> potential,
                             std::vector<EdgeTemplate> edges, std::optional<Embedding> embedding)
    : dim_(dim), labels_(std::move(labels)), potential_(std::move(potential)),
      embedding_(std::move(embedding)) {
  if (dim_ < 1) throw GraphError("dimension must be at least 1");
  if (labels_.empty()) throw GraphError("cell must contain at least one vertex");
  if (potential_.empty()) potential_.assign(labels_.size(), 0.0);
  if (potential_.size() != labels_.size())
    throw GraphError("potential must be given for every cell vertex");
  const int nu = cell_size();
  std::map<std::tuple<int, int, IntVec>, int> merged;
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= nu || e.dst < 0 || e.dst >= nu)
      throw GraphError("edge template references a vertex outside the cell");
    if (static_cast<int>(e.offset.size()) != dim_)
      throw GraphError("edge template offset has wrong dimension");
    if (e.multiplicity < 1) throw GraphError("edge multiplicity must be positive");
    if (e.src == e.dst && std::all_of(e.offset.begin(), e.offset.end(), [](int o) { return o == 0; }))
      throw GraphError("self-loop template (n, n, 0) is not allowed");
    merged[{e.src, e.dst, e.offset}] += e.multiplicity;
  }
  edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    edges_.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
  }
}

int PeriodicGraph::degree(int n) const {
  int d = 0;
  for (const auto& e : edges_)
    if (e.src == n) d += e.multiplicity;
  return d;
}

int PeriodicGraph::max_offset() const {
  int q = 0;
  for (const auto& e : edges_)
    for (int o : e.offset) q = std::max(q, std::abs(o));
  return q;
}

int PeriodicGraph::find_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

// ---------------------------------------------------------------------------

FiniteGraph::FiniteGraph(std::vector<std::string> labels, std::vector<std::pair<int, int>> edges,
                         std::vector<double> potential)
    : labels_(std::move(labels)), potential_(std::move(potential)) {
  const int n = size();
  if (n < 1) throw GraphError("finite graph must have a vertex");
  if (potential_.empty()) potential_.assign(labels_.size(), 0.0);
  if (potential_.size() != labels_.size()) throw GraphError("potential size mismatch");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw GraphError("finite edge out of range");
    if (a == b) throw GraphError("finite graph must be simple (self-loop)");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw GraphError("finite graph must be simple (repeated edge)");
    edges_.emplace_back(a, b);
  }
}

FiniteGraph FiniteGraph::single_vertex(double q) { return FiniteGraph({"0"}, {}, {q}); }

FiniteGraph FiniteGraph::path(int n) {
  if (n < 1) throw GraphError("path needs at least one vertex");
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return FiniteGraph(labels, edges);
}

FiniteGraph FiniteGraph::cycle(int n) {
  if (n < 3) throw GraphError("cycle needs at least three vertices");
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return FiniteGraph(labels, edges);
}

FiniteGraph FiniteGraph::cartesian(const FiniteGraph& a, const FiniteGraph& b) {
  const int na = a.size(), nb = b.size();
  std::vector<std::string> labels;
  std::vector<double> potential;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      labels.push_back(a.labels()[i] + "," + b.labels()[j]);
      potential.push_back(a.potential()[i] + b.potential()[j]);
    }
  std::vector<std::pair<int, int>> edges;
  for (auto [x, y] : a.edges())
    for (int j = 0; j < nb; ++j) edges.emplace_back(x * nb + j, y * nb + j);
  for (auto [x, y] : b.edges())
    for (int i = 0; i < na; ++i) edges.emplace_back(i * nb + x, i * nb + y);
  return FiniteGraph(labels, edges, potential);
}

Eigen::MatrixXd FiniteGraph::adjacency() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size(), size());
  for (auto [a, b] : edges_) {
    A(a, b) = 1.0;
    A(b, a) = 1.0;
  }
  return A;
}

Eigen::MatrixXd FiniteGraph::hamiltonian() const {
  Eigen::MatrixXd H = adjacency();
  for (int i = 0; i < size(); ++i) H(i, i) += potential_[i];
  return H;
}

Eigen::VectorXd FiniteGraph::spectrum() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

namespace {
std::vector<int> two_colouring(int n, const std::vector<std::pair<int, int>>& edges, bool& ok,
                               int& components) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> colour(n, -1);
  ok = true;
  components = 0;
  for (int s = 0; s < n; ++s) {
    if (colour[s] >= 0) continue;
    ++components;
    colour[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (colour[w] < 0) {
          colour[w] = 1 - colour[v];
          q.push(w);
        } else if (colour[w] == colour[v]) {
          ok = false;
        }
      }
    }
  }
  return colour;
}
}  // namespace

bool FiniteGraph::connected() const {
  bool ok;
  int components;
  two_colouring(size(), edges_, ok, components);
  return components == 1;
}

bool FiniteGraph::bipartite() const {
  bool ok;
  int components;
  two_colouring(size(), edges_, ok, components);
  return ok;
}

// ---------------------------------------------------------------------------

FiniteGraphModel::FiniteGraphModel(PeriodicGraph graph, int N) : graph_(std::move(graph)), N_(N) {
  if (N_ < 1) throw GraphError("side length N must be positive");
  cells_ = 1;
  for (int i = 0; i < graph_.dim(); ++i) cells_ *= static_cast<std::size_t>(N_);
}

IntVec FiniteGraphModel::cell_coords(std::size_t cell) const {
  const int d = dim();
  IntVec k(d);
  for (int i = d - 1; i >= 0; --i) {
    k[i] = static_cast<int>(cell % static_cast<std::size_t>(N_));
    cell /= static_cast<std::size_t>(N_);
  }
  return k;
}

std::size_t FiniteGraphModel::cell_index(const IntVec& k) const {
  std::size_t idx = 0;
  for (int v : k) {
    int m = v % N_;
    if (m < 0) m += N_;
    idx = idx * static_cast<std::size_t>(N_) + static_cast<std::size_t>(m);
  }
  return idx;
}

std::size_t FiniteGraphModel::shifted(std::size_t cell, const IntVec& offset) const {
  IntVec k = cell_coords(cell);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] += offset[i];
  return cell_index(k);
}

Momentum FiniteGraphModel::momentum(std::size_t r) const {
  IntVec k = cell_coords(r);
  Momentum theta(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) theta[i] = static_cast<double>(k[i]) / N_;
  return theta;
}

const char* to_string(Connectivity c) {
  switch (c) {
    case Connectivity::connected: return "connected";
    case Connectivity::disconnected: return "disconnected";
    default: return "inconclusive";
  }
}

bool same_templates(const PeriodicGraph& a, const PeriodicGraph& b, const std::vector<int>& perm) {
  if (a.dim() != b.dim() || a.cell_size() != b.cell_size()) return false;
  if (static_cast<int>(perm.size()) != a.cell_size()) return false;
  std::vector<EdgeTemplate> mapped;
  for (const auto& e : a.edges()) mapped.push_back({perm[e.src], perm[e.dst], e.offset, e.multiplicity});
  std::sort(mapped.begin(), mapped.end());
  std::vector<EdgeTemplate> other = b.edges();
  std::sort(other.begin(), other.end());
  return mapped == other;
}

}  // namespace fqe
