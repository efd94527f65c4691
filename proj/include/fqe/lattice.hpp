#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fqe/types.hpp"

namespace fqe {

/// Edge from cell vertex `src` to the copy of cell vertex `dst` translated by `offset`.
struct EdgeTemplate {
  int src = 0;
  int dst = 0;
  IntVec offset;
  int multiplicity = 1;

  auto operator<=>(const EdgeTemplate&) const = default;
};

/// Display-only geometry: lattice basis and cell-vertex positions.
struct Embedding {
  std::vector<std::vector<double>> basis;
  std::vector<std::vector<double>> positions;
};

/// Z^d-periodic graph with a fundamental cell of ν vertices and an on-site potential.
/// Immutable after construction. Duplicate templates are merged into a multiplicity.
class PeriodicGraph {
 public:
  PeriodicGraph(int dim, std::vector<std::string> labels, std::vector<double> potential,
                std::vector<EdgeTemplate> edges, std::optional<Embedding> embedding = {});

  int dim() const { return dim_; }
  int cell_size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& potential() const { return potential_; }
  const std::vector<EdgeTemplate>& edges() const { return edges_; }
  const std::optional<Embedding>& embedding() const { return embedding_; }

  /// Degree of a cell vertex counting multiplicity.
  int degree(int n) const;
  /// Largest |o_i| over all templates (q in the root bound).
  int max_offset() const;
  /// Index of a label, or -1.
  int find_label(const std::string& label) const;

 private:
  int dim_;
  std::vector<std::string> labels_;
  std::vector<double> potential_;
  std::vector<EdgeTemplate> edges_;
  std::optional<Embedding> embedding_;
};

/// Simple undirected finite graph with a potential; used as a product or decoration factor.
class FiniteGraph {
 public:
  FiniteGraph(std::vector<std::string> labels, std::vector<std::pair<int, int>> edges,
              std::vector<double> potential = {});

  static FiniteGraph single_vertex(double q = 0.0);
  static FiniteGraph path(int n);
  static FiniteGraph cycle(int n);
  static FiniteGraph cartesian(const FiniteGraph& a, const FiniteGraph& b);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<double>& potential() const { return potential_; }

  Eigen::MatrixXd adjacency() const;
  Eigen::MatrixXd hamiltonian() const;
  Eigen::VectorXd spectrum() const;
  bool connected() const;
  bool bipartite() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<double> potential_;
};

/// Γ_N: the graph on the torus L_N^d with periodic boundary conditions.
/// Vertex (k, n) has index cell(k) * ν + n, cell(k) = ((k_0 N + k_1) N + ...) .
class FiniteGraphModel {
 public:
  FiniteGraphModel(PeriodicGraph graph, int N);

  const PeriodicGraph& graph() const { return graph_; }
  int N() const { return N_; }
  int dim() const { return graph_.dim(); }
  int cell_size() const { return graph_.cell_size(); }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return cells_ * static_cast<std::size_t>(graph_.cell_size()); }

  std::size_t index(std::size_t cell, int n) const {
    return cell * static_cast<std::size_t>(graph_.cell_size()) + static_cast<std::size_t>(n);
  }
  IntVec cell_coords(std::size_t cell) const;
  /// Linear index of k reduced mod N.
  std::size_t cell_index(const IntVec& k) const;
  /// Linear index of cell + offset (mod N).
  std::size_t shifted(std::size_t cell, const IntVec& offset) const;
  /// θ = r / N for a momentum index r.
  Momentum momentum(std::size_t r) const;

 private:
  PeriodicGraph graph_;
  int N_;
  std::size_t cells_;
};

enum class Connectivity { connected, disconnected, inconclusive };

const char* to_string(Connectivity c);

/// Structured diagnostics; validate() never throws.
struct ValidationReport {
  bool symmetric = true;
  Connectivity connectivity = Connectivity::inconclusive;
  int patch_radius = 0;           // patch half-width at which connectivity was certified
  long lattice_index = 0;         // index of the cycle lattice in Z^d (0 when not full rank)
  std::vector<int> degrees;
  bool regular = false;
  std::optional<bool> bipartite;  // only decided for connected graphs
  std::optional<int> half_degree; // D, ν = 1 only
  int max_offset = 0;             // q
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

ValidationReport validate(const PeriodicGraph& g);

/// Patch-based connectivity certificate, cross-checked against the cycle lattice.
struct ConnectivityResult {
  Connectivity verdict = Connectivity::inconclusive;
  int patch_radius = 0;
  long lattice_index = 0;
};
ConnectivityResult check_connectivity(const PeriodicGraph& g, int max_iterations = 5);

PeriodicGraph cartesian_product(const PeriodicGraph& g, const FiniteGraph& f);
PeriodicGraph tensor_product(const PeriodicGraph& g, const FiniteGraph& f);
PeriodicGraph strong_product(const PeriodicGraph& g, const FiniteGraph& f);
/// Strong product of two periodic graphs; the result is (d_g + d_h)-periodic.
PeriodicGraph strong_product(const PeriodicGraph& g, const PeriodicGraph& h);
PeriodicGraph decorate(const PeriodicGraph& g, const FiniteGraph& f, int anchor);

/// Template-set equality after mapping the cell of `a` through `perm` (perm[n] = vertex of b).
bool same_templates(const PeriodicGraph& a, const PeriodicGraph& b, const std::vector<int>& perm);

}  // namespace fqe
