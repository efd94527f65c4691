#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "fqe/floquet.hpp"
#include "fqe/lattice.hpp"

namespace fqe {

/// H_N on ℓ²(Γ_N) with periodic boundary conditions; real symmetric.
class FiniteOperator {
 public:
  explicit FiniteOperator(const FiniteGraphModel& model, std::size_t cap = kFiberCap);

  const FiniteGraphModel& model() const { return model_; }
  std::size_t dimension() const { return model_.size(); }
  CVector apply(const CVector& psi) const;
  const Eigen::SparseMatrix<double>& sparse() const { return matrix_; }
  Eigen::MatrixXd dense(std::size_t cap = kDenseCap) const;

 private:
  FiniteGraphModel model_;
  Eigen::SparseMatrix<double> matrix_;
};

FiniteOperator hamiltonian(const FiniteGraphModel& model, std::size_t cap = kFiberCap);

enum class BasisKind { fiber, real_mixed, swap_mixed, random_mix, dense, completed };

/// Eigenbasis construction tag. Text forms: fiber, real-mixed, swap-mixed, random:SEED, dense.
struct BasisMode {
  BasisKind kind = BasisKind::fiber;
  std::uint64_t seed = 0;

  static BasisMode parse(std::string_view text);
  std::string tag() const;
};

struct Provenance {
  enum class Kind { fiber, mixed, dense };
  Kind kind = Kind::fiber;
  std::size_t momentum = 0; // r, fiber provenance only
  int band = 0;             // s (0-based), fiber provenance only
};

/// One Floquet component e_r ⊗ f of a vector.
struct MomentumComponent {
  std::size_t momentum = 0;
  CVector cell_vector;
};

/// Orthonormal eigenbasis of H_N. Fiber-built bases are stored by their Floquet
/// components; dense and completed bases by explicit columns.
class Eigenbasis {
 public:
  std::size_t size() const { return eigenvalues_.size(); }
  const FiniteGraphModel& model() const { return model_; }
  const BasisMode& mode() const { return mode_; }
  double eigenvalue(std::size_t u) const { return eigenvalues_[u]; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const Provenance& provenance(std::size_t u) const { return provenance_[u]; }

  CVector vector(std::size_t u) const;
  /// Uψ_u; read off the stored components when available.
  FiberCoefficients coefficients(std::size_t u) const;
  bool momentum_storage() const { return !components_.empty(); }
  const std::vector<MomentumComponent>& components(std::size_t u) const { return components_[u]; }

  double gram_deviation() const;
  double max_relative_residual(const FiniteOperator& h) const;

 private:
  Eigenbasis(FiniteGraphModel model, BasisMode mode) : model_(std::move(model)), mode_(mode) {}

  FiniteGraphModel model_;
  BasisMode mode_;
  std::vector<double> eigenvalues_;
  std::vector<Provenance> provenance_;
  std::vector<std::vector<MomentumComponent>> components_;
  CMatrix columns_;

  friend Eigenbasis fiber_eigenbasis(const FiniteGraphModel&, const BasisMode&);
  friend Eigenbasis dense_eigenbasis(const FiniteGraphModel&);
  friend Eigenbasis complete_eigenbasis(const FiniteGraphModel&, const std::vector<CVector>&);
};

/// fiber: e_r ⊗ f_{r,s}. real_mixed: cos/sin combinations of the pair (r, −r).
/// swap_mixed: (e_{(l1,l2)} ± e_{(l2,l1)})/√2 on d = 2, ν = 1 lattices symmetric under the swap.
/// random_mix: seeded unitary mixing within each global eigenspace.
Eigenbasis fiber_eigenbasis(const FiniteGraphModel& model, const BasisMode& mode);
Eigenbasis dense_eigenbasis(const FiniteGraphModel& model);
/// Eigenbasis containing the given orthonormal eigenvectors, completed inside each eigenspace.
Eigenbasis complete_eigenbasis(const FiniteGraphModel& model, const std::vector<CVector>& seeds);

struct BlochFunction {
  std::size_t momentum = 0;
  int band = 0;
  CVector cell_vector; // f, unit norm
  double eigenvalue = 0.0;
  CVector full;        // Ψ(k + v_n) = e^{2πi j·k/N} f(v_n), norm N^{d/2}
};

BlochFunction bloch_eigenfunction(const FiniteGraphModel& model, std::size_t j, int band);

/// Tolerance used to group eigenvalues globally for random_mix.
inline double global_degen_tol(double lambda) { return 1e-8 * (1.0 + std::abs(lambda)); }

}  // namespace fqe
