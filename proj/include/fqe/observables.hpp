#pragma once

#include <map>
#include <string>
#include <vector>

#include "fqe/floquet.hpp"
#include "fqe/lattice.hpp"

namespace fqe {

/// Scalar vertex function a(k + v_n) on Γ_N, stored in vertex order.
class ScalarObservable {
 public:
  ScalarObservable(const FiniteGraphModel& model, CVector values, std::string tag = "custom");

  static ScalarObservable constant(const FiniteGraphModel& model, double c);
  /// 1 on cells with k_1 < N/2, 0 elsewhere.
  static ScalarObservable half_indicator(const FiniteGraphModel& model);
  /// 1 on cells with k_1 < N/4, 0 elsewhere.
  static ScalarObservable quarter_indicator(const FiniteGraphModel& model);
  /// 1 on every vertex of cells with k_1 even, 0 elsewhere.
  static ScalarObservable alternating_block(const FiniteGraphModel& model);
  /// cos(2π f·k / N) on every vertex of cell k.
  static ScalarObservable cosine(const FiniteGraphModel& model, const IntVec& frequency);
  /// Takes the value per cell vertex n, the same in every cell.
  static ScalarObservable per_sublattice(const FiniteGraphModel& model, const std::vector<double>& values);

  int N() const { return N_; }
  int dim() const { return dim_; }
  int cell_size() const { return nu_; }
  const CVector& values() const { return values_; }
  const std::string& tag() const { return tag_; }

  /// ⟨a(· + v_q)⟩ = N^{-d} Σ_k a(k + v_q), compensated.
  cplx block_average(int q) const;
  /// ⟨a⟩ = |Γ_N|^{-1} Σ_v a(v), compensated.
  cplx uniform_average() const;
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }
  /// a_m(v_q) = N^{-d/2} Σ_k e^{-2πi m·k/N} a(k + v_q).
  FiberCoefficients fourier(const FiniteGraphModel& model) const;

  CVector apply(const CVector& psi) const { return values_.cwiseProduct(psi); }
  cplx expectation(const CVector& psi) const;

 private:
  int N_;
  int dim_;
  int nu_;
  CVector values_;
  std::string tag_;
};

/// Band-matrix observable K on Γ_N for ν = 1: K(n, n+τ) stored as K^τ(n), |τ|_∞ ≤ R.
class BandMatrixObservable {
 public:
  BandMatrixObservable(const FiniteGraphModel& model, int width, std::map<IntVec, CVector> diagonals,
                       std::string tag = "custom");

  static BandMatrixObservable nearest_neighbor(const FiniteGraphModel& model, int direction);
  static BandMatrixObservable from_hamiltonian(const FiniteGraphModel& model);
  static BandMatrixObservable diagonal(const FiniteGraphModel& model, const ScalarObservable& a);

  int width() const { return width_; }
  const std::map<IntVec, CVector>& diagonals() const { return diagonals_; }
  const std::string& tag() const { return tag_; }

  CVector apply(const CVector& psi) const;
  cplx expectation(const CVector& psi) const;
  /// ⟨K⟩_ψ = Σ_τ ⟨K^τ⟩ ⟨ψ, ψ(· + τ)⟩.
  cplx reference(const CVector& psi) const;
  /// max |K(n, m) − conj K(m, n)|.
  double hermiticity_defect() const;

 private:
  FiniteGraphModel model_;
  int width_;
  std::map<IntVec, CVector> diagonals_;
  std::string tag_;
};

}  // namespace fqe
