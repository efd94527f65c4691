#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fqe/lattice.hpp"
#include "fqe/types.hpp"

namespace fqe {

/// ν×ν Hermitian fiber H(θ) at fractional momentum θ ∈ [0,1)^d.
struct Fiber {
  Momentum theta;
  CMatrix matrix;
};

Fiber fiber(const PeriodicGraph& g, std::span<const double> theta);

/// Sorted eigenvalues, degeneracy classes and one projector per class.
struct EigenSystem {
  Momentum theta;
  Eigen::VectorXd eigenvalues;          // ascending
  CMatrix eigenvectors;                 // columns, orthonormal
  std::vector<std::vector<int>> groups; // band indices per class
  std::vector<double> group_values;     // class mean eigenvalue
  std::vector<CMatrix> projectors;
  double degen_tol = 0.0;

  int group_count() const { return static_cast<int>(groups.size()); }
  int group_of(int band) const;
};

/// Default degeneracy tolerance 1e-8 (1 + ||H||).
double default_degen_tol(const CMatrix& h);

EigenSystem eigensystem(const Fiber& f, std::optional<double> degen_tol = std::nullopt);

/// Eigensystems of H(r/N) for every r ∈ L_N^d, indexed like cells.
class FiberGrid {
 public:
  FiberGrid(const FiniteGraphModel& model, std::optional<double> degen_tol = std::nullopt);
  const EigenSystem& at(std::size_t r) const { return systems_[r]; }
  std::size_t size() const { return systems_.size(); }
  int N() const { return N_; }

 private:
  int N_;
  std::vector<EigenSystem> systems_;
};

/// (Uψ)_r(v_n) stored as a ν × N^d matrix; column r is the cell vector at momentum r.
struct FiberCoefficients {
  int N = 0;
  int dim = 0;
  CMatrix values;

  double norm() const { return values.norm(); }
};

FiberCoefficients floquet_forward(const CVector& psi, const FiniteGraphModel& model);
CVector floquet_inverse(const FiberCoefficients& coeffs, const FiniteGraphModel& model);

/// Normalized plane wave e_r(k) = N^{-d/2} e^{2πi r·k/N} as a vector over cells.
CVector plane_wave(const FiniteGraphModel& model, std::size_t r);

struct BlockDiagonalizationCheck {
  double max_residual = 0.0;
  bool passed = false;
};

/// max over standard basis vectors ψ of ||U H_N ψ − (⊕ H(j/N)) U ψ||.
BlockDiagonalizationCheck verify_block_diagonalization(const FiniteGraphModel& model, double tol = 1e-12,
                                                       std::size_t cap = kFiberCap);

struct FlatBand {
  double value = 0.0;
  double spread = 0.0;
};

/// Values that are eigenvalues of H(θ) at every point of a grid^d momentum grid
/// (within `threshold`), independent of band labels.
std::vector<FlatBand> detect_flat_bands(const PeriodicGraph& g, int grid = 32, double threshold = 1e-10);

struct BandTable {
  int dim = 0;
  int grid = 0;
  std::vector<Momentum> thetas;
  std::vector<Eigen::VectorXd> bands;
  /// Grid indices where the number of degeneracy classes differs from its most common value.
  std::vector<std::size_t> exceptional_points;
};

BandTable band_structure(const PeriodicGraph& g, int grid);
void write_band_csv(std::ostream& os, const BandTable& table);

}  // namespace fqe
