#pragma once

#include <optional>
#include <vector>

#include "fqe/floquet.hpp"
#include "fqe/lattice.hpp"
#include "fqe/observables.hpp"

namespace fqe {

/// Phase-space symbol F(k, r; v_n, v_ℓ), stored through its Fourier coefficients in k:
/// F(k, r; n, ℓ) = Σ_m F̂(m, r; n, ℓ) e_m(k).
class Symbol {
 public:
  Symbol(int N, int dim, int cell_size);

  static Symbol zero(const FiniteGraphModel& model);
  /// F(k, r; n, ℓ) = a(k + v_n) δ_{nℓ}.
  static Symbol multiplication(const FiniteGraphModel& model, const ScalarObservable& a);

  int N() const { return N_; }
  int dim() const { return dim_; }
  int cell_size() const { return nu_; }
  std::size_t cells() const { return cells_; }

  cplx& coefficient(std::size_t r, std::size_t m, int n, int l) { return data_[offset(r, m, n, l)]; }
  cplx coefficient(std::size_t r, std::size_t m, int n, int l) const { return data_[offset(r, m, n, l)]; }
  /// ν×ν block F̂(m, r; ·, ·).
  CMatrix block(std::size_t r, std::size_t m) const;
  void set_block(std::size_t r, std::size_t m, const CMatrix& b);

  /// F(k, r; n, ℓ) evaluated from the coefficients.
  cplx value(const FiniteGraphModel& model, std::size_t k, std::size_t r, int n, int l) const;
  /// N^{-d} Σ_{r,ℓ} ||F(·, r, ⋆, v_ℓ)||², which equals ||Op_N(F)||²_HS.
  double hs_norm_squared() const;

  Symbol operator-(const Symbol& other) const;

 private:
  std::size_t offset(std::size_t r, std::size_t m, int n, int l) const {
    return ((r * cells_ + m) * static_cast<std::size_t>(nu_) + static_cast<std::size_t>(n)) * static_cast<std::size_t>(nu_) +
           static_cast<std::size_t>(l);
  }

  int N_;
  int dim_;
  int nu_;
  std::size_t cells_;
  std::vector<cplx> data_;
};

/// Op_N(F)ψ(k + v_n) = Σ_r Σ_ℓ (Uψ)_r(v_ℓ) F(k, r; v_n, v_ℓ) e_r(k).
class PhaseSpaceOperator {
 public:
  PhaseSpaceOperator(const Symbol& symbol, const FiniteGraphModel& model);

  CVector apply(const CVector& psi) const;
  CMatrix dense(std::size_t cap = kDenseCap) const;

 private:
  const Symbol* symbol_;
  FiniteGraphModel model_;
};

PhaseSpaceOperator quantize(const Symbol& symbol, const FiniteGraphModel& model);

/// φ(x) = (e^{ix} − 1)/(ix), φ(0) = 1: the time average of e^{itΔ} over [0, T] is φ(TΔ).
cplx time_average_kernel(double x);

struct EgorovOptions {
  /// ε for the coincidence set S_r; default 1e-8 times the spectral diameter.
  std::optional<double> coincide_tol;
};

struct EgorovSymbols {
  Symbol time_averaged; // F_T
  Symbol limit;         // b
  Symbol main;          // ā
  double coincide_tol = 0.0;
};

EgorovSymbols egorov_symbols(const FiniteGraphModel& model, const ScalarObservable& a, double T,
                             const EgorovOptions& options = {});

/// (1/T) ∫_0^T e^{itH_N} a e^{-itH_N} dt evaluated in the dense eigenbasis of H_N.
CMatrix time_averaged_observable(const FiniteGraphModel& model, const ScalarObservable& a, double T);

}  // namespace fqe
