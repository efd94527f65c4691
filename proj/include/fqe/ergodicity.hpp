#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fqe/finite.hpp"
#include "fqe/floquet.hpp"
#include "fqe/observables.hpp"

namespace fqe {

/// Σ_q ⟨a(·+v_q)⟩ Σ_r Σ_s |[P_{E_s}(r/N)(Uψ)_r](v_q)|², the basis-dependent reference average.
cplx weighted_average(const CVector& psi, const ScalarObservable& a, const FiniteGraphModel& model);
/// Same quantity from precomputed Floquet coefficients and fiber eigensystems.
cplx weighted_average(const FiberCoefficients& coeffs, const ScalarObservable& a, const FiberGrid& grid);

enum class Reference { uniform, opn_abar, matrix };

const char* to_string(Reference r);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct VarianceReport {
  Reference reference = Reference::uniform;
  std::optional<Window> window;
  std::string basis_tag;
  std::string observable_tag;
  std::vector<std::size_t> members; // eigenvector indices inside the window
  std::vector<double> eigenvalues;  // λ_u for members
  std::vector<cplx> expectations;   // ⟨ψ_u, aψ_u⟩
  std::vector<cplx> references;     // reference_u
  std::vector<cplx> gaps;           // expectation − reference
  double variance = 0.0;            // mean |gap|² over members
  double sup_gap = 0.0;
  double second_moment = 0.0;       // mean |⟨ψ_u, aψ_u⟩|² over members
};

/// V = mean over u (in the window, if given) of |⟨ψ_u, aψ_u⟩ − reference_u|².
/// Throws std::invalid_argument for an empty window.
VarianceReport qe_variance(const Eigenbasis& basis, const ScalarObservable& a, Reference reference,
                           std::optional<Window> window = std::nullopt);

/// sup_u |⟨ψ_u, aψ_u⟩ − ⟨a⟩|.
double que_sup(const Eigenbasis& basis, const ScalarObservable& a);

/// V = N^{-d} Σ_u |⟨ψ_u, Kψ_u⟩ − ⟨K⟩_{ψ_u}|² for a band-matrix observable (ν = 1).
VarianceReport matrix_average(const Eigenbasis& basis, const BandMatrixObservable& k);

/// Upper bound 2 ν² sup_{m≠0}(|A_m|/N^d) ||a||²_∞ for the variance around the weighted average.
double variance_bound(int cell_size, double sup_total_fraction, double sup_norm);

}  // namespace fqe
