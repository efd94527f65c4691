#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fqe/floquet.hpp"
#include "fqe/lattice.hpp"

namespace fqe {

/// Sorted bands E_s(r/N) on the full momentum grid L_N^d.
class BandGrid {
 public:
  BandGrid(const PeriodicGraph& g, int N);

  const FiniteGraphModel& model() const { return model_; }
  int N() const { return model_.N(); }
  int cell_size() const { return model_.cell_size(); }
  std::size_t cells() const { return model_.cells(); }
  double at(std::size_t r, int s) const { return values_[r * static_cast<std::size_t>(cell_size()) + s]; }
  double diameter() const { return hi_ - lo_; }

 private:
  FiniteGraphModel model_;
  std::vector<double> values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Counts of r with |E_s((r+m)/N) − E_w(r/N)| ≤ tol, per sorted-label pair.
struct PairCounts {
  IntVec shift;
  Eigen::MatrixXi counts; // counts(s, w)
  long total = 0;         // |A_m|
  long max_pair = 0;
};

PairCounts coincidence_count(const BandGrid& bands, const IntVec& m, double tol);
PairCounts coincidence_count(const PeriodicGraph& g, int N, const IntVec& m, double tol);

struct SweepOptions {
  std::optional<double> tol;   // absolute; default 1e-8 · spectral diameter
  std::uint64_t seed = 1;
  std::size_t min_samples = 64; // d ≥ 2 sampled scans
  /// Scan every shift when N^{2d} ν² stays below this budget, sample otherwise (d ≥ 2).
  double exhaustive_budget = 5e7;
  bool keep_census = false;
};

struct CoincidenceReport {
  int N = 0;
  double tol = 0.0;
  bool exhaustive = true;
  std::size_t shifts_scanned = 0;
  double sup_pair_fraction = 0.0;  // max over m ≠ 0 and label pairs of count / N^d
  double sup_total_fraction = 0.0; // max over m ≠ 0 of |A_m| / N^d
  IntVec argmax_shift;
  int argmax_s = 0;
  int argmax_w = 0;
  long max_total = 0;              // max |A_m|
  double sup_pair_fraction_low = 0.0;  // at 0.1 tol
  double sup_pair_fraction_high = 0.0; // at 10 tol
  bool unstable = false;           // counts differ by more than 10% across tolerances
  bool flat_band_detected = false;
  bool identically_coincident_pair = false;
  std::vector<PairCounts> census;  // filled when keep_census
};

/// Coincidence reports per N plus a decay verdict. Sorted-label counts upper-bound
/// per-branch counts at band crossings.
struct SweepResult {
  std::vector<CoincidenceReport> reports;
  bool monotone_decay = false;
};

SweepResult assumption_sweep(const PeriodicGraph& g, std::span<const int> Ns, const SweepOptions& options = {});

/// Shifts used by the sweep for a given N (all nonzero shifts, or a seeded sample
/// that always contains the axis midpoints).
std::vector<IntVec> sweep_shifts(const FiniteGraphModel& model, const SweepOptions& options);

struct RootBoundCertificate {
  IntVec direction;                 // φ
  std::vector<IntVec> offsets;      // n^(p), sign-normalized
  std::vector<long> gamma;          // γ_p = 2|φ·n^(p)|
  long M = 0;                       // 2 max γ_p
  int half_degree = 0;              // D
  int max_offset = 0;               // q
  long list_length = 0;             // ℓ_D = (d−1)D(D−1)+1
  long row_used = 0;                // x with φ = (1, x, …, x^{d−1})
  long theoretical_bound = 0;       // 4 d ℓ_D^{d−1} q
  bool within_list = true;    // row_used ≤ ℓ_D
};

RootBoundCertificate nu1_root_bound(const PeriodicGraph& g);

struct RootBoundCheck {
  int N = 0;
  long max_count = 0;
  long limit = 0;                   // M N^{d−1}
  std::size_t shifts = 0;
  bool holds = false;
};

std::vector<RootBoundCheck> certify_root_bound(const PeriodicGraph& g, const RootBoundCertificate& cert,
                                               std::span<const int> Ns, const SweepOptions& options = {});

struct KroneckerSummary {
  Momentum alpha;
  int grid = 0;
  std::size_t samples = 0;
  double scale = 0.0;
  double min_abs_eigenvalue = 0.0; // smallest |eig B_α(θ)| over the grid
  bool identically_zero = false;
  std::size_t near_zero_points = 0;
  std::optional<int> zero_count;   // d = 1 only
  std::optional<int> degree_bound; // 2 δ ν², d = 1 only
  std::vector<double> zeros;       // located zeros (d = 1)
};

/// Zeros of det(H(θ+α)⊗I − I⊗H(θ)) on a momentum grid.
KroneckerSummary kronecker_probe(const PeriodicGraph& g, const Momentum& alpha, int grid);

struct CharpolySplit {
  std::vector<double> delta;   // coefficients of Δ(λ), constant term first
  double max_deviation = 0.0;
};

/// For a one-dimensional ν-periodic chain, det(λ − H(θ)) + z + 1/z, z = e^{2πiθ},
/// must not depend on θ; fits Δ at one θ and reports the deviation over the grid.
CharpolySplit charpoly_split_check(const PeriodicGraph& g, int grid);

}  // namespace fqe
