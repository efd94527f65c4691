#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fqe/assumption.hpp"
#include "fqe/parallel.hpp"

namespace fqe {

namespace {

IntVec canonical_sign(IntVec o) {
  for (int v : o) {
    if (v > 0) return o;
    if (v < 0) {
      for (int& x : o) x = -x;
      return o;
    }
  }
  return o;
}

long dot(const IntVec& a, const IntVec& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long>(a[i]) * b[i];
  return s;
}

long ipow(long base, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// The row (1, x, ..., x^{d-1}) works when every |φ·n| is nonzero and the values
// are pairwise distinct, so no two monomials z^{γ*±γ_p} collide.
bool row_separates(const IntVec& phi, const std::vector<IntVec>& offsets) {
  std::set<long> seen;
  for (const auto& n : offsets) {
    const long v = std::labs(dot(phi, n));
    if (v == 0 || !seen.insert(v).second) return false;
  }
  return true;
}

}  // namespace

RootBoundCertificate nu1_root_bound(const PeriodicGraph& g) {
  if (g.cell_size() != 1) throw std::invalid_argument("nu1_root_bound: requires a single vertex per cell");
  if (check_connectivity(g).verdict != Connectivity::connected)
    throw GraphError("nu1_root_bound: graph is not certified connected");
  const int d = g.dim();

  std::set<IntVec> distinct;
  for (const auto& e : g.edges()) distinct.insert(canonical_sign(e.offset));
  RootBoundCertificate cert;
  cert.offsets.assign(distinct.begin(), distinct.end());
  cert.half_degree = static_cast<int>(cert.offsets.size());
  cert.max_offset = g.max_offset();
  const long D = cert.half_degree;
  cert.list_length = static_cast<long>(d - 1) * D * (D - 1) + 1;
  cert.theoretical_bound = 4L * d * ipow(cert.list_length, d - 1) * cert.max_offset;

  // The list of length ℓ_D is guaranteed to contain a row avoiding every V_{p,p'};
  // the stricter |φ·n| distinctness may need rows past it.
  const long search_limit = cert.list_length + 64L * (D * D + 1);
  for (long x = 1; x <= search_limit; ++x) {
    IntVec phi(d);
    long p = 1;
    for (int i = 0; i < d; ++i, p *= x) phi[i] = static_cast<int>(p);
    if (!row_separates(phi, cert.offsets)) continue;
    cert.direction = phi;
    cert.row_used = x;
    cert.within_list = x <= cert.list_length;
    break;
  }
  if (cert.direction.empty()) throw NumericalError("nu1_root_bound: no separating direction found");

  long gmax = 0;
  for (auto& n : cert.offsets) {
    if (dot(cert.direction, n) < 0)
      for (int& v : n) v = -v;
    const long gamma = 2 * dot(cert.direction, n);
    cert.gamma.push_back(gamma);
    gmax = std::max(gmax, gamma);
  }
  cert.M = 2 * gmax;
  return cert;
}

std::vector<RootBoundCheck> certify_root_bound(const PeriodicGraph& g, const RootBoundCertificate& cert,
                                               std::span<const int> Ns, const SweepOptions& options) {
  std::vector<RootBoundCheck> out;
  for (int N : Ns) {
    const BandGrid bands(g, N);
    const double diameter = bands.diameter();
    const double tol = options.tol.value_or(1e-8 * (diameter > 0.0 ? diameter : 1.0));
    const auto shifts = sweep_shifts(bands.model(), options);
    std::vector<long> totals(shifts.size());
    parallel_for(shifts.size(), [&](std::size_t i) { totals[i] = coincidence_count(bands, shifts[i], tol).total; });
    RootBoundCheck check;
    check.N = N;
    check.shifts = shifts.size();
    check.max_count = totals.empty() ? 0 : *std::max_element(totals.begin(), totals.end());
    check.limit = cert.M * ipow(N, g.dim() - 1);
    check.holds = check.max_count <= check.limit;
    out.push_back(check);
  }
  return out;
}

}  // namespace fqe
