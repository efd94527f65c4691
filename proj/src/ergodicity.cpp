#include "fqe/ergodicity.hpp"

#include <algorithm>
#include <cmath>

#include "fqe/parallel.hpp"

namespace fqe {

const char* to_string(Reference r) {
  switch (r) {
    case Reference::uniform: return "uniform";
    case Reference::opn_abar: return "opn-abar";
    default: return "matrix";
  }
}

cplx weighted_average(const FiberCoefficients& coeffs, const ScalarObservable& a, const FiberGrid& grid) {
  const int nu = static_cast<int>(coeffs.values.rows());
  std::vector<CompensatedSum<double>> weight(nu);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const auto g = coeffs.values.col(static_cast<Eigen::Index>(r));
    if (g.squaredNorm() == 0.0) continue;
    for (const CMatrix& p : grid.at(r).projectors) {
      const CVector pg = p * g;
      for (int q = 0; q < nu; ++q) weight[q].add(std::norm(pg(q)));
    }
  }
  CompensatedSum<cplx> total;
  for (int q = 0; q < nu; ++q) total.add(a.block_average(q) * weight[q].value());
  return total.value();
}

cplx weighted_average(const CVector& psi, const ScalarObservable& a, const FiniteGraphModel& model) {
  const FiberGrid grid(model);
  return weighted_average(floquet_forward(psi, model), a, grid);
}

namespace {

void finish(VarianceReport& rep) {
  CompensatedSum<double> v, second;
  rep.sup_gap = 0.0;
  for (std::size_t i = 0; i < rep.gaps.size(); ++i) {
    v.add(std::norm(rep.gaps[i]));
    second.add(std::norm(rep.expectations[i]));
    rep.sup_gap = std::max(rep.sup_gap, std::abs(rep.gaps[i]));
  }
  const double count = static_cast<double>(rep.gaps.size());
  rep.variance = v.value() / count;
  rep.second_moment = second.value() / count;
}

std::vector<std::size_t> select(const Eigenbasis& basis, const std::optional<Window>& window) {
  std::vector<std::size_t> members;
  for (std::size_t u = 0; u < basis.size(); ++u)
    if (!window || window->contains(basis.eigenvalue(u))) members.push_back(u);
  if (members.empty()) throw std::invalid_argument("energy window contains no eigenvalues");
  return members;
}

}  // namespace

VarianceReport qe_variance(const Eigenbasis& basis, const ScalarObservable& a, Reference reference,
                           std::optional<Window> window) {
  if (reference == Reference::matrix) throw std::invalid_argument("qe_variance: use matrix_average for band matrices");
  const auto& model = basis.model();
  if (a.N() != model.N() || a.cell_size() != model.cell_size() || a.dim() != model.dim())
    throw std::invalid_argument("qe_variance: observable does not live on the basis model");
  VarianceReport rep;
  rep.reference = reference;
  rep.window = window;
  rep.basis_tag = basis.mode().tag();
  rep.observable_tag = a.tag();
  rep.members = select(basis, window);
  const std::size_t count = rep.members.size();
  rep.eigenvalues.resize(count);
  rep.expectations.resize(count);
  rep.references.resize(count);
  rep.gaps.resize(count);
  std::optional<FiberGrid> grid;
  if (reference == Reference::opn_abar) grid.emplace(model);
  const cplx mean = a.uniform_average();
  parallel_for(count, [&](std::size_t i) {
    const std::size_t u = rep.members[i];
    const CVector psi = basis.vector(u);
    rep.eigenvalues[i] = basis.eigenvalue(u);
    rep.expectations[i] = a.expectation(psi);
    rep.references[i] = reference == Reference::uniform ? mean : weighted_average(basis.coefficients(u), a, *grid);
    rep.gaps[i] = rep.expectations[i] - rep.references[i];
  });
  finish(rep);
  return rep;
}

double que_sup(const Eigenbasis& basis, const ScalarObservable& a) {
  return qe_variance(basis, a, Reference::uniform).sup_gap;
}

VarianceReport matrix_average(const Eigenbasis& basis, const BandMatrixObservable& k) {
  const auto& model = basis.model();
  if (model.cell_size() != 1) throw GraphError("matrix_average: band-matrix observables need one vertex per cell");
  if (4 * k.width() > model.N()) throw std::invalid_argument("matrix_average: band width must not exceed N/4");
  VarianceReport rep;
  rep.reference = Reference::matrix;
  rep.basis_tag = basis.mode().tag();
  rep.observable_tag = k.tag();
  rep.members = select(basis, std::nullopt);
  const std::size_t count = rep.members.size();
  rep.eigenvalues.resize(count);
  rep.expectations.resize(count);
  rep.references.resize(count);
  rep.gaps.resize(count);
  parallel_for(count, [&](std::size_t u) {
    const CVector psi = basis.vector(u);
    rep.eigenvalues[u] = basis.eigenvalue(u);
    rep.expectations[u] = k.expectation(psi);
    rep.references[u] = k.reference(psi);
    rep.gaps[u] = rep.expectations[u] - rep.references[u];
  });
  finish(rep);
  return rep;
}

double variance_bound(int cell_size, double sup_total_fraction, double sup_norm) {
  return 2.0 * cell_size * cell_size * sup_total_fraction * sup_norm * sup_norm;
}

}  // namespace fqe
