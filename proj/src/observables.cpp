#include "fqe/observables.hpp"

#include <cmath>
#include <cstdlib>

namespace fqe {

ScalarObservable::ScalarObservable(const FiniteGraphModel& model, CVector values, std::string tag)
    : N_(model.N()), dim_(model.dim()), nu_(model.cell_size()), values_(std::move(values)), tag_(std::move(tag)) {
  if (static_cast<std::size_t>(values_.size()) != model.size())
    throw std::invalid_argument("ScalarObservable: value count does not match the model");
}

namespace {
template <class F>
CVector per_cell(const FiniteGraphModel& model, F value_of_cell) {
  CVector v(static_cast<Eigen::Index>(model.size()));
  for (std::size_t cell = 0; cell < model.cells(); ++cell) {
    const double x = value_of_cell(model.cell_coords(cell));
    for (int n = 0; n < model.cell_size(); ++n) v(static_cast<Eigen::Index>(model.index(cell, n))) = x;
  }
  return v;
}
}  // namespace

ScalarObservable ScalarObservable::constant(const FiniteGraphModel& model, double c) {
  return ScalarObservable(model, CVector::Constant(static_cast<Eigen::Index>(model.size()), c),
                          "constant:" + std::to_string(c));
}

ScalarObservable ScalarObservable::half_indicator(const FiniteGraphModel& model) {
  const int N = model.N();
  return ScalarObservable(model, per_cell(model, [N](const IntVec& k) { return 2 * k[0] < N ? 1.0 : 0.0; }), "half");
}

ScalarObservable ScalarObservable::quarter_indicator(const FiniteGraphModel& model) {
  const int N = model.N();
  return ScalarObservable(model, per_cell(model, [N](const IntVec& k) { return 4 * k[0] < N ? 1.0 : 0.0; }),
                          "quarter");
}

ScalarObservable ScalarObservable::alternating_block(const FiniteGraphModel& model) {
  return ScalarObservable(model, per_cell(model, [](const IntVec& k) { return k[0] % 2 == 0 ? 1.0 : 0.0; }),
                          "alternating-block");
}

ScalarObservable ScalarObservable::cosine(const FiniteGraphModel& model, const IntVec& frequency) {
  if (static_cast<int>(frequency.size()) != model.dim())
    throw std::invalid_argument("cosine observable: frequency has wrong dimension");
  const int N = model.N();
  std::string tag = "cosine:";
  for (std::size_t i = 0; i < frequency.size(); ++i) tag += (i ? "," : "") + std::to_string(frequency[i]);
  return ScalarObservable(model,
                          per_cell(model,
                                   [&](const IntVec& k) {
                                     long dot = 0;
                                     for (std::size_t i = 0; i < k.size(); ++i) dot += static_cast<long>(frequency[i]) * k[i];
                                     long m = dot % N;
                                     if (m < 0) m += N;
                                     return std::cos(kTwoPi * static_cast<double>(m) / N);
                                   }),
                          tag);
}

ScalarObservable ScalarObservable::per_sublattice(const FiniteGraphModel& model, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != model.cell_size())
    throw std::invalid_argument("per_sublattice: need one value per cell vertex");
  CVector v(static_cast<Eigen::Index>(model.size()));
  for (std::size_t cell = 0; cell < model.cells(); ++cell)
    for (int n = 0; n < model.cell_size(); ++n) v(static_cast<Eigen::Index>(model.index(cell, n))) = values[n];
  return ScalarObservable(model, v, "sublattice");
}

cplx ScalarObservable::block_average(int q) const {
  CompensatedSum<cplx> sum;
  const Eigen::Index cells = values_.size() / nu_;
  for (Eigen::Index cell = 0; cell < cells; ++cell) sum.add(values_(cell * nu_ + q));
  return sum.value() / static_cast<double>(cells);
}

cplx ScalarObservable::uniform_average() const {
  CompensatedSum<cplx> sum;
  for (Eigen::Index i = 0; i < values_.size(); ++i) sum.add(values_(i));
  return sum.value() / static_cast<double>(values_.size());
}

FiberCoefficients ScalarObservable::fourier(const FiniteGraphModel& model) const { return floquet_forward(values_, model); }

cplx ScalarObservable::expectation(const CVector& psi) const {
  CompensatedSum<cplx> sum;
  for (Eigen::Index i = 0; i < psi.size(); ++i) sum.add(std::norm(psi(i)) * values_(i));
  return sum.value();
}

// ---------------------------------------------------------------------------

BandMatrixObservable::BandMatrixObservable(const FiniteGraphModel& model, int width,
                                           std::map<IntVec, CVector> diagonals, std::string tag)
    : model_(model), width_(width), diagonals_(std::move(diagonals)), tag_(std::move(tag)) {
  if (model.cell_size() != 1) throw GraphError("band-matrix observables are defined for one vertex per cell");
  if (width_ < 0) throw std::invalid_argument("band-matrix width must be non-negative");
  for (const auto& [tau, values] : diagonals_) {
    if (static_cast<int>(tau.size()) != model.dim()) throw std::invalid_argument("band-matrix offset dimension");
    for (int t : tau)
      if (std::abs(t) > width_) throw std::invalid_argument("band-matrix offset exceeds width");
    if (static_cast<std::size_t>(values.size()) != model.cells()) throw std::invalid_argument("band-matrix diagonal size");
  }
}

BandMatrixObservable BandMatrixObservable::nearest_neighbor(const FiniteGraphModel& model, int direction) {
  if (direction < 0 || direction >= model.dim()) throw std::invalid_argument("nearest_neighbor: bad direction");
  std::map<IntVec, CVector> diag;
  for (int sign : {1, -1}) {
    IntVec tau(model.dim(), 0);
    tau[direction] = sign;
    diag[tau] = CVector::Ones(static_cast<Eigen::Index>(model.cells()));
  }
  return BandMatrixObservable(model, 1, diag, "nn:" + std::to_string(direction));
}

BandMatrixObservable BandMatrixObservable::from_hamiltonian(const FiniteGraphModel& model) {
  std::map<IntVec, CVector> diag;
  const auto& g = model.graph();
  const Eigen::Index cells = static_cast<Eigen::Index>(model.cells());
  for (const auto& e : g.edges()) {
    auto it = diag.find(e.offset);
    if (it == diag.end()) it = diag.emplace(e.offset, CVector::Zero(cells)).first;
    it->second.array() += static_cast<double>(e.multiplicity);
  }
  if (g.potential()[0] != 0.0) {
    const IntVec zero(model.dim(), 0);
    auto it = diag.find(zero);
    if (it == diag.end()) it = diag.emplace(zero, CVector::Zero(cells)).first;
    it->second.array() += g.potential()[0];
  }
  return BandMatrixObservable(model, g.max_offset(), diag, "hamiltonian");
}

BandMatrixObservable BandMatrixObservable::diagonal(const FiniteGraphModel& model, const ScalarObservable& a) {
  return BandMatrixObservable(model, 0, {{IntVec(model.dim(), 0), a.values()}}, "diagonal:" + a.tag());
}

CVector BandMatrixObservable::apply(const CVector& psi) const {
  CVector out = CVector::Zero(psi.size());
  for (const auto& [tau, values] : diagonals_)
    for (std::size_t cell = 0; cell < model_.cells(); ++cell)
      out(static_cast<Eigen::Index>(cell)) +=
          values(static_cast<Eigen::Index>(cell)) * psi(static_cast<Eigen::Index>(model_.shifted(cell, tau)));
  return out;
}

cplx BandMatrixObservable::expectation(const CVector& psi) const {
  CompensatedSum<cplx> sum;
  for (const auto& [tau, values] : diagonals_)
    for (std::size_t cell = 0; cell < model_.cells(); ++cell)
      sum.add(std::conj(psi(static_cast<Eigen::Index>(cell))) * values(static_cast<Eigen::Index>(cell)) *
              psi(static_cast<Eigen::Index>(model_.shifted(cell, tau))));
  return sum.value();
}

cplx BandMatrixObservable::reference(const CVector& psi) const {
  CompensatedSum<cplx> total;
  const double cells = static_cast<double>(model_.cells());
  for (const auto& [tau, values] : diagonals_) {
    CompensatedSum<cplx> mean, overlap;
    for (std::size_t cell = 0; cell < model_.cells(); ++cell) {
      mean.add(values(static_cast<Eigen::Index>(cell)));
      overlap.add(std::conj(psi(static_cast<Eigen::Index>(cell))) *
                  psi(static_cast<Eigen::Index>(model_.shifted(cell, tau))));
    }
    total.add(mean.value() / cells * overlap.value());
  }
  return total.value();
}

double BandMatrixObservable::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& [tau, values] : diagonals_) {
    IntVec neg(tau);
    for (int& t : neg) t = -t;
    auto it = diagonals_.find(neg);
    for (std::size_t cell = 0; cell < model_.cells(); ++cell) {
      const cplx k = values(static_cast<Eigen::Index>(cell));
      const cplx back =
          it == diagonals_.end() ? cplx(0.0) : it->second(static_cast<Eigen::Index>(model_.shifted(cell, tau)));
      worst = std::max(worst, std::abs(k - std::conj(back)));
    }
  }
  return worst;
}

}  // namespace fqe
