#include "fqe/symbol.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fqe/finite.hpp"
#include "fqe/parallel.hpp"

namespace fqe {

Symbol::Symbol(int N, int dim, int cell_size) : N_(N), dim_(dim), nu_(cell_size), cells_(1) {
  for (int i = 0; i < dim_; ++i) cells_ *= static_cast<std::size_t>(N_);
  data_.assign(cells_ * cells_ * static_cast<std::size_t>(nu_ * nu_), cplx(0.0));
}

Symbol Symbol::zero(const FiniteGraphModel& model) { return Symbol(model.N(), model.dim(), model.cell_size()); }

Symbol Symbol::multiplication(const FiniteGraphModel& model, const ScalarObservable& a) {
  Symbol s = zero(model);
  const FiberCoefficients am = a.fourier(model);
  for (std::size_t r = 0; r < s.cells_; ++r)
    for (std::size_t m = 0; m < s.cells_; ++m)
      for (int n = 0; n < s.nu_; ++n) s.coefficient(r, m, n, n) = am.values(n, static_cast<Eigen::Index>(m));
  return s;
}

CMatrix Symbol::block(std::size_t r, std::size_t m) const {
  CMatrix b(nu_, nu_);
  for (int n = 0; n < nu_; ++n)
    for (int l = 0; l < nu_; ++l) b(n, l) = coefficient(r, m, n, l);
  return b;
}

void Symbol::set_block(std::size_t r, std::size_t m, const CMatrix& b) {
  for (int n = 0; n < nu_; ++n)
    for (int l = 0; l < nu_; ++l) coefficient(r, m, n, l) = b(n, l);
}

cplx Symbol::value(const FiniteGraphModel& model, std::size_t k, std::size_t r, int n, int l) const {
  const IntVec kv = model.cell_coords(k);
  cplx sum = 0.0;
  for (std::size_t m = 0; m < cells_; ++m) {
    const IntVec mv = model.cell_coords(m);
    long dot = 0;
    for (int i = 0; i < dim_; ++i) dot += static_cast<long>(mv[i]) * kv[i];
    const double a = kTwoPi * static_cast<double>(dot % N_) / N_;
    sum += coefficient(r, m, n, l) * cplx(std::cos(a), std::sin(a));
  }
  return sum / std::sqrt(static_cast<double>(cells_));
}

double Symbol::hs_norm_squared() const {
  CompensatedSum<double> sum;
  for (const cplx& c : data_) sum.add(std::norm(c));
  return sum.value() / static_cast<double>(cells_);
}

Symbol Symbol::operator-(const Symbol& other) const {
  if (other.N_ != N_ || other.dim_ != dim_ || other.nu_ != nu_) throw std::invalid_argument("Symbol: shape mismatch");
  Symbol out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_shape(const Symbol& s, const FiniteGraphModel& model) {
  if (s.N() != model.N() || s.dim() != model.dim() || s.cell_size() != model.cell_size())
    throw std::invalid_argument("quantize: symbol and model dimensions differ");
}

// Index of coords(j) − coords(r) mod N.
std::vector<std::size_t> difference_table(const FiniteGraphModel& model) {
  const std::size_t cells = model.cells();
  std::vector<IntVec> coords(cells);
  for (std::size_t c = 0; c < cells; ++c) coords[c] = model.cell_coords(c);
  std::vector<std::size_t> table(cells * cells);
  for (std::size_t j = 0; j < cells; ++j)
    for (std::size_t r = 0; r < cells; ++r) {
      IntVec diff(coords[j]);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= coords[r][i];
      table[j * cells + r] = model.cell_index(diff);
    }
  return table;
}

}  // namespace

PhaseSpaceOperator::PhaseSpaceOperator(const Symbol& symbol, const FiniteGraphModel& model)
    : symbol_(&symbol), model_(model) {
  check_shape(symbol, model);
}

CVector PhaseSpaceOperator::apply(const CVector& psi) const {
  const FiberCoefficients g = floquet_forward(psi, model_);
  const std::size_t cells = model_.cells();
  const int nu = model_.cell_size();
  const auto diff = difference_table(model_);
  FiberCoefficients h = g;
  h.values.setZero();
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));
  for (std::size_t j = 0; j < cells; ++j)
    for (std::size_t r = 0; r < cells; ++r) {
      const std::size_t m = diff[j * cells + r];
      for (int n = 0; n < nu; ++n) {
        cplx acc = 0.0;
        for (int l = 0; l < nu; ++l) acc += symbol_->coefficient(r, m, n, l) * g.values(l, static_cast<Eigen::Index>(r));
        h.values(n, static_cast<Eigen::Index>(j)) += scale * acc;
      }
    }
  return floquet_inverse(h, model_);
}

CMatrix PhaseSpaceOperator::dense(std::size_t cap) const {
  if (model_.size() > cap) throw CapacityError("PhaseSpaceOperator::dense: dimension exceeds cap");
  const std::size_t cells = model_.cells();
  const int nu = model_.cell_size();
  const Eigen::Index dim = static_cast<Eigen::Index>(model_.size());
  const auto diff = difference_table(model_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));
  // Momentum-space matrix G[(j,n),(r,ℓ)] = N^{-d/2} F̂(j − r, r; n, ℓ); Op_N(F) = U^{-1} G U.
  CMatrix g(dim, dim);
  for (std::size_t j = 0; j < cells; ++j)
    for (std::size_t r = 0; r < cells; ++r) {
      const std::size_t m = diff[j * cells + r];
      for (int n = 0; n < nu; ++n)
        for (int l = 0; l < nu; ++l)
          g(static_cast<Eigen::Index>(model_.index(j, n)), static_cast<Eigen::Index>(model_.index(r, l))) =
              scale * symbol_->coefficient(r, m, n, l);
    }
  auto inverse_columns = [&](CMatrix& mat) {
    parallel_for(static_cast<std::size_t>(mat.cols()), [&](std::size_t c) {
      FiberCoefficients fc;
      fc.N = model_.N();
      fc.dim = model_.dim();
      fc.values = Eigen::Map<const CMatrix>(mat.col(static_cast<Eigen::Index>(c)).data(), nu,
                                            static_cast<Eigen::Index>(cells));
      mat.col(static_cast<Eigen::Index>(c)) = floquet_inverse(fc, model_);
    });
  };
  inverse_columns(g);             // U^{-1} G
  CMatrix h = g.adjoint();
  inverse_columns(h);             // U^{-1} (U^{-1} G)^*
  return h.adjoint();             // U^{-1} G U
}

PhaseSpaceOperator quantize(const Symbol& symbol, const FiniteGraphModel& model) {
  return PhaseSpaceOperator(symbol, model);
}

cplx time_average_kernel(double x) {
  if (std::abs(x) < 1e-8) return {1.0 - x * x / 6.0, x / 2.0};
  const double s = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * s * s / x};
}

EgorovSymbols egorov_symbols(const FiniteGraphModel& model, const ScalarObservable& a, double T,
                             const EgorovOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("egorov_symbols: T must be positive");
  const FiberGrid grid(model);
  const std::size_t cells = model.cells();
  const int nu = model.cell_size();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t r = 0; r < cells; ++r) {
    lo = std::min(lo, grid.at(r).eigenvalues.minCoeff());
    hi = std::max(hi, grid.at(r).eigenvalues.maxCoeff());
  }
  const double diameter = hi - lo;
  const double eps = options.coincide_tol.value_or(1e-8 * (diameter > 0.0 ? diameter : 1.0));

  const FiberCoefficients am = a.fourier(model);
  std::vector<std::size_t> sum_index(cells * cells);
  for (std::size_t r = 0; r < cells; ++r) {
    const IntVec rv = model.cell_coords(r);
    for (std::size_t m = 0; m < cells; ++m) {
      IntVec j = model.cell_coords(m);
      for (std::size_t i = 0; i < j.size(); ++i) j[i] += rv[i];
      sum_index[r * cells + m] = model.cell_index(j);
    }
  }

  EgorovSymbols out{Symbol::zero(model), Symbol::zero(model), Symbol::zero(model), eps};
  parallel_for(cells, [&](std::size_t r) {
    const EigenSystem& right = grid.at(r);
    for (std::size_t m = 0; m < cells; ++m) {
      const EigenSystem& left = grid.at(sum_index[r * cells + m]);
      const Eigen::VectorXcd diag = am.values.col(static_cast<Eigen::Index>(m));
      CMatrix ft = CMatrix::Zero(nu, nu);
      CMatrix b = CMatrix::Zero(nu, nu);
      for (int w = 0; w < right.group_count(); ++w) {
        const CMatrix dp = diag.asDiagonal() * right.projectors[w];
        for (int s = 0; s < left.group_count(); ++s) {
          const double delta = left.group_values[s] - right.group_values[w];
          const CMatrix term = left.projectors[s] * dp;
          ft += time_average_kernel(T * delta) * term;
          if (std::abs(delta) <= eps) b += term;
        }
      }
      out.time_averaged.set_block(r, m, ft);
      out.limit.set_block(r, m, b);
      if (m == 0) out.main.set_block(r, m, b);
    }
  });
  return out;
}

CMatrix time_averaged_observable(const FiniteGraphModel& model, const ScalarObservable& a, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("time_averaged_observable: T must be positive");
  const Eigen::MatrixXd h = hamiltonian(model).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("time_averaged_observable: eigensolver failed");
  const CMatrix v = solver.eigenvectors().cast<cplx>();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  CMatrix m = v.adjoint() * a.values().asDiagonal() * v;
  for (Eigen::Index u = 0; u < m.rows(); ++u)
    for (Eigen::Index w = 0; w < m.cols(); ++w) m(u, w) *= time_average_kernel(T * (lambda(u) - lambda(w)));
  return v * m * v.adjoint();
}

}  // namespace fqe
