#include "fqe/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "fqe/parallel.hpp"

namespace fqe {

Fiber fiber(const PeriodicGraph& g, std::span<const double> theta) {
  const int d = g.dim();
  const int nu = g.cell_size();
  if (static_cast<int>(theta.size()) != d) throw GraphError("fiber: momentum has wrong dimension");
  Fiber f;
  f.theta.resize(d);
  for (int i = 0; i < d; ++i) f.theta[i] = theta[i] - std::floor(theta[i]);
  f.matrix = CMatrix::Zero(nu, nu);
  for (const auto& e : g.edges()) {
    double x = 0.0;
    for (int i = 0; i < d; ++i) x += f.theta[i] * e.offset[i];
    f.matrix(e.src, e.dst) += static_cast<double>(e.multiplicity) * cplx(std::cos(kTwoPi * x), std::sin(kTwoPi * x));
  }
  // Summation order differs between (n,ℓ) and (ℓ,n); symmetrize so the matrix is exactly Hermitian.
  f.matrix = (0.5 * (f.matrix + f.matrix.adjoint())).eval();
  for (int n = 0; n < nu; ++n) f.matrix(n, n) += g.potential()[n];
  return f;
}

int EigenSystem::group_of(int band) const {
  for (int k = 0; k < group_count(); ++k)
    if (std::find(groups[k].begin(), groups[k].end(), band) != groups[k].end()) return k;
  return -1;
}

double default_degen_tol(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return 1e-8 * (1.0 + solver.eigenvalues().cwiseAbs().maxCoeff());
}

EigenSystem eigensystem(const Fiber& f, std::optional<double> degen_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(f.matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensystem: Hermitian eigensolver did not converge");
  EigenSystem es;
  es.theta = f.theta;
  es.eigenvalues = solver.eigenvalues();
  es.eigenvectors = solver.eigenvectors();
  const double norm = es.eigenvalues.cwiseAbs().maxCoeff();
  es.degen_tol = degen_tol.value_or(1e-8 * (1.0 + norm));
  const int nu = static_cast<int>(es.eigenvalues.size());
  for (int s = 0; s < nu; ++s) {
    if (s == 0 || es.eigenvalues(s) - es.eigenvalues(s - 1) > es.degen_tol) es.groups.emplace_back();
    es.groups.back().push_back(s);
  }
  for (const auto& grp : es.groups) {
    double mean = 0.0;
    CMatrix p = CMatrix::Zero(nu, nu);
    for (int s : grp) {
      mean += es.eigenvalues(s);
      p.noalias() += es.eigenvectors.col(s) * es.eigenvectors.col(s).adjoint();
    }
    es.group_values.push_back(mean / static_cast<double>(grp.size()));
    es.projectors.push_back(std::move(p));
  }
  return es;
}

FiberGrid::FiberGrid(const FiniteGraphModel& model, std::optional<double> degen_tol)
    : N_(model.N()), systems_(model.cells()) {
  parallel_for(model.cells(), [&](std::size_t r) {
    const Momentum theta = model.momentum(r);
    systems_[r] = eigensystem(fiber(model.graph(), theta), degen_tol);
  });
}

namespace {

// In-place unitary DFT along every axis of a (ν × N^d) column-major block.
// sign = -1 is the forward transform U.
void dft_all_axes(CMatrix& data, int N, int d, int sign) {
  const int nu = static_cast<int>(data.rows());
  std::vector<cplx> twiddle(N);
  for (int t = 0; t < N; ++t) {
    const double a = kTwoPi * static_cast<double>(t) / N;
    twiddle[t] = cplx(std::cos(a), sign * std::sin(a));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const std::size_t cells = static_cast<std::size_t>(data.cols());
  std::vector<cplx> line(N), out(N);
  std::size_t stride = cells;
  for (int axis = 0; axis < d; ++axis) {
    stride /= static_cast<std::size_t>(N);
    const std::size_t block = stride * static_cast<std::size_t>(N);
    for (std::size_t base = 0; base < cells; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t first = base + inner;
        for (int n = 0; n < nu; ++n) {
          for (int k = 0; k < N; ++k) line[k] = data(n, first + k * stride);
          for (int j = 0; j < N; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < N; ++k) acc += twiddle[(static_cast<long>(j) * k) % N] * line[k];
            out[j] = acc * scale;
          }
          for (int j = 0; j < N; ++j) data(n, first + j * stride) = out[j];
        }
      }
    }
  }
}

CVector apply_template_action(const FiniteGraphModel& model, const CVector& psi) {
  const auto& g = model.graph();
  CVector out = CVector::Zero(psi.size());
  for (std::size_t cell = 0; cell < model.cells(); ++cell) {
    for (const auto& e : g.edges()) {
      out(model.index(cell, e.src)) +=
          static_cast<double>(e.multiplicity) * psi(model.index(model.shifted(cell, e.offset), e.dst));
    }
    for (int n = 0; n < g.cell_size(); ++n) out(model.index(cell, n)) += g.potential()[n] * psi(model.index(cell, n));
  }
  return out;
}

}  // namespace

FiberCoefficients floquet_forward(const CVector& psi, const FiniteGraphModel& model) {
  if (static_cast<std::size_t>(psi.size()) != model.size())
    throw std::invalid_argument("floquet_forward: vector dimension does not match the model");
  FiberCoefficients c;
  c.N = model.N();
  c.dim = model.dim();
  c.values = Eigen::Map<const CMatrix>(psi.data(), model.cell_size(), static_cast<Eigen::Index>(model.cells()));
  dft_all_axes(c.values, model.N(), model.dim(), -1);
  return c;
}

CVector floquet_inverse(const FiberCoefficients& coeffs, const FiniteGraphModel& model) {
  if (coeffs.values.rows() != model.cell_size() ||
      static_cast<std::size_t>(coeffs.values.cols()) != model.cells())
    throw std::invalid_argument("floquet_inverse: coefficient shape does not match the model");
  CMatrix data = coeffs.values;
  dft_all_axes(data, model.N(), model.dim(), +1);
  return Eigen::Map<const CVector>(data.data(), data.size());
}

CVector plane_wave(const FiniteGraphModel& model, std::size_t r) {
  const IntVec rv = model.cell_coords(r);
  const double norm = 1.0 / std::sqrt(static_cast<double>(model.cells()));
  CVector e(static_cast<Eigen::Index>(model.cells()));
  for (std::size_t cell = 0; cell < model.cells(); ++cell) {
    const IntVec k = model.cell_coords(cell);
    long dot = 0;
    for (std::size_t i = 0; i < k.size(); ++i) dot += static_cast<long>(rv[i]) * k[i];
    const double a = kTwoPi * static_cast<double>(dot % model.N()) / model.N();
    e(static_cast<Eigen::Index>(cell)) = norm * cplx(std::cos(a), std::sin(a));
  }
  return e;
}

BlockDiagonalizationCheck verify_block_diagonalization(const FiniteGraphModel& model, double tol,
                                                       std::size_t cap) {
  if (model.size() > cap) throw CapacityError("verify_block_diagonalization: model exceeds cap");
  std::vector<CMatrix> fibers(model.cells());
  for (std::size_t r = 0; r < model.cells(); ++r) fibers[r] = fiber(model.graph(), model.momentum(r)).matrix;
  std::vector<double> residual(model.size(), 0.0);
  parallel_for(model.size(), [&](std::size_t i) {
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(model.size()));
    psi(static_cast<Eigen::Index>(i)) = 1.0;
    const FiberCoefficients lhs = floquet_forward(apply_template_action(model, psi), model);
    FiberCoefficients rhs = floquet_forward(psi, model);
    for (std::size_t r = 0; r < model.cells(); ++r) {
      const Eigen::Index col = static_cast<Eigen::Index>(r);
      rhs.values.col(col) = fibers[r] * rhs.values.col(col);
    }
    residual[i] = (lhs.values - rhs.values).norm();
  });
  BlockDiagonalizationCheck check;
  check.max_residual = *std::max_element(residual.begin(), residual.end());
  check.passed = check.max_residual <= tol;
  return check;
}

namespace {
std::vector<Momentum> momentum_grid(int d, int grid) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid);
  std::vector<Momentum> out(total, Momentum(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int i = d - 1; i >= 0; --i) {
      out[idx][i] = static_cast<double>(rest % grid) / grid;
      rest /= grid;
    }
  }
  return out;
}
}  // namespace

BandTable band_structure(const PeriodicGraph& g, int grid) {
  if (grid < 1) throw std::invalid_argument("band_structure: grid must be positive");
  BandTable t;
  t.dim = g.dim();
  t.grid = grid;
  t.thetas = momentum_grid(g.dim(), grid);
  t.bands.resize(t.thetas.size());
  std::vector<int> classes(t.thetas.size());
  parallel_for(t.thetas.size(), [&](std::size_t i) {
    const EigenSystem es = eigensystem(fiber(g, t.thetas[i]));
    t.bands[i] = es.eigenvalues;
    classes[i] = es.group_count();
  });
  std::map<int, std::size_t> histogram;
  for (int c : classes) ++histogram[c];
  int mode = classes.empty() ? 0 : classes[0];
  std::size_t best = 0;
  for (auto [c, count] : histogram)
    if (count > best) {
      best = count;
      mode = c;
    }
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] != mode) t.exceptional_points.push_back(i);
  return t;
}

void write_band_csv(std::ostream& os, const BandTable& table) {
  const int nu = table.bands.empty() ? 0 : static_cast<int>(table.bands[0].size());
  for (int i = 0; i < table.dim; ++i) os << (i ? "," : "") << "theta_" << (i + 1);
  for (int s = 0; s < nu; ++s) os << ",E_" << (s + 1);
  os << "\n";
  os.precision(17);
  for (std::size_t p = 0; p < table.thetas.size(); ++p) {
    for (int i = 0; i < table.dim; ++i) os << (i ? "," : "") << table.thetas[p][i];
    for (int s = 0; s < nu; ++s) os << "," << table.bands[p](s);
    os << "\n";
  }
}

std::vector<FlatBand> detect_flat_bands(const PeriodicGraph& g, int grid, double threshold) {
  const BandTable t = band_structure(g, grid);
  std::vector<FlatBand> flat;
  if (t.bands.empty()) return flat;
  std::vector<double> candidates;
  for (Eigen::Index s = 0; s < t.bands[0].size(); ++s) {
    const double c = t.bands[0](s);
    if (candidates.empty() || c - candidates.back() > threshold) candidates.push_back(c);
  }
  for (double c : candidates) {
    double lo = c, hi = c;
    bool present = true;
    for (const auto& bands : t.bands) {
      Eigen::Index best;
      (bands.array() - c).abs().minCoeff(&best);
      const double v = bands(best);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (hi - lo >= threshold) {
        present = false;
        break;
      }
    }
    if (present) flat.push_back({0.5 * (lo + hi), hi - lo});
  }
  return flat;
}

}  // namespace fqe
