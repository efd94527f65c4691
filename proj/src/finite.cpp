#include "fqe/finite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "fqe/parallel.hpp"

namespace fqe {

FiniteOperator::FiniteOperator(const FiniteGraphModel& model, std::size_t cap) : model_(model) {
  if (model.size() > cap) throw CapacityError("hamiltonian: nu N^d exceeds cap");
  const auto& g = model.graph();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(model.cells() * (g.edges().size() + g.cell_size()));
  for (std::size_t cell = 0; cell < model.cells(); ++cell) {
    for (const auto& e : g.edges()) {
      triplets.emplace_back(static_cast<int>(model.index(cell, e.src)),
                            static_cast<int>(model.index(model.shifted(cell, e.offset), e.dst)),
                            static_cast<double>(e.multiplicity));
    }
    for (int n = 0; n < g.cell_size(); ++n) {
      if (g.potential()[n] != 0.0) {
        const int i = static_cast<int>(model.index(cell, n));
        triplets.emplace_back(i, i, g.potential()[n]);
      }
    }
  }
  const int dim = static_cast<int>(model.size());
  matrix_.resize(dim, dim);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

CVector FiniteOperator::apply(const CVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != model_.size())
    throw std::invalid_argument("FiniteOperator::apply: dimension mismatch");
  return matrix_.cast<cplx>() * psi;
}

Eigen::MatrixXd FiniteOperator::dense(std::size_t cap) const {
  if (model_.size() > cap) throw CapacityError("FiniteOperator::dense: nu N^d exceeds dense cap");
  return Eigen::MatrixXd(matrix_);
}

FiniteOperator hamiltonian(const FiniteGraphModel& model, std::size_t cap) { return FiniteOperator(model, cap); }

// ---------------------------------------------------------------------------

BasisMode BasisMode::parse(std::string_view text) {
  BasisMode m;
  if (text == "fiber") {
    m.kind = BasisKind::fiber;
  } else if (text == "real-mixed" || text == "real_mixed") {
    m.kind = BasisKind::real_mixed;
  } else if (text == "swap-mixed" || text == "swap_mixed") {
    m.kind = BasisKind::swap_mixed;
  } else if (text == "dense") {
    m.kind = BasisKind::dense;
  } else if (text.rfind("random:", 0) == 0 || text.rfind("random_mix:", 0) == 0) {
    m.kind = BasisKind::random_mix;
    const auto digits = text.substr(text.find(':') + 1);
    if (digits.empty()) throw std::invalid_argument("basis: random mode needs a seed");
    m.seed = std::stoull(std::string(digits));
  } else {
    throw std::invalid_argument("unknown basis mode '" + std::string(text) + "'");
  }
  return m;
}

std::string BasisMode::tag() const {
  switch (kind) {
    case BasisKind::fiber: return "fiber";
    case BasisKind::real_mixed: return "real-mixed";
    case BasisKind::swap_mixed: return "swap-mixed";
    case BasisKind::random_mix: return "random:" + std::to_string(seed);
    case BasisKind::dense: return "dense";
    case BasisKind::completed: return "completed";
  }
  return "unknown";
}

CVector Eigenbasis::vector(std::size_t u) const {
  if (!momentum_storage()) return columns_.col(static_cast<Eigen::Index>(u));
  const int nu = model_.cell_size();
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(model_.size()));
  for (const auto& c : components_[u]) {
    const CVector e = plane_wave(model_, c.momentum);
    for (std::size_t cell = 0; cell < model_.cells(); ++cell)
      for (int n = 0; n < nu; ++n)
        psi(static_cast<Eigen::Index>(model_.index(cell, n))) += e(static_cast<Eigen::Index>(cell)) * c.cell_vector(n);
  }
  return psi;
}

FiberCoefficients Eigenbasis::coefficients(std::size_t u) const {
  if (!momentum_storage()) return floquet_forward(vector(u), model_);
  FiberCoefficients c;
  c.N = model_.N();
  c.dim = model_.dim();
  c.values = CMatrix::Zero(model_.cell_size(), static_cast<Eigen::Index>(model_.cells()));
  for (const auto& comp : components_[u]) c.values.col(static_cast<Eigen::Index>(comp.momentum)) += comp.cell_vector;
  return c;
}

double Eigenbasis::gram_deviation() const {
  CMatrix v(static_cast<Eigen::Index>(model_.size()), static_cast<Eigen::Index>(size()));
  for (std::size_t u = 0; u < size(); ++u) v.col(static_cast<Eigen::Index>(u)) = vector(u);
  const CMatrix gram = v.adjoint() * v;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double Eigenbasis::max_relative_residual(const FiniteOperator& h) const {
  std::vector<double> res(size());
  parallel_for(size(), [&](std::size_t u) {
    const CVector psi = vector(u);
    res[u] = (h.apply(psi) - eigenvalues_[u] * psi).norm() / (1.0 + std::abs(eigenvalues_[u]));
  });
  return res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
}

namespace {

CMatrix haar_unitary(int k, std::uint64_t seed, std::uint64_t group) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(group), static_cast<std::uint32_t>(group >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

std::size_t negated_momentum(const FiniteGraphModel& model, std::size_t r) {
  IntVec k = model.cell_coords(r);
  for (int& x : k) x = -x;
  return model.cell_index(k);
}

}  // namespace

Eigenbasis fiber_eigenbasis(const FiniteGraphModel& model, const BasisMode& mode) {
  if (mode.kind == BasisKind::dense) return dense_eigenbasis(model);
  if (mode.kind == BasisKind::completed) throw std::invalid_argument("fiber_eigenbasis: completed bases need seed vectors");
  if (model.size() > kFiberCap) throw CapacityError("fiber_eigenbasis: nu N^d exceeds fiber cap");
  Eigenbasis basis(model, mode);
  const FiberGrid grid(model);
  const int nu = model.cell_size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  auto push = [&](double lambda, Provenance prov, std::vector<MomentumComponent> comps) {
    basis.eigenvalues_.push_back(lambda);
    basis.provenance_.push_back(prov);
    basis.components_.push_back(std::move(comps));
  };
  auto fiber_prov = [](std::size_t r, int s) { return Provenance{Provenance::Kind::fiber, r, s}; };
  const Provenance mixed{Provenance::Kind::mixed, 0, 0};

  switch (mode.kind) {
    case BasisKind::fiber:
      for (std::size_t r = 0; r < model.cells(); ++r) {
        const auto& es = grid.at(r);
        for (int s = 0; s < nu; ++s) push(es.eigenvalues(s), fiber_prov(r, s), {{r, es.eigenvectors.col(s)}});
      }
      break;

    case BasisKind::real_mixed:
      for (std::size_t r = 0; r < model.cells(); ++r) {
        const std::size_t p = negated_momentum(model, r);
        if (p == r) {
          const CMatrix h = fiber(model.graph(), model.momentum(r)).matrix;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(h.real());
          if (real_solver.info() != Eigen::Success) throw NumericalError("real_mixed: eigensolver failed");
          for (int s = 0; s < nu; ++s)
            push(real_solver.eigenvalues()(s), fiber_prov(r, s),
                 {{r, real_solver.eigenvectors().col(s).cast<cplx>()}});
        } else if (r < p) {
          const auto& es = grid.at(r);
          const cplx i_unit(0.0, 1.0);
          for (int s = 0; s < nu; ++s) {
            const CVector f = es.eigenvectors.col(s);
            const CVector fc = f.conjugate();
            push(es.eigenvalues(s), mixed, {{r, f * inv_sqrt2}, {p, fc * inv_sqrt2}});
            push(es.eigenvalues(s), mixed, {{r, f * (inv_sqrt2 / i_unit)}, {p, fc * (-inv_sqrt2 / i_unit)}});
          }
        }
      }
      break;

    case BasisKind::swap_mixed: {
      if (model.dim() != 2 || nu != 1)
        throw GraphError("swap_mixed basis requires a two-dimensional lattice with one vertex per cell");
      for (std::size_t r = 0; r < model.cells(); ++r) {
        const IntVec l = model.cell_coords(r);
        const std::size_t t = model.cell_index({l[1], l[0]});
        const double lambda = grid.at(r).eigenvalues(0);
        CVector one(1);
        one(0) = 1.0;
        if (t == r) {
          push(lambda, fiber_prov(r, 0), {{r, one}});
          continue;
        }
        if (std::abs(lambda - grid.at(t).eigenvalues(0)) > global_degen_tol(lambda))
          throw GraphError("swap_mixed basis requires bands symmetric under exchanging the two axes");
        const double sign = l[0] > l[1] ? 1.0 : -1.0;
        push(lambda, mixed, {{r, one * inv_sqrt2}, {t, one * (sign * inv_sqrt2)}});
      }
      break;
    }

    case BasisKind::random_mix: {
      struct Entry {
        double lambda;
        std::size_t r;
        int s;
      };
      std::vector<Entry> entries;
      for (std::size_t r = 0; r < model.cells(); ++r)
        for (int s = 0; s < nu; ++s) entries.push_back({grid.at(r).eigenvalues(s), r, s});
      std::stable_sort(entries.begin(), entries.end(),
                       [](const Entry& a, const Entry& b) { return a.lambda < b.lambda; });
      std::size_t start = 0;
      std::uint64_t group = 0;
      while (start < entries.size()) {
        std::size_t end = start + 1;
        while (end < entries.size() &&
               entries[end].lambda - entries[end - 1].lambda <= global_degen_tol(entries[end - 1].lambda))
          ++end;
        const int k = static_cast<int>(end - start);
        double mean = 0.0;
        for (std::size_t i = start; i < end; ++i) mean += entries[i].lambda;
        mean /= k;
        const CMatrix q = haar_unitary(k, mode.seed, group);
        for (int u = 0; u < k; ++u) {
          std::map<std::size_t, CVector> by_momentum;
          for (int i = 0; i < k; ++i) {
            const Entry& e = entries[start + i];
            const CVector contrib = q(i, u) * grid.at(e.r).eigenvectors.col(e.s);
            auto it = by_momentum.find(e.r);
            if (it == by_momentum.end()) {
              by_momentum.emplace(e.r, contrib);
            } else {
              it->second += contrib;
            }
          }
          std::vector<MomentumComponent> comps;
          for (auto& [r, f] : by_momentum) comps.push_back({r, f});
          push(k == 1 ? entries[start].lambda : mean,
               k == 1 ? fiber_prov(entries[start].r, entries[start].s) : mixed, std::move(comps));
        }
        start = end;
        ++group;
      }
      break;
    }

    default:
      break;
  }
  return basis;
}

Eigenbasis dense_eigenbasis(const FiniteGraphModel& model) {
  if (model.size() > kDenseCap) throw CapacityError("dense_eigenbasis: nu N^d exceeds dense cap");
  const Eigen::MatrixXd h = FiniteOperator(model).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("dense_eigenbasis: eigensolver failed");
  Eigenbasis basis(model, BasisMode{BasisKind::dense, 0});
  basis.columns_ = solver.eigenvectors().cast<cplx>();
  for (Eigen::Index u = 0; u < solver.eigenvalues().size(); ++u) {
    basis.eigenvalues_.push_back(solver.eigenvalues()(u));
    basis.provenance_.push_back({Provenance::Kind::dense, 0, 0});
  }
  return basis;
}

Eigenbasis complete_eigenbasis(const FiniteGraphModel& model, const std::vector<CVector>& seeds) {
  if (model.size() > kDenseCap) throw CapacityError("complete_eigenbasis: nu N^d exceeds dense cap");
  const FiniteOperator op(model);
  const Eigen::MatrixXd h = op.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("complete_eigenbasis: eigensolver failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::Index n = lambda.size();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0 || lambda(i) - lambda(i - 1) > global_degen_tol(lambda(i - 1))) groups.push_back({i, i});
    groups.back().second = i + 1;
  }

  std::vector<std::vector<std::size_t>> seeds_in_group(groups.size());
  std::vector<double> seed_values(seeds.size());
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    const CVector& s = seeds[j];
    if (static_cast<std::size_t>(s.size()) != model.size()) throw std::invalid_argument("complete_eigenbasis: seed dimension");
    const CVector hs = op.apply(s);
    const double rq = s.dot(hs).real();
    if ((hs - rq * s).norm() > 1e-8 * (1.0 + std::abs(rq)))
      throw std::invalid_argument("complete_eigenbasis: seed vector is not an eigenvector");
    seed_values[j] = rq;
    std::size_t best = 0;
    double dist = INFINITY;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const double c = lambda(groups[g].first);
      if (std::abs(c - rq) < dist) {
        dist = std::abs(c - rq);
        best = g;
      }
    }
    seeds_in_group[best].push_back(j);
  }

  Eigenbasis basis(model, BasisMode{BasisKind::completed, 0});
  basis.columns_.resize(n, n);
  Eigen::Index col = 0;
  const CMatrix vectors = solver.eigenvectors().cast<cplx>();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto [lo, hi] = groups[g];
    const Eigen::Index k = hi - lo;
    const Eigen::Index j = static_cast<Eigen::Index>(seeds_in_group[g].size());
    if (j > k) throw std::invalid_argument("complete_eigenbasis: more seeds than the eigenspace dimension");
    double mean = 0.0;
    for (Eigen::Index i = lo; i < hi; ++i) mean += lambda(i);
    mean /= static_cast<double>(k);
    CMatrix s(n, j);
    for (Eigen::Index i = 0; i < j; ++i) {
      s.col(i) = seeds[seeds_in_group[g][i]];
      basis.columns_.col(col++) = s.col(i);
      basis.eigenvalues_.push_back(seed_values[seeds_in_group[g][i]]);
      basis.provenance_.push_back({Provenance::Kind::mixed, 0, 0});
    }
    if (j == k) continue;
    const CMatrix space = vectors.middleCols(lo, k);
    const CMatrix rest = space - s * (s.adjoint() * space);
    Eigen::JacobiSVD<CMatrix> svd(rest, Eigen::ComputeThinU);
    for (Eigen::Index i = 0; i < k - j; ++i) {
      basis.columns_.col(col++) = svd.matrixU().col(i);
      basis.eigenvalues_.push_back(k == 1 ? lambda(lo) : mean);
      basis.provenance_.push_back({Provenance::Kind::dense, 0, 0});
    }
  }
  return basis;
}

BlochFunction bloch_eigenfunction(const FiniteGraphModel& model, std::size_t j, int band) {
  if (j >= model.cells()) throw std::invalid_argument("bloch_eigenfunction: momentum index out of range");
  if (band < 0 || band >= model.cell_size()) throw std::invalid_argument("bloch_eigenfunction: band out of range");
  const EigenSystem es = eigensystem(fiber(model.graph(), model.momentum(j)));
  BlochFunction b;
  b.momentum = j;
  b.band = band;
  b.eigenvalue = es.eigenvalues(band);
  b.cell_vector = es.eigenvectors.col(band);
  const CVector wave = plane_wave(model, j) * std::sqrt(static_cast<double>(model.cells()));
  const int nu = model.cell_size();
  b.full.resize(static_cast<Eigen::Index>(model.size()));
  for (std::size_t cell = 0; cell < model.cells(); ++cell)
    for (int n = 0; n < nu; ++n)
      b.full(static_cast<Eigen::Index>(model.index(cell, n))) = wave(static_cast<Eigen::Index>(cell)) * b.cell_vector(n);
  return b;
}

}  // namespace fqe
