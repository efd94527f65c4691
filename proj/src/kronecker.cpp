#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fqe/assumption.hpp"
#include "fqe/parallel.hpp"

namespace fqe {

namespace {

struct KroneckerSample {
  double det = 0.0;
  double min_abs = 0.0;
  double norm = 0.0;
};

CMatrix kronecker_sum(const CMatrix& shifted, const CMatrix& base) {
  const Eigen::Index nu = base.rows();
  CMatrix b = CMatrix::Zero(nu * nu, nu * nu);
  for (Eigen::Index i = 0; i < nu; ++i) {
    for (Eigen::Index j = 0; j < nu; ++j) b.block(i * nu, j * nu, nu, nu).diagonal().array() += shifted(i, j);
    b.block(i * nu, i * nu, nu, nu) -= base;
  }
  return b;
}

KroneckerSample sample_at(const PeriodicGraph& g, const Momentum& theta, const Momentum& alpha) {
  Momentum moved(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) moved[i] = theta[i] + alpha[i];
  const CMatrix b = kronecker_sum(fiber(g, moved).matrix, fiber(g, theta).matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("kronecker_probe: eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  KroneckerSample s;
  s.det = ev.prod();
  s.min_abs = ev.cwiseAbs().minCoeff();
  s.norm = ev.cwiseAbs().maxCoeff();
  return s;
}

double circular_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double wrap(double x) { return x - std::floor(x); }

}  // namespace

KroneckerSummary kronecker_probe(const PeriodicGraph& g, const Momentum& alpha, int grid) {
  const int d = g.dim();
  if (static_cast<int>(alpha.size()) != d) throw std::invalid_argument("kronecker_probe: alpha dimension");
  if (std::all_of(alpha.begin(), alpha.end(), [](double a) { return wrap(a) == 0.0; }))
    throw std::invalid_argument("kronecker_probe: alpha must be nonzero mod 1");
  if (grid < 2) throw std::invalid_argument("kronecker_probe: grid must be at least 2");
  const double samples_d = std::pow(static_cast<double>(grid), d);
  if (samples_d > 1e6) throw CapacityError("kronecker_probe: grid^d exceeds 1e6 samples");

  KroneckerSummary out;
  out.alpha = alpha;
  out.grid = grid;
  out.samples = static_cast<std::size_t>(samples_d);

  std::vector<KroneckerSample> values(out.samples);
  parallel_for(out.samples, [&](std::size_t idx) {
    Momentum theta(d);
    std::size_t rest = idx;
    for (int i = d - 1; i >= 0; --i) {
      theta[i] = static_cast<double>(rest % grid) / grid;
      rest /= grid;
    }
    values[idx] = sample_at(g, theta, alpha);
  });

  double norm = 0.0;
  out.min_abs_eigenvalue = values.front().min_abs;
  for (const auto& v : values) {
    norm = std::max(norm, v.norm);
    out.min_abs_eigenvalue = std::min(out.min_abs_eigenvalue, v.min_abs);
  }
  out.scale = std::max(1.0, norm);
  const double zero_tol = 1e-10 * out.scale;
  const double near_tol = 1e-8 * out.scale;
  out.identically_zero = std::all_of(values.begin(), values.end(), [&](const auto& v) { return v.min_abs <= zero_tol; });
  out.near_zero_points = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](const auto& v) { return v.min_abs <= near_tol; }));

  if (d != 1) return out;
  out.degree_bound = 2 * g.max_offset() * g.cell_size() * g.cell_size();
  if (out.identically_zero) return out;

  auto eval = [&](double t) { return sample_at(g, Momentum{wrap(t)}, alpha); };
  const double h = 1.0 / grid;
  const double accept = 1e-9 * out.scale;
  std::vector<double> zeros;
  auto add = [&](double t) {
    t = wrap(t);
    for (double z : zeros)
      if (circular_distance(z, t) < 1e-6) return;
    zeros.push_back(t);
  };

  for (int j = 0; j < grid; ++j) {
    const int next = (j + 1) % grid;
    const double t0 = j * h;
    if (values[j].min_abs <= zero_tol) {
      add(t0);
      continue;
    }
    // Simple crossings change the sign of the determinant.
    if ((values[j].det < 0.0) != (values[next].det < 0.0) && values[next].min_abs > zero_tol) {
      double lo = t0, hi = t0 + h;
      const bool lo_negative = values[j].det < 0.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(mid).det < 0.0) == lo_negative) lo = mid;
        else hi = mid;
      }
      add(0.5 * (lo + hi));
    }
  }
  // Even-order zeros keep the sign: refine local minima of the smallest |eigenvalue|.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int j = 0; j < grid; ++j) {
    const int prev = (j + grid - 1) % grid, next = (j + 1) % grid;
    if (values[j].min_abs > values[prev].min_abs || values[j].min_abs > values[next].min_abs) continue;
    double a = (j - 1) * h, b = (j + 1) * h;
    double c = b - ratio * (b - a), e = a + ratio * (b - a);
    double fc = eval(c).min_abs, fe = eval(e).min_abs;
    for (int it = 0; it < 100; ++it) {
      if (fc < fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - ratio * (b - a);
        fc = eval(c).min_abs;
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + ratio * (b - a);
        fe = eval(e).min_abs;
      }
    }
    const double t = 0.5 * (a + b);
    if (eval(t).min_abs <= accept) add(t);
  }
  std::sort(zeros.begin(), zeros.end());
  out.zeros = zeros;
  out.zero_count = static_cast<int>(zeros.size());
  return out;
}

namespace {

// Monic polynomial coefficients (constant term first) from its roots.
std::vector<double> poly_from_roots(const Eigen::VectorXd& roots) {
  std::vector<double> c{1.0};
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= roots(i) * c[k];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<double> shifted_charpoly(const PeriodicGraph& g, double theta) {
  const Momentum t{theta};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(fiber(g, t).matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("charpoly_split_check: eigensolver failed");
  auto c = poly_from_roots(solver.eigenvalues());
  c[0] += 2.0 * std::cos(kTwoPi * theta);
  return c;
}

}  // namespace

CharpolySplit charpoly_split_check(const PeriodicGraph& g, int grid) {
  if (g.dim() != 1) throw GraphError("charpoly_split_check: requires a one-dimensional chain");
  for (int n = 0; n < g.cell_size(); ++n)
    if (g.degree(n) != 2) throw GraphError("charpoly_split_check: every vertex of a chain has degree 2");
  // A connected 2-regular infinite graph is a bi-infinite path.
  if (check_connectivity(g).verdict != Connectivity::connected)
    throw GraphError("charpoly_split_check: graph is not a connected chain");
  if (grid < 1) throw std::invalid_argument("charpoly_split_check: grid must be positive");

  CharpolySplit out;
  out.delta = shifted_charpoly(g, 0.1234567);
  for (int j = 0; j < grid; ++j) {
    const auto c = shifted_charpoly(g, static_cast<double>(j) / grid);
    for (std::size_t k = 0; k < c.size(); ++k)
      out.max_deviation = std::max(out.max_deviation, std::abs(c[k] - out.delta[k]));
  }
  return out;
}

}  // namespace fqe
