#pragma once

// Independent brute-force constructions used as test oracles.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fqe/lattice.hpp"

namespace oracle {

using fqe::CMatrix;
using fqe::CVector;
using fqe::cplx;

inline std::vector<int> coords(std::size_t cell, int N, int d) {
  std::vector<int> k(d);
  for (int i = d - 1; i >= 0; --i) {
    k[i] = static_cast<int>(cell % N);
    cell /= N;
  }
  return k;
}

inline std::size_t cell_of(const std::vector<int>& k, int N) {
  std::size_t c = 0;
  for (int v : k) c = c * N + static_cast<std::size_t>(((v % N) + N) % N);
  return c;
}

/// H_N by unrolling every template on every cell.
inline Eigen::MatrixXd unrolled_hamiltonian(const fqe::PeriodicGraph& g, int N) {
  const int d = g.dim(), nu = g.cell_size();
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= N;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cells * nu, cells * nu);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto k = coords(c, N, d);
    for (int n = 0; n < nu; ++n) h(c * nu + n, c * nu + n) += g.potential()[n];
    for (const auto& e : g.edges()) {
      auto t = k;
      for (int i = 0; i < d; ++i) t[i] += e.offset[i];
      h(c * nu + e.src, cell_of(t, N) * nu + e.dst) += e.multiplicity;
    }
  }
  return h;
}

/// Dense Floquet transform: (Uψ)_j(n) = N^{-d/2} Σ_k e^{-2πi j·k/N} ψ(k, n), rows (j, n).
inline CMatrix floquet_matrix(int N, int d, int nu) {
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= N;
  CMatrix u = CMatrix::Zero(cells * nu, cells * nu);
  const double norm = std::pow(static_cast<double>(N), -0.5 * d);
  for (std::size_t j = 0; j < cells; ++j) {
    const auto jv = coords(j, N, d);
    for (std::size_t k = 0; k < cells; ++k) {
      const auto kv = coords(k, N, d);
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += static_cast<double>(jv[i]) * kv[i];
      const cplx ph = std::polar(norm, -2.0 * M_PI * dot / N);
      for (int n = 0; n < nu; ++n) u(j * nu + n, k * nu + n) = ph;
    }
  }
  return u;
}

/// Fiber from the definition Σ w e^{2πiθ·o} + Q δ.
inline CMatrix fiber(const fqe::PeriodicGraph& g, const std::vector<double>& theta) {
  const int nu = g.cell_size();
  CMatrix h = CMatrix::Zero(nu, nu);
  for (int n = 0; n < nu; ++n) h(n, n) += g.potential()[n];
  for (const auto& e : g.edges()) {
    double ph = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) ph += theta[i] * e.offset[i];
    h(e.src, e.dst) += static_cast<double>(e.multiplicity) * std::polar(1.0, 2.0 * M_PI * ph);
  }
  return h;
}

inline CVector random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace oracle
