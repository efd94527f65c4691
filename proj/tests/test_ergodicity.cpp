#include <doctest.h>

#include <random>

#include "fqe/assumption.hpp"
#include "fqe/ergodicity.hpp"
#include "fqe/presets.hpp"
#include "fqe/symbol.hpp"
#include "oracles.hpp"

using namespace fqe;

namespace {

PeriodicGraph zd_(int d) {
  PresetParams p;
  p.dim = d;
  return build_preset("zd", p);
}

ScalarObservable random_observable(const FiniteGraphModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVector v(static_cast<Eigen::Index>(m.size()));
  for (auto& x : v) x = u(rng);
  return ScalarObservable(m, v, "random");
}

// Op_N(F)[(k,n),(k',ℓ)] = Σ_r N^{-d} e^{2πi r·(k−k')/N} F(k, r; n, ℓ), built from point values.
CMatrix quantization_oracle(const Symbol& s, const FiniteGraphModel& m) {
  const auto dim = static_cast<Eigen::Index>(m.size());
  CMatrix out = CMatrix::Zero(dim, dim);
  const double cells = static_cast<double>(m.cells());
  for (std::size_t k = 0; k < m.cells(); ++k)
    for (std::size_t r = 0; r < m.cells(); ++r)
      for (int n = 0; n < m.cell_size(); ++n)
        for (int l = 0; l < m.cell_size(); ++l) {
          const cplx f = s.value(m, k, r, n, l);
          if (f == 0.0) continue;
          for (std::size_t kp = 0; kp < m.cells(); ++kp) {
            long dot = 0;
            const IntVec rv = m.cell_coords(r), kv = m.cell_coords(k), kpv = m.cell_coords(kp);
            for (int i = 0; i < m.dim(); ++i) dot += static_cast<long>(rv[i]) * (kv[i] - kpv[i]);
            const double ang = kTwoPi * static_cast<double>(((dot % m.N()) + m.N()) % m.N()) / m.N();
            out(static_cast<Eigen::Index>(m.index(k, n)), static_cast<Eigen::Index>(m.index(kp, l))) +=
                std::polar(1.0 / cells, ang) * f;
          }
        }
  return out;
}

Symbol random_symbol(const FiniteGraphModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Symbol s = Symbol::zero(m);
  for (std::size_t r = 0; r < m.cells(); ++r)
    for (std::size_t q = 0; q < m.cells(); ++q)
      for (int n = 0; n < m.cell_size(); ++n)
        for (int l = 0; l < m.cell_size(); ++l) s.coefficient(r, q, n, l) = cplx(g(rng), g(rng));
  return s;
}

}  // namespace

TEST_CASE("multiplication symbol quantizes to pointwise multiplication") {
  for (const char* name : {"zd", "honeycomb", "ladder"}) {
    CAPTURE(name);
    const FiniteGraphModel m(build_preset(name), 4);
    const auto a = random_observable(m, 3);
    const Symbol s = Symbol::multiplication(m, a);
    const CMatrix op = quantize(s, m).dense();
    CHECK((op - CMatrix(a.values().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t k = 0; k < m.cells(); k += 3)
      for (std::size_t r = 0; r < m.cells(); r += 2)
        for (int n = 0; n < m.cell_size(); ++n) CHECK(std::abs(s.value(m, k, r, n, n) - a.values()(m.index(k, n))) < 1e-12);
  }
  const FiniteGraphModel m(zd_(1), 6);
  CHECK(quantize(Symbol::zero(m), m).dense().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quantization matches the definition, apply, and the HS identity") {
  struct Case {
    std::string name;
    int N;
  };
  for (const auto& c : std::vector<Case>{{"zd", 6}, {"honeycomb", 3}, {"z_box_p2", 4}}) {
    CAPTURE(c.name);
    PresetParams p;
    if (c.name == "zd") p.dim = 2;
    const FiniteGraphModel m(build_preset(c.name, p), c.N);
    const Symbol s = random_symbol(m, 11);
    const auto op = quantize(s, m);
    const CMatrix dense = op.dense();
    CHECK((dense - quantization_oracle(s, m)).cwiseAbs().maxCoeff() < 1e-11);
    std::mt19937_64 rng(4);
    const CVector psi = oracle::random_unit(m.size(), rng);
    CHECK((op.apply(psi) - dense * psi).norm() < 1e-11);
    CHECK(dense.squaredNorm() == doctest::Approx(s.hs_norm_squared()).epsilon(1e-11));
  }
}

TEST_CASE("time-averaged symbol quantizes to the time-averaged observable") {
  struct Case {
    std::string name;
    int N;
  };
  for (const auto& c : std::vector<Case>{{"zd", 8}, {"ladder", 5}, {"honeycomb", 3}, {"decorated_z_triangle", 4}}) {
    CAPTURE(c.name);
    const FiniteGraphModel m(build_preset(c.name), c.N);
    const auto a = random_observable(m, 9);
    for (double T : {0.5, 7.0, 300.0}) {
      CAPTURE(T);
      const auto eg = egorov_symbols(m, a, T);
      const CMatrix lhs = quantize(eg.time_averaged, m).dense();
      CHECK((lhs - time_averaged_observable(m, a, T)).norm() < 1e-9);
    }
  }
}

TEST_CASE("time average kernel") {
  CHECK(time_average_kernel(0.0) == cplx(1.0, 0.0));
  CHECK(std::abs(time_average_kernel(1e-9) - cplx(1.0, 5e-10)) < 1e-16);
  for (double x : {1e-3, 0.7, -2.5, 40.0}) {
    const cplx expect = (std::exp(cplx(0, x)) - 1.0) / cplx(0, x);
    CHECK(std::abs(time_average_kernel(x) - expect) < 1e-12);
  }
}

TEST_CASE("constant observable: all three symbols coincide") {
  const FiniteGraphModel m(build_preset("honeycomb"), 4);
  const auto a = ScalarObservable::constant(m, 2.5);
  const auto eg = egorov_symbols(m, a, 10.0);
  CHECK((eg.time_averaged - eg.limit).hs_norm_squared() < 1e-24);
  CHECK((eg.limit - eg.main).hs_norm_squared() < 1e-24);
  CHECK(eg.main.hs_norm_squared() == doctest::Approx(2.5 * 2.5 * m.size()).epsilon(1e-12));
}

TEST_CASE("weighted average") {
  std::mt19937_64 rng(8);
  {
    const FiniteGraphModel m(zd_(2), 6);
    const auto a = random_observable(m, 1);
    const CVector psi = oracle::random_unit(m.size(), rng);
    CHECK(std::abs(weighted_average(psi, a, m) - a.uniform_average()) < 1e-12);
  }
  {
    const FiniteGraphModel m(build_preset("honeycomb"), 4);
    const auto a = ScalarObservable::per_sublattice(m, {1.0, 0.0});
    const auto b = fiber_eigenbasis(m, BasisMode::parse("fiber"));
    for (std::size_t u = 0; u < b.size(); ++u) {
      const CVector psi = b.vector(u);
      double mass = 0;
      for (std::size_t k = 0; k < m.cells(); ++k) mass += std::norm(psi(m.index(k, 0)));
      CHECK(std::abs(weighted_average(psi, a, m) - mass) < 1e-12);
    }
  }
}

TEST_CASE("weighted average equals <psi, Op(abar) psi>") {
  std::mt19937_64 rng(21);
  for (const char* name : {"honeycomb", "z_box_p2", "ladder"}) {
    CAPTURE(name);
    const FiniteGraphModel m(build_preset(name), 4);
    const auto a = random_observable(m, 2);
    const auto eg = egorov_symbols(m, a, 1.0);
    const CMatrix op = quantize(eg.main, m).dense();
    const auto b = dense_eigenbasis(m);
    for (std::size_t u = 0; u < b.size(); u += 3) {
      const CVector psi = b.vector(u);
      CHECK(std::abs(psi.dot(op * psi) - weighted_average(psi, a, m)) < 1e-11);
    }
    const CVector psi = oracle::random_unit(m.size(), rng);
    CHECK(std::abs(psi.dot(op * psi) - weighted_average(psi, a, m)) < 1e-11);
  }
}

TEST_CASE("variance: constant observable and windows") {
  const FiniteGraphModel m(build_preset("honeycomb"), 6);
  const auto b = fiber_eigenbasis(m, BasisMode::parse("fiber"));
  const auto c = ScalarObservable::constant(m, 1.0);
  for (auto ref : {Reference::uniform, Reference::opn_abar}) CHECK(qe_variance(b, c, ref).variance < 1e-28);
  const auto w = qe_variance(b, c, Reference::uniform, Window{-1.0, 1.0});
  for (double l : w.eigenvalues) CHECK(std::abs(l) <= 1.0);
  CHECK(w.members.size() < b.size());
  CHECK_THROWS_AS(qe_variance(b, c, Reference::uniform, Window{10.0, 11.0}), std::invalid_argument);
  CHECK_THROWS_AS(qe_variance(b, c, Reference::matrix), std::invalid_argument);
}

TEST_CASE("variance definition against a direct loop") {
  const FiniteGraphModel m(zd_(1), 16);
  const auto b = fiber_eigenbasis(m, BasisMode::parse("random:3"));
  const auto a = ScalarObservable::quarter_indicator(m);
  const auto rep = qe_variance(b, a, Reference::uniform);
  double v = 0;
  for (std::size_t u = 0; u < b.size(); ++u) {
    const CVector psi = b.vector(u);
    cplx e = 0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) e += std::norm(psi(i)) * a.values()(i);
    v += std::norm(e - 0.25);
  }
  CHECK(rep.variance == doctest::Approx(v / 16).epsilon(1e-12));
  CHECK(que_sup(b, a) == doctest::Approx(rep.sup_gap));
}

TEST_CASE("matrix observables") {
  const FiniteGraphModel m(zd_(2), 8);
  const auto b = fiber_eigenbasis(m, BasisMode::parse("fiber"));
  CHECK(matrix_average(b, BandMatrixObservable::from_hamiltonian(m)).sup_gap < 1e-10);

  const auto a = random_observable(m, 5);
  const auto scalar = qe_variance(b, a, Reference::uniform);
  const auto matrix = matrix_average(b, BandMatrixObservable::diagonal(m, a));
  CHECK(matrix.variance == doctest::Approx(scalar.variance).epsilon(1e-10));

  const auto nn = BandMatrixObservable::nearest_neighbor(m, 0);
  CHECK(nn.hermiticity_defect() == 0.0);
  std::mt19937_64 rng(1);
  const CVector psi = oracle::random_unit(m.size(), rng);
  const Eigen::MatrixXd h = oracle::unrolled_hamiltonian(zd_(2), 8);
  const CVector hp = h.cast<cplx>() * psi;
  CHECK((BandMatrixObservable::from_hamiltonian(m).apply(psi) - hp).norm() < 1e-12);

  CHECK_THROWS_AS(matrix_average(fiber_eigenbasis(FiniteGraphModel(build_preset("honeycomb"), 4),
                                                  BasisMode::parse("fiber")),
                                 BandMatrixObservable::from_hamiltonian(m)),
                  GraphError);
}

TEST_CASE("variance around the weighted average obeys the coincidence bound") {
  for (const char* name : {"honeycomb", "ladder", "zd"}) {
    CAPTURE(name);
    const auto g = build_preset(name);
    const int N = g.dim() == 2 ? 8 : 24;
    const FiniteGraphModel m(g, N);
    const auto a = random_observable(m, 13);
    const int Ns[] = {N};
    const auto sweep = assumption_sweep(g, Ns);
    const double bound = variance_bound(m.cell_size(), sweep.reports[0].sup_total_fraction, a.sup_norm());
    for (const char* mode : {"fiber", "random:2", "dense"}) {
      CAPTURE(mode);
      const auto b = std::string(mode) == "dense" ? dense_eigenbasis(m) : fiber_eigenbasis(m, BasisMode::parse(mode));
      CHECK(qe_variance(b, a, Reference::opn_abar).variance <= bound);
    }
  }
}
