#include <doctest.h>

#include <random>

#include "fqe/floquet.hpp"
#include "fqe/presets.hpp"
#include "oracles.hpp"

using namespace fqe;

namespace {

const std::vector<std::string> kCatalog{"zd",     "triangular", "kings",    "honeycomb",            "z_range_k",
                                        "ladder", "z_box_p2",   "z_even_odd", "decorated_z_triangle", "z_periodic_potential"};

Eigen::VectorXd bands_at(const PeriodicGraph& g, std::vector<double> theta) {
  return eigensystem(fiber(g, theta)).eigenvalues;
}

}  // namespace

TEST_CASE("fiber matches the template definition and is Hermitian") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& name : kCatalog) {
    CAPTURE(name);
    const auto g = build_preset(name);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> th(g.dim());
      for (auto& x : th) x = u(rng);
      const CMatrix h = fiber(g, th).matrix;
      CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((h - oracle::fiber(g, th)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("closed-form dispersions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto hc = build_preset("honeycomb");
  const auto lad = build_preset("ladder");
  const auto box = build_preset("z_box_p2");
  const auto deco = build_preset("decorated_z_triangle");
  PresetParams pk;
  pk.range = 3;
  const auto zr = build_preset("z_range_k", pk);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng), b = u(rng);
    const double c = std::cos(kTwoPi * a);
    const double xi = std::sqrt(std::max(0.0, 3 + 2 * c + 2 * std::cos(kTwoPi * b) + 2 * std::cos(kTwoPi * (a - b))));
    CHECK((bands_at(hc, {a, b}) - Eigen::Vector2d(-xi, xi)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((bands_at(lad, {a}) - Eigen::Vector2d(2 * c - 1, 2 * c + 1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((bands_at(box, {a}) - oracle::sorted(Eigen::Vector2d(-1.0, 1 + 4 * c))).cwiseAbs().maxCoeff() < 1e-12);
    const double disc = std::sqrt(4 * c * c - 4 * c + 9);
    const Eigen::Vector3d dz(-1.0, (2 * c + 1 - disc) / 2, (2 * c + 1 + disc) / 2);
    CHECK((bands_at(deco, {a}) - oracle::sorted(dz)).cwiseAbs().maxCoeff() < 1e-12);
    const double er = 2 * std::cos(kTwoPi * a) + 2 * std::cos(2 * kTwoPi * a) + 2 * std::cos(3 * kTwoPi * a);
    CHECK(std::abs(bands_at(zr, {a})(0) - er) < 1e-12);
  }
  CHECK(bands_at(hc, {2.0 / 3.0, 1.0 / 3.0}).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-periodic chain bands") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 20; ++t) {
    PresetParams p;
    p.potential = {u(rng), u(rng)};
    const auto g = build_preset("z_periodic_potential", p);
    const double th = 0.5 + 0.3 * u(rng);
    const double q1 = p.potential[0], q2 = p.potential[1];
    const double c = std::sqrt((q1 - q2) * (q1 - q2) + 16 * std::pow(std::cos(M_PI * th), 2));
    const Eigen::Vector2d expect((q1 + q2 - c) / 2, (q1 + q2 + c) / 2);
    CHECK((bands_at(g, {th}) - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("product fibers: Cartesian sums, tensor products") {
  const auto z = build_preset("zd");
  const auto f = FiniteGraph::cartesian(FiniteGraph::cycle(3), FiniteGraph::path(4));
  const Eigen::VectorXd mu = f.spectrum();
  const auto cart = cartesian_product(z, f);
  const auto tens = build_preset("z_tensor_c3p4");
  for (double th : {0.0, 0.1, 0.37, 0.5, 0.81}) {
    const double e = 2 * std::cos(kTwoPi * th);
    CHECK((bands_at(cart, {th}) - oracle::sorted((mu.array() + e).matrix())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((bands_at(tens, {th}) - oracle::sorted((mu * e).eval())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("eigensystem groups degenerate eigenvalues and projectors resolve the identity") {
  const auto box = build_preset("z_box_p2");
  const auto es = eigensystem(fiber(box, std::vector<double>{1.0 / 3.0}));
  CHECK(es.group_count() == 1);
  CHECK(es.groups[0].size() == 2);
  const auto hc = build_preset("honeycomb");
  for (std::vector<double> th : {std::vector<double>{0.1, 0.7}, std::vector<double>{2.0 / 3.0, 1.0 / 3.0}}) {
    const auto s = eigensystem(fiber(hc, th));
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const auto& p : s.projectors) {
      CHECK((p * p - p).norm() < 1e-12);
      sum += p;
    }
    CHECK((sum - CMatrix::Identity(2, 2)).norm() < 1e-12);
    const CMatrix v = s.eigenvectors;
    CHECK((v.adjoint() * v - CMatrix::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("Floquet transform equals the dense definition and is unitary") {
  std::mt19937_64 rng(3);
  struct Case {
    std::string name;
    int N;
  };
  for (const auto& c : std::vector<Case>{{"honeycomb", 4}, {"decorated_z_triangle", 6}, {"zd", 7}}) {
    CAPTURE(c.name);
    const auto g = build_preset(c.name);
    const FiniteGraphModel m(g, c.N);
    const CMatrix U = oracle::floquet_matrix(c.N, g.dim(), g.cell_size());
    CHECK((U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm() < 1e-12);
    const CVector psi = oracle::random_unit(m.size(), rng);
    const FiberCoefficients fc = floquet_forward(psi, m);
    const CVector expect = U * psi;
    double dev = 0.0;
    for (std::size_t j = 0; j < m.cells(); ++j)
      for (int n = 0; n < g.cell_size(); ++n) dev = std::max(dev, std::abs(fc.values(n, j) - expect(m.index(j, n))));
    CHECK(dev < 1e-12);
    CHECK(std::abs(fc.norm() - 1.0) < 1e-12);
    CHECK((floquet_inverse(fc, m) - psi).norm() < 1e-12);
  }
}

TEST_CASE("plane waves are normalized Fourier modes") {
  PresetParams p;
  p.dim = 2;
  const FiniteGraphModel m(build_preset("zd", p), 6);
  const CVector e = plane_wave(m, 7);
  CHECK(std::abs(e.norm() - 1.0) < 1e-12);
  const auto r = m.cell_coords(7);
  for (std::size_t k = 0; k < m.cells(); ++k) {
    const auto kv = m.cell_coords(k);
    const cplx expect = std::polar(1.0 / 6.0, kTwoPi * (r[0] * kv[0] + r[1] * kv[1]) / 6.0);
    CHECK(std::abs(e(k) - expect) < 1e-14);
  }
}

TEST_CASE("block diagonalization: dense U H_N U* equals the fiber direct sum") {
  struct Case {
    std::string name;
    int N;
  };
  for (const auto& c : std::vector<Case>{{"zd", 8}, {"honeycomb", 6}, {"ladder", 8}, {"decorated_z_triangle", 5},
                                         {"z_tensor_c3p4", 4}, {"kings", 5}}) {
    CAPTURE(c.name);
    const auto g = build_preset(c.name);
    const FiniteGraphModel m(g, c.N);
    const CMatrix U = oracle::floquet_matrix(c.N, g.dim(), g.cell_size());
    const CMatrix blocks = U * oracle::unrolled_hamiltonian(g, c.N).cast<cplx>() * U.adjoint();
    CMatrix expect = CMatrix::Zero(m.size(), m.size());
    const int nu = g.cell_size();
    for (std::size_t j = 0; j < m.cells(); ++j) expect.block(j * nu, j * nu, nu, nu) = fiber(g, m.momentum(j)).matrix;
    CHECK((blocks - expect).cwiseAbs().maxCoeff() < 1e-12);
    const auto check = verify_block_diagonalization(m);
    CHECK(check.passed);
    CHECK(check.max_residual <= 1e-12);
  }
}

TEST_CASE("flat band detection") {
  auto flats = detect_flat_bands(build_preset("z_box_p2"));
  REQUIRE(flats.size() == 1);
  CHECK(std::abs(flats[0].value + 1.0) < 1e-10);
  flats = detect_flat_bands(build_preset("decorated_z_triangle"));
  REQUIRE(flats.size() == 1);
  CHECK(std::abs(flats[0].value + 1.0) < 1e-10);
  CHECK(detect_flat_bands(build_preset("honeycomb")).empty());
  CHECK(detect_flat_bands(build_preset("z_tensor_c3p4")).empty());
  CHECK(detect_flat_bands(build_preset("ladder")).empty());
  CHECK(detect_flat_bands(tensor_product(build_preset("zd"), FiniteGraph::cartesian(FiniteGraph::cycle(3), FiniteGraph::path(2)))).size() == 1);
}

TEST_CASE("band table marks the Dirac points of the honeycomb") {
  const auto t = band_structure(build_preset("honeycomb"), 6);
  CHECK(t.thetas.size() == 36);
  CHECK(t.exceptional_points.size() == 2);
  std::ostringstream os;
  write_band_csv(os, t);
  CHECK(os.str().rfind("theta_1,theta_2,E_1,E_2\n", 0) == 0);
}
