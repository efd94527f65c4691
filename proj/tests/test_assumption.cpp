#include <doctest.h>

#include <algorithm>
#include <set>

#include "fqe/assumption.hpp"
#include "fqe/presets.hpp"
#include "oracles.hpp"

using namespace fqe;

namespace {

PeriodicGraph zd_(int d) {
  PresetParams p;
  p.dim = d;
  return build_preset("zd", p);
}

PeriodicGraph chain(const std::vector<double>& potential) {
  PresetParams p;
  p.potential = potential;
  return build_preset("z_periodic_potential", p);
}

// Direct count of (r, s, w) with |E_s(r+m) − E_w(r)| ≤ tol from fresh dense fiber spectra.
Eigen::MatrixXi brute_counts(const PeriodicGraph& g, int N, const IntVec& m, double tol) {
  const FiniteGraphModel model(g, N);
  const int nu = g.cell_size();
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(nu, nu);
  auto spectrum = [&](const IntVec& r) {
    std::vector<double> th(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) th[i] = static_cast<double>(((r[i] % N) + N) % N) / N;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(oracle::fiber(g, th));
    return es.eigenvalues();
  };
  for (std::size_t k = 0; k < model.cells(); ++k) {
    IntVec r = model.cell_coords(k), rm = r;
    for (std::size_t i = 0; i < r.size(); ++i) rm[i] += m[i];
    const Eigen::VectorXd a = spectrum(rm), b = spectrum(r);
    for (int s = 0; s < nu; ++s)
      for (int w = 0; w < nu; ++w) c(s, w) += std::abs(a(s) - b(w)) <= tol;
  }
  return c;
}

}  // namespace

TEST_CASE("coincidence counts match a brute-force oracle") {
  struct Case {
    std::string name;
    int N;
    IntVec m;
  };
  for (const auto& c : std::vector<Case>{{"zd", 8, {4}}, {"zd", 8, {3}}, {"honeycomb", 6, {2, 4}},
                                         {"honeycomb", 6, {3, 0}}, {"ladder", 10, {5}}, {"z_box_p2", 8, {1}}}) {
    CAPTURE(c.name);
    const auto g = build_preset(c.name);
    const auto pc = coincidence_count(g, c.N, c.m, 1e-8);
    CHECK(pc.counts == brute_counts(g, c.N, c.m, 1e-8));
    CHECK(pc.total == pc.counts.sum());
    CHECK(pc.max_pair == pc.counts.maxCoeff());
  }
}

TEST_CASE("honeycomb: the Dirac-point shift gives 3N - 2 exact coincidences") {
  const auto g = build_preset("honeycomb");
  for (int N : {12, 24}) {
    CAPTURE(N);
    const IntVec m{N / 3, 2 * N / 3};
    const auto pc = coincidence_count(g, N, m, 1e-8);
    CHECK(pc.counts == brute_counts(g, N, m, 1e-8));
    CHECK(pc.max_pair == 3 * N - 2);
    CHECK(coincidence_count(g, N, m, 1e-12).max_pair == 3 * N - 2);
  }
}

TEST_CASE("cycle graph: two coincidences at the half shift") {
  const auto pc = coincidence_count(zd_(1), 8, {4}, 1e-8);
  CHECK(pc.total == 2);  // cos(2π(r+4)/8) = cos(2πr/8) only at r = 2, 6
  CHECK_THROWS_AS(coincidence_count(zd_(1), 8, {0}, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(coincidence_count(zd_(1), 8, {1, 1}, 1e-8), std::invalid_argument);
}

TEST_CASE("cycle graph sup fraction is at most 4/N") {
  const int Ns[] = {8, 16, 32, 64};
  const auto sweep = assumption_sweep(zd_(1), Ns);
  for (const auto& r : sweep.reports) {
    CAPTURE(r.N);
    CHECK(r.exhaustive);
    CHECK(r.shifts_scanned == static_cast<std::size_t>(r.N - 1));
    CHECK(r.sup_pair_fraction <= 4.0 / r.N + 1e-15);
    CHECK_FALSE(r.flat_band_detected);
    CHECK_FALSE(r.unstable);
  }
  CHECK(sweep.monotone_decay);
}

TEST_CASE("honeycomb sup fraction decreases") {
  const int Ns[] = {6, 12, 24};
  const auto sweep = assumption_sweep(build_preset("honeycomb"), Ns);
  CHECK(sweep.monotone_decay);
  CHECK(sweep.reports.back().sup_pair_fraction < sweep.reports.front().sup_pair_fraction);
}

TEST_CASE("tensor product with an odd cycle fails the assumption") {
  const int Ns[] = {8, 16};
  const auto sweep = assumption_sweep(build_preset("z_tensor_c3p4"), Ns);
  for (const auto& r : sweep.reports) {
    CHECK(r.sup_pair_fraction == 1.0);
    CHECK(r.identically_coincident_pair);
  }
  CHECK_FALSE(sweep.monotone_decay);
}

TEST_CASE("flat band is flagged") {
  const int Ns[] = {8};
  CHECK(assumption_sweep(build_preset("z_box_p2"), Ns).reports[0].flat_band_detected);
  CHECK_FALSE(assumption_sweep(build_preset("ladder"), Ns).reports[0].flat_band_detected);
}

TEST_CASE("generic periodic potential: pair counts stay at most 2") {
  const auto g = chain({0.3, -0.7, 1.1});
  for (int N : {12, 24}) {
    const BandGrid bands(g, N);
    const double tol = 1e-8 * bands.diameter();
    for (int m = 1; m < N; ++m) CHECK(coincidence_count(bands, {m}, tol).max_pair <= 2);
  }
}

TEST_CASE("tolerance bracket is reported") {
  SweepOptions opt;
  opt.tol = 1e-3;
  const int Ns[] = {16};
  const auto r = assumption_sweep(build_preset("honeycomb"), Ns, opt).reports[0];
  CHECK(r.tol == 1e-3);
  CHECK(r.sup_pair_fraction_low <= r.sup_pair_fraction);
  CHECK(r.sup_pair_fraction <= r.sup_pair_fraction_high);
}

TEST_CASE("census") {
  SweepOptions opt;
  opt.keep_census = true;
  const int Ns[] = {6};
  const auto r = assumption_sweep(zd_(2), Ns, opt).reports[0];
  CHECK(r.census.size() == 35);
  long best = 0;
  for (const auto& pc : r.census) best = std::max(best, pc.max_pair);
  CHECK(static_cast<double>(best) / 36 == r.sup_pair_fraction);
}

TEST_CASE("sampled shifts contain the axis midpoints and are seeded") {
  SweepOptions opt;
  opt.exhaustive_budget = 10;
  opt.min_samples = 20;
  const FiniteGraphModel m(zd_(3), 10);
  const auto shifts = sweep_shifts(m, opt);
  CHECK(shifts.size() >= 20);
  std::set<IntVec> set(shifts.begin(), shifts.end());
  CHECK(set.size() == shifts.size());
  CHECK(set.count(IntVec{5, 0, 0}));
  CHECK(set.count(IntVec{0, 5, 0}));
  CHECK(set.count(IntVec{0, 0, 5}));
  CHECK(set.count(IntVec{0, 0, 0}) == 0);
  CHECK(sweep_shifts(m, opt) == shifts);
  SweepOptions other = opt;
  other.seed = 99;
  CHECK(sweep_shifts(m, other) != shifts);
  CHECK(sweep_shifts(m, SweepOptions{}).size() == 999);
  CHECK(sweep_shifts(FiniteGraphModel(zd_(1), 500), opt).size() == 499);
}

TEST_CASE("root bound certificates") {
  struct Case {
    std::string name;
    int d;
    long M_max;
  };
  for (const auto& c : std::vector<Case>{{"zd", 1, 4}, {"zd", 2, 24}, {"triangular", 2, 56}}) {
    CAPTURE(c.name);
    CAPTURE(c.d);
    PresetParams p;
    if (c.name == "zd") p.dim = c.d;
    const auto g = build_preset(c.name, p);
    const auto cert = nu1_root_bound(g);
    CHECK(cert.M <= c.M_max);
    CHECK(cert.within_list);
    CHECK(cert.row_used <= cert.list_length);
    std::set<long> gam;
    for (std::size_t i = 0; i < cert.offsets.size(); ++i) {
      long dot = 0;
      for (int k = 0; k < c.d; ++k) dot += cert.direction[k] * cert.offsets[i][k];
      CHECK(dot > 0);
      CHECK(cert.gamma[i] == 2 * dot);
      gam.insert(cert.gamma[i]);
    }
    CHECK(gam.size() == cert.gamma.size());
    CHECK(cert.M <= cert.theoretical_bound);
    const int Ns[] = {8, 12};
    for (const auto& chk : certify_root_bound(g, cert, Ns)) {
      CAPTURE(chk.N);
      CHECK(chk.holds);
      CHECK(chk.max_count <= chk.limit);
    }
  }
  CHECK_THROWS_AS(nu1_root_bound(build_preset("honeycomb")), std::invalid_argument);
  CHECK_THROWS_AS(nu1_root_bound(build_preset("z_even_odd")), GraphError);
}

TEST_CASE("Kronecker probe on the cycle graph") {
  const auto k = kronecker_probe(zd_(1), Momentum{0.3}, 2000);
  CHECK_FALSE(k.identically_zero);
  REQUIRE(k.zero_count.has_value());
  CHECK(*k.zero_count == 2);
  REQUIRE(k.zeros.size() == 2);
  // cos 2π(θ+0.3) = cos 2πθ at θ = 0.35, 0.85
  CHECK(k.zeros[0] == doctest::Approx(0.35).epsilon(1e-8));
  CHECK(k.zeros[1] == doctest::Approx(0.85).epsilon(1e-8));
  CHECK(*k.degree_bound == 2);
  CHECK_THROWS_AS(kronecker_probe(zd_(1), Momentum{1.0}, 100), std::invalid_argument);
}

TEST_CASE("Kronecker probe: identically zero for the odd-cycle tensor product") {
  const auto k = kronecker_probe(build_preset("z_tensor_c3p4"), Momentum{0.5}, 200);
  CHECK(k.identically_zero);
}

TEST_CASE("Kronecker probe: zero count within the degree bound") {
  const auto g = chain({0.4, -0.9});
  for (double alpha : {0.17, 0.5, 0.71}) {
    CAPTURE(alpha);
    const auto k = kronecker_probe(g, Momentum{alpha}, 4000);
    CHECK_FALSE(k.identically_zero);
    CHECK(*k.zero_count <= *k.degree_bound);
    for (double z : k.zeros) {
      Eigen::SelfAdjointEigenSolver<CMatrix> a(oracle::fiber(g, {z + alpha})), b(oracle::fiber(g, {z}));
      double best = INFINITY;
      for (int s = 0; s < 2; ++s)
        for (int w = 0; w < 2; ++w) best = std::min(best, std::abs(a.eigenvalues()(s) - b.eigenvalues()(w)));
      CHECK(best < 1e-7);
    }
  }
  const auto k2 = kronecker_probe(build_preset("honeycomb"), Momentum{0.25, 0.5}, 40);
  CHECK_FALSE(k2.zero_count.has_value());
  CHECK(k2.samples == 1600);
}

TEST_CASE("characteristic polynomial splitting") {
  const auto two = charpoly_split_check(chain({0.0, 0.0}), 64);
  REQUIRE(two.delta.size() == 3);
  CHECK(two.delta[0] == doctest::Approx(-2.0));
  CHECK(std::abs(two.delta[1]) < 1e-12);
  CHECK(two.delta[2] == doctest::Approx(1.0));
  CHECK(two.max_deviation < 1e-12);

  const auto one = charpoly_split_check(zd_(1), 64);
  REQUIRE(one.delta.size() == 2);
  CHECK(std::abs(one.delta[0]) < 1e-12);
  CHECK(one.delta[1] == doctest::Approx(1.0));

  CHECK(charpoly_split_check(chain({0.37, -1.2, 0.8}), 128).max_deviation <= 1e-9);
  CHECK_THROWS_AS(charpoly_split_check(build_preset("ladder"), 16), GraphError);
}
