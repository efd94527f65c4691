#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fqe/assumption.hpp"
#include "fqe/parallel.hpp"

namespace fqe {

BandGrid::BandGrid(const PeriodicGraph& g, int N) : model_(g, N) {
  if (model_.size() > kFiberCap) throw CapacityError("BandGrid: nu N^d exceeds fiber cap");
  const int nu = g.cell_size();
  values_.resize(model_.size());
  parallel_for(model_.cells(), [&](std::size_t r) {
    const EigenSystem es = eigensystem(fiber(g, model_.momentum(r)));
    for (int s = 0; s < nu; ++s) values_[r * static_cast<std::size_t>(nu) + s] = es.eigenvalues(s);
  });
  lo_ = *std::min_element(values_.begin(), values_.end());
  hi_ = *std::max_element(values_.begin(), values_.end());
}

namespace {

std::vector<std::size_t> shifted_indices(const FiniteGraphModel& model, const IntVec& m) {
  std::vector<std::size_t> out(model.cells());
  for (std::size_t r = 0; r < model.cells(); ++r) out[r] = model.shifted(r, m);
  return out;
}

bool is_zero_shift(const FiniteGraphModel& model, const IntVec& m) { return model.cell_index(m) == 0; }

// Counts at three tolerances in one pass: tol/10, tol, 10 tol.
struct TripleCounts {
  PairCounts nominal;
  long total_low = 0;
  long total_high = 0;
  long max_pair_low = 0;
  long max_pair_high = 0;
};

TripleCounts count_three(const BandGrid& bands, const IntVec& m, double tol) {
  const auto& model = bands.model();
  const int nu = bands.cell_size();
  const auto target = shifted_indices(model, m);
  Eigen::MatrixXi low = Eigen::MatrixXi::Zero(nu, nu), mid = low, high = low;
  for (std::size_t r = 0; r < model.cells(); ++r)
    for (int s = 0; s < nu; ++s)
      for (int w = 0; w < nu; ++w) {
        const double diff = std::abs(bands.at(target[r], s) - bands.at(r, w));
        if (diff <= 10.0 * tol) {
          ++high(s, w);
          if (diff <= tol) {
            ++mid(s, w);
            if (diff <= 0.1 * tol) ++low(s, w);
          }
        }
      }
  TripleCounts t;
  t.nominal.shift = m;
  t.nominal.counts = mid;
  t.nominal.total = mid.sum();
  t.nominal.max_pair = mid.maxCoeff();
  t.total_low = low.sum();
  t.total_high = high.sum();
  t.max_pair_low = low.maxCoeff();
  t.max_pair_high = high.maxCoeff();
  return t;
}

}  // namespace

PairCounts coincidence_count(const BandGrid& bands, const IntVec& m, double tol) {
  if (static_cast<int>(m.size()) != bands.model().dim()) throw std::invalid_argument("coincidence_count: shift dimension");
  if (is_zero_shift(bands.model(), m)) throw std::invalid_argument("coincidence_count: shift must be nonzero mod N");
  const auto& model = bands.model();
  const int nu = bands.cell_size();
  const auto target = shifted_indices(model, m);
  PairCounts pc;
  pc.shift = m;
  pc.counts = Eigen::MatrixXi::Zero(nu, nu);
  for (std::size_t r = 0; r < model.cells(); ++r)
    for (int s = 0; s < nu; ++s)
      for (int w = 0; w < nu; ++w)
        if (std::abs(bands.at(target[r], s) - bands.at(r, w)) <= tol) ++pc.counts(s, w);
  pc.total = pc.counts.sum();
  pc.max_pair = pc.counts.maxCoeff();
  return pc;
}

PairCounts coincidence_count(const PeriodicGraph& g, int N, const IntVec& m, double tol) {
  return coincidence_count(BandGrid(g, N), m, tol);
}

std::vector<IntVec> sweep_shifts(const FiniteGraphModel& model, const SweepOptions& options) {
  const int d = model.dim();
  const int N = model.N();
  const double cost = std::pow(static_cast<double>(model.cells()), 2.0) * model.cell_size() * model.cell_size();
  std::vector<IntVec> shifts;
  if (d == 1 || cost <= options.exhaustive_budget) {
    for (std::size_t m = 1; m < model.cells(); ++m) shifts.push_back(model.cell_coords(m));
    return shifts;
  }
  std::set<std::size_t> chosen;
  for (int i = 0; i < d; ++i) {
    IntVec m(d, 0);
    m[i] = N / 2;
    const std::size_t idx = model.cell_index(m);
    if (idx != 0 && chosen.insert(idx).second) shifts.push_back(m);
  }
  std::mt19937_64 rng(options.seed ^ (static_cast<std::uint64_t>(N) << 32));
  std::uniform_int_distribution<std::size_t> pick(1, model.cells() - 1);
  const std::size_t target = std::min(options.min_samples, model.cells() - 1);
  while (shifts.size() < target) {
    const std::size_t idx = pick(rng);
    if (chosen.insert(idx).second) shifts.push_back(model.cell_coords(idx));
  }
  return shifts;
}

SweepResult assumption_sweep(const PeriodicGraph& g, std::span<const int> Ns, const SweepOptions& options) {
  SweepResult result;
  const bool flat = !detect_flat_bands(g, 32).empty();
  for (int N : Ns) {
    const BandGrid bands(g, N);
    CoincidenceReport rep;
    rep.N = N;
    rep.flat_band_detected = flat;
    const double diameter = bands.diameter();
    rep.tol = options.tol.value_or(1e-8 * (diameter > 0.0 ? diameter : 1.0));
    const auto shifts = sweep_shifts(bands.model(), options);
    rep.shifts_scanned = shifts.size();
    rep.exhaustive = shifts.size() + 1 == bands.cells();
    std::vector<TripleCounts> counts(shifts.size());
    parallel_for(shifts.size(), [&](std::size_t i) { counts[i] = count_three(bands, shifts[i], rep.tol); });
    const double cells = static_cast<double>(bands.cells());
    long best_pair = -1, best_low = 0, best_high = 0;
    double worst_spread = 0.0;
    for (const auto& t : counts) {
      const auto& pc = t.nominal;
      if (pc.max_pair > best_pair) {
        best_pair = pc.max_pair;
        rep.argmax_shift = pc.shift;
        Eigen::Index s, w;
        pc.counts.maxCoeff(&s, &w);
        rep.argmax_s = static_cast<int>(s);
        rep.argmax_w = static_cast<int>(w);
      }
      rep.max_total = std::max(rep.max_total, pc.total);
      best_low = std::max(best_low, t.max_pair_low);
      best_high = std::max(best_high, t.max_pair_high);
      if (pc.max_pair == static_cast<long>(bands.cells())) rep.identically_coincident_pair = true;
      const double spread = static_cast<double>(t.total_high - t.total_low) / std::max<long>(1, pc.total);
      worst_spread = std::max(worst_spread, spread);
      if (options.keep_census) rep.census.push_back(pc);
    }
    rep.sup_pair_fraction = std::max<long>(best_pair, 0) / cells;
    rep.sup_total_fraction = rep.max_total / cells;
    rep.sup_pair_fraction_low = best_low / cells;
    rep.sup_pair_fraction_high = best_high / cells;
    rep.unstable = worst_spread > 0.1;
    result.reports.push_back(std::move(rep));
  }
  const auto& reps = result.reports;
  result.monotone_decay = reps.size() >= 2;
  for (std::size_t i = 1; i < reps.size(); ++i)
    if (reps[i].sup_pair_fraction > reps[i - 1].sup_pair_fraction) result.monotone_decay = false;
  if (reps.size() >= 2 && !(reps.back().sup_pair_fraction < reps.front().sup_pair_fraction))
    result.monotone_decay = false;
  return result;
}

}  // namespace fqe
