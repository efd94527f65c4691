#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "fqe/lattice.hpp"

namespace fqe {

namespace {

// Index [Z^d : L] of the lattice spanned by `gens`; 0 when L has rank < d.
long lattice_index(std::vector<std::vector<long>> gens, int d) {
  std::size_t row = 0;
  long index = 1;
  for (int col = 0; col < d; ++col) {
    // Euclid on column `col` over rows [row, end).
    for (;;) {
      std::size_t pivot = gens.size();
      for (std::size_t i = row; i < gens.size(); ++i) {
        if (gens[i][col] != 0 && (pivot == gens.size() || std::labs(gens[i][col]) < std::labs(gens[pivot][col])))
          pivot = i;
      }
      if (pivot == gens.size()) return 0;
      std::swap(gens[row], gens[pivot]);
      bool done = true;
      for (std::size_t i = row + 1; i < gens.size(); ++i) {
        if (gens[i][col] == 0) continue;
        const long q = gens[i][col] / gens[row][col];
        for (int c = 0; c < d; ++c) gens[i][c] -= q * gens[row][c];
        if (gens[i][col] != 0) done = false;
      }
      if (done) break;
    }
    index *= std::labs(gens[row][col]);
    ++row;
  }
  return index;
}

struct PatchVertex {
  IntVec cell;
  int n;
  bool operator<(const PatchVertex& o) const { return std::tie(cell, n) < std::tie(o.cell, o.n); }
};

bool patch_certifies(const PeriodicGraph& g, int radius) {
  const int d = g.dim();
  auto inside = [&](const IntVec& c) {
    return std::all_of(c.begin(), c.end(), [&](int x) { return std::abs(x) <= radius; });
  };
  std::map<PatchVertex, bool> seen;
  std::queue<PatchVertex> queue;
  PatchVertex start{IntVec(d, 0), 0};
  seen[start] = true;
  queue.push(start);
  while (!queue.empty()) {
    PatchVertex v = queue.front();
    queue.pop();
    for (const auto& e : g.edges()) {
      if (e.src != v.n) continue;
      PatchVertex w{v.cell, e.dst};
      for (int i = 0; i < d; ++i) w.cell[i] += e.offset[i];
      if (!inside(w.cell) || seen.count(w)) continue;
      seen[w] = true;
      queue.push(w);
    }
  }
  for (int n = 0; n < g.cell_size(); ++n)
    if (!seen.count({IntVec(d, 0), n})) return false;
  for (int i = 0; i < d; ++i) {
    IntVec unit(d, 0);
    unit[i] = 1;
    if (!seen.count({unit, 0})) return false;
  }
  return true;
}

}  // namespace

ConnectivityResult check_connectivity(const PeriodicGraph& g, int max_iterations) {
  ConnectivityResult result;
  const int d = g.dim();
  const int nu = g.cell_size();

  // Exact criterion: quotient graph connected and cycle lattice equal to Z^d.
  std::vector<std::vector<long>> potential(nu);
  std::vector<bool> reached(nu, false);
  reached[0] = true;
  potential[0].assign(d, 0);
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (const auto& e : g.edges()) {
      if (e.src != v || reached[e.dst]) continue;
      reached[e.dst] = true;
      potential[e.dst].resize(d);
      for (int i = 0; i < d; ++i) potential[e.dst][i] = potential[v][i] + e.offset[i];
      queue.push(e.dst);
    }
  }
  const bool quotient_connected = std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
  if (quotient_connected) {
    std::vector<std::vector<long>> cycles;
    for (const auto& e : g.edges()) {
      std::vector<long> c(d);
      for (int i = 0; i < d; ++i) c[i] = potential[e.src][i] + e.offset[i] - potential[e.dst][i];
      if (std::any_of(c.begin(), c.end(), [](long x) { return x != 0; })) cycles.push_back(c);
    }
    result.lattice_index = lattice_index(cycles, d);
  }

  for (int it = 0; it < max_iterations; ++it) {
    if (patch_certifies(g, it + 1)) {
      result.verdict = Connectivity::connected;
      result.patch_radius = it + 1;
      return result;
    }
  }
  if (!quotient_connected || result.lattice_index != 1) {
    result.verdict = Connectivity::disconnected;
  } else {
    result.verdict = Connectivity::inconclusive;
  }
  return result;
}

ValidationReport validate(const PeriodicGraph& g) {
  ValidationReport report;
  const int nu = g.cell_size();
  const int d = g.dim();

  std::map<std::tuple<int, int, IntVec>, int> mult;
  for (const auto& e : g.edges()) mult[{e.src, e.dst, e.offset}] = e.multiplicity;
  for (const auto& e : g.edges()) {
    IntVec neg(e.offset);
    for (int& o : neg) o = -o;
    auto it = mult.find({e.dst, e.src, neg});
    if (it == mult.end() || it->second != e.multiplicity) {
      report.symmetric = false;
      std::ostringstream os;
      os << "symmetry: template (" << e.src << "," << e.dst << ",[";
      for (int i = 0; i < d; ++i) os << (i ? "," : "") << e.offset[i];
      os << "]) has no matching reverse";
      report.failures.push_back(os.str());
    }
  }

  for (int n = 0; n < nu; ++n) report.degrees.push_back(g.degree(n));
  report.regular = std::adjacent_find(report.degrees.begin(), report.degrees.end(),
                                      std::not_equal_to<>()) == report.degrees.end();
  report.max_offset = g.max_offset();
  if (nu == 1 && report.degrees[0] % 2 == 0) report.half_degree = report.degrees[0] / 2;

  const auto conn = check_connectivity(g);
  report.connectivity = conn.verdict;
  report.patch_radius = conn.patch_radius;
  report.lattice_index = conn.lattice_index;
  if (conn.verdict == Connectivity::disconnected) {
    std::ostringstream os;
    os << "connectivity: infinite graph is disconnected";
    if (conn.lattice_index > 1) os << " (cycle lattice has index " << conn.lattice_index << " in Z^d)";
    report.failures.push_back(os.str());
  } else if (conn.verdict == Connectivity::inconclusive) {
    report.failures.push_back("connectivity: inconclusive after patch growth cap");
  }

  if (conn.verdict == Connectivity::connected && report.symmetric) {
    // A connected periodic graph is bipartite iff its quotient with N = 2 is.
    FiniteGraphModel model(g, 2);
    std::vector<int> colour(model.size(), -1);
    bool ok = true;
    for (std::size_t s = 0; s < model.size() && ok; ++s) {
      if (colour[s] >= 0) continue;
      colour[s] = 0;
      std::queue<std::size_t> q;
      q.push(s);
      while (!q.empty() && ok) {
        std::size_t v = q.front();
        q.pop();
        const std::size_t cell = v / nu;
        const int n = static_cast<int>(v % nu);
        for (const auto& e : g.edges()) {
          if (e.src != n) continue;
          const std::size_t w = model.index(model.shifted(cell, e.offset), e.dst);
          if (colour[w] < 0) {
            colour[w] = 1 - colour[v];
            q.push(w);
          } else if (colour[w] == colour[v]) {
            ok = false;
          }
        }
      }
    }
    report.bipartite = ok;
  }
  return report;
}

}  // namespace fqe
