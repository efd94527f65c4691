#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqe/lattice.hpp"
#include "fqe/observables.hpp"

namespace fqe {

/// Parsed command line; echoed verbatim into every report.
struct RunConfig {
  std::string command;
  std::string preset = "zd";
  std::string spec;                 // graph spec file; overrides preset
  std::optional<int> dim;
  std::optional<int> k;
  std::vector<double> Q;
  std::vector<int> Ns;
  std::optional<double> tol;
  std::string basis = "fiber";
  std::string observable = "half";
  std::string reference = "uniform";
  std::string window;               // "lo:hi"
  int grid = 32;
  std::string out;
  unsigned threads = 1;             // 0 = hardware concurrency
  std::uint64_t seed = 1;
  std::vector<double> T;
  std::string scenario;
  std::vector<int> momentum;        // bloch: j
  int band = 0;                     // bloch: 1-based, 0 = all
  std::vector<double> alpha;        // check-assumption: Kronecker probe shift
  bool json = false;
  bool per_member = false;
  bool vectors = false;
};

nlohmann::json to_json(const RunConfig& c);

/// Exit codes: 0 success, 1 scenario check failed, 2 invalid input, 3 capacity, 4 numerical, 5 I/O.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Graph from --spec or --preset with its parameters; loader warnings go to `err`.
PeriodicGraph load_graph(const RunConfig& config, std::ostream& err);

/// Scalar observable from its text form (constant[:c], half, quarter, alternating-block,
/// cosine:f1,f2, sublattice:v1,...,random, file:PATH).
ScalarObservable make_observable(const std::string& spec, const FiniteGraphModel& model, std::uint64_t seed);
bool is_matrix_observable(const std::string& spec);
/// Band-matrix observable from nn:DIR or hamiltonian.
BandMatrixObservable make_matrix_observable(const std::string& spec, const FiniteGraphModel& model);

}  // namespace fqe
