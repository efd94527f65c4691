#include "fqe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "fqe/assumption.hpp"
#include "fqe/ergodicity.hpp"
#include "fqe/finite.hpp"
#include "fqe/floquet.hpp"
#include "fqe/graph_io.hpp"
#include "fqe/parallel.hpp"
#include "fqe/presets.hpp"
#include "fqe/report.hpp"
#include "fqe/scenarios.hpp"
#include "fqe/symbol.hpp"

namespace fqe {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("cannot parse " + what + " '" + s + "'");
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("cannot parse " + what + " '" + s + "'");
}

std::optional<Window> parse_window(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw std::invalid_argument("window must be lo:hi");
  Window w{parse_double(parts[0], "window"), parse_double(parts[1], "window")};
  if (w.lo > w.hi) throw std::invalid_argument("window lower end exceeds upper end");
  return w;
}

Reference parse_reference(const std::string& text) {
  if (text == "uniform") return Reference::uniform;
  if (text == "opn-abar" || text == "opn_abar" || text == "weighted") return Reference::opn_abar;
  throw std::invalid_argument("unknown reference '" + text + "' (uniform | opn-abar)");
}

std::vector<int> Ns_or(const RunConfig& c, std::vector<int> fallback) {
  const auto Ns = c.Ns.empty() ? fallback : c.Ns;
  for (int N : Ns)
    if (N < 2) throw std::invalid_argument("every N must be at least 2");
  return Ns;
}

std::string fmt(double x) { return format_number(x); }

Eigenbasis build_basis(const FiniteGraphModel& model, const std::string& text) {
  const BasisMode mode = BasisMode::parse(text);
  if (mode.kind == BasisKind::dense) return dense_eigenbasis(model);
  return fiber_eigenbasis(model, mode);
}

// Ergodicity commands need a connected graph; the assumption and band commands only warn.
void require_connected(const PeriodicGraph& g) {
  const auto report = validate(g);
  if (report.connectivity != Connectivity::connected)
    throw GraphError(std::string("graph is not certified connected (") + to_string(report.connectivity) + ")");
}

json report_to_json(const VarianceReport& r, bool per_member) {
  json j{{"reference", to_string(r.reference)},
         {"basis", r.basis_tag},
         {"observable", r.observable_tag},
         {"members", r.members.size()},
         {"variance", r.variance},
         {"sup_gap", r.sup_gap},
         {"second_moment", r.second_moment}};
  if (r.window) j["window"] = {r.window->lo, r.window->hi};
  if (per_member) {
    json rows = json::array();
    for (std::size_t i = 0; i < r.members.size(); ++i)
      rows.push_back({{"u", r.members[i]},
                      {"eigenvalue", r.eigenvalues[i]},
                      {"expectation", {r.expectations[i].real(), r.expectations[i].imag()}},
                      {"reference", {r.references[i].real(), r.references[i].imag()}},
                      {"gap", {r.gaps[i].real(), r.gaps[i].imag()}}});
    j["per_member"] = rows;
  }
  return j;
}

int cmd_presets(const RunConfig& c, ReportSink& sink) {
  CsvTable t{{"name", "nu", "d", "D", "parameters", "description"}, {}};
  json list = json::array();
  for (const auto& p : preset_registry()) {
    t.rows.push_back({p.name, p.cell_size, p.dimension, p.half_degree, p.parameters, p.description});
    list.push_back({{"name", p.name}, {"nu", p.cell_size}, {"d", p.dimension}, {"D", p.half_degree},
                    {"parameters", p.parameters}, {"description", p.description}});
  }
  json doc = report_envelope("presets", to_json(c));
  doc["presets"] = list;
  json sc = json::array();
  for (const auto& s : scenario_registry()) sc.push_back({{"name", s.name}, {"summary", s.summary}});
  doc["scenarios"] = sc;
  sink.emit("presets", doc, &t);
  return 0;
}

int cmd_bands(const RunConfig& c, ReportSink& sink, std::ostream& err) {
  const PeriodicGraph g = load_graph(c, err);
  if (c.grid < 1) throw std::invalid_argument("grid must be positive");
  const BandTable table = band_structure(g, c.grid);
  std::ostringstream csv;
  write_band_csv(csv, table);
  json doc = report_envelope("bands", to_json(c));
  json flats = json::array();
  for (const auto& f : detect_flat_bands(g, c.grid)) flats.push_back({{"value", f.value}, {"spread", f.spread}});
  doc["graph"] = graph_to_json(g);
  doc["flat_bands"] = flats;
  doc["exceptional_points"] = table.exceptional_points.size();
  doc["samples"] = table.thetas.size();
  if (!c.json || !c.out.empty()) sink.emit_text("bands", csv.str(), ".csv");
  if (c.json || !c.out.empty()) sink.emit("bands", doc);
  return 0;
}

int cmd_check_assumption(const RunConfig& c, ReportSink& sink, std::ostream& err) {
  const PeriodicGraph g = load_graph(c, err);
  const auto Ns = Ns_or(c, {8, 16, 32});
  const auto validation = validate(g);
  SweepOptions opts;
  opts.tol = c.tol;
  opts.seed = c.seed;
  const SweepResult sweep = assumption_sweep(g, Ns, opts);
  CsvTable t{{"N", "tol", "shifts", "exhaustive", "sup_pair_fraction", "sup_total_fraction", "pair_fraction_low_tol",
              "pair_fraction_high_tol", "unstable", "flat_band", "identically_coincident", "argmax_shift", "argmax_s",
              "argmax_w"},
             {}};
  json reports = json::array();
  bool coincident = false;
  bool flat = false;
  for (const auto& r : sweep.reports) {
    std::string shift;
    for (std::size_t i = 0; i < r.argmax_shift.size(); ++i) shift += (i ? " " : "") + std::to_string(r.argmax_shift[i]);
    t.rows.push_back({std::to_string(r.N), fmt(r.tol), std::to_string(r.shifts_scanned), r.exhaustive ? "1" : "0",
                      fmt(r.sup_pair_fraction), fmt(r.sup_total_fraction), fmt(r.sup_pair_fraction_low),
                      fmt(r.sup_pair_fraction_high), r.unstable ? "1" : "0", r.flat_band_detected ? "1" : "0",
                      r.identically_coincident_pair ? "1" : "0", shift, std::to_string(r.argmax_s + 1),
                      std::to_string(r.argmax_w + 1)});
    reports.push_back({{"N", r.N}, {"tol", r.tol}, {"exhaustive", r.exhaustive}, {"shifts", r.shifts_scanned},
                       {"sup_pair_fraction", r.sup_pair_fraction}, {"sup_total_fraction", r.sup_total_fraction},
                       {"max_total", r.max_total}, {"argmax_shift", r.argmax_shift}, {"argmax_pair", {r.argmax_s + 1, r.argmax_w + 1}},
                       {"sup_pair_fraction_low_tol", r.sup_pair_fraction_low},
                       {"sup_pair_fraction_high_tol", r.sup_pair_fraction_high}, {"unstable", r.unstable},
                       {"flat_band_detected", r.flat_band_detected},
                       {"identically_coincident_pair", r.identically_coincident_pair}});
    coincident = coincident || r.identically_coincident_pair;
    flat = flat || r.flat_band_detected;
  }
  json doc = report_envelope("check-assumption", to_json(c));
  doc["seed"] = c.seed;
  doc["connectivity"] = to_string(validation.connectivity);
  doc["reports"] = reports;
  doc["monotone_decay"] = sweep.monotone_decay;
  doc["assumption_failure"] = coincident || flat;
  if (g.cell_size() == 1 && validation.connectivity == Connectivity::connected) {
    const auto cert = nu1_root_bound(g);
    const auto checks = certify_root_bound(g, cert, Ns, opts);
    json jc = json::array();
    for (const auto& k : checks)
      jc.push_back({{"N", k.N}, {"max_count", k.max_count}, {"limit", k.limit}, {"holds", k.holds}});
    doc["root_bound"] = {{"direction", cert.direction}, {"gamma", cert.gamma}, {"M", cert.M},
                         {"half_degree", cert.half_degree}, {"list_length", cert.list_length},
                         {"row_used", cert.row_used}, {"within_list", cert.within_list},
                         {"theoretical_bound", cert.theoretical_bound}, {"checks", jc}};
  }
  if (!c.alpha.empty()) {
    const auto probe = kronecker_probe(g, c.alpha, c.grid);
    json kp{{"alpha", probe.alpha}, {"grid", probe.grid}, {"min_abs_eigenvalue", probe.min_abs_eigenvalue},
            {"identically_zero", probe.identically_zero}, {"near_zero_points", probe.near_zero_points}};
    if (probe.zero_count) kp["zero_count"] = *probe.zero_count;
    if (probe.degree_bound) kp["degree_bound"] = *probe.degree_bound;
    kp["zeros"] = probe.zeros;
    doc["kronecker"] = kp;
  }
  if (g.dim() == 1) {
    try {
      const auto split_check = charpoly_split_check(g, c.grid);
      doc["charpoly_split"] = {{"delta", split_check.delta}, {"max_deviation", split_check.max_deviation}};
    } catch (const GraphError&) {
    }
  }
  sink.emit("check_assumption", doc, &t);
  return 0;
}

int cmd_variance(const RunConfig& c, ReportSink& sink, std::ostream& err, bool que_only) {
  const PeriodicGraph g = load_graph(c, err);
  require_connected(g);
  const auto Ns = Ns_or(c, {16, 32, 64});
  const auto window = parse_window(c.window);
  const bool matrix = is_matrix_observable(c.observable);
  const Reference ref = matrix ? Reference::matrix : (que_only ? Reference::uniform : parse_reference(c.reference));
  CsvTable t{{"N", "basis", "observable", "reference", "members", "V", "sup_gap"}, {}};
  json rows = json::array();
  for (int N : Ns) {
    const FiniteGraphModel model(g, N);
    const Eigenbasis basis = build_basis(model, c.basis);
    VarianceReport r;
    if (matrix) {
      r = matrix_average(basis, make_matrix_observable(c.observable, model));
    } else {
      const auto a = make_observable(c.observable, model, c.seed);
      if (a.sup_norm() > 1.0 + 1e-12) err << "warning: observable exceeds 1 in sup norm\n";
      r = qe_variance(basis, a, ref, window);
    }
    t.rows.push_back({std::to_string(N), r.basis_tag, r.observable_tag, to_string(r.reference),
                      std::to_string(r.members.size()), fmt(r.variance), fmt(r.sup_gap)});
    json row = report_to_json(r, c.per_member);
    row["N"] = N;
    rows.push_back(row);
  }
  const std::string name = que_only ? "que" : "qe-variance";
  json doc = report_envelope(name, to_json(c));
  doc["seed"] = c.seed;
  doc["results"] = rows;
  sink.emit(que_only ? "que" : "qe_variance", doc, &t);
  return 0;
}

int cmd_counterexample(const RunConfig& c, ReportSink& sink, std::ostream& out) {
  if (c.scenario.empty()) {
    for (const auto& s : scenario_registry()) out << s.name << "  " << s.summary << '\n';
    return 0;
  }
  ScenarioOptions opts;
  if (!c.Ns.empty()) opts.N = c.Ns.front();
  opts.seed = c.seed;
  const ScenarioResult res = run_scenario(c.scenario, opts);
  CsvTable t{{"check", "relation", "expected", "observed", "tolerance", "origin", "passed"}, {}};
  for (const auto& k : res.checks)
    t.rows.push_back({k.name, k.relation, fmt(k.expected), fmt(k.observed), fmt(k.tolerance), k.origin,
                      k.passed ? "PASS" : "FAIL"});
  json doc = report_envelope("counterexample", to_json(c));
  doc["result"] = res.to_json();
  sink.emit("counterexample_" + res.name, doc, &t);
  return res.passed() ? 0 : 1;
}

int cmd_bloch(const RunConfig& c, ReportSink& sink, std::ostream& err) {
  const PeriodicGraph g = load_graph(c, err);
  const int N = Ns_or(c, {8}).front();
  const FiniteGraphModel model(g, N);
  const FiniteOperator h(model);
  std::vector<std::size_t> js;
  if (c.momentum.empty()) {
    for (std::size_t r = 0; r < model.cells(); ++r) js.push_back(r);
  } else {
    if (static_cast<int>(c.momentum.size()) != g.dim()) throw std::invalid_argument("--j needs d components");
    js.push_back(model.cell_index(c.momentum));
  }
  std::vector<int> bands;
  if (c.band == 0) {
    for (int s = 0; s < g.cell_size(); ++s) bands.push_back(s);
  } else {
    if (c.band < 1 || c.band > g.cell_size()) throw std::invalid_argument("--band must lie in 1..nu");
    bands.push_back(c.band - 1);
  }
  CsvTable t{{"j", "band", "eigenvalue", "residual", "modulus_deviation"}, {}};
  double worst_res = 0.0, worst_mod = 0.0;
  for (std::size_t j : js)
    for (int s : bands) {
      const BlochFunction b = bloch_eigenfunction(model, j, s);
      const double residual = (h.apply(b.full) - b.eigenvalue * b.full).norm() / b.full.norm();
      double mod = 0.0;
      for (std::size_t k = 0; k < model.cells(); ++k)
        for (int n = 0; n < g.cell_size(); ++n)
          mod = std::max(mod, std::abs(std::abs(b.full(model.index(k, n))) - std::abs(b.cell_vector(n))));
      worst_res = std::max(worst_res, residual);
      worst_mod = std::max(worst_mod, mod);
      std::string jt;
      const auto coords = model.cell_coords(j);
      for (std::size_t i = 0; i < coords.size(); ++i) jt += (i ? " " : "") + std::to_string(coords[i]);
      t.rows.push_back({jt, std::to_string(s + 1), fmt(b.eigenvalue), fmt(residual), fmt(mod)});
    }
  json doc = report_envelope("bloch", to_json(c));
  doc["max_residual"] = worst_res;
  doc["max_modulus_deviation"] = worst_mod;
  doc["passed"] = worst_res <= 1e-10 && worst_mod <= 1e-10;
  sink.emit("bloch", doc, &t);
  return 0;
}

int cmd_egorov(const RunConfig& c, ReportSink& sink, std::ostream& err) {
  const PeriodicGraph g = load_graph(c, err);
  const int N = Ns_or(c, {8}).front();
  const FiniteGraphModel model(g, N);
  const auto a = make_observable(c.observable, model, c.seed);
  const std::vector<double> Ts = c.T.empty() ? std::vector<double>{1.0, 10.0, 100.0} : c.T;
  EgorovOptions opts;
  opts.coincide_tol = c.tol;
  CsvTable t{{"T", "identity_hs_deviation", "limit_hs_distance", "main_symbol_hs_norm"}, {}};
  json rows = json::array();
  for (double T : Ts) {
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    const EgorovSymbols sym = egorov_symbols(model, a, T, opts);
    const CMatrix oracle = time_averaged_observable(model, a, T);
    const double identity = (oracle - quantize(sym.time_averaged, model).dense()).norm();
    const double to_limit = std::sqrt((sym.time_averaged - sym.limit).hs_norm_squared());
    const double main_norm = std::sqrt(sym.main.hs_norm_squared());
    t.rows.push_back({fmt(T), fmt(identity), fmt(to_limit), fmt(main_norm)});
    rows.push_back({{"T", T}, {"identity_hs_deviation", identity}, {"limit_hs_distance", to_limit},
                    {"main_symbol_hs_norm", main_norm}, {"coincide_tol", sym.coincide_tol}});
  }
  json doc = report_envelope("egorov", to_json(c));
  doc["seed"] = c.seed;
  doc["results"] = rows;
  sink.emit("egorov", doc, &t);
  return 0;
}

int cmd_basis(const RunConfig& c, ReportSink& sink, std::ostream& err) {
  const PeriodicGraph g = load_graph(c, err);
  const int N = Ns_or(c, {8}).front();
  const FiniteGraphModel model(g, N);
  const Eigenbasis basis = build_basis(model, c.basis);
  const FiniteOperator h(model);
  CsvTable t{{"u", "eigenvalue", "provenance", "momentum", "band"}, {}};
  json vectors = json::array();
  for (std::size_t u = 0; u < basis.size(); ++u) {
    const auto& p = basis.provenance(u);
    const char* kind = p.kind == Provenance::Kind::fiber ? "fiber" : (p.kind == Provenance::Kind::mixed ? "mixed" : "dense");
    std::string mom, band;
    if (p.kind == Provenance::Kind::fiber) {
      const auto coords = model.cell_coords(p.momentum);
      for (std::size_t i = 0; i < coords.size(); ++i) mom += (i ? " " : "") + std::to_string(coords[i]);
      band = std::to_string(p.band + 1);
    }
    t.rows.push_back({std::to_string(u), fmt(basis.eigenvalue(u)), kind, mom, band});
    if (c.vectors) {
      const CVector v = basis.vector(u);
      json re = json::array(), im = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
      }
      vectors.push_back({{"re", re}, {"im", im}});
    }
  }
  if (c.vectors && basis.size() * basis.size() > 1000000)
    err << "warning: full vector dump holds " << basis.size() * basis.size() << " entries\n";
  json doc = report_envelope("basis", to_json(c));
  doc["seed"] = BasisMode::parse(c.basis).seed;
  doc["basis"] = basis.mode().tag();
  doc["size"] = basis.size();
  doc["gram_deviation"] = basis.gram_deviation();
  doc["max_relative_residual"] = basis.max_relative_residual(h);
  doc["eigenvalues"] = basis.eigenvalues();
  if (c.vectors) doc["vectors"] = vectors;
  sink.emit("basis", doc, &t);
  return 0;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  set_thread_budget(c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads);
  std::optional<std::filesystem::path> dir;
  if (!c.out.empty()) dir = c.out;
  ReportSink sink(dir, out, c.json);
  if (c.command == "presets") return cmd_presets(c, sink);
  if (c.command == "bands") return cmd_bands(c, sink, err);
  if (c.command == "check-assumption") return cmd_check_assumption(c, sink, err);
  if (c.command == "qe-variance") return cmd_variance(c, sink, err, false);
  if (c.command == "que") return cmd_variance(c, sink, err, true);
  if (c.command == "counterexample") return cmd_counterexample(c, sink, out);
  if (c.command == "bloch") return cmd_bloch(c, sink, err);
  if (c.command == "egorov") return cmd_egorov(c, sink, err);
  if (c.command == "basis") return cmd_basis(c, sink, err);
  throw std::invalid_argument("unknown command '" + c.command + "'");
}

void report_error(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

json to_json(const RunConfig& c) {
  json j{{"command", c.command}, {"Ns", c.Ns},         {"basis", c.basis},   {"observable", c.observable},
         {"reference", c.reference}, {"grid", c.grid}, {"threads", c.threads}, {"seed", c.seed}};
  if (!c.spec.empty()) j["spec"] = c.spec;
  else j["preset"] = c.preset;
  if (c.dim) j["dim"] = *c.dim;
  if (c.k) j["k"] = *c.k;
  if (!c.Q.empty()) j["Q"] = c.Q;
  if (c.tol) j["tol"] = *c.tol;
  if (!c.window.empty()) j["window"] = c.window;
  if (!c.T.empty()) j["T"] = c.T;
  if (!c.scenario.empty()) j["scenario"] = c.scenario;
  if (!c.momentum.empty()) j["j"] = c.momentum;
  if (c.band) j["band"] = c.band;
  if (!c.alpha.empty()) j["alpha"] = c.alpha;
  return j;
}

PeriodicGraph load_graph(const RunConfig& c, std::ostream& err) {
  if (!c.spec.empty()) {
    auto loaded = load_graph_spec(c.spec);
    for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
    return std::move(loaded.graph);
  }
  PresetParams p;
  p.dim = c.dim;
  p.range = c.k;
  p.potential = c.Q;
  return build_preset(c.preset, p);
}

bool is_matrix_observable(const std::string& spec) { return spec == "hamiltonian" || spec.rfind("nn:", 0) == 0; }

BandMatrixObservable make_matrix_observable(const std::string& spec, const FiniteGraphModel& model) {
  if (spec == "hamiltonian") return BandMatrixObservable::from_hamiltonian(model);
  if (spec.rfind("nn:", 0) == 0) return BandMatrixObservable::nearest_neighbor(model, parse_int(spec.substr(3), "direction"));
  throw std::invalid_argument("unknown matrix observable '" + spec + "'");
}

ScalarObservable make_observable(const std::string& spec, const FiniteGraphModel& model, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "constant") return ScalarObservable::constant(model, arg.empty() ? 1.0 : parse_double(arg, "constant"));
  if (head == "half" || head == "half-indicator") return ScalarObservable::half_indicator(model);
  if (head == "quarter" || head == "quarter-indicator") return ScalarObservable::quarter_indicator(model);
  if (head == "alternating-block" || head == "alternating") return ScalarObservable::alternating_block(model);
  if (head == "cosine") {
    IntVec f;
    for (const auto& s : split(arg, ',')) f.push_back(parse_int(s, "frequency"));
    return ScalarObservable::cosine(model, f);
  }
  if (head == "sublattice") {
    std::vector<double> v;
    for (const auto& s : split(arg, ',')) v.push_back(parse_double(s, "sublattice value"));
    return ScalarObservable::per_sublattice(model, v);
  }
  if (head == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CVector values(model.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = dist(rng);
    return ScalarObservable(model, values, "random:" + std::to_string(seed));
  }
  if (head == "file") {
    std::ifstream f(arg);
    if (!f) throw std::invalid_argument("cannot open observable file '" + arg + "'");
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument("observable file: " + std::string(e.what()));
    }
    if (j.is_object()) j = j.at("values");
    if (!j.is_array() || j.size() != model.size())
      throw std::invalid_argument("observable file must hold " + std::to_string(model.size()) + " values");
    CVector values(model.size());
    for (std::size_t i = 0; i < j.size(); ++i) values(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return ScalarObservable(model, values, "file:" + arg);
  }
  throw std::invalid_argument("unknown observable '" + spec + "'");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(config, out, err);
  } catch (const CapacityError& e) {
    report_error(err, "capacity", e.what());
    return 3;
  } catch (const NumericalError& e) {
    report_error(err, "numerical", e.what());
    return 4;
  } catch (const GraphError& e) {
    report_error(err, "graph", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    report_error(err, "invalid_argument", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "io", e.what());
    return 5;
  } catch (const std::exception& e) {
    report_error(err, "runtime", e.what());
    return 5;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Floquet quantum-ergodicity toolkit for periodic graphs", "fqe"};
  app.set_version_flag("--version", FQE_VERSION);
  app.require_subcommand(1);
  RunConfig c;

  auto add_graph = [&](CLI::App* s) {
    s->add_option("--preset", c.preset, "catalog graph (see `fqe presets`)");
    s->add_option("--spec", c.spec, "graph spec JSON file")->check(CLI::ExistingFile);
    s->add_option("--dim", c.dim, "dimension for zd");
    s->add_option("--k", c.k, "range for z_range_k");
    s->add_option("--Q", c.Q, "potential values for z_periodic_potential")->delimiter(',');
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "output directory");
    s->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    s->add_option("--seed", c.seed, "seed for sampled shifts and random observables");
    s->add_flag("--json", c.json, "print the JSON report instead of CSV");
  };
  auto add_N = [&](CLI::App* s) { s->add_option("--N", c.Ns, "comma-separated N list")->delimiter(','); };

  auto* presets = app.add_subcommand("presets", "list catalog graphs and scenarios");
  add_common(presets);

  auto* bands = app.add_subcommand("bands", "dispersion CSV on a grid^d momentum grid");
  add_graph(bands);
  add_common(bands);
  bands->add_option("--grid", c.grid, "grid points per axis");

  auto* check = app.add_subcommand("check-assumption", "band coincidence census and sweep");
  add_graph(check);
  add_common(check);
  add_N(check);
  check->add_option("--tol", c.tol, "absolute coincidence tolerance");
  check->add_option("--alpha", c.alpha, "Kronecker probe shift")->delimiter(',');
  check->add_option("--grid", c.grid, "Kronecker and split-check grid");

  auto add_variance = [&](CLI::App* s) {
    add_graph(s);
    add_common(s);
    add_N(s);
    s->add_option("--basis", c.basis, "fiber | real-mixed | swap-mixed | random:SEED | dense");
    s->add_option("--observable", c.observable, "observable spec");
    s->add_option("--window", c.window, "energy window lo:hi");
    s->add_flag("--per-member", c.per_member, "include per-eigenvector gaps in the JSON report");
  };
  auto* qe = app.add_subcommand("qe-variance", "QE variance sweep over N");
  add_variance(qe);
  qe->add_option("--reference", c.reference, "uniform | opn-abar");
  auto* que = app.add_subcommand("que", "sup over eigenvectors of the gap to the uniform average");
  add_variance(que);

  auto* ce = app.add_subcommand("counterexample", "run a scripted scenario and check its expected values");
  ce->add_option("name", c.scenario, "scenario name (omit to list)");
  add_common(ce);
  add_N(ce);

  auto* bloch = app.add_subcommand("bloch", "construct and verify Bloch eigenfunctions");
  add_graph(bloch);
  add_common(bloch);
  add_N(bloch);
  bloch->add_option("--j", c.momentum, "momentum index (default: all)")->delimiter(',');
  bloch->add_option("--band", c.band, "band 1..nu (default: all)");

  auto* egorov = app.add_subcommand("egorov", "phase-space symbol checks against the exact time average");
  add_graph(egorov);
  add_common(egorov);
  add_N(egorov);
  egorov->add_option("--T", c.T, "averaging times")->delimiter(',');
  egorov->add_option("--observable", c.observable, "observable spec");
  egorov->add_option("--tol", c.tol, "coincidence tolerance");

  auto* basis = app.add_subcommand("basis", "export an eigenbasis");
  add_graph(basis);
  add_common(basis);
  add_N(basis);
  basis->add_option("--basis", c.basis, "fiber | real-mixed | swap-mixed | random:SEED | dense");
  basis->add_flag("--vectors", c.vectors, "dump full vectors into the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    report_error(err, "usage", e.what());
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace fqe
