#include "fqe/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace fqe {

namespace {

int vertex_ref(const nlohmann::json& ref, const std::vector<std::string>& labels) {
  if (ref.is_number_integer()) return ref.get<int>();
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == name) return static_cast<int>(i);
    throw GraphError("graph spec: unknown vertex label '" + name + "'");
  }
  throw GraphError("graph spec: vertex reference must be a label or an index");
}

}  // namespace

GraphLoadResult graph_from_json(const nlohmann::json& spec) {
  try {
    const int dim = spec.at("dim").get<int>();
    std::vector<std::string> labels;
    std::vector<double> potential;
    for (const auto& v : spec.at("vertices")) {
      labels.push_back(v.at("label").get<std::string>());
      potential.push_back(v.value("Q", 0.0));
    }
    std::map<std::tuple<int, int, IntVec>, int> mult;
    for (const auto& e : spec.at("edges")) {
      const int src = vertex_ref(e.at("src"), labels);
      const int dst = vertex_ref(e.at("dst"), labels);
      IntVec offset = e.at("offset").get<IntVec>();
      mult[{src, dst, offset}] += e.value("multiplicity", 1);
    }
    std::vector<std::string> warnings;
    auto completed = mult;
    for (const auto& [key, w] : mult) {
      auto [src, dst, offset] = key;
      IntVec neg(offset);
      for (int& o : neg) o = -o;
      auto it = mult.find({dst, src, neg});
      const int w_rev = it == mult.end() ? 0 : it->second;
      if (w_rev < w) {
        std::ostringstream os;
        os << "added reverse of template " << labels.at(src) << "->" << labels.at(dst) << " [";
        for (std::size_t i = 0; i < offset.size(); ++i) os << (i ? "," : "") << offset[i];
        os << "] (multiplicity " << w << ")";
        warnings.push_back(os.str());
        completed[{dst, src, neg}] = w;
      }
    }
    std::vector<EdgeTemplate> edges;
    for (const auto& [key, w] : completed)
      edges.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
    std::optional<Embedding> embedding;
    if (spec.contains("embedding")) {
      Embedding emb;
      emb.basis = spec["embedding"].value("basis", std::vector<std::vector<double>>{});
      emb.positions = spec["embedding"].value("positions", std::vector<std::vector<double>>{});
      embedding = emb;
    }
    return {PeriodicGraph(dim, labels, potential, edges, embedding), warnings};
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("graph spec: ") + e.what());
  }
}

GraphLoadResult load_graph_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("graph spec: cannot open '" + path + "'");
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw GraphError("graph spec: " + std::string(e.what()));
  }
  return graph_from_json(spec);
}

nlohmann::json graph_to_json(const PeriodicGraph& g) {
  nlohmann::json out;
  out["dim"] = g.dim();
  out["vertices"] = nlohmann::json::array();
  for (int n = 0; n < g.cell_size(); ++n)
    out["vertices"].push_back({{"label", g.labels()[n]}, {"Q", g.potential()[n]}});
  out["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    nlohmann::json j{{"src", g.labels()[e.src]}, {"dst", g.labels()[e.dst]}, {"offset", e.offset}};
    if (e.multiplicity != 1) j["multiplicity"] = e.multiplicity;
    out["edges"].push_back(j);
  }
  if (g.embedding()) out["embedding"] = {{"basis", g.embedding()->basis}, {"positions", g.embedding()->positions}};
  return out;
}

}  // namespace fqe
