#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fqe/lattice.hpp"

namespace fqe {

struct GraphLoadResult {
  PeriodicGraph graph;
  std::vector<std::string> warnings;
};

/// Reads {dim, vertices:[{label,Q}], edges:[{src,dst,offset,multiplicity?}], embedding?}.
/// src/dst may be labels or indices. Missing reverse templates are added with a warning.
GraphLoadResult graph_from_json(const nlohmann::json& spec);
GraphLoadResult load_graph_spec(const std::string& path);
nlohmann::json graph_to_json(const PeriodicGraph& g);

}  // namespace fqe
