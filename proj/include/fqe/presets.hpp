#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fqe/lattice.hpp"

namespace fqe {

struct PresetParams {
  std::optional<int> dim;        // zd
  std::optional<int> range;      // z_range_k
  std::vector<double> potential; // z_periodic_potential
};

struct PresetInfo {
  std::string name;
  std::string cell_size;   // ν, possibly parameter dependent
  std::string dimension;   // d
  std::string half_degree; // D for ν = 1 presets, "-" otherwise
  std::string parameters;
  std::string description;
};

/// Builds a catalog graph. Names accept '-' or '_' separators.
/// Throws GraphError for unknown names or invalid parameters.
PeriodicGraph build_preset(std::string_view name, const PresetParams& params = {});

const std::vector<PresetInfo>& preset_registry();

/// Canonical (underscore) spelling of a preset name.
std::string canonical_preset_name(std::string_view name);

}  // namespace fqe
