#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fqe {

/// One scripted comparison. `origin` records how the expected value is known.
struct ScenarioCheck {
  std::string name;
  std::string relation; // "eq", "ge" or "le"
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  std::string origin;
  bool passed = false;
};

struct ScenarioResult {
  std::string name;
  std::string description;
  std::vector<ScenarioCheck> checks;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

struct ScenarioOptions {
  std::optional<int> N;
  std::uint64_t seed = 1;
};

struct ScenarioEntry {
  std::string name;
  std::string summary;
  int default_N = 0;
  std::function<ScenarioResult(const ScenarioOptions&)> run;
};

const std::vector<ScenarioEntry>& scenario_registry();
/// Throws std::invalid_argument for unknown names.
ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& options = {});

}  // namespace fqe
