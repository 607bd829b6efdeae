#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "nlof/netsim.hpp"
#include "nlof/pipeline.hpp"

namespace nlof::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(NLOF_SCENARIO_DIR) + "/" + name + ".json";
}

inline ScenarioSpec scenario_spec(const std::string& name) {
  std::ifstream in(scenario_path(name));
  return load_scenario(in);
}

/// Reference parameters with eps = 10 kbps.
inline AnalysisParams desk_params() {
  AnalysisParams p;
  p.eps = 10'000.0;
  return p;
}

} // namespace nlof::testing
