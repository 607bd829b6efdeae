#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlof/flow_model.hpp"
#include "nlof/topology.hpp"

namespace nlof {

struct ScenarioSpec {
  Topology topology;
  std::size_t flow_count = 0;
  std::vector<double> throughput_classes; // generation rates, bits/second
  std::vector<double> class_weights;
  std::vector<std::string> host_nodes;
  double jitter = 0.0; // relative half-width of uniform multiplicative noise
  std::uint64_t seed = 0;
};

/// Every violation found, empty when the spec is usable.
std::vector<std::string> validate_scenario(const ScenarioSpec& spec);

/// Throws ValidationError (listing all violations) on an invalid spec.
ScenarioSpec load_scenario(std::istream& in);
ScenarioSpec load_scenario(std::string_view json_text);

/// One hop of a flow's path as seen by the throughput model.
struct PathLink {
  double capacity_bps = 0.0;
  std::size_t share_count = 1;
  double error_rate = 0.0;
};

/// min(alpha, min capacity/share) * prod(1 - error_rate). alpha may be
/// +infinity. Throws DomainError on an empty path or a zero share count.
double model_throughput(double alpha, std::span<const PathLink> path);

struct Scenario {
  Topology topology;
  std::vector<FlowRecord> flows;
  /// Links with error_rate > 0, sorted.
  std::vector<LinkKey> errored_links;
};

inline constexpr double kSynthesizedDuration = 10.0; // seconds
inline constexpr int kEndpointRetries = 64;

/// Deterministic in spec.seed regardless of thread count.
Scenario generate_scenario(const ScenarioSpec& spec);

void write_ground_truth(std::ostream& out, std::span<const LinkKey> errored);
std::vector<LinkKey> read_ground_truth(std::istream& in);

} // namespace nlof
