#pragma once

// Serial versions of the OpenMP kernels. They share the semantics of the
// parallel entry points exactly and exist for equivalence tests and the
// benchmark baseline.

#include <cstddef>
#include <span>
#include <vector>

#include "nlof/clustering.hpp"
#include "nlof/netsim.hpp"
#include "nlof/scoring.hpp"
#include "nlof/topology.hpp"

namespace nlof {

/// For each value of an ascending array, how many values lie within eps.
std::vector<std::size_t> neighbour_counts(std::span<const double> sorted,
                                          double eps);

namespace reference {

std::vector<std::size_t> neighbour_counts(std::span<const double> sorted,
                                          double eps);
DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps,
                       std::size_t min_samples);
void compute_fof(std::span<TPCluster> tpclusters, std::size_t k);
std::vector<TracedFlow> trace_flows(const Topology& topology,
                                    std::span<const FlowEndpoints> flows);
std::vector<LinkScore> compute_nlof(std::span<const LinkFlows> link_flows,
                                    const FofMap& fof, double threshold);
Scenario generate_scenario(const ScenarioSpec& spec);

} // namespace reference
} // namespace nlof
