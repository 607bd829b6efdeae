#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlof/clustering.hpp"
#include "parallel.hpp"

namespace nlof::detail {

std::vector<std::size_t> neighbour_counts(std::span<const double> sorted, double eps,
                                          Exec exec);
DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps,
                       std::size_t min_samples, Exec exec);
void compute_fof(std::span<TPCluster> tpclusters, std::size_t k, Exec exec);

} // namespace nlof::detail
