#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlof {

/// A flow reduced to what the clustering stages look at.
struct FlowPoint {
  std::string flow_id;
  double throughput = 0.0; // bits/second

  friend bool operator==(const FlowPoint&, const FlowPoint&) = default;
};

struct DensityCluster {
  int cluster_id = 0;
  std::vector<FlowPoint> members; // input order
  double max_throughput = 0.0;
};

struct DbscanResult {
  /// Sorted by descending max_throughput; cluster_id is the position.
  std::vector<DensityCluster> clusters;
  std::vector<FlowPoint> noise; // input order
};

/// DBSCAN over scalar throughputs with |a - b| distance.
///
/// A point is core when at least `min_samples` points (itself included) lie
/// within `eps`. Clusters are the connected components of core points; a
/// non-core point within eps of a core joins the cluster of its nearest core,
/// ties going to the higher-valued core. Everything else is noise.
DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps,
                       std::size_t min_samples);

/// Globally optimal 1-D k-means.
struct KMeans1dResult {
  /// Cluster means, descending.
  std::vector<double> means;
  /// Group sizes over the ascending-sorted input, matching `means` reversed
  /// (i.e. sizes[0] is the lowest group).
  std::vector<std::size_t> group_sizes;
  double sse = 0.0;
};

/// k is reduced to the number of distinct values when it exceeds it. Throws
/// DomainError for empty input or k == 0.
KMeans1dResult kmeans_1d_detail(std::span<const double> values, std::size_t k);

/// Means only, descending.
std::vector<double> kmeans_1d(std::span<const double> values, std::size_t k);

struct TPCluster {
  int tpcluster_id = 0;
  double seed_max = 0.0;
  std::vector<FlowPoint> members;
  /// Ids of the density clusters merged into this one.
  std::vector<int> density_cluster_ids;
  double normal_point = 0.0;
  /// Aligned with `members`; filled by compute_fof.
  std::vector<double> fof;
  /// Every member had zero throughput; all FOFs forced to 1.
  bool degenerate_zero = false;
};

/// Merges density clusters into throughput classes and folds noise in.
///
/// Clusters are visited by descending max; each one not yet merged founds a
/// TPCluster and absorbs every unmerged cluster whose max lies in
/// ((1 - tpr) * seed_max, seed_max]. A noise flow goes to the TPCluster that
/// minimises seed_max - throughput among those where that gap is at least
/// -tpdev * seed_max (ties: larger seed_max), else to the largest TPCluster.
/// Throws NoClustersError when there is noise but no cluster to put it in.
std::vector<TPCluster> form_tpclusters(std::span<const DensityCluster> clusters,
                                       std::span<const FlowPoint> noise,
                                       double tpr, double tpdev);

/// Fills normal_point (highest k-means mean) and per-member FOF, in parallel
/// over clusters.
void compute_fof(std::span<TPCluster> tpclusters, std::size_t k);

/// FOF = (normal - throughput) / normal.
inline double flow_outlier_factor(double normal_point, double throughput) {
  return (normal_point - throughput) / normal_point;
}

} // namespace nlof
