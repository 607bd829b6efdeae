#include "nlof/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nlof/error.hpp"
#include "nlof/reference.hpp"
#include "clustering_impl.hpp"
#include "parallel.hpp"
#include "text_format.hpp"

namespace nlof {
namespace detail {

// Each count is the width of the window [x - eps, x + eps]. The predicates
// compare differences the same way |a - b| <= eps would, so results agree
// bit for bit with a pairwise check.
namespace {
// Two-pointer sweep over [begin, end); the window start is found by search.
void sweep_counts(std::span<const double> sorted, double eps, std::size_t begin, std::size_t end,
                  std::vector<std::size_t>& counts) {
  if (begin >= end) return;
  const double x = sorted[begin];
  std::size_t lo = static_cast<std::size_t>(
      std::partition_point(sorted.begin(), sorted.begin() + begin,
                           [&](double y) { return x - y > eps; }) -
      sorted.begin());
  std::size_t hi = begin;
  for (std::size_t i = begin; i < end; ++i) {
    while (sorted[i] - sorted[lo] > eps) ++lo;
    if (hi < i) hi = i;
    while (hi < sorted.size() && sorted[hi] - sorted[i] <= eps) ++hi;
    counts[i] = hi - lo;
  }
}

constexpr std::size_t kSweepBlock = 8192;
} // namespace

std::vector<std::size_t> neighbour_counts(std::span<const double> sorted, double eps,
                                          Exec exec) {
  std::vector<std::size_t> counts(sorted.size());
  if (exec == Exec::serial) {
    sweep_counts(sorted, eps, 0, sorted.size(), counts);
    return counts;
  }
  const std::size_t blocks = (sorted.size() + kSweepBlock - 1) / kSweepBlock;
  for_each_index(blocks, exec, [&](std::size_t b) {
    sweep_counts(sorted, eps, b * kSweepBlock, std::min(sorted.size(), (b + 1) * kSweepBlock),
                 counts);
  });
  return counts;
}

DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps,
                       std::size_t min_samples, Exec exec) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw DomainError("eps must be a positive finite number");
  if (min_samples == 0) throw DomainError("min_samples must be at least 1");

  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].throughput != points[b].throughput)
      return points[a].throughput < points[b].throughput;
    return a < b;
  });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = points[order[i]].throughput;

  const auto counts = neighbour_counts(sorted, eps, exec);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // Component label per sorted position; kNone for noise.
  std::vector<std::size_t> label(n, kNone);
  std::size_t components = 0;
  std::size_t last_core = kNone;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] < min_samples) continue;
    if (last_core == kNone || sorted[i] - sorted[last_core] > eps) ++components;
    label[i] = components - 1;
    last_core = i;
  }

  // Border points: nearest core on either side, ties to the higher value.
  std::vector<std::size_t> prev_core(n, kNone), next_core(n, kNone);
  for (std::size_t i = 0, p = kNone; i < n; ++i) {
    if (counts[i] >= min_samples) p = i;
    prev_core[i] = p;
  }
  for (std::size_t i = n, q = kNone; i-- > 0;) {
    if (counts[i] >= min_samples) q = i;
    next_core[i] = q;
  }
  std::vector<std::size_t> final_label = label;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] >= min_samples) continue;
    const double x = sorted[i];
    std::size_t best = kNone;
    double best_dist = 0.0;
    if (auto r = next_core[i]; r != kNone && sorted[r] - x <= eps) {
      best = r;
      best_dist = sorted[r] - x;
    }
    if (auto l = prev_core[i]; l != kNone && x - sorted[l] <= eps) {
      if (best == kNone || x - sorted[l] < best_dist) best = l;
    }
    if (best != kNone) final_label[i] = label[best];
  }

  DbscanResult result;
  std::vector<std::size_t> label_of_input(n, kNone);
  for (std::size_t i = 0; i < n; ++i) label_of_input[order[i]] = final_label[i];

  std::vector<DensityCluster> clusters(components);
  for (auto& c : clusters) c.max_throughput = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto c = label_of_input[idx];
    if (c == kNone) {
      result.noise.push_back(points[idx]);
      continue;
    }
    clusters[c].members.push_back(points[idx]);
    clusters[c].max_throughput = std::max(clusters[c].max_throughput, points[idx].throughput);
  }
  // Components are numbered in ascending value order; maxima are distinct
  // because components are separated by more than eps.
  std::reverse(clusters.begin(), clusters.end());
  for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].cluster_id = static_cast<int>(i);
  result.clusters = std::move(clusters);
  return result;
}

namespace {

// Within-group sum of squares over sorted[j, i) from shifted prefix sums.
struct PrefixCost {
  std::vector<double> s1, s2;

  explicit PrefixCost(std::span<const double> sorted) : s1(sorted.size() + 1), s2(sorted.size() + 1) {
    const double shift = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double v = sorted[i] - shift;
      s1[i + 1] = s1[i] + v;
      s2[i + 1] = s2[i] + v * v;
    }
  }

  double operator()(std::size_t j, std::size_t i) const {
    const double len = static_cast<double>(i - j);
    const double sum = s1[i] - s1[j];
    return std::max(0.0, (s2[i] - s2[j]) - sum * sum / len);
  }
};

// Fills cur[i] for i in [lo, hi] using the monotonicity of the optimal split.
void dc_layer(const PrefixCost& cost, const std::vector<double>& prev, std::vector<double>& cur,
              std::vector<std::size_t>& arg, std::size_t lo, std::size_t hi, std::size_t opt_lo,
              std::size_t opt_hi) {
  if (lo > hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = opt_lo;
  const std::size_t j_end = std::min(opt_hi, mid - 1);
  for (std::size_t j = opt_lo; j <= j_end; ++j) {
    const double v = prev[j] + cost(j, mid);
    if (v < best) {
      best = v;
      best_j = j;
    }
  }
  cur[mid] = best;
  arg[mid] = best_j;
  if (mid > lo) dc_layer(cost, prev, cur, arg, lo, mid - 1, opt_lo, best_j);
  dc_layer(cost, prev, cur, arg, mid + 1, hi, best_j, opt_hi);
}

} // namespace
} // namespace detail

DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps, std::size_t min_samples) {
  return detail::dbscan_1d(points, eps, min_samples, detail::Exec::parallel);
}

KMeans1dResult kmeans_1d_detail(std::span<const double> values, std::size_t k) {
  if (values.empty()) throw DomainError("k-means needs at least one value");
  if (k == 0) throw DomainError("k must be at least 1");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("k-means values must be finite");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::size_t d = 1;
  for (std::size_t i = 1; i < n; ++i) d += sorted[i] != sorted[i - 1];
  const std::size_t groups = std::min(k, d);

  const detail::PrefixCost cost(sorted);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // layer[i] = best SSE of sorted[0, i) split into m groups.
  std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf);
  for (std::size_t i = 1; i <= n; ++i) prev[i] = cost(0, i);
  std::vector<std::vector<std::size_t>> split(groups);

  for (std::size_t m = 2; m <= groups; ++m) {
    std::fill(cur.begin(), cur.end(), kInf);
    split[m - 1].assign(n + 1, 0);
    // Only i = n matters on the final layer.
    const std::size_t lo = m == groups ? n : m;
    detail::dc_layer(cost, prev, cur, split[m - 1], lo, n, m - 1, n - 1);
    std::swap(prev, cur);
  }

  std::vector<std::size_t> bounds(groups + 1);
  bounds[groups] = n;
  for (std::size_t m = groups; m >= 2; --m) bounds[m - 1] = split[m - 1][bounds[m]];
  bounds[0] = 0;

  KMeans1dResult result;
  result.group_sizes.reserve(groups);
  std::vector<double> means;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(bounds[g]);
    const auto last = sorted.begin() + static_cast<std::ptrdiff_t>(bounds[g + 1]);
    const double len = static_cast<double>(last - first);
    const double mean = std::accumulate(first, last, 0.0) / len;
    for (auto it = first; it != last; ++it) result.sse += (*it - mean) * (*it - mean);
    means.push_back(mean);
    result.group_sizes.push_back(bounds[g + 1] - bounds[g]);
  }
  result.means.assign(means.rbegin(), means.rend());
  return result;
}

std::vector<double> kmeans_1d(std::span<const double> values, std::size_t k) {
  return kmeans_1d_detail(values, k).means;
}

std::vector<TPCluster> form_tpclusters(std::span<const DensityCluster> clusters,
                                       std::span<const FlowPoint> noise, double tpr,
                                       double tpdev) {
  if (!(tpr >= 0.0 && tpr < 1.0)) throw DomainError("tpr must be in [0, 1)");
  if (!(tpdev >= 0.0) || !std::isfinite(tpdev)) throw DomainError("tpdev must be non-negative");
  if (clusters.empty()) {
    if (!noise.empty())
      throw NoClustersError("no clusters formed; " + std::to_string(noise.size()) +
                            " flows are noise (adjust eps or min_samples)");
    return {};
  }

  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clusters[a].max_throughput > clusters[b].max_throughput;
  });

  std::vector<TPCluster> result;
  std::vector<bool> combined(clusters.size(), false);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& founder = clusters[order[pos]];
    if (combined[order[pos]]) continue;

    TPCluster tp;
    tp.tpcluster_id = static_cast<int>(result.size());
    tp.seed_max = founder.max_throughput;
    const double floor = (1.0 - tpr) * tp.seed_max;
    for (std::size_t q = pos; q < order.size(); ++q) {
      const auto& c = clusters[order[q]];
      if (combined[order[q]]) continue;
      if (c.max_throughput > floor && c.max_throughput <= tp.seed_max) {
        combined[order[q]] = true;
        tp.density_cluster_ids.push_back(c.cluster_id);
        tp.members.insert(tp.members.end(), c.members.begin(), c.members.end());
      }
    }
    result.push_back(std::move(tp));
  }

  for (const auto& flow : noise) {
    std::size_t chosen = 0; // largest seed_max when nothing qualifies
    bool found = false;
    double best_dist = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i) {
      const double dist = result[i].seed_max - flow.throughput;
      if (dist < -tpdev * result[i].seed_max) continue;
      // Strict "<" keeps the earlier, larger seed on ties.
      if (!found || dist < best_dist) {
        found = true;
        best_dist = dist;
        chosen = i;
      }
    }
    result[chosen].members.push_back(flow);
  }
  return result;
}

namespace detail {

void fof_for_cluster(TPCluster& tp, std::size_t k) {
  if (tp.members.empty()) throw DomainError("TPCluster " + std::to_string(tp.tpcluster_id) + " is empty");
  std::vector<double> tps;
  tps.reserve(tp.members.size());
  for (const auto& m : tp.members) tps.push_back(m.throughput);

  tp.fof.assign(tp.members.size(), 1.0);
  if (std::all_of(tps.begin(), tps.end(), [](double v) { return v == 0.0; })) {
    tp.normal_point = 0.0;
    tp.degenerate_zero = true;
    return;
  }
  tp.degenerate_zero = false;
  tp.normal_point = kmeans_1d(tps, k).front();
  for (std::size_t i = 0; i < tps.size(); ++i)
    tp.fof[i] = flow_outlier_factor(tp.normal_point, tps[i]);
}

void compute_fof(std::span<TPCluster> tpclusters, std::size_t k, Exec exec) {
  if (k == 0) throw DomainError("k must be at least 1");
  for_each_index(tpclusters.size(), exec,
                 [&](std::size_t i) { fof_for_cluster(tpclusters[i], k); });
}

} // namespace detail

void compute_fof(std::span<TPCluster> tpclusters, std::size_t k) {
  detail::compute_fof(tpclusters, k, detail::Exec::parallel);
}

std::vector<std::size_t> neighbour_counts(std::span<const double> sorted, double eps) {
  return detail::neighbour_counts(sorted, eps, detail::Exec::parallel);
}

namespace reference {

std::vector<std::size_t> neighbour_counts(std::span<const double> sorted, double eps) {
  return detail::neighbour_counts(sorted, eps, detail::Exec::serial);
}

DbscanResult dbscan_1d(std::span<const FlowPoint> points, double eps, std::size_t min_samples) {
  return detail::dbscan_1d(points, eps, min_samples, detail::Exec::serial);
}

void compute_fof(std::span<TPCluster> tpclusters, std::size_t k) {
  detail::compute_fof(tpclusters, k, detail::Exec::serial);
}

} // namespace reference
} // namespace nlof
