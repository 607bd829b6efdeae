#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nlof {

/// Unordered node pair stored with a <= b.
struct LinkKey {
  std::string a;
  std::string b;

  LinkKey() = default;
  LinkKey(std::string x, std::string y);

  std::string name() const { return a + "-" + b; }

  friend bool operator==(const LinkKey&, const LinkKey&) = default;
  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

struct Link {
  LinkKey key;
  double capacity_bps = 0.0;
  double error_rate = 0.0;
};

using LinkId = std::size_t;

/// Undirected, immutable once constructed.
class Topology {
public:
  Topology() = default;

  /// Validates: unique node names, known endpoints, no self-loops, no duplicate
  /// unordered pairs, capacity > 0, error_rate in [0, 1].
  Topology(std::vector<std::string> nodes, std::vector<Link> links);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }

  bool has_node(std::string_view name) const;
  std::size_t node_index(std::string_view name) const;
  /// Throws ValidationError for an unknown pair.
  LinkId link_id(std::string_view x, std::string_view y) const;
  LinkId link_id_between(std::size_t u, std::size_t v) const;

  /// Neighbour node indices, ordered by name.
  std::span<const std::size_t> neighbours(std::size_t node) const {
    return adjacency_[node];
  }

  /// Per-node hop distance to `target`; SIZE_MAX where unreachable.
  std::vector<std::size_t> hop_distances_to(std::size_t target) const;

private:
  std::vector<std::string> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::unordered_map<std::size_t, LinkId> pair_index_; // u * n + v, u < v
};

Topology load_topology(std::istream& in);
Topology load_topology(std::string_view json_text);
void write_topology(std::ostream& out, const Topology& topology);

struct TracedFlow {
  std::string flow_id;
  std::vector<LinkId> path; // src to dst
};

/// Minimum-hop path; among equal-length paths the lexicographically smallest
/// node-name sequence wins. src == dst gives an empty path. Throws NoPathError
/// when dst is unreachable and ValidationError for unknown nodes.
TracedFlow trace_flow(const Topology& topology, std::string_view src,
                      std::string_view dst, std::string flow_id = {});

struct FlowEndpoints {
  std::string flow_id;
  std::string src;
  std::string dst;
};

/// trace_flow for every flow, in parallel; output order matches input.
std::vector<TracedFlow> trace_flows(const Topology& topology,
                                    std::span<const FlowEndpoints> flows);

struct LinkFlows {
  LinkKey link;
  std::vector<std::string> flow_ids;
};

/// One entry per topology link (in topology order), listing the flows whose
/// path uses it, in traced order.
std::vector<LinkFlows> associate_flows(const Topology& topology,
                                       std::span<const TracedFlow> traced);

} // namespace nlof
