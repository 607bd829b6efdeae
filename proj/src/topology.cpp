#include "nlof/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"
#include "nlof/reference.hpp"
#include "parallel.hpp"

namespace nlof {

LinkKey::LinkKey(std::string x, std::string y) {
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

Topology::Topology(std::vector<std::string> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) throw ValidationError("empty node name");
    if (!node_index_.emplace(nodes_[i], i).second)
      throw ValidationError("duplicate node '" + nodes_[i] + "'");
  }
  adjacency_.resize(nodes_.size());
  const std::size_t n = nodes_.size();
  for (LinkId id = 0; id < links_.size(); ++id) {
    auto& link = links_[id];
    link.key = LinkKey(link.key.a, link.key.b);
    const auto& k = link.key;
    if (k.a == k.b) throw ValidationError("self-loop " + k.a + "–" + k.b);
    for (const auto* end : {&k.a, &k.b})
      if (!node_index_.contains(*end))
        throw ValidationError("link " + k.a + "–" + k.b + " has unknown endpoint '" + *end + "'");
    if (!(link.capacity_bps > 0.0) || !std::isfinite(link.capacity_bps))
      throw ValidationError("link " + k.a + "–" + k.b + " has non-positive capacity");
    if (!(link.error_rate >= 0.0 && link.error_rate <= 1.0))
      throw ValidationError("link " + k.a + "–" + k.b + " has error_rate outside [0, 1]");

    const auto u = node_index_.at(k.a);
    const auto v = node_index_.at(k.b);
    const auto key = std::min(u, v) * n + std::max(u, v);
    if (!pair_index_.emplace(key, id).second)
      throw ValidationError("duplicate link " + k.a + "–" + k.b);
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_)
    std::sort(adj.begin(), adj.end(),
              [&](std::size_t x, std::size_t y) { return nodes_[x] < nodes_[y]; });
}

bool Topology::has_node(std::string_view name) const {
  return node_index_.contains(std::string(name));
}

std::size_t Topology::node_index(std::string_view name) const {
  auto it = node_index_.find(std::string(name));
  if (it == node_index_.end()) throw ValidationError("unknown node '" + std::string(name) + "'");
  return it->second;
}

LinkId Topology::link_id_between(std::size_t u, std::size_t v) const {
  const auto key = std::min(u, v) * nodes_.size() + std::max(u, v);
  auto it = pair_index_.find(key);
  if (it == pair_index_.end())
    throw ValidationError("no link between '" + nodes_[u] + "' and '" + nodes_[v] + "'");
  return it->second;
}

LinkId Topology::link_id(std::string_view x, std::string_view y) const {
  return link_id_between(node_index(x), node_index(y));
}

std::vector<std::size_t> Topology::hop_distances_to(std::size_t target) const {
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(nodes_.size(), kUnreached);
  std::deque<std::size_t> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : adjacency_[u]) {
      if (dist[v] != kUnreached) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

Topology load_topology(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid topology JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("topology must be a JSON object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw ValidationError("topology needs a \"nodes\" array");
  if (!doc.contains("links") || !doc["links"].is_array())
    throw ValidationError("topology needs a \"links\" array");

  std::vector<std::string> nodes;
  for (const auto& n : doc["nodes"]) {
    if (!n.is_string()) throw ValidationError("node names must be strings");
    nodes.push_back(n.get<std::string>());
  }

  std::vector<Link> links;
  for (std::size_t i = 0; i < doc["links"].size(); ++i) {
    const auto& l = doc["links"][i];
    const auto where = "links[" + std::to_string(i) + "]";
    if (!l.is_object()) throw ValidationError(where + " must be an object");
    if (!l.contains("a") || !l["a"].is_string() || !l.contains("b") || !l["b"].is_string())
      throw ValidationError(where + " needs string endpoints \"a\" and \"b\"");
    if (!l.contains("capacity_bps") || !l["capacity_bps"].is_number())
      throw ValidationError(where + " needs a numeric \"capacity_bps\"");
    Link link;
    link.key.a = l["a"].get<std::string>();
    link.key.b = l["b"].get<std::string>();
    link.capacity_bps = l["capacity_bps"].get<double>();
    if (auto er = l.find("error_rate"); er != l.end() && !er->is_null()) {
      if (!er->is_number()) throw ValidationError(where + " has a non-numeric error_rate");
      link.error_rate = er->get<double>();
    }
    links.push_back(std::move(link));
  }
  return Topology(std::move(nodes), std::move(links));
}

Topology load_topology(std::string_view json_text) {
  std::istringstream in{std::string(json_text)};
  return load_topology(in);
}

void write_topology(std::ostream& out, const Topology& topology) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : topology.links())
    links.push_back({{"a", l.key.a},
                     {"b", l.key.b},
                     {"capacity_bps", l.capacity_bps},
                     {"error_rate", l.error_rate}});
  nlohmann::json doc = {{"nodes", topology.nodes()}, {"links", std::move(links)}};
  out << doc.dump(2) << '\n';
}

TracedFlow trace_flow(const Topology& topology, std::string_view src, std::string_view dst,
                      std::string flow_id) {
  const auto s = topology.node_index(src);
  const auto t = topology.node_index(dst);
  TracedFlow traced{std::move(flow_id), {}};
  if (s == t) return traced;

  const auto dist = topology.hop_distances_to(t);
  if (dist[s] == std::numeric_limits<std::size_t>::max())
    throw NoPathError("no path from '" + std::string(src) + "' to '" + std::string(dst) + "'" +
                      (traced.flow_id.empty() ? "" : " for flow '" + traced.flow_id + "'"));

  // Walking greedily toward the target through the smallest-named neighbour
  // that is one hop closer yields the lexicographically smallest shortest path.
  traced.path.reserve(dist[s]);
  auto u = s;
  while (u != t) {
    for (auto v : topology.neighbours(u)) {
      if (dist[v] + 1 == dist[u]) {
        traced.path.push_back(topology.link_id_between(u, v));
        u = v;
        break;
      }
    }
  }
  return traced;
}

namespace {

std::vector<TracedFlow> trace_all(const Topology& topology, std::span<const FlowEndpoints> flows,
                                  detail::Exec exec) {
  std::vector<TracedFlow> out(flows.size());
  detail::for_each_index(flows.size(), exec, [&](std::size_t i) {
    out[i] = trace_flow(topology, flows[i].src, flows[i].dst, flows[i].flow_id);
  });
  return out;
}

} // namespace

std::vector<TracedFlow> trace_flows(const Topology& topology,
                                    std::span<const FlowEndpoints> flows) {
  return trace_all(topology, flows, detail::Exec::parallel);
}

std::vector<LinkFlows> associate_flows(const Topology& topology,
                                       std::span<const TracedFlow> traced) {
  std::vector<LinkFlows> result(topology.links().size());
  for (LinkId id = 0; id < result.size(); ++id) result[id].link = topology.links()[id].key;
  for (const auto& flow : traced) {
    for (auto id : flow.path) {
      if (id >= result.size())
        throw IntegrityError("flow '" + flow.flow_id + "' references an unknown link");
      auto& ids = result[id].flow_ids;
      // A shortest path never repeats a link.
      ids.push_back(flow.flow_id);
    }
  }
  return result;
}

namespace reference {

std::vector<TracedFlow> trace_flows(const Topology& topology,
                                    std::span<const FlowEndpoints> flows) {
  return trace_all(topology, flows, detail::Exec::serial);
}

} // namespace reference
} // namespace nlof
