#include "nlof/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"
#include "nlof/reference.hpp"
#include "parallel.hpp"
#include "text_format.hpp"

namespace nlof {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Per-flow engine so the draws for flow i never depend on the thread layout.
std::mt19937_64 flow_engine(std::uint64_t seed, std::size_t index) {
  const auto i = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

std::string flow_name(std::size_t index, std::size_t count) {
  auto digits = std::to_string(count).size();
  auto num = std::to_string(index + 1);
  return "f" + std::string(digits - num.size(), '0') + num;
}

Scenario generate(const ScenarioSpec& spec, detail::Exec exec) {
  if (auto problems = validate_scenario(spec); !problems.empty())
    throw ValidationError("invalid scenario: " + join(problems));

  const auto& topo = spec.topology;
  const std::size_t hosts = spec.host_nodes.size();

  // Paths between every ordered host pair; nullopt when disconnected.
  std::vector<std::optional<std::vector<LinkId>>> pair_path(hosts * hosts);
  detail::for_each_index(hosts * hosts, exec, [&](std::size_t p) {
    const auto s = p / hosts;
    const auto d = p % hosts;
    if (s == d) return;
    try {
      pair_path[p] = trace_flow(topo, spec.host_nodes[s], spec.host_nodes[d]).path;
    } catch (const NoPathError&) {
    }
  });

  struct Draw {
    std::size_t pair = 0;
    std::size_t cls = 0;
    double jitter = 0.0;
  };
  std::vector<Draw> draws(spec.flow_count);
  detail::for_each_index(spec.flow_count, exec, [&](std::size_t i) {
    auto rng = flow_engine(spec.seed, i);
    std::uniform_int_distribution<std::size_t> pick_src(0, hosts - 1);
    std::uniform_int_distribution<std::size_t> pick_dst(0, hosts - 2);
    bool ok = false;
    for (int attempt = 0; attempt < kEndpointRetries && !ok; ++attempt) {
      const auto s = pick_src(rng);
      auto d = pick_dst(rng);
      if (d >= s) ++d;
      draws[i].pair = s * hosts + d;
      ok = pair_path[draws[i].pair].has_value();
    }
    if (!ok)
      throw ValidationError("flow " + std::to_string(i) + ": no connected host pair after " +
                            std::to_string(kEndpointRetries) + " draws");
    std::discrete_distribution<std::size_t> pick_class(spec.class_weights.begin(),
                                                       spec.class_weights.end());
    draws[i].cls = pick_class(rng);
    if (spec.jitter > 0.0)
      draws[i].jitter = std::uniform_real_distribution<double>(-spec.jitter, spec.jitter)(rng);
  });

  // Every flow is treated as concurrently active.
  std::vector<std::size_t> share(topo.links().size(), 0);
  for (const auto& d : draws)
    for (auto id : *pair_path[d.pair]) ++share[id];

  Scenario scenario;
  scenario.topology = topo;
  scenario.flows.resize(spec.flow_count);
  detail::for_each_index(spec.flow_count, exec, [&](std::size_t i) {
    const auto& d = draws[i];
    const auto& path = *pair_path[d.pair];
    std::vector<PathLink> hops;
    hops.reserve(path.size());
    for (auto id : path)
      hops.push_back({topo.links()[id].capacity_bps, share[id], topo.links()[id].error_rate});
    const double modeled = model_throughput(spec.throughput_classes[d.cls], hops) * (1.0 + d.jitter);

    auto& rec = scenario.flows[i];
    rec.flow_id = flow_name(i, spec.flow_count);
    rec.src = spec.host_nodes[d.pair / hosts];
    rec.dst = spec.host_nodes[d.pair % hosts];
    rec.duration = kSynthesizedDuration;
    rec.bytes = static_cast<std::uint64_t>(std::llround(modeled * kSynthesizedDuration / 8.0));
    rec.throughput = compute_throughput(rec.bytes, rec.duration);
    rec.throughput_derived = true;
  });

  for (const auto& l : topo.links())
    if (l.error_rate > 0.0) scenario.errored_links.push_back(l.key);
  std::sort(scenario.errored_links.begin(), scenario.errored_links.end());
  return scenario;
}

} // namespace

std::vector<std::string> validate_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> v;
  if (spec.flow_count == 0) v.emplace_back("flow_count must be positive");
  if (spec.throughput_classes.empty()) v.emplace_back("throughput_classes must not be empty");
  for (double c : spec.throughput_classes)
    if (!(c > 0.0)) v.emplace_back("throughput classes must be positive");
  if (spec.class_weights.size() != spec.throughput_classes.size()) {
    v.emplace_back("class_weights length must equal throughput_classes length");
  } else if (!spec.class_weights.empty()) {
    double sum = 0.0;
    bool negative = false;
    for (double w : spec.class_weights) {
      negative |= !(w >= 0.0);
      sum += w;
    }
    if (negative) v.emplace_back("class_weights must be non-negative");
    if (std::abs(sum - 1.0) > 1e-9) v.emplace_back("class_weights must sum to 1");
  }
  if (spec.host_nodes.size() < 2) v.emplace_back("at least two host_nodes are required");
  std::unordered_set<std::string> seen;
  for (const auto& h : spec.host_nodes) {
    if (!spec.topology.has_node(h)) v.push_back("host '" + h + "' is not a topology node");
    if (!seen.insert(h).second) v.push_back("host '" + h + "' listed twice");
  }
  if (!(spec.jitter >= 0.0 && spec.jitter <= 0.5)) v.emplace_back("jitter must be in [0, 0.5]");
  return v;
}

ScenarioSpec load_scenario(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  if (!doc.contains("topology")) throw ValidationError("scenario needs a \"topology\" object");

  ScenarioSpec spec;
  spec.topology = load_topology(doc["topology"].dump());
  try {
    spec.flow_count = doc.at("flow_count").get<std::size_t>();
    spec.throughput_classes = doc.at("throughput_classes").get<std::vector<double>>();
    if (doc.contains("class_weights")) {
      spec.class_weights = doc["class_weights"].get<std::vector<double>>();
    } else {
      spec.class_weights.assign(spec.throughput_classes.size(),
                                1.0 / static_cast<double>(spec.throughput_classes.size()));
    }
    if (doc.contains("host_nodes"))
      spec.host_nodes = doc["host_nodes"].get<std::vector<std::string>>();
    else
      spec.host_nodes = spec.topology.nodes();
    spec.jitter = doc.value("jitter", 0.0);
    spec.seed = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid scenario field: ") + e.what());
  }
  if (auto problems = validate_scenario(spec); !problems.empty())
    throw ValidationError("invalid scenario: " + join(problems));
  return spec;
}

ScenarioSpec load_scenario(std::string_view json_text) {
  std::istringstream in{std::string(json_text)};
  return load_scenario(in);
}

double model_throughput(double alpha, std::span<const PathLink> path) {
  if (path.empty()) throw DomainError("throughput model needs a non-empty path");
  double rate = alpha;
  double delivered = 1.0;
  for (const auto& hop : path) {
    if (hop.share_count == 0) throw DomainError("share count must be at least 1");
    rate = std::min(rate, hop.capacity_bps / static_cast<double>(hop.share_count));
    delivered *= 1.0 - hop.error_rate;
  }
  return rate * delivered;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  return generate(spec, detail::Exec::parallel);
}

void write_ground_truth(std::ostream& out, std::span<const LinkKey> errored) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& k : errored) links.push_back({{"a", k.a}, {"b", k.b}});
  out << nlohmann::json{{"errored_links", std::move(links)}}.dump(2) << '\n';
}

std::vector<LinkKey> read_ground_truth(std::istream& in) {
  std::vector<LinkKey> out;
  try {
    auto doc = nlohmann::json::parse(in);
    for (const auto& l : doc.at("errored_links"))
      out.emplace_back(l.at("a").get<std::string>(), l.at("b").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid ground truth JSON: ") + e.what());
  }
  return out;
}

namespace reference {

Scenario generate_scenario(const ScenarioSpec& spec) {
  return generate(spec, detail::Exec::serial);
}

} // namespace reference
} // namespace nlof
