#include "nlof/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"

namespace nlof {
namespace {

std::string read_file(const std::string& stage, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError(stage, "file not found (" + path + ")");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw ValidationError("format must be csv or json, got '" + s + "'");
}

} // namespace

AnalysisParams PipelineConfig::params() const {
  AnalysisParams p;
  p.eps = eps.value_or(0.0);
  p.min_samples = min_samples;
  p.tpr = tpr;
  p.tpdev = tpdev;
  p.k = k;
  p.fof_threshold = fof_threshold;
  return p;
}

std::vector<std::string> validate_config(const PipelineConfig& c) {
  std::vector<std::string> v;
  if (!c.eps)
    v.emplace_back("eps is required (bits/second)");
  else if (!(*c.eps > 0.0) || !std::isfinite(*c.eps))
    v.emplace_back("eps must be > 0");
  if (c.min_samples < 1) v.emplace_back("min_samples must be >= 1");
  if (!(c.tpr >= 0.0)) v.emplace_back("tpr must be >= 0");
  if (!(c.tpr < 1.0)) v.emplace_back("tpr must be < 1");
  if (!(c.tpdev >= 0.0) || !std::isfinite(c.tpdev)) v.emplace_back("tpdev must be >= 0");
  if (c.k < 1) v.emplace_back("k must be >= 1");
  if (!std::isfinite(c.fof_threshold)) v.emplace_back("fof_threshold must be finite");

  const bool has_inputs = c.flows_path || c.topology_path;
  const bool has_scenario = c.scenario_path.has_value();
  if (has_inputs == has_scenario)
    v.emplace_back("exactly one input source: --flows/--topology or --scenario");
  else if (has_inputs && !(c.flows_path && c.topology_path))
    v.emplace_back("--flows and --topology must be given together");
  if (c.seed && !has_scenario) v.emplace_back("seed applies only to a scenario");
  if (c.emit_intermediates && !c.out_path)
    v.emplace_back("--emit-intermediates requires --out");
  return v;
}

void apply_config_json(PipelineConfig& c, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "eps",      "min_samples", "tpr",      "tpdev",  "k",   "fof_threshold",     "flows",
      "topology", "scenario",    "seed",     "format", "out", "emit_intermediates"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("unknown config key '" + key + "'");
  try {
    if (doc.contains("eps")) c.eps = doc["eps"].get<double>();
    if (doc.contains("min_samples")) c.min_samples = doc["min_samples"].get<std::size_t>();
    if (doc.contains("tpr")) c.tpr = doc["tpr"].get<double>();
    if (doc.contains("tpdev")) c.tpdev = doc["tpdev"].get<double>();
    if (doc.contains("k")) c.k = doc["k"].get<std::size_t>();
    if (doc.contains("fof_threshold")) c.fof_threshold = doc["fof_threshold"].get<double>();
    if (doc.contains("flows")) c.flows_path = doc["flows"].get<std::string>();
    if (doc.contains("topology")) c.topology_path = doc["topology"].get<std::string>();
    if (doc.contains("scenario")) c.scenario_path = doc["scenario"].get<std::string>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("format")) c.format = parse_format(doc["format"].get<std::string>());
    if (doc.contains("out")) c.out_path = doc["out"].get<std::string>();
    if (doc.contains("emit_intermediates"))
      c.emit_intermediates = doc["emit_intermediates"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid config value: ") + e.what());
  }
}

AnalysisResult analyze(const Topology& topology, std::span<const FlowRecord> flows,
                       const AnalysisParams& params) {
  AnalysisResult r;

  std::vector<FlowPoint> points;
  points.reserve(flows.size());
  for (const auto& f : flows) points.push_back({f.flow_id, f.throughput});

  r.density = stage("clustering",
                    [&] { return dbscan_1d(points, params.eps, params.min_samples); });
  r.tpclusters = stage("tpcluster", [&] {
    return form_tpclusters(r.density.clusters, r.density.noise, params.tpr, params.tpdev);
  });
  stage("fof", [&] {
    compute_fof(r.tpclusters, params.k);
    for (const auto& tp : r.tpclusters)
      for (std::size_t i = 0; i < tp.members.size(); ++i)
        r.fof.emplace(tp.members[i].flow_id, tp.fof[i]);
  });

  stage("tracing", [&] {
    std::vector<FlowEndpoints> ends;
    ends.reserve(flows.size());
    for (const auto& f : flows) ends.push_back({f.flow_id, f.src, f.dst});
    r.traced = trace_flows(topology, ends);
    r.link_flows = associate_flows(topology, r.traced);
  });

  r.ranked = stage("scoring", [&] {
    return rank_links(compute_nlof(r.link_flows, r.fof, params.fof_threshold));
  });
  return r;
}

void write_intermediates(std::ostream& out, std::span<const FlowRecord> flows,
                         const AnalysisResult& result) {
  std::unordered_map<std::string, int> density_of;
  for (const auto& c : result.density.clusters)
    for (const auto& m : c.members) density_of[m.flow_id] = c.cluster_id;
  std::unordered_map<std::string, int> tp_of;
  for (const auto& tp : result.tpclusters)
    for (const auto& m : tp.members) tp_of[m.flow_id] = tp.tpcluster_id;

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& f : flows) {
    nlohmann::json row = {{"flow_id", f.flow_id}, {"throughput", f.throughput}};
    if (auto it = density_of.find(f.flow_id); it != density_of.end())
      row["density_cluster_id"] = it->second;
    else
      row["density_cluster_id"] = "noise";
    row["tpcluster_id"] = tp_of.at(f.flow_id);
    row["fof"] = result.fof.at(f.flow_id);
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

PipelineOutput run_pipeline(const PipelineConfig& config) {
  if (auto problems = validate_config(config); !problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw StageError("config", msg);
  }

  Topology topology;
  std::vector<FlowRecord> flows;
  if (config.scenario_path) {
    auto text = read_file("scenario", *config.scenario_path);
    auto scenario = stage("scenario", [&] {
      auto spec = load_scenario(text);
      if (config.seed) spec.seed = *config.seed;
      return generate_scenario(spec);
    });
    topology = std::move(scenario.topology);
    flows = std::move(scenario.flows);
  } else {
    auto topo_text = read_file("topology", *config.topology_path);
    topology = stage("topology", [&] { return load_topology(topo_text); });
    auto flow_text = read_file("flows", *config.flows_path);
    flows = stage("flows", [&] {
      return parse_flow_records(flow_text, flow_format_for_path(*config.flows_path));
    });
  }

  PipelineOutput out;
  out.analysis = analyze(topology, flows, config.params());
  std::ostringstream report;
  write_report(report, out.analysis.ranked, config.format);
  out.report = report.str();
  if (config.emit_intermediates) {
    std::ostringstream inter;
    write_intermediates(inter, flows, out.analysis);
    out.intermediates = inter.str();
  }
  return out;
}

FlowFormat flow_format_for_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends_with(".jsonl") || ends_with(".ndjson") ? FlowFormat::json_lines : FlowFormat::csv;
}

std::vector<GroundTruthRank> score_against_ground_truth(std::span<const LinkScore> ranked,
                                                        std::span<const LinkKey> errored) {
  std::vector<GroundTruthRank> out;
  for (const auto& link : errored) {
    GroundTruthRank g{link, std::nullopt, 0.0};
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (ranked[i].link == link) {
        g.rank = i + 1;
        g.nlof = ranked[i].nlof;
        break;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

} // namespace nlof
