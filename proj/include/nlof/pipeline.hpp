#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlof/clustering.hpp"
#include "nlof/flow_model.hpp"
#include "nlof/netsim.hpp"
#include "nlof/scoring.hpp"
#include "nlof/topology.hpp"

namespace nlof {

/// Analysis parameters. Defaults other than eps follow the reference
/// experiments; eps carries units (bits/second) and has no default.
struct AnalysisParams {
  double eps = 0.0;
  std::size_t min_samples = 50;
  double tpr = 0.3;
  double tpdev = 0.1;
  std::size_t k = 2;
  double fof_threshold = 0.1;
};

struct PipelineConfig {
  std::optional<double> eps;
  std::size_t min_samples = 50;
  double tpr = 0.3;
  double tpdev = 0.1;
  std::size_t k = 2;
  double fof_threshold = 0.1;

  std::optional<std::string> flows_path;
  std::optional<std::string> topology_path;
  std::optional<std::string> scenario_path;
  /// Overrides the scenario's own seed.
  std::optional<std::uint64_t> seed;

  ReportFormat format = ReportFormat::csv;
  std::optional<std::string> out_path;
  bool emit_intermediates = false;

  AnalysisParams params() const;
};

/// Every range or consistency violation, not just the first.
std::vector<std::string> validate_config(const PipelineConfig& config);

/// Applies keys present in a JSON config object onto `config`.
void apply_config_json(PipelineConfig& config, std::string_view json_text);

/// Everything the four stages produce.
struct AnalysisResult {
  DbscanResult density;
  std::vector<TPCluster> tpclusters;
  FofMap fof;
  std::vector<TracedFlow> traced;
  std::vector<LinkFlows> link_flows;
  std::vector<LinkScore> ranked;
};

/// dbscan_1d -> form_tpclusters -> compute_fof -> trace/associate ->
/// compute_nlof -> rank_links. Errors are rethrown as StageError.
AnalysisResult analyze(const Topology& topology,
                       std::span<const FlowRecord> flows,
                       const AnalysisParams& params);

/// Per-flow plot data: flow_id, throughput, density cluster (or "noise"),
/// tpcluster, fof. Flows appear in input order.
void write_intermediates(std::ostream& out, std::span<const FlowRecord> flows,
                         const AnalysisResult& result);

struct PipelineOutput {
  std::string report;
  std::string intermediates; // empty unless requested
  AnalysisResult analysis;
};

/// Loads inputs (or generates the scenario), analyses them and renders the
/// report. Writes nothing; callers persist the strings.
PipelineOutput run_pipeline(const PipelineConfig& config);

/// Flow file format from the extension: `.jsonl`/`.ndjson` are JSON-lines,
/// anything else CSV.
FlowFormat flow_format_for_path(std::string_view path);

/// Rank (1-based) of each ground-truth link in a ranked report; nullopt when
/// the link is absent.
struct GroundTruthRank {
  LinkKey link;
  std::optional<std::size_t> rank;
  double nlof = 0.0;
};

std::vector<GroundTruthRank> score_against_ground_truth(
    std::span<const LinkScore> ranked, std::span<const LinkKey> errored);

} // namespace nlof
