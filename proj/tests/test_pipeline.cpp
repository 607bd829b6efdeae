#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"
#include "nlof/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace nlof;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

PipelineConfig scenario_config(const std::string& name) {
  PipelineConfig c;
  c.eps = 10'000.0;
  c.scenario_path = testing::scenario_path(name);
  return c;
}

} // namespace

TEST_CASE("validate_config reports every violation") {
  PipelineConfig c;
  c.tpr = 1.0;
  c.k = 0;
  auto v = validate_config(c);
  CHECK(has(v, "eps is required (bits/second)"));
  CHECK(has(v, "tpr must be < 1"));
  CHECK(has(v, "k must be >= 1"));
  CHECK(has(v, "exactly one input source: --flows/--topology or --scenario"));

  c = scenario_config("fault_free");
  CHECK(validate_config(c).empty());
  c.flows_path = "x.csv";
  CHECK(has(validate_config(c), "exactly one input source: --flows/--topology or --scenario"));

  c = PipelineConfig{};
  c.eps = -1.0;
  c.flows_path = "x.csv";
  c.seed = 3;
  c.emit_intermediates = true;
  v = validate_config(c);
  CHECK(has(v, "eps must be > 0"));
  CHECK(has(v, "--flows and --topology must be given together"));
  CHECK(has(v, "seed applies only to a scenario"));
  CHECK(has(v, "--emit-intermediates requires --out"));
}

TEST_CASE("apply_config_json") {
  PipelineConfig c;
  apply_config_json(c, R"({"eps": 5000, "tpr": 0.2, "format": "json", "scenario": "s.json"})");
  CHECK(c.eps == 5000.0);
  CHECK(c.tpr == 0.2);
  CHECK(c.format == ReportFormat::json);
  CHECK(c.scenario_path == "s.json");
  CHECK(c.min_samples == 50);
  CHECK_THROWS_WITH_AS(apply_config_json(c, R"({"epsilon": 1})"), "unknown config key 'epsilon'",
                       ValidationError);
  CHECK_THROWS_AS(apply_config_json(c, R"({"k": "two"})"), ValidationError);
  CHECK_THROWS_AS(apply_config_json(c, "[1]"), ValidationError);
}

TEST_CASE("analyze equals the stages composed by hand") {
  auto sc = generate_scenario(testing::scenario_spec("single_fault"));
  const auto params = testing::desk_params();
  auto res = analyze(sc.topology, sc.flows, params);

  std::vector<FlowPoint> points;
  std::vector<FlowEndpoints> ends;
  for (const auto& f : sc.flows) {
    points.push_back({f.flow_id, f.throughput});
    ends.push_back({f.flow_id, f.src, f.dst});
  }
  auto density = dbscan_1d(points, params.eps, params.min_samples);
  auto tps = form_tpclusters(density.clusters, density.noise, params.tpr, params.tpdev);
  compute_fof(tps, params.k);
  FofMap fof;
  for (const auto& tp : tps)
    for (std::size_t i = 0; i < tp.members.size(); ++i) fof[tp.members[i].flow_id] = tp.fof[i];
  auto ranked = rank_links(
      compute_nlof(associate_flows(sc.topology, trace_flows(sc.topology, ends)), fof,
                   params.fof_threshold));

  CHECK(res.ranked == ranked);
  CHECK(res.fof == fof);
  CHECK(res.tpclusters.size() == tps.size());
  CHECK(res.ranked.front().link == LinkKey("S1", "h1"));
}

TEST_CASE("stage errors name the stage") {
  Topology t({"A", "B", "C"}, {{LinkKey("A", "B"), 1e9, 0.0}});
  std::vector<FlowRecord> flows;
  for (int i = 0; i < 60; ++i)
    flows.push_back({"f" + std::to_string(i), "A", i == 0 ? "C" : "B", 1000, 1.0, 8000.0});
  try {
    analyze(t, flows, testing::desk_params());
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "tracing");
    CHECK(std::string(e.what()) == "tracing: no path from 'A' to 'C' for flow 'f0'");
  }

  std::vector<FlowRecord> sparse{{"a", "A", "B", 1, 1.0, 8.0}, {"b", "A", "B", 100, 1.0, 800.0}};
  try {
    analyze(t, sparse, testing::desk_params());
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "tpcluster");
  }
}

TEST_CASE("run_pipeline: missing files and config errors") {
  PipelineConfig c;
  c.eps = 1.0;
  c.flows_path = "/nonexistent/flows.csv";
  c.topology_path = "/nonexistent/topo.json";
  CHECK_THROWS_WITH_AS(run_pipeline(c), doctest::Contains("topology: file not found"), StageError);

  PipelineConfig bad;
  CHECK_THROWS_WITH_AS(run_pipeline(bad), doctest::Contains("config: eps is required"), StageError);
}

TEST_CASE("run_pipeline: scenario mode, seed override and intermediates") {
  auto c = scenario_config("single_fault");
  c.out_path = "unused";
  c.emit_intermediates = true;
  auto out = run_pipeline(c);
  CHECK(out.report.rfind("link_a,link_b,nlof,outlier_flows,total_flows,no_data\nS1,h1,", 0) == 0);

  auto rows = nlohmann::json::parse(out.intermediates);
  REQUIRE(rows.size() == 5000);
  CHECK(rows[0]["flow_id"] == "f0001");
  for (const auto& key : {"flow_id", "throughput", "density_cluster_id", "tpcluster_id", "fof"})
    CHECK(rows[0].contains(key));

  CHECK(run_pipeline(c).report == out.report);
  c.seed = 2;
  CHECK(run_pipeline(c).report != out.report);
}

TEST_CASE("run_pipeline: file inputs match scenario mode") {
  auto sc = generate_scenario(testing::scenario_spec("multi_fault"));
  const auto dir = std::filesystem::temp_directory_path() / "nlof_pipeline_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "flows.jsonl");
    write_flow_records(f, sc.flows, FlowFormat::json_lines);
    std::ofstream t(dir / "topology.json");
    write_topology(t, sc.topology);
  }
  PipelineConfig files;
  files.eps = 10'000.0;
  files.flows_path = (dir / "flows.jsonl").string();
  files.topology_path = (dir / "topology.json").string();
  files.format = ReportFormat::json;

  auto scen = scenario_config("multi_fault");
  scen.format = ReportFormat::json;
  CHECK(run_pipeline(files).report == run_pipeline(scen).report);
  std::filesystem::remove_all(dir);
}

TEST_CASE("flow_format_for_path") {
  CHECK(flow_format_for_path("a.jsonl") == FlowFormat::json_lines);
  CHECK(flow_format_for_path("a.ndjson") == FlowFormat::json_lines);
  CHECK(flow_format_for_path("a.csv") == FlowFormat::csv);
  CHECK(flow_format_for_path("jsonl") == FlowFormat::csv);
}

TEST_CASE("score_against_ground_truth") {
  std::vector<LinkScore> ranked(3);
  ranked[0].link = LinkKey("A", "B");
  ranked[0].nlof = 0.5;
  ranked[1].link = LinkKey("B", "C");
  ranked[2].link = LinkKey("C", "D");
  std::vector<LinkKey> truth{LinkKey("C", "B"), LinkKey("X", "Y")};
  auto g = score_against_ground_truth(ranked, truth);
  REQUIRE(g.size() == 2);
  CHECK(g[0].rank == 2);
  CHECK_FALSE(g[1].rank.has_value());
}
