// nlof: link soft-failure localisation from flow records.
//
//   nlof analyze   --flows F --topology T --eps E [...]
//   nlof simulate  --scenario S --out DIR [--seed N]
//   nlof run       --scenario S --eps E [...]
//   nlof score-eval --report R --ground-truth G

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nlof/error.hpp"
#include "nlof/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

struct AnalysisFlags {
  std::optional<std::string> config;
  std::optional<double> eps;
  std::optional<std::size_t> min_samples;
  std::optional<double> tpr;
  std::optional<double> tpdev;
  std::optional<std::size_t> k;
  std::optional<double> fof_threshold;
  std::optional<std::string> flows;
  std::optional<std::string> topology;
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool emit_intermediates = false;
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f, bool scenario_input) {
  cmd->add_option("--config", f.config, "JSON config file; flags override it");
  cmd->add_option("--eps", f.eps, "DBSCAN radius in bits/second (required)");
  cmd->add_option("--min-samples", f.min_samples, "DBSCAN core threshold (default 50)");
  cmd->add_option("--tpr", f.tpr, "TPCluster throughput ratio (default 0.3)");
  cmd->add_option("--tpdev", f.tpdev, "TPCluster noise deviation (default 0.1)");
  cmd->add_option("--k", f.k, "k-means groups for the normal point (default 2)");
  cmd->add_option("--fof-threshold", f.fof_threshold, "outlier FOF threshold (default 0.1)");
  if (scenario_input) {
    cmd->add_option("--scenario", f.scenario, "scenario spec JSON");
    cmd->add_option("--seed", f.seed, "override the scenario seed");
  } else {
    cmd->add_option("--flows", f.flows, "flow records (.csv or .jsonl)");
    cmd->add_option("--topology", f.topology, "topology JSON");
  }
  cmd->add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "report path (default stdout)");
  cmd->add_flag("--emit-intermediates", f.emit_intermediates,
                "also write <out>.intermediates.json");
}

std::string slurp(const std::string& stage, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nlof::StageError(stage, "file not found (" + path + ")");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlof::PipelineConfig build_config(const AnalysisFlags& f) {
  nlof::PipelineConfig c;
  if (f.config) nlof::apply_config_json(c, slurp("config", *f.config));
  if (f.eps) c.eps = f.eps;
  if (f.min_samples) c.min_samples = *f.min_samples;
  if (f.tpr) c.tpr = *f.tpr;
  if (f.tpdev) c.tpdev = *f.tpdev;
  if (f.k) c.k = *f.k;
  if (f.fof_threshold) c.fof_threshold = *f.fof_threshold;
  if (f.flows) c.flows_path = f.flows;
  if (f.topology) c.topology_path = f.topology;
  if (f.scenario) c.scenario_path = f.scenario;
  if (f.seed) c.seed = f.seed;
  if (f.format) c.format = *f.format == "json" ? nlof::ReportFormat::json : nlof::ReportFormat::csv;
  if (f.out) c.out_path = f.out;
  if (f.emit_intermediates) c.emit_intermediates = true;
  return c;
}

// All-or-nothing: every file is staged next to its target, then renamed.
void commit_files(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> staged;
  try {
    for (const auto& [path, content] : files) {
      auto tmp = path;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw nlof::StageError("output", "cannot write " + path.string());
      staged.push_back(tmp);
      out << content;
      if (!out.flush()) throw nlof::StageError("output", "cannot write " + path.string());
    }
  } catch (...) {
    for (const auto& tmp : staged) fs::remove(tmp);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], files[i].first);
}

int run_analysis(const AnalysisFlags& flags) {
  auto config = build_config(flags);
  auto result = nlof::run_pipeline(config);
  if (!config.out_path) {
    std::cout << result.report;
    return 0;
  }
  std::vector<std::pair<fs::path, std::string>> files{{*config.out_path, result.report}};
  if (config.emit_intermediates)
    files.emplace_back(*config.out_path + ".intermediates.json", result.intermediates);
  commit_files(files);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network link soft-failure localisation from flow records"};
  app.require_subcommand(1);

  AnalysisFlags analyze_flags;
  add_analysis_flags(app.add_subcommand("analyze", "score links from flow records and a topology"),
                     analyze_flags, false);

  AnalysisFlags run_flags;
  add_analysis_flags(app.add_subcommand("run", "simulate a scenario, then analyze it"), run_flags,
                     true);

  std::string sim_scenario, sim_out;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "generate flows, topology and ground truth");
  simulate->add_option("--scenario", sim_scenario, "scenario spec JSON")->required();
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate->add_option("--seed", sim_seed, "override the scenario seed");

  std::string eval_report, eval_truth;
  std::optional<std::string> eval_format, eval_out;
  auto* eval = app.add_subcommand("score-eval", "rank of each errored link in a report");
  eval->add_option("--report", eval_report, "report written by analyze/run")->required();
  eval->add_option("--ground-truth", eval_truth, "ground_truth.json from simulate")->required();
  eval->add_option("--format", eval_format, "report format (default: from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  eval->add_option("--out", eval_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("analyze")) return run_analysis(analyze_flags);
    if (app.got_subcommand("run")) return run_analysis(run_flags);

    if (simulate->parsed()) {
      auto text = slurp("scenario", sim_scenario);
      nlof::Scenario scenario;
      try {
        auto spec = nlof::load_scenario(text);
        if (sim_seed) spec.seed = *sim_seed;
        scenario = nlof::generate_scenario(spec);
      } catch (const nlof::StageError&) {
        throw;
      } catch (const std::exception& e) {
        throw nlof::StageError("scenario", e.what());
      }
      std::ostringstream flows, topo, truth;
      nlof::write_flow_records(flows, scenario.flows, nlof::FlowFormat::csv);
      nlof::write_topology(topo, scenario.topology);
      nlof::write_ground_truth(truth, scenario.errored_links);
      fs::create_directories(sim_out);
      const fs::path dir(sim_out);
      commit_files({{dir / "flows.csv", flows.str()},
                    {dir / "topology.json", topo.str()},
                    {dir / "ground_truth.json", truth.str()}});
      return 0;
    }

    if (eval->parsed()) {
      const bool json = eval_format ? *eval_format == "json"
                                    : fs::path(eval_report).extension() == ".json";
      std::istringstream report_in(slurp("report", eval_report));
      std::istringstream truth_in(slurp("ground-truth", eval_truth));
      auto ranked =
          nlof::read_report(report_in, json ? nlof::ReportFormat::json : nlof::ReportFormat::csv);
      auto truth = nlof::read_ground_truth(truth_in);
      std::ostringstream out;
      out << "link_a,link_b,rank,nlof\n";
      for (const auto& g : nlof::score_against_ground_truth(ranked, truth))
        out << g.link.a << ',' << g.link.b << ',' << (g.rank ? std::to_string(*g.rank) : "absent")
            << ',' << shortest(g.nlof) << '\n';
      if (eval_out)
        commit_files({{*eval_out, out.str()}});
      else
        std::cout << out.str();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
