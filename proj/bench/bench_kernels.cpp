// Serial reference vs OpenMP kernels on the bundled scenarios.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "nlof/pipeline.hpp"
#include "nlof/reference.hpp"

namespace {

nlof::ScenarioSpec spec(std::size_t flows) {
  std::ifstream in(std::string(NLOF_SCENARIO_DIR) + "/multi_fault.json");
  auto s = nlof::load_scenario(in);
  s.flow_count = flows;
  return s;
}

std::vector<double> sorted_values(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1e6);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  std::sort(v.begin(), v.end());
  return v;
}

struct Analysed {
  nlof::Scenario scenario;
  nlof::AnalysisResult result;
  std::vector<nlof::FlowEndpoints> ends;
};

const Analysed& analysed(std::size_t flows) {
  static std::map<std::size_t, Analysed> cache;
  auto it = cache.find(flows);
  if (it != cache.end()) return it->second;
  Analysed a;
  a.scenario = nlof::generate_scenario(spec(flows));
  nlof::AnalysisParams p;
  p.eps = 10'000.0;
  a.result = nlof::analyze(a.scenario.topology, a.scenario.flows, p);
  for (const auto& f : a.scenario.flows) a.ends.push_back({f.flow_id, f.src, f.dst});
  return cache.emplace(flows, std::move(a)).first->second;
}

void BM_NeighbourCounts_Serial(benchmark::State& st) {
  auto v = sorted_values(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(nlof::reference::neighbour_counts(v, 1000.0));
}
void BM_NeighbourCounts_Parallel(benchmark::State& st) {
  auto v = sorted_values(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(nlof::neighbour_counts(v, 1000.0));
}

void BM_TraceFlows_Serial(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(nlof::reference::trace_flows(a.scenario.topology, a.ends));
}
void BM_TraceFlows_Parallel(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(nlof::trace_flows(a.scenario.topology, a.ends));
}

void BM_ComputeFof_Serial(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st) {
    auto tps = a.result.tpclusters;
    nlof::reference::compute_fof(tps, 2);
    benchmark::DoNotOptimize(tps);
  }
}
void BM_ComputeFof_Parallel(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st) {
    auto tps = a.result.tpclusters;
    nlof::compute_fof(tps, 2);
    benchmark::DoNotOptimize(tps);
  }
}

void BM_ComputeNlof_Serial(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(nlof::reference::compute_nlof(a.result.link_flows, a.result.fof, 0.1));
}
void BM_ComputeNlof_Parallel(benchmark::State& st) {
  const auto& a = analysed(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(nlof::compute_nlof(a.result.link_flows, a.result.fof, 0.1));
}

void BM_GenerateScenario_Serial(benchmark::State& st) {
  auto s = spec(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(nlof::reference::generate_scenario(s));
}
void BM_GenerateScenario_Parallel(benchmark::State& st) {
  auto s = spec(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(nlof::generate_scenario(s));
}

} // namespace

BENCHMARK(BM_NeighbourCounts_Serial)->Arg(100'000)->Arg(1'000'000);
BENCHMARK(BM_NeighbourCounts_Parallel)->Arg(100'000)->Arg(1'000'000);
BENCHMARK(BM_TraceFlows_Serial)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_TraceFlows_Parallel)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_ComputeFof_Serial)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_ComputeFof_Parallel)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_ComputeNlof_Serial)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_ComputeNlof_Parallel)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_GenerateScenario_Serial)->Arg(5'000)->Arg(50'000);
BENCHMARK(BM_GenerateScenario_Parallel)->Arg(5'000)->Arg(50'000);

BENCHMARK_MAIN();
