// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "nlof/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nlof;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

AnalysisResult run_scenario(const std::string& name, std::uint64_t seed) {
  auto spec = testing::scenario_spec(name);
  spec.seed = seed;
  auto sc = generate_scenario(spec);
  return analyze(sc.topology, sc.flows, testing::desk_params());
}

std::set<std::string> flow_set(const AnalysisResult& r, const LinkKey& k) {
  for (const auto& lf : r.link_flows)
    if (lf.link == k) return {lf.flow_ids.begin(), lf.flow_ids.end()};
  return {};
}

Outcome a1() {
  const auto t0 = Clock::now();
  auto r = run_scenario("fault_free", 1);
  const double t = seconds_since(t0);
  double worst = 0.0;
  for (const auto& s : r.ranked) worst = std::max(worst, s.nlof);
  return {worst == 0.0 && t < 10.0,
          "max nlof " + fmt(worst) + " over " + std::to_string(r.ranked.size()) + " links, " +
              fmt(t) + " s"};
}

Outcome a2() {
  const LinkKey bad("S1", "h1");
  const auto t0 = Clock::now();
  int ok = 0;
  double worst_ratio = INFINITY;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = run_scenario("single_fault", seed);
    const auto bad_set = flow_set(r, bad);
    double next = 0.0;
    for (const auto& s : r.ranked)
      if (!(s.link == bad) && flow_set(r, s.link) != bad_set) next = std::max(next, s.nlof);
    const double top = r.ranked.front().link == bad ? r.ranked.front().nlof : 0.0;
    const double ratio = next > 0.0 ? top / next : (top > 0.0 ? INFINITY : 0.0);
    worst_ratio = std::min(worst_ratio, ratio);
    ok += r.ranked.front().link == bad && top >= 2.0 * next && top > 0.0;
  }
  const double t = seconds_since(t0);
  return {ok == 10 && t < 20.0, std::to_string(ok) + "/10 seeds, min ratio " + fmt(worst_ratio) +
                                    ", " + fmt(t) + " s"};
}

Outcome a3() {
  const std::vector<LinkKey> bad{LinkKey("S1", "h1"), LinkKey("S2", "h4"), LinkKey("R", "h7")};
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = run_scenario("multi_fault", seed);
    auto g = score_against_ground_truth(r.ranked, bad);
    ok += std::all_of(g.begin(), g.end(), [](const auto& x) { return x.rank && *x.rank <= 4; });
  }
  return {ok >= 9, std::to_string(ok) + "/10 seeds with all three in the top 4"};
}

Outcome a4() {
  auto r = run_scenario("serial_links", 1);
  const LinkKey x("R", "M"), y("M", "S2");
  const bool same_flows = flow_set(r, x) == flow_set(r, y) && !flow_set(r, x).empty();
  double nx = -1, ny = -2;
  for (const auto& s : r.ranked) {
    if (s.link == x) nx = s.nlof;
    if (s.link == y) ny = s.nlof;
  }
  const bool identical = std::memcmp(&nx, &ny, sizeof nx) == 0;
  return {same_flows && identical && nx > 0.0,
          "R-M " + fmt(nx, 17) + ", M-S2 " + fmt(ny, 17) +
              (same_flows ? ", identical flow sets" : ", flow sets differ")};
}

Outcome a5() {
  auto two = run_scenario("fault_free", 1).tpclusters.size();
  auto four = run_scenario("four_class", 1).tpclusters.size();
  return {two == 2 && four == 4,
          "2-class -> " + std::to_string(two) + ", 4-class -> " + std::to_string(four)};
}

Outcome a6() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(0, 200)(rng);
    const int spread = std::uniform_int_distribution<int>(10, 2000)(rng);
    std::vector<FlowPoint> pts;
    std::vector<std::pair<std::string, double>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::uniform_int_distribution<int>(0, spread)(rng);
      pts.push_back({"p" + std::to_string(i), v});
      pairs.emplace_back(pts.back().flow_id, v);
    }
    const double eps = std::uniform_int_distribution<int>(1, 40)(rng);
    const auto min_samples = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    auto got = dbscan_1d(pts, eps, min_samples);
    oracle::DbscanPartition p;
    for (const auto& c : got.clusters) {
      std::set<std::string> ids;
      for (const auto& m : c.members) ids.insert(m.flow_id);
      p.clusters.insert(ids);
    }
    for (const auto& m : got.noise) p.noise.insert(m.flow_id);
    auto want = oracle::dbscan(pairs, eps, min_samples);
    ok += p.clusters == want.clusters && p.noise == want.noise;
  }
  const double t = seconds_since(t0);
  return {ok == 100 && t < 5.0, std::to_string(ok) + "/100 partitions match, " + fmt(t) + " s"};
}

Outcome a7() {
  std::mt19937_64 rng(7);
  int ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const auto k = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const int range = std::uniform_int_distribution<int>(3, 10000)(rng);
    std::vector<std::int64_t> ints(n);
    for (auto& v : ints) v = std::uniform_int_distribution<int>(-range, range)(rng);
    std::sort(ints.begin(), ints.end());
    std::vector<double> values(ints.begin(), ints.end());
    auto res = kmeans_1d_detail(values, k);
    const auto got = oracle::scaled_sse(ints, res.group_sizes);
    const auto want = oracle::min_contiguous_scaled_sse(ints, std::min(k, n));
    ok += got == want;
  }
  return {ok == 200, std::to_string(ok) + "/200 exact SSE matches"};
}

DensityCluster cluster_with_max(int id, double max) {
  DensityCluster c;
  c.cluster_id = id;
  c.max_throughput = max;
  c.members = {{"c" + std::to_string(id), max}};
  return c;
}

Outcome a8() {
  int ok = 0;
  {
    std::vector<DensityCluster> cs{cluster_with_max(0, 1'000'000), cluster_with_max(1, 750'000),
                                   cluster_with_max(2, 500'000), cluster_with_max(3, 120'000),
                                   cluster_with_max(4, 95'000)};
    auto tps = form_tpclusters(cs, {}, 0.3, 0.1);
    ok += tps.size() == 3 && tps[0].seed_max == 1'000'000 && tps[1].seed_max == 500'000 &&
          tps[2].seed_max == 120'000 && tps[0].density_cluster_ids == std::vector<int>{0, 1} &&
          tps[2].density_cluster_ids == std::vector<int>{3, 4};
  }
  std::vector<DensityCluster> two{cluster_with_max(0, 1'000'000), cluster_with_max(1, 500'000)};
  {
    std::vector<FlowPoint> noise{{"n", 460'000}};
    auto tps = form_tpclusters(two, noise, 0.3, 0.1);
    ok += tps.size() == 2 && tps[1].members.size() == 2 && tps[1].members.back().flow_id == "n";
  }
  {
    std::vector<FlowPoint> noise{{"n", 1'200'000}};
    auto tps = form_tpclusters(two, noise, 0.3, 0.1);
    ok += tps.size() == 2 && tps[0].members.size() == 2 && tps[0].members.back().flow_id == "n";
  }
  return {ok == 3, std::to_string(ok) + "/3 traces reproduced"};
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

Outcome a9() {
  auto spec = testing::scenario_spec("single_fault");
  auto sc = generate_scenario(spec);
  auto scaled = sc.flows;
  for (auto& f : scaled) f.throughput *= 1000.0;
  auto params = testing::desk_params();
  auto base = analyze(sc.topology, sc.flows, params);
  params.eps *= 1000.0;
  auto big = analyze(sc.topology, scaled, params);

  std::size_t bad_fof = 0, bad_nlof = 0;
  for (const auto& [id, f] : base.fof)
    if (!close(f, big.fof.at(id))) ++bad_fof;
  if (base.ranked.size() != big.ranked.size()) return {false, "link count differs"};
  for (std::size_t i = 0; i < base.ranked.size(); ++i)
    if (!(base.ranked[i].link == big.ranked[i].link) || !close(base.ranked[i].nlof, big.ranked[i].nlof))
      ++bad_nlof;
  return {bad_fof == 0 && bad_nlof == 0,
          std::to_string(bad_fof) + " FOF and " + std::to_string(bad_nlof) +
              " NLOF mismatches over " + std::to_string(base.fof.size()) + " flows"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome a10() {
  const auto dir = fs::temp_directory_path() / "nlof_acceptance_a10";
  fs::create_directories(dir);
  std::string reports[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("report" + std::to_string(i) + ".csv");
    const std::string cmd = std::string(NLOF_CLI_PATH) + " run --scenario " +
                            testing::scenario_path("multi_fault") + " --eps 10000 --seed 5 --out " +
                            out.string();
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "cli run failed"};
    }
    reports[i] = slurp(out);
  }
  fs::remove_all(dir);
  return {!reports[0].empty() && reports[0] == reports[1],
          std::to_string(reports[0].size()) + " bytes, " +
              (reports[0] == reports[1] ? "identical" : "differ")};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
