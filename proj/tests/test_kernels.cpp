#include "doctest.h"

#include <algorithm>
#include <random>

#include "nlof/reference.hpp"
#include "support/fixtures.hpp"

using namespace nlof;

TEST_CASE("neighbour_counts: parallel equals serial") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(std::uniform_int_distribution<std::size_t>(0, 30000)(rng));
    std::uniform_int_distribution<int> d(0, 50000);
    for (auto& x : v) x = d(rng);
    std::sort(v.begin(), v.end());
    const double eps = std::uniform_int_distribution<int>(0, 40)(rng);
    auto par = neighbour_counts(v, eps);
    CHECK(par == reference::neighbour_counts(v, eps));
    for (std::size_t i = 0; i < v.size(); i += 997) {
      std::size_t brute = 0;
      for (double y : v) brute += std::abs(y - v[i]) <= eps;
      CHECK(par[i] == brute);
    }
  }
}

TEST_CASE("dbscan and fof: parallel equals serial on a scenario") {
  auto sc = generate_scenario(testing::scenario_spec("four_class"));
  std::vector<FlowPoint> pts;
  for (const auto& f : sc.flows) pts.push_back({f.flow_id, f.throughput});
  auto a = dbscan_1d(pts, 10'000.0, 50);
  auto b = reference::dbscan_1d(pts, 10'000.0, 50);
  REQUIRE(a.clusters.size() == b.clusters.size());
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    REQUIRE(a.clusters[i].members.size() == b.clusters[i].members.size());
    for (std::size_t j = 0; j < a.clusters[i].members.size(); ++j)
      CHECK(a.clusters[i].members[j].flow_id == b.clusters[i].members[j].flow_id);
  }
  CHECK(a.noise.size() == b.noise.size());

  auto tp1 = form_tpclusters(a.clusters, a.noise, 0.3, 0.1);
  auto tp2 = tp1;
  compute_fof(tp1, 2);
  reference::compute_fof(tp2, 2);
  for (std::size_t i = 0; i < tp1.size(); ++i) {
    CHECK(tp1[i].normal_point == tp2[i].normal_point);
    CHECK(tp1[i].fof == tp2[i].fof);
  }
}
