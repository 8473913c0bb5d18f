#include <doctest.h>

#include <random>

#include "chainscope/metrics.hpp"
#include "oracles.hpp"

using namespace chainscope;

namespace {

Digraph to_digraph(int n, const oracle::Arcs& arcs) {
  Digraph graph(n);
  for (auto [u, v] : arcs) graph.add_arc(u, v);
  return graph;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("path and star by hand") {
  // 0 -> 1 -> 2 -> 3
  const Digraph path = to_digraph(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(betweenness(path) == std::vector<double>{0, 2, 2, 0});
  CHECK(betweenness_oracle(path) == std::vector<double>{0, 2, 2, 0});
  // Two equal shortest routes 0 -> {1,2} -> 3 split the credit.
  const Digraph diamond = to_digraph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(betweenness(diamond) == std::vector<double>{0, 0.5, 0.5, 0});
  const auto normalized = betweenness(path, {true, 1});
  CHECK(normalized[1] == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("Brandes equals exhaustive enumeration on random digraphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 4 + trial % 9;
    const double p = 0.1 + 0.05 * (trial % 8);
    const Digraph graph = to_digraph(n, oracle::random_digraph(rng, n, p));
    const auto fast = betweenness(graph);
    const auto slow = betweenness_oracle(graph);
    REQUIRE(fast.size() == slow.size());
    for (int v = 0; v < n; ++v) CHECK(close(fast[v], slow[v]));
  }
}

TEST_CASE("worker count leaves the bits alone") {
  std::mt19937_64 rng(5);
  const Digraph graph = to_digraph(200, oracle::random_digraph(rng, 200, 0.03));
  const auto one = betweenness(graph, {false, 1});
  for (unsigned workers : {2u, 3u, 8u}) CHECK(betweenness(graph, {false, workers}) == one);
}

TEST_CASE("oracle refuses large graphs") {
  try {
    betweenness_oracle(Digraph(kOracleMaxVertices + 1));
    FAIL("expected GraphTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GraphTooLarge);
  }
}

TEST_CASE("degrees count multiplicity") {
  std::vector<CityNode> nodes{{"A", "a", {}, {}, 0, {}, {}}, {"B", "b", {}, {}, 0, {}, {}}, {"C", "c", {}, {}, 0, {}, {}}};
  const CityGraph graph(nodes, {{"A", "B", 3, 0}, {"B", "C", 2, 0}, {"C", "B", 1, 0}});
  const auto d = degrees(graph);
  CHECK(d[1].degree_in == 4);
  CHECK(d[1].degree_out == 2);
  CHECK(d[1].degree == 6);
  const auto report = compute_centrality(graph);
  CHECK(report.cities[1].betweenness == doctest::Approx(1.0));  // A -> C goes through B
  const auto ranking = gateway_profile(report);
  CHECK(ranking[0].city_id == "B");
  CHECK(ranking[0].role == GatewayRole::Gateway);
  CHECK(ranking[1].city_id == "C");
  CHECK(ranking[1].role == GatewayRole::ReceiverOnly);
  CHECK(ranking[2].role == GatewayRole::None);
}

}
