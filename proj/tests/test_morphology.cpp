#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "chainscope/morphology.hpp"
#include "oracles.hpp"

using namespace chainscope;

namespace {

SimpleGraph make(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  SimpleGraph graph(n);
  for (auto [u, v] : edges) graph.add_edge(u, v);
  return graph;
}

bool tree_class(StructureClass value) {
  return value == StructureClass::Simple || value == StructureClass::HierarchicalY ||
         value == StructureClass::Star || value == StructureClass::ComplexHierarchical;
}

}  // namespace

TEST_SUITE("morphology") {

TEST_CASE("one example per class") {
  CHECK(classify_structure(make(2, {{0, 1}})) == StructureClass::Simple);
  CHECK(classify_structure(make(4, {{0, 1}, {1, 2}, {2, 3}})) == StructureClass::Simple);
  // A leaf hanging off the middle of a five-node path.
  CHECK(classify_structure(make(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}})) == StructureClass::HierarchicalY);
  CHECK(classify_structure(make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})) == StructureClass::Polygon);
  CHECK(classify_structure(make(3, {{0, 1}, {1, 2}, {2, 0}})) == StructureClass::Polygon);
  CHECK(classify_structure(make(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == StructureClass::Star);
  CHECK(classify_structure(make(6, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}})) == StructureClass::ComplexHierarchical);
  CHECK(classify_structure(make(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}})) == StructureClass::Multigroup);
}

TEST_CASE("a three-leaf claw is a star, not a Y") {
  CHECK(classify_structure(make(4, {{0, 1}, {1, 2}, {1, 3}})) == StructureClass::Star);
}

TEST_CASE("loops and repeats are ignored on insertion") {
  const SimpleGraph graph = make(3, {{0, 1}, {1, 0}, {1, 1}, {1, 2}});
  CHECK(graph.edge_count() == 2);
  CHECK(classify_structure(graph) == StructureClass::Simple);
}

TEST_CASE("errors") {
  try {
    classify_structure(SimpleGraph(1));
    FAIL("expected TooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooSmall);
  }
  try {
    classify_structure(make(4, {{0, 1}, {2, 3}}));
    FAIL("expected Disconnected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Disconnected);
  }
}

TEST_CASE("exactly one rule fires on every connected graph up to six nodes") {
  std::size_t graphs = 0;
  for (int n = 2; n <= 6; ++n) {
    oracle::for_each_connected_graph(n, [&](const std::vector<std::pair<int, int>>& edges) {
      SimpleGraph graph(n);
      for (auto [u, v] : edges) graph.add_edge(u, v);
      const auto rules = structure_rules(graph);
      const StructureClass value = classify_structure(graph);
      REQUIRE(rules.count() == 1);
      REQUIRE(rules.test(static_cast<std::size_t>(value)));
      REQUIRE(tree_class(value) == !oracle::has_cycle(n, edges));
      ++graphs;
    });
  }
  // Labelled connected graphs on 2..6 vertices: 1 + 4 + 38 + 728 + 26704.
  CHECK(graphs == 27475);
}

TEST_CASE("relabelling vertices does not change the class") {
  std::mt19937_64 rng(11);
  oracle::for_each_connected_graph(6, [&](const std::vector<std::pair<int, int>>& edges) {
    if (rng() % 20 != 0) return;
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SimpleGraph a(6), b(6);
    for (auto [u, v] : edges) {
      a.add_edge(u, v);
      b.add_edge(perm[u], perm[v]);
    }
    REQUIRE(classify_structure(a) == classify_structure(b));
  });
}

TEST_CASE("census of a tiny chain set") {
  const std::vector<Chain> chains{
      {"CH000001", {{"F1", "A", "DE"}, {"F2", "B", "PL"}, {"F3", "C", "UA"}}, {0.1, 0.1}, Region::PostCommunist, 1},
      {"CH000002", {{"F1", "A", "DE"}, {"F2", "B", "PL"}, {"F4", "D", "US"}}, {0.1, 0.1}, Region::OutsideEurope, 1},
      {"CH000003", {{"F1", "A", "DE"}, {"F5", "E", "CZ"}}, {0.1}, std::nullopt, 1},
      {"CH000004", {{"F7", "A", "DE"}, {"F8", "B", "PL"}}, {0.1}, std::nullopt, 1},
  };
  const auto result = census(chains);
  REQUIRE(result.total == 2);
  // F1 component: A-B, B-C, B-D, A-E -> B has degree 3, A degree 2: one branch node.
  CHECK(result.components[0].firm_ids == std::vector<std::string>{"F1", "F2", "F3", "F4", "F5"});
  CHECK(result.components[0].structure == StructureClass::HierarchicalY);
  CHECK(result.components[1].structure == StructureClass::Simple);
  CHECK(result.counts.size() == 6);
  CHECK(result.structure_of_chain("CH000004") == StructureClass::Simple);
  CHECK_FALSE(result.structure_of_chain("CH000099"));

  const std::map<std::string, SizeClass> sizes{{"A", SizeClass::Large}, {"B", SizeClass::Small},
                                               {"E", SizeClass::Medium}, {"C", SizeClass::Small},
                                               {"D", SizeClass::Small}};
  const auto table = structure_by_size(chains, result, sizes);
  CHECK(table.counts[1] == std::vector<std::int64_t>{2, 1, 0});
  CHECK(table.counts[0] == std::vector<std::int64_t>{1, 0, 0});
}

TEST_CASE("census does not depend on workers") {
  const auto chains = build_chains(generate_fixture(13, {30, 80, 150})).chains;
  const auto one = census(chains, 1);
  const auto four = census(chains, 4);
  CHECK(one.counts == four.counts);
  REQUIRE(one.components.size() == four.components.size());
  for (std::size_t i = 0; i < one.components.size(); ++i) {
    CHECK(one.components[i].chain_ids == four.components[i].chain_ids);
    CHECK(one.components[i].structure == four.components[i].structure);
  }
}

}
