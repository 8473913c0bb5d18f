// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "chainscope/ca.hpp"
#include "chainscope/chains.hpp"
#include "chainscope/citygraph.hpp"
#include "chainscope/metrics.hpp"
#include "chainscope/morphology.hpp"
#include "chainscope/report.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chainscope;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

Outcome betweenness_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t vertices = 0, mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + trial % 9;  // 4..12
    const double p = 0.08 + 0.04 * (trial % 10);
    Digraph graph(n);
    for (auto [u, v] : oracle::random_digraph(rng, n, p)) graph.add_arc(u, v);
    const auto fast = betweenness(graph);
    const auto slow = betweenness_oracle(graph);
    for (int v = 0; v < n; ++v) {
      ++vertices;
      if (std::abs(fast[v] - slow[v]) > 1e-12 * std::max(1.0, std::abs(slow[v]))) ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 10.0,
          "200 graphs, " + std::to_string(vertices) + " vertices, " + std::to_string(mismatches) +
              " mismatches, " + fmt("%.2fs", elapsed)};
}

Outcome morphology_totality() {
  const auto start = Clock::now();
  std::size_t graphs = 0, multi_fire = 0, wrong_family = 0, disagree = 0;
  for (int n = 2; n <= 7; ++n) {
    oracle::for_each_connected_graph(n, [&](const std::vector<std::pair<int, int>>& edges) {
      SimpleGraph graph(n);
      for (auto [u, v] : edges) graph.add_edge(u, v);
      const auto rules = structure_rules(graph);
      const StructureClass value = classify_structure(graph);
      if (rules.count() != 1) ++multi_fire;
      if (!rules.test(static_cast<std::size_t>(value))) ++disagree;
      const bool tree = value == StructureClass::Simple || value == StructureClass::HierarchicalY ||
                        value == StructureClass::Star || value == StructureClass::ComplexHierarchical;
      if (tree == oracle::has_cycle(n, edges)) ++wrong_family;
      ++graphs;
    });
  }
  const double elapsed = seconds_since(start);
  // 1 + 4 + 38 + 728 + 26704 + 1866256 labelled connected graphs.
  const bool complete = graphs == 1893731;
  return {complete && multi_fire == 0 && disagree == 0 && wrong_family == 0 && elapsed < 60.0,
          std::to_string(graphs) + " graphs, " + std::to_string(multi_fire) + " ambiguous, " +
              std::to_string(wrong_family) + " tree/cycle mismatches, " + fmt("%.2fs", elapsed)};
}

Outcome ca_chi_square() {
  std::mt19937_64 rng(500);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto table = oracle::random_table(rng, 50, 9, trial % 4 == 0 ? 2 : 60);
    std::vector<std::vector<double>> counts;
    for (const auto& row : table.counts) counts.emplace_back(row.begin(), row.end());
    const double chi = oracle::pearson_chi_square(counts);
    const auto result = fit_ca(table);
    double sum = 0.0;
    for (double s : result.singular_values) sum += s * s;
    const double rel = std::abs(result.n * sum - chi) / std::max(chi, 1e-300);
    worst = std::max(worst, chi == 0.0 ? 0.0 : rel);
  }
  double independence = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> dim(2, 9), weight(1, 12);
    const int rows = dim(rng), cols = dim(rng);
    std::vector<int> r(rows), c(cols);
    for (int& v : r) v = weight(rng);
    for (int& v : c) v = weight(rng);
    ContingencyTable table;
    for (int i = 0; i < rows; ++i) table.row_labels.push_back("r" + std::to_string(i));
    for (int j = 0; j < cols; ++j) table.col_labels.push_back("c" + std::to_string(j));
    for (int i = 0; i < rows; ++i) {
      table.counts.emplace_back();
      for (int j = 0; j < cols; ++j) table.counts.back().push_back(static_cast<std::int64_t>(r[i]) * c[j]);
    }
    independence = std::max(independence, fit_ca(table).total_inertia);
  }
  const ContingencyTable diagonal{{"a", "b"}, {"x", "y"}, {{10, 0}, {0, 10}}};
  const double unit = fit_ca(diagonal).total_inertia;
  return {worst <= 1e-9 && independence < 1e-12 && std::abs(unit - 1.0) <= 1e-9,
          "worst relative gap " + fmt("%.2e", worst) + ", independence inertia " + fmt("%.2e", independence) +
              ", [[10,0],[0,10]] inertia " + fmt("%.12f", unit)};
}

Outcome table1_fixture() {
  const auto table = load_contingency_table(testing_support::data_dir() / "paper_table1.csv");
  const CAResult a = fit_ca(table);
  const CAResult b = fit_ca(load_contingency_table(testing_support::data_dir() / "paper_table1.csv"));
  double shares = 0.0;
  for (double s : a.shares) shares += s;
  bool canonical = true;
  for (std::size_t k = 0; k < a.axes(); ++k) {
    double best = 0.0;
    for (const auto& row : a.row_coordinates) {
      if (std::abs(row[k]) > std::abs(best)) best = row[k];
    }
    canonical = canonical && best > 0.0;
  }
  const bool same = a.row_coordinates == b.row_coordinates && a.col_coordinates == b.col_coordinates &&
                    a.singular_values == b.singular_values;
  return {std::abs(shares - 1.0) <= 1e-12 && same && canonical && a.axes() > 0,
          std::to_string(a.axes()) + " axes, shares sum " + fmt("%.15f", shares) + ", first axis " +
              fmt("%.1f%%", 100.0 * a.shares.at(0)) + (same ? ", identical reruns" : ", reruns differ")};
}

Outcome chain_oracle() {
  std::size_t datasets = 0, mismatched = 0, chains = 0, cycles = 0;
  auto check = [&](const Dataset& dataset) {
    ++datasets;
    const ChainSet built = build_chains(dataset);
    const auto expected = oracle::enumerate_chains(dataset);
    std::set<std::tuple<std::string, std::string, std::string>> full;
    std::set<std::pair<std::string, std::string>> degenerate;
    std::size_t oriented = 0;
    for (const Chain& chain : built.chains) {
      if (chain.has_terminal()) {
        full.emplace(chain.n().firm_id, chain.n1().firm_id, chain.n2().firm_id);
      } else {
        degenerate.emplace(chain.n().firm_id, chain.n1().firm_id);
      }
    }
    for (const auto& [region, count] : expected.orientation_counts) oriented += count;
    bool shares_ok = true;
    if (oriented > 0) {
      for (const auto& [region, share] : orientation_shares(built.chains)) {
        const auto it = expected.orientation_counts.find(std::string(to_string(region)));
        const double count = it == expected.orientation_counts.end() ? 0.0 : static_cast<double>(it->second);
        shares_ok = shares_ok && share == count / static_cast<double>(oriented);
      }
    }
    chains += built.chains.size();
    cycles += built.cycles.size();
    if (full != expected.full || degenerate != expected.degenerate || !shares_ok ||
        full.size() + degenerate.size() != built.chains.size()) {
      ++mismatched;
    }
  };
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t firms = 9 + seed % 52;  // 9..60
    const std::size_t max_links = firms * (firms - 1);
    const std::size_t links = std::min<std::size_t>(max_links, seed % 3 == 0 ? firms * 4 : firms * 2);
    check(generate_fixture(seed, {6 + seed % 15, firms, links}));
  }
  check(generate_fixture(42, {}));
  // Past firms * (firms - 1) / 2 links the fixture has to close ownership cycles.
  check(generate_fixture(5, {4, 9, 60}));
  check(generate_fixture(6, {5, 12, 100}));
  check(generate_fixture(7, {6, 16, 200}));
  return {mismatched == 0 && cycles > 0,
          std::to_string(datasets) + " fixtures, " + std::to_string(chains) + " chains, " + std::to_string(cycles) +
              " cycles excluded, " + std::to_string(mismatched) + " mismatches"};
}

Outcome conservation() {
  double worst = 0.0;
  std::size_t failures = 0;
  for (std::uint64_t seed : {1u, 7u, 42u, 99u, 123u}) {
    const Dataset dataset = generate_fixture(seed, {25, 60, 150});
    const auto chains = build_chains(dataset).chains;
    double total = 0.0, grouped = 0.0;
    for (const Chain& chain : chains) total += chain.attributable_revenue;
    for (const auto& group : aggregate_by_n1(chains)) grouped += group.total_fdi_revenue;
    worst = std::max(worst, std::abs(total - grouped) / total);
    std::int64_t parts = 0;
    for (Region region : kAllRegions) parts += build_graph(chains, dataset, {region, false}).total_multiplicity();
    const auto whole = build_graph(chains, dataset, {std::nullopt, false}).total_multiplicity();
    if (parts != whole) ++failures;
  }
  return {worst <= 1e-9 && failures == 0,
          "revenue gap " + fmt("%.2e", worst) + ", " + std::to_string(failures) + " multiplicity mismatches"};
}

Outcome determinism() {
  testing_support::TempDir dir("acceptance");
  write_dataset(generate_fixture(42, {}), dir / "data");
  RunConfig config;
  config.inputs = DatasetPaths::in_directory(dir / "data");
  std::vector<std::pair<unsigned, std::string>> runs{{1, "a"}, {1, "b"}, {4, "c"}, {4, "d"}};
  std::vector<BundleSummary> summaries;
  for (const auto& [workers, name] : runs) {
    config.workers = workers;
    summaries.push_back(run_pipeline(config, dir / name));
  }
  std::size_t differing = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (summaries[r].files != summaries[0].files) ++differing;
    for (const auto& file : summaries[0].files) {
      if (testing_support::slurp(dir / runs[0].second / file) != testing_support::slurp(dir / runs[r].second / file)) {
        ++differing;
      }
    }
  }
  return {differing == 0 && summaries[0].files.size() >= 14,
          std::to_string(summaries[0].files.size()) + " files x 4 runs (workers 1,1,4,4), " +
              std::to_string(differing) + " differences"};
}

Outcome round_trip() {
  testing_support::TempDir dir("roundtrip");
  std::size_t datasets = 0, graphs = 0, failures = 0;
  for (std::uint64_t seed : {3u, 42u, 1000u}) {
    for (ForceMode mode : {ForceMode::LiteralRatio, ForceMode::Product}) {
      const Dataset original = generate_fixture(seed, {}, mode);
      write_dataset(original, dir / "d");
      ++datasets;
      if (!(load_dataset(DatasetPaths::in_directory(dir / "d"), {false, mode}) == original)) ++failures;

      const auto chains = build_chains(original).chains;
      const CityGraph graph = build_graph(chains, original);
      const auto report = compute_centrality(graph);
      std::vector<std::int64_t> degree_in;
      std::vector<double> scores;
      for (const auto& city : report.cities) {
        degree_in.push_back(city.degree_in);
        scores.push_back(city.betweenness);
      }
      const CityGraph annotated = graph.with_centrality(degree_in, scores);
      for (const char* name : {"g.graphml", "g.dot", "g.csv"}) {
        export_graph(annotated, *format_from_extension(name), dir / name);
        ++graphs;
        if (!(import_graph(dir / name) == annotated)) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(datasets) + " datasets, " + std::to_string(graphs) +
                             " graph files (GraphML, DOT, edge list), " + std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 betweenness oracle equivalence", betweenness_equivalence},
      {"2 morphology totality", morphology_totality},
      {"3 CA chi-square identity", ca_chi_square},
      {"4 Table-1 fixture round-trip", table1_fixture},
      {"5 chain-enumeration oracle", chain_oracle},
      {"6 conservation", conservation},
      {"7 determinism", determinism},
      {"8 round-trip", round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += outcome.ok ? 0 : 1;
    std::cout << (outcome.ok ? "PASS " : "FAIL ") << name << " (" << outcome.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
