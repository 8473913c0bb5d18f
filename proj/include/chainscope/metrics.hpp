#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chainscope/citygraph.hpp"

namespace chainscope {

/// Simple directed adjacency over vertices 0..n-1. Parallel arcs are
/// collapsed; path counting treats adjacency as simple.
class Digraph {
 public:
  explicit Digraph(std::size_t vertex_count = 0) : out_(vertex_count) {}
  static Digraph from_city_graph(const CityGraph& graph);

  void add_arc(std::size_t from, std::size_t to);
  std::size_t size() const noexcept { return out_.size(); }
  const std::vector<std::size_t>& successors(std::size_t v) const { return out_.at(v); }

 private:
  std::vector<std::vector<std::size_t>> out_;  // sorted, unique
};

struct BetweennessOptions {
  bool normalized = false;  // divide by (n - 1)(n - 2)
  unsigned workers = 1;
};

/// Brandes accumulation over unweighted shortest paths. Sources are processed
/// in fixed-size blocks whose partial sums are merged in block order, so the
/// result is bit-identical for every worker count.
std::vector<double> betweenness(const Digraph& graph, const BetweennessOptions& options = {});
std::vector<double> betweenness(const CityGraph& graph, const BetweennessOptions& options = {});

inline constexpr std::size_t kOracleMaxVertices = 14;

/// Reference betweenness: for every ordered pair, explicitly enumerates all
/// shortest paths and counts intermediate vertices, using exact rational
/// arithmetic. GraphTooLarge above kOracleMaxVertices vertices.
std::vector<double> betweenness_oracle(const Digraph& graph);
std::vector<double> betweenness_oracle(const CityGraph& graph);

struct DegreeCounts {
  std::int64_t degree = 0;  // in + out
  std::int64_t degree_in = 0;
  std::int64_t degree_out = 0;
};

/// Degrees counting edge multiplicity, aligned with graph.nodes().
std::vector<DegreeCounts> degrees(const CityGraph& graph);

struct CityCentrality {
  std::string city_id;
  std::int64_t degree = 0;
  std::int64_t degree_in = 0;
  std::int64_t degree_out = 0;
  double betweenness = 0.0;
  double cumulated_revenue = 0.0;

  bool operator==(const CityCentrality&) const = default;
};

struct CentralityReport {
  std::vector<CityCentrality> cities;  // graph node order (by city id)

  bool operator==(const CentralityReport&) const = default;
};

CentralityReport compute_centrality(const CityGraph& graph, const BetweennessOptions& options = {});
void write_centrality_csv(const CentralityReport& report, const std::filesystem::path& path,
                          const std::vector<std::string>& header_comments = {});

enum class GatewayRole {
  Gateway,       // relays shortest paths
  ReceiverOnly,  // no relaying, but incoming links
  None,
};

std::string_view to_string(GatewayRole role) noexcept;

struct GatewayEntry {
  std::string city_id;
  double betweenness = 0.0;
  std::int64_t degree_in = 0;
  GatewayRole role = GatewayRole::None;
};

/// All cities ordered by betweenness desc, then degree-IN desc, then id.
std::vector<GatewayEntry> gateway_profile(const CentralityReport& report);

}  // namespace chainscope
