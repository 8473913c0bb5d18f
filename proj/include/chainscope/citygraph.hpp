#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainscope/chains.hpp"
#include "chainscope/model.hpp"

namespace chainscope {

struct CityNode {
  std::string id;
  std::string name;
  SizeClass size_class = SizeClass::Unclassified;
  Region region = Region::OutsideEurope;
  double revenue = 0.0;  // cumulated attributable revenue of chains with this N-1 city
  std::optional<std::int64_t> degree_in;
  std::optional<double> betweenness;

  bool operator==(const CityNode&) const = default;
};

/// Parallel city links are folded into one edge carrying a multiplicity.
struct CityEdge {
  std::string from;
  std::string to;
  std::int64_t multiplicity = 1;
  double revenue = 0.0;

  bool operator==(const CityEdge&) const = default;
};

class CityGraph {
 public:
  CityGraph() = default;
  /// Sorts nodes by id and edges by (from, to), folding duplicate edges.
  /// Throws InvalidArgument on self-loops, duplicate nodes or unknown endpoints.
  CityGraph(std::vector<CityNode> nodes, std::vector<CityEdge> edges,
            std::optional<Region> orientation_filter = std::nullopt);

  const std::vector<CityNode>& nodes() const noexcept { return nodes_; }
  const std::vector<CityEdge>& edges() const noexcept { return edges_; }
  std::optional<Region> orientation_filter() const noexcept { return orientation_filter_; }

  std::optional<std::size_t> node_index(std::string_view id) const;
  std::int64_t total_multiplicity() const noexcept;
  bool empty() const noexcept { return nodes_.empty(); }

  /// Copy with degree-IN and betweenness attached to the nodes (aligned to nodes()).
  CityGraph with_centrality(std::span<const std::int64_t> degree_in,
                            std::span<const double> betweenness) const;

  bool operator==(const CityGraph&) const = default;

 private:
  std::vector<CityNode> nodes_;
  std::vector<CityEdge> edges_;
  std::optional<Region> orientation_filter_;
};

struct GraphBuildOptions {
  std::optional<Region> orientation;  // keep only chains with this N-2 orientation
  bool include_degenerate = true;     // ignored when an orientation is set
};

/// One directed edge instance per chain link; city attributes come from the dataset.
CityGraph build_graph(std::span<const Chain> chains, const Dataset& dataset,
                      const GraphBuildOptions& options = {});

enum class GraphFormat { GraphMl, Dot, EdgeList };

std::optional<GraphFormat> parse_graph_format(std::string_view text);
/// .graphml, .dot/.gv, .csv/.edgelist/.txt
std::optional<GraphFormat> format_from_extension(const std::filesystem::path& path);

std::string export_graph(const CityGraph& graph, GraphFormat format);
void export_graph(const CityGraph& graph, GraphFormat format, const std::filesystem::path& path);

CityGraph import_graph(std::string_view text, GraphFormat format);
CityGraph import_graph(const std::filesystem::path& path);

}  // namespace chainscope
