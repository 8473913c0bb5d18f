#pragma once

#include <array>
#include <bitset>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainscope/chains.hpp"
#include "chainscope/model.hpp"
#include "chainscope/tables.hpp"

namespace chainscope {

enum class StructureClass {
  Simple,
  HierarchicalY,
  Polygon,
  Star,
  ComplexHierarchical,
  Multigroup,
};

inline constexpr std::array<StructureClass, 6> kAllStructures{
    StructureClass::Simple, StructureClass::HierarchicalY,       StructureClass::Polygon,
    StructureClass::Star,   StructureClass::ComplexHierarchical, StructureClass::Multigroup};

std::string_view to_string(StructureClass value) noexcept;
std::optional<StructureClass> parse_structure_class(std::string_view text);

/// Undirected simple graph on vertices 0..n-1; self-loops and repeated
/// edges are ignored on insertion.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t vertex_count = 0) : adjacency_(vertex_count) {}

  void add_edge(std::size_t u, std::size_t v);
  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  bool connected() const;
  /// Vertex sets of the connected components, each sorted, ordered by first vertex.
  std::vector<std::vector<std::size_t>> components() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edges_ = 0;
};

/// Decision tree over the undirected skeleton, first match wins:
///   1. max degree <= 2 and acyclic          -> SIMPLE
///   2. every degree == 2                     -> POLYGON
///   3. acyclic, one hub of degree n-1        -> STAR
///   4. acyclic, exactly one degree>=3 node   -> HIERARCHICAL_Y
///   5. acyclic, several degree>=3 nodes      -> COMPLEX_HIERARCHICAL
///   6. otherwise                             -> MULTIGROUP
/// Throws TooSmall below two vertices and Disconnected for split inputs.
StructureClass classify_structure(const SimpleGraph& graph);

/// Bit i set when the mutually exclusive predicate for kAllStructures[i]
/// holds. Used to check that exactly one rule fires for every graph.
std::bitset<6> structure_rules(const SimpleGraph& graph);

struct StructureComponent {
  StructureClass structure = StructureClass::Simple;
  std::vector<std::string> firm_ids;
  std::vector<std::string> city_ids;
  std::vector<std::string> chain_ids;
};

struct MorphologyCensus {
  std::map<StructureClass, std::size_t> counts;  // every class present
  std::size_t total = 0;
  std::vector<StructureComponent> components;  // ordered by smallest firm id

  /// Structure of the component holding the chain.
  std::optional<StructureClass> structure_of_chain(std::string_view chain_id) const;
};

/// Groups chains into connected ownership components (firms joined by chain
/// links) and classifies each component's city-level skeleton.
MorphologyCensus census(std::span<const Chain> chains, unsigned workers = 1);

/// Rows: structure classes; columns SMALL, MEDIUM, LARGE. Counts chains by
/// their N-1 city's size class; unclassified cities are left out.
ContingencyTable structure_by_size(std::span<const Chain> chains, const MorphologyCensus& census,
                                   const std::map<std::string, SizeClass>& city_sizes);

}  // namespace chainscope
