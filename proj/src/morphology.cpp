#include "chainscope/morphology.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "chainscope/parallel.hpp"

namespace chainscope {

std::string_view to_string(StructureClass value) noexcept {
  switch (value) {
    case StructureClass::Simple: return "SIMPLE";
    case StructureClass::HierarchicalY: return "HIERARCHICAL_Y";
    case StructureClass::Polygon: return "POLYGON";
    case StructureClass::Star: return "STAR";
    case StructureClass::ComplexHierarchical: return "COMPLEX_HIERARCHICAL";
    case StructureClass::Multigroup: return "MULTIGROUP";
  }
  return "MULTIGROUP";
}

std::optional<StructureClass> parse_structure_class(std::string_view text) {
  for (StructureClass value : kAllStructures) {
    if (to_string(value) == text) return value;
  }
  return std::nullopt;
}

void SimpleGraph::add_edge(std::size_t u, std::size_t v) {
  if (u >= size() || v >= size()) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
  if (u == v) return;
  auto& list = adjacency_[u];
  const auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return;
  list.insert(it, v);
  auto& other = adjacency_[v];
  other.insert(std::lower_bound(other.begin(), other.end(), u), u);
  ++edges_;
}

std::vector<std::vector<std::size_t>> SimpleGraph::components() const {
  std::vector<int> seen(size(), 0);
  std::vector<std::vector<std::size_t>> result;
  for (std::size_t start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> component, stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (std::size_t w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    result.push_back(std::move(component));
  }
  return result;
}

bool SimpleGraph::connected() const { return size() > 0 && components().size() == 1; }

namespace {

struct DegreeSummary {
  bool acyclic = false;
  std::size_t max_degree = 0;
  std::size_t branch_nodes = 0;  // degree >= 3
  std::size_t hub_degree = 0;    // degree of the branch node when there is one
  bool all_degree_two = true;
};

DegreeSummary summarize(const SimpleGraph& graph) {
  if (graph.size() < 2) throw Error(ErrorKind::TooSmall, "structure needs at least two nodes");
  if (!graph.connected()) throw Error(ErrorKind::Disconnected, "classify each connected component separately");
  DegreeSummary summary;
  // A connected graph is a tree exactly when it has n - 1 edges.
  summary.acyclic = graph.edge_count() == graph.size() - 1;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const std::size_t degree = graph.degree(v);
    summary.max_degree = std::max(summary.max_degree, degree);
    if (degree >= 3) {
      ++summary.branch_nodes;
      summary.hub_degree = degree;
    }
    if (degree != 2) summary.all_degree_two = false;
  }
  return summary;
}

}  // namespace

StructureClass classify_structure(const SimpleGraph& graph) {
  const DegreeSummary s = summarize(graph);
  const std::size_t n = graph.size();
  if (s.max_degree <= 2 && s.acyclic) return StructureClass::Simple;
  if (s.all_degree_two) return StructureClass::Polygon;
  if (s.acyclic && s.branch_nodes == 1 && s.hub_degree == n - 1) return StructureClass::Star;
  if (s.acyclic && s.branch_nodes == 1) return StructureClass::HierarchicalY;
  if (s.acyclic && s.branch_nodes >= 2) return StructureClass::ComplexHierarchical;
  return StructureClass::Multigroup;
}

std::bitset<6> structure_rules(const SimpleGraph& graph) {
  const DegreeSummary s = summarize(graph);
  const std::size_t n = graph.size();
  std::bitset<6> fired;
  fired[0] = s.acyclic && s.max_degree <= 2;
  fired[1] = s.acyclic && s.branch_nodes == 1 && s.hub_degree < n - 1;
  fired[2] = s.all_degree_two;
  fired[3] = s.acyclic && s.branch_nodes == 1 && s.hub_degree == n - 1;
  fired[4] = s.acyclic && s.branch_nodes >= 2;
  fired[5] = !s.acyclic && !s.all_degree_two;
  return fired;
}

std::optional<StructureClass> MorphologyCensus::structure_of_chain(std::string_view chain_id) const {
  for (const StructureComponent& component : components) {
    if (std::binary_search(component.chain_ids.begin(), component.chain_ids.end(), chain_id)) {
      return component.structure;
    }
  }
  return std::nullopt;
}

MorphologyCensus census(std::span<const Chain> chains, unsigned workers) {
  std::vector<std::string> firms;
  for (const Chain& chain : chains) {
    for (const ChainLevel& level : chain.levels) firms.push_back(level.firm_id);
  }
  std::sort(firms.begin(), firms.end());
  firms.erase(std::unique(firms.begin(), firms.end()), firms.end());
  std::unordered_map<std::string, std::size_t> firm_index;
  for (std::size_t i = 0; i < firms.size(); ++i) firm_index.emplace(firms[i], i);

  SimpleGraph ownership(firms.size());
  for (const Chain& chain : chains) {
    for (std::size_t i = 0; i + 1 < chain.levels.size(); ++i) {
      ownership.add_edge(firm_index.at(chain.levels[i].firm_id), firm_index.at(chain.levels[i + 1].firm_id));
    }
  }
  const auto firm_components = ownership.components();
  std::vector<std::size_t> component_of(firms.size());
  for (std::size_t c = 0; c < firm_components.size(); ++c) {
    for (std::size_t v : firm_components[c]) component_of[v] = c;
  }
  std::vector<std::vector<const Chain*>> members(firm_components.size());
  for (const Chain& chain : chains) members[component_of[firm_index.at(chain.n().firm_id)]].push_back(&chain);

  MorphologyCensus result;
  result.components.resize(firm_components.size());
  parallel_for(firm_components.size(), workers, [&](std::size_t c) {
    StructureComponent& component = result.components[c];
    for (std::size_t v : firm_components[c]) component.firm_ids.push_back(firms[v]);
    for (const Chain* chain : members[c]) {
      component.chain_ids.push_back(chain->id);
      for (const ChainLevel& level : chain->levels) component.city_ids.push_back(level.city_id);
    }
    std::sort(component.chain_ids.begin(), component.chain_ids.end());
    std::sort(component.city_ids.begin(), component.city_ids.end());
    component.city_ids.erase(std::unique(component.city_ids.begin(), component.city_ids.end()),
                             component.city_ids.end());
    SimpleGraph skeleton(component.city_ids.size());
    auto city_vertex = [&](const std::string& id) {
      return static_cast<std::size_t>(
          std::lower_bound(component.city_ids.begin(), component.city_ids.end(), id) - component.city_ids.begin());
    };
    for (const Chain* chain : members[c]) {
      for (std::size_t i = 0; i + 1 < chain->levels.size(); ++i) {
        skeleton.add_edge(city_vertex(chain->levels[i].city_id), city_vertex(chain->levels[i + 1].city_id));
      }
    }
    component.structure = classify_structure(skeleton);
  });

  for (StructureClass value : kAllStructures) result.counts[value] = 0;
  for (const StructureComponent& component : result.components) ++result.counts[component.structure];
  result.total = result.components.size();
  return result;
}

ContingencyTable structure_by_size(std::span<const Chain> chains, const MorphologyCensus& census,
                                   const std::map<std::string, SizeClass>& city_sizes) {
  std::vector<std::string> rows, cols;
  for (StructureClass value : kAllStructures) rows.emplace_back(to_string(value));
  for (SizeClass value : kTabulatedSizeClasses) cols.emplace_back(to_string(value));
  ContingencyTable table = ContingencyTable::zeros(rows, cols);

  std::unordered_map<std::string, StructureClass> structure;
  for (const StructureComponent& component : census.components) {
    for (const std::string& id : component.chain_ids) structure.emplace(id, component.structure);
  }
  for (const Chain& chain : chains) {
    const auto it = structure.find(chain.id);
    if (it == structure.end()) throw Error(ErrorKind::InvalidArgument, "chain '" + chain.id + "' is not in the census");
    const auto size = city_sizes.find(chain.n1().city_id);
    if (size == city_sizes.end()) {
      throw Error(ErrorKind::DanglingReference, "no size class for city '" + chain.n1().city_id + "'");
    }
    if (size->second == SizeClass::Unclassified) continue;
    ++table.counts[static_cast<std::size_t>(it->second)][static_cast<std::size_t>(size->second)];
  }
  return table;
}

}  // namespace chainscope
