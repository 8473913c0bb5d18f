#include "chainscope/citygraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <tuple>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "chainscope/csv.hpp"

namespace chainscope {

CityGraph::CityGraph(std::vector<CityNode> nodes, std::vector<CityEdge> edges,
                     std::optional<Region> orientation_filter)
    : nodes_(std::move(nodes)), orientation_filter_(orientation_filter) {
  std::sort(nodes_.begin(), nodes_.end(), [](const CityNode& a, const CityNode& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].id == nodes_[i - 1].id) {
      throw Error(ErrorKind::InvalidArgument, "duplicate city node '" + nodes_[i].id + "'");
    }
  }
  std::map<std::pair<std::string, std::string>, CityEdge> folded;
  for (CityEdge& edge : edges) {
    if (edge.from == edge.to) throw Error(ErrorKind::InvalidArgument, "self-loop on city '" + edge.from + "'");
    if (!node_index(edge.from) || !node_index(edge.to)) {
      throw Error(ErrorKind::InvalidArgument, "edge '" + edge.from + "' -> '" + edge.to + "' has an unknown endpoint");
    }
    if (edge.multiplicity < 1) throw Error(ErrorKind::InvalidArgument, "edge multiplicity must be positive");
    auto [it, inserted] = folded.try_emplace({edge.from, edge.to}, edge);
    if (!inserted) {
      it->second.multiplicity += edge.multiplicity;
      it->second.revenue += edge.revenue;
    }
  }
  edges_.reserve(folded.size());
  for (auto& [key, edge] : folded) edges_.push_back(std::move(edge));
}

std::optional<std::size_t> CityGraph::node_index(std::string_view id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                   [](const CityNode& node, std::string_view key) { return node.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::int64_t CityGraph::total_multiplicity() const noexcept {
  std::int64_t total = 0;
  for (const CityEdge& edge : edges_) total += edge.multiplicity;
  return total;
}

CityGraph CityGraph::with_centrality(std::span<const std::int64_t> degree_in,
                                     std::span<const double> betweenness) const {
  if (degree_in.size() != nodes_.size() || betweenness.size() != nodes_.size()) {
    throw Error(ErrorKind::InvalidArgument, "centrality vectors must align with graph nodes");
  }
  CityGraph copy = *this;
  for (std::size_t i = 0; i < copy.nodes_.size(); ++i) {
    copy.nodes_[i].degree_in = degree_in[i];
    copy.nodes_[i].betweenness = betweenness[i];
  }
  return copy;
}

CityGraph build_graph(std::span<const Chain> chains, const Dataset& dataset,
                      const GraphBuildOptions& options) {
  std::vector<const Chain*> retained;
  for (const Chain& chain : chains) {
    if (options.orientation) {
      if (chain.orientation != options.orientation) continue;
    } else if (!chain.has_terminal() && !options.include_degenerate) {
      continue;
    }
    retained.push_back(&chain);
  }
  // Canonical accumulation order keeps the floating sums independent of input order.
  static const std::string empty;
  auto key = [](const Chain* chain) {
    return std::tie(chain->n().firm_id, chain->n1().firm_id,
                    chain->has_terminal() ? chain->n2().firm_id : empty);
  };
  std::sort(retained.begin(), retained.end(), [&](const Chain* a, const Chain* b) { return key(a) < key(b); });

  std::map<std::string, CityNode> nodes;
  std::vector<CityEdge> edges;
  auto touch = [&](const std::string& city_id) -> CityNode& {
    auto [it, inserted] = nodes.try_emplace(city_id);
    if (inserted) {
      const City& city = dataset.city(city_id);
      it->second = {city.id, city.name, city.size_class, dataset.region_of_city(city), 0.0, {}, {}};
    }
    return it->second;
  };
  for (const Chain* chain : retained) {
    for (const ChainLevel& level : chain->levels) touch(level.city_id);
    touch(chain->n1().city_id).revenue += chain->attributable_revenue;
    for (std::size_t i = 0; i + 1 < chain->levels.size(); ++i) {
      edges.push_back({chain->levels[i].city_id, chain->levels[i + 1].city_id, 1, chain->attributable_revenue});
    }
  }
  std::vector<CityNode> node_list;
  node_list.reserve(nodes.size());
  for (auto& [id, node] : nodes) node_list.push_back(std::move(node));
  return CityGraph(std::move(node_list), std::move(edges), options.orientation);
}

std::optional<GraphFormat> parse_graph_format(std::string_view text) {
  if (text == "graphml") return GraphFormat::GraphMl;
  if (text == "dot") return GraphFormat::Dot;
  if (text == "edgelist") return GraphFormat::EdgeList;
  return std::nullopt;
}

std::optional<GraphFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".graphml" || ext == ".xml") return GraphFormat::GraphMl;
  if (ext == ".dot" || ext == ".gv") return GraphFormat::Dot;
  if (ext == ".csv" || ext == ".edgelist" || ext == ".txt") return GraphFormat::EdgeList;
  return std::nullopt;
}

namespace {

std::string filter_label(std::optional<Region> filter) {
  return filter ? std::string(to_string(*filter)) : "ALL";
}

std::optional<Region> parse_filter_label(const std::string& text) {
  if (text == "ALL" || text.empty()) return std::nullopt;
  auto region = parse_region(text);
  if (!region) throw Error(ErrorKind::ParseError, "unknown orientation filter '" + text + "'");
  return region;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Node attribute list shared by every format, in a fixed order.
std::vector<std::pair<std::string, std::string>> node_attributes(const CityNode& node) {
  std::vector<std::pair<std::string, std::string>> attributes{
      {"name", node.name},
      {"size_class", std::string(to_string(node.size_class))},
      {"region", std::string(to_string(node.region))},
      {"revenue", csv::format_double(node.revenue)},
  };
  if (node.degree_in) attributes.emplace_back("degree_in", std::to_string(*node.degree_in));
  if (node.betweenness) attributes.emplace_back("betweenness", csv::format_double(*node.betweenness));
  return attributes;
}

double to_double(const std::string& text, const char* what) {
  double value = 0.0;
  if (!csv::parse_double(text, value)) throw Error(ErrorKind::ParseError, std::string("bad ") + what + " '" + text + "'");
  return value;
}

std::int64_t to_int(const std::string& text, const char* what) {
  long long value = 0;
  if (!csv::parse_int(text, value)) throw Error(ErrorKind::ParseError, std::string("bad ") + what + " '" + text + "'");
  return value;
}

void set_node_attribute(CityNode& node, const std::string& key, const std::string& value) {
  if (key == "name") {
    node.name = value;
  } else if (key == "size_class") {
    auto parsed = parse_size_class(value);
    if (!parsed) throw Error(ErrorKind::ParseError, "bad size_class '" + value + "'");
    node.size_class = *parsed;
  } else if (key == "region") {
    auto parsed = parse_region(value);
    if (!parsed) throw Error(ErrorKind::ParseError, "bad region '" + value + "'");
    node.region = *parsed;
  } else if (key == "revenue") {
    node.revenue = to_double(value, "revenue");
  } else if (key == "degree_in") {
    node.degree_in = to_int(value, "degree_in");
  } else if (key == "betweenness") {
    node.betweenness = to_double(value, "betweenness");
  }
}

void set_edge_attribute(CityEdge& edge, const std::string& key, const std::string& value) {
  if (key == "multiplicity") edge.multiplicity = to_int(value, "multiplicity");
  if (key == "revenue") edge.revenue = to_double(value, "revenue");
}

std::string export_graphml(const CityGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"orientation\" for=\"graph\" attr.name=\"orientation\" attr.type=\"string\"/>\n"
      << "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
      << "  <key id=\"size_class\" for=\"node\" attr.name=\"size_class\" attr.type=\"string\"/>\n"
      << "  <key id=\"region\" for=\"node\" attr.name=\"region\" attr.type=\"string\"/>\n"
      << "  <key id=\"revenue\" for=\"node\" attr.name=\"revenue\" attr.type=\"double\"/>\n"
      << "  <key id=\"degree_in\" for=\"node\" attr.name=\"degree_in\" attr.type=\"long\"/>\n"
      << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n"
      << "  <key id=\"multiplicity\" for=\"edge\" attr.name=\"multiplicity\" attr.type=\"long\"/>\n"
      << "  <key id=\"edge_revenue\" for=\"edge\" attr.name=\"revenue\" attr.type=\"double\"/>\n"
      << "  <graph id=\"chainscope\" edgedefault=\"directed\">\n"
      << "    <data key=\"orientation\">" << filter_label(graph.orientation_filter()) << "</data>\n";
  for (const CityNode& node : graph.nodes()) {
    out << "    <node id=\"" << xml_escape(node.id) << "\">";
    for (const auto& [key, value] : node_attributes(node)) {
      out << "<data key=\"" << key << "\">" << xml_escape(value) << "</data>";
    }
    out << "</node>\n";
  }
  for (const CityEdge& edge : graph.edges()) {
    out << "    <edge source=\"" << xml_escape(edge.from) << "\" target=\"" << xml_escape(edge.to)
        << "\"><data key=\"multiplicity\">" << edge.multiplicity
        << "</data><data key=\"edge_revenue\">" << csv::format_double(edge.revenue) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string export_dot(const CityGraph& graph) {
  std::ostringstream out;
  out << "digraph chainscope {\n";
  out << "  graph [filter=" << dot_quote(filter_label(graph.orientation_filter())) << "];\n";
  for (const CityNode& node : graph.nodes()) {
    out << "  " << dot_quote(node.id) << " [";
    bool first = true;
    for (const auto& [key, value] : node_attributes(node)) {
      out << (first ? "" : ", ") << key << "=" << dot_quote(value);
      first = false;
    }
    out << "];\n";
  }
  for (const CityEdge& edge : graph.edges()) {
    out << "  " << dot_quote(edge.from) << " -> " << dot_quote(edge.to)
        << " [multiplicity=" << dot_quote(std::to_string(edge.multiplicity))
        << ", revenue=" << dot_quote(csv::format_double(edge.revenue)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_edgelist(const CityGraph& graph) {
  std::ostringstream out;
  out << "# " << csv::escape_field("filter") << "," << filter_label(graph.orientation_filter()) << '\n';
  for (const CityNode& node : graph.nodes()) {
    std::ostringstream row;
    csv::Row fields{"node", node.id};
    for (const auto& [key, value] : node_attributes(node)) fields.push_back(key + "=" + value);
    csv::write_row(row, fields);
    out << "# " << row.str();
  }
  csv::write_row(out, {"source", "target", "multiplicity", "revenue_eur"});
  for (const CityEdge& edge : graph.edges()) {
    csv::write_row(out, {edge.from, edge.to, std::to_string(edge.multiplicity), csv::format_double(edge.revenue)});
  }
  return out.str();
}

CityGraph import_graphml(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& error) {
    throw Error(ErrorKind::ParseError, std::string("graphml: ") + error.what());
  }
  const auto graph_node = tree.get_child_optional("graphml.graph");
  if (!graph_node) throw Error(ErrorKind::ParseError, "graphml: missing <graph> element");
  std::vector<CityNode> nodes;
  std::vector<CityEdge> edges;
  std::optional<Region> filter;
  try {
    for (const auto& [tag, child] : *graph_node) {
      if (tag == "data" && child.get<std::string>("<xmlattr>.key", "") == "orientation") {
        filter = parse_filter_label(child.get_value<std::string>());
      } else if (tag == "node") {
        CityNode node;
        node.id = child.get<std::string>("<xmlattr>.id");
        for (const auto& [data_tag, data] : child) {
          if (data_tag == "data") set_node_attribute(node, data.get<std::string>("<xmlattr>.key"), data.get_value<std::string>());
        }
        nodes.push_back(std::move(node));
      } else if (tag == "edge") {
        CityEdge edge{child.get<std::string>("<xmlattr>.source"), child.get<std::string>("<xmlattr>.target"), 1, 0.0};
        for (const auto& [data_tag, data] : child) {
          if (data_tag != "data") continue;
          std::string key = data.get<std::string>("<xmlattr>.key");
          if (key == "edge_revenue") key = "revenue";
          set_edge_attribute(edge, key, data.get_value<std::string>());
        }
        edges.push_back(std::move(edge));
      }
    }
  } catch (const pt::ptree_error& error) {
    throw Error(ErrorKind::ParseError, std::string("graphml: ") + error.what());
  }
  return CityGraph(std::move(nodes), std::move(edges), filter);
}

std::string dot_unquote(std::string_view quoted) {
  std::string out;
  for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
    if (quoted[i] == '\\' && i + 2 < quoted.size()) {
      ++i;
      out.push_back(quoted[i] == 'n' ? '\n' : quoted[i]);
    } else {
      out.push_back(quoted[i]);
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> dot_attributes(const std::string& list) {
  static const std::regex attribute(R"re((\w+)\s*=\s*("(?:[^"\\]|\\.)*"|[^,\s\]]+))re");
  std::vector<std::pair<std::string, std::string>> result;
  for (auto it = std::sregex_iterator(list.begin(), list.end(), attribute); it != std::sregex_iterator(); ++it) {
    std::string value = (*it)[2].str();
    if (!value.empty() && value.front() == '"') value = dot_unquote(value);
    result.emplace_back((*it)[1].str(), std::move(value));
  }
  return result;
}

CityGraph import_dot(std::string_view text) {
  static const std::string quoted = R"re("(?:[^"\\]|\\.)*")re";
  static const std::regex edge_line("^\\s*(" + quoted + ")\\s*->\\s*(" + quoted + ")\\s*(?:\\[(.*)\\])?\\s*;?\\s*$");
  static const std::regex node_line("^\\s*(" + quoted + ")\\s*(?:\\[(.*)\\])?\\s*;?\\s*$");
  static const std::regex graph_line(R"re(^\s*graph\s*\[(.*)\]\s*;?\s*$)re");
  std::vector<CityNode> nodes;
  std::vector<CityEdge> edges;
  std::optional<Region> filter;
  std::istringstream in{std::string(text)};
  std::string line;
  bool opened = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch match;
    if (!opened) {
      if (line.find("digraph") != std::string::npos) opened = true;
      continue;
    }
    if (std::regex_match(line, match, edge_line)) {
      CityEdge edge{dot_unquote(match[1].str()), dot_unquote(match[2].str()), 1, 0.0};
      for (const auto& [key, value] : dot_attributes(match[3].str())) set_edge_attribute(edge, key, value);
      edges.push_back(std::move(edge));
    } else if (std::regex_match(line, match, node_line)) {
      CityNode node;
      node.id = dot_unquote(match[1].str());
      for (const auto& [key, value] : dot_attributes(match[2].str())) set_node_attribute(node, key, value);
      nodes.push_back(std::move(node));
    } else if (std::regex_match(line, match, graph_line)) {
      for (const auto& [key, value] : dot_attributes(match[1].str())) {
        if (key == "filter") filter = parse_filter_label(value);
      }
    }
  }
  if (!opened) throw Error(ErrorKind::ParseError, "dot: missing digraph header");
  return CityGraph(std::move(nodes), std::move(edges), filter);
}

CityGraph import_edgelist(std::string_view text) {
  const csv::Table table = csv::parse(text);
  std::vector<CityNode> nodes;
  std::map<std::string, bool> known;
  std::optional<Region> filter;
  for (const std::string& comment : table.comments) {
    const csv::Row fields = csv::parse(comment).header;
    if (fields.size() == 2 && fields[0] == "filter") {
      filter = parse_filter_label(fields[1]);
    } else if (fields.size() >= 2 && fields[0] == "node") {
      CityNode node;
      node.id = fields[1];
      for (std::size_t i = 2; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string::npos) continue;
        set_node_attribute(node, fields[i].substr(0, eq), fields[i].substr(eq + 1));
      }
      known[node.id] = true;
      nodes.push_back(std::move(node));
    }
  }
  if (table.header != csv::Row{"source", "target", "multiplicity", "revenue_eur"}) {
    throw Error(ErrorKind::ParseError, "edgelist: unexpected header");
  }
  std::vector<CityEdge> edges;
  for (const auto& row : table.rows) {
    if (row.size() != 4) throw Error(ErrorKind::ParseError, "edgelist: expected 4 fields");
    CityEdge edge{row[0], row[1], to_int(row[2], "multiplicity"), to_double(row[3], "revenue")};
    for (const std::string* id : {&edge.from, &edge.to}) {
      if (!known[*id]) {
        known[*id] = true;
        nodes.push_back({*id, "", SizeClass::Unclassified, Region::OutsideEurope, 0.0, {}, {}});
      }
    }
    edges.push_back(std::move(edge));
  }
  return CityGraph(std::move(nodes), std::move(edges), filter);
}

}  // namespace

std::string export_graph(const CityGraph& graph, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl: return export_graphml(graph);
    case GraphFormat::Dot: return export_dot(graph);
    case GraphFormat::EdgeList: return export_edgelist(graph);
  }
  throw Error(ErrorKind::UnsupportedFormat, "unknown graph format");
}

void export_graph(const CityGraph& graph, GraphFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << export_graph(graph, format);
}

CityGraph import_graph(std::string_view text, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl: return import_graphml(text);
    case GraphFormat::Dot: return import_dot(text);
    case GraphFormat::EdgeList: return import_edgelist(text);
  }
  throw Error(ErrorKind::UnsupportedFormat, "unknown graph format");
}

CityGraph import_graph(const std::filesystem::path& path) {
  const auto format = format_from_extension(path);
  if (!format) throw Error(ErrorKind::UnsupportedFormat, "cannot infer graph format of " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return import_graph(buffer.str(), *format);
}

}  // namespace chainscope
