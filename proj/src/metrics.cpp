#include "chainscope/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

#include <boost/multiprecision/cpp_int.hpp>

#include "chainscope/csv.hpp"
#include "chainscope/parallel.hpp"

namespace chainscope {

void Digraph::add_arc(std::size_t from, std::size_t to) {
  if (from >= out_.size() || to >= out_.size()) throw Error(ErrorKind::InvalidArgument, "arc endpoint out of range");
  auto& list = out_[from];
  const auto it = std::lower_bound(list.begin(), list.end(), to);
  if (it == list.end() || *it != to) list.insert(it, to);
}

Digraph Digraph::from_city_graph(const CityGraph& graph) {
  Digraph digraph(graph.nodes().size());
  for (const CityEdge& edge : graph.edges()) {
    digraph.add_arc(*graph.node_index(edge.from), *graph.node_index(edge.to));
  }
  return digraph;
}

namespace {

constexpr std::size_t kSourceBlock = 32;

// Single-source dependency accumulation; adds delta(s, v) into `into`.
void accumulate_from(const Digraph& graph, std::size_t source, std::vector<double>& into,
                     std::vector<std::size_t>& order, std::vector<std::vector<std::size_t>>& predecessors,
                     std::vector<double>& sigma, std::vector<long>& distance, std::vector<double>& delta) {
  const std::size_t n = graph.size();
  order.clear();
  for (std::size_t v = 0; v < n; ++v) predecessors[v].clear();
  std::fill(sigma.begin(), sigma.end(), 0.0);
  std::fill(distance.begin(), distance.end(), -1);
  std::fill(delta.begin(), delta.end(), 0.0);
  sigma[source] = 1.0;
  distance[source] = 0;
  std::queue<std::size_t> queue;
  queue.push(source);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    order.push_back(v);
    for (std::size_t w : graph.successors(v)) {
      if (distance[w] < 0) {
        distance[w] = distance[v] + 1;
        queue.push(w);
      }
      if (distance[w] == distance[v] + 1) {
        sigma[w] += sigma[v];
        predecessors[w].push_back(v);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t w = *it;
    for (std::size_t v : predecessors[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    if (w != source) into[w] += delta[w];
  }
}

double normalization(std::size_t n) {
  return n > 2 ? 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2)) : 1.0;
}

}  // namespace

std::vector<double> betweenness(const Digraph& graph, const BetweennessOptions& options) {
  const std::size_t n = graph.size();
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
  parallel_for(blocks, options.workers, [&](std::size_t block) {
    std::vector<std::size_t> order;
    std::vector<std::vector<std::size_t>> predecessors(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<long> distance(n);
    const std::size_t end = std::min(n, (block + 1) * kSourceBlock);
    for (std::size_t s = block * kSourceBlock; s < end; ++s) {
      accumulate_from(graph, s, partial[block], order, predecessors, sigma, distance, delta);
    }
  });
  std::vector<double> result(n, 0.0);
  for (const auto& block : partial) {
    for (std::size_t v = 0; v < n; ++v) result[v] += block[v];
  }
  if (options.normalized) {
    const double scale = normalization(n);
    for (double& value : result) value *= scale;
  }
  return result;
}

std::vector<double> betweenness(const CityGraph& graph, const BetweennessOptions& options) {
  return betweenness(Digraph::from_city_graph(graph), options);
}

std::vector<double> betweenness_oracle(const Digraph& graph) {
  using boost::multiprecision::cpp_rational;
  const std::size_t n = graph.size();
  if (n > kOracleMaxVertices) {
    throw Error(ErrorKind::GraphTooLarge, "oracle supports at most " + std::to_string(kOracleMaxVertices) +
                                              " vertices, got " + std::to_string(n));
  }
  std::vector<cpp_rational> exact(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    // BFS layering from s.
    std::vector<long> layer(n, -1);
    layer[s] = 0;
    std::queue<std::size_t> queue;
    queue.push(s);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      for (std::size_t w : graph.successors(v)) {
        if (layer[w] < 0) {
          layer[w] = layer[v] + 1;
          queue.push(w);
        }
      }
    }
    // Enumerate every shortest path leaving s. A prefix that is not itself a
    // shortest path cannot extend to one, so those branches are cut.
    std::vector<std::uint64_t> paths_to(n, 0);
    std::vector<std::vector<std::uint64_t>> through(n, std::vector<std::uint64_t>(n, 0));
    std::vector<std::size_t> path{s};
    auto visit = [&](auto&& self, std::size_t v) -> void {
      for (std::size_t w : graph.successors(v)) {
        if (layer[w] != static_cast<long>(path.size())) continue;
        path.push_back(w);
        ++paths_to[w];
        for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[w][path[i]];
        self(self, w);
        path.pop_back();
      }
    };
    visit(visit, s);
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || paths_to[t] == 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (through[t][v] != 0) exact[v] += cpp_rational(through[t][v], paths_to[t]);
      }
    }
  }
  std::vector<double> result(n);
  for (std::size_t v = 0; v < n; ++v) result[v] = static_cast<double>(exact[v]);
  return result;
}

std::vector<double> betweenness_oracle(const CityGraph& graph) {
  return betweenness_oracle(Digraph::from_city_graph(graph));
}

std::vector<DegreeCounts> degrees(const CityGraph& graph) {
  std::vector<DegreeCounts> counts(graph.nodes().size());
  for (const CityEdge& edge : graph.edges()) {
    counts[*graph.node_index(edge.from)].degree_out += edge.multiplicity;
    counts[*graph.node_index(edge.to)].degree_in += edge.multiplicity;
  }
  for (auto& count : counts) count.degree = count.degree_in + count.degree_out;
  return counts;
}

CentralityReport compute_centrality(const CityGraph& graph, const BetweennessOptions& options) {
  const auto scores = betweenness(graph, options);
  const auto counts = degrees(graph);
  CentralityReport report;
  report.cities.reserve(graph.nodes().size());
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const CityNode& node = graph.nodes()[i];
    report.cities.push_back({node.id, counts[i].degree, counts[i].degree_in, counts[i].degree_out, scores[i],
                             node.revenue});
  }
  return report;
}

void write_centrality_csv(const CentralityReport& report, const std::filesystem::path& path,
                          const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& comment : header_comments) out << "# " << comment << '\n';
  csv::write_row(out, {"city_id", "degree", "degree_in", "degree_out", "betweenness", "cumulated_revenue_eur"});
  for (const CityCentrality& city : report.cities) {
    csv::write_row(out, {city.city_id, std::to_string(city.degree), std::to_string(city.degree_in),
                         std::to_string(city.degree_out), csv::format_double(city.betweenness),
                         csv::format_double(city.cumulated_revenue)});
  }
}

std::string_view to_string(GatewayRole role) noexcept {
  switch (role) {
    case GatewayRole::Gateway: return "gateway";
    case GatewayRole::ReceiverOnly: return "receiver-only";
    case GatewayRole::None: return "none";
  }
  return "none";
}

std::vector<GatewayEntry> gateway_profile(const CentralityReport& report) {
  std::vector<GatewayEntry> entries;
  entries.reserve(report.cities.size());
  for (const CityCentrality& city : report.cities) {
    GatewayRole role = GatewayRole::None;
    if (city.betweenness > 0.0) {
      role = GatewayRole::Gateway;
    } else if (city.degree_in > 0) {
      role = GatewayRole::ReceiverOnly;
    }
    entries.push_back({city.city_id, city.betweenness, city.degree_in, role});
  }
  std::sort(entries.begin(), entries.end(), [](const GatewayEntry& a, const GatewayEntry& b) {
    if (a.betweenness != b.betweenness) return a.betweenness > b.betweenness;
    if (a.degree_in != b.degree_in) return a.degree_in > b.degree_in;
    return a.city_id < b.city_id;
  });
  return entries;
}

}  // namespace chainscope
