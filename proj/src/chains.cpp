#include "chainscope/chains.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <unordered_map>

#include "chainscope/csv.hpp"
#include "chainscope/parallel.hpp"

namespace chainscope {

namespace {

const csv::Row kChainsHeader{"chain_id",     "n_firm",  "n_city",      "n1_firm",
                             "n1_city",      "n2_firm", "n2_city",     "orientation",
                             "attributable_revenue_eur", "force_n_n1", "force_n1_n2"};

/// Tarjan's strongly connected components, iterative.
std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<std::size_t>>& out) {
  const std::size_t n = out.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t vertex;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      const std::size_t v = frame.vertex;
      if (frame.next_edge < out[v].size()) {
        const std::size_t w = out[v][frame.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        components.push_back(std::move(component));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().vertex;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

std::string chain_id(std::size_t ordinal) {
  std::string digits = std::to_string(ordinal);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "CH" + digits;
}

auto chain_key(const Chain& chain) {
  static const std::string empty;
  return std::tie(chain.n().firm_id, chain.n1().firm_id,
                  chain.has_terminal() ? chain.n2().firm_id : empty);
}

}  // namespace

std::vector<OwnershipLink> filter_transnational(std::span<const OwnershipLink> links,
                                                const Dataset& dataset) {
  std::vector<OwnershipLink> kept;
  for (const OwnershipLink& link : links) {
    if (dataset.city_of_firm(link.owner_firm_id).country !=
        dataset.city_of_firm(link.owned_firm_id).country) {
      kept.push_back(link);
    }
  }
  return kept;
}

ChainSet build_chains(const Dataset& dataset, std::span<const OwnershipLink> links, unsigned workers) {
  // Compact firm indices over the firms touched by links, in id order.
  std::vector<std::string> ids;
  for (const OwnershipLink& link : links) {
    if (dataset.city_of_firm(link.owner_firm_id).country ==
        dataset.city_of_firm(link.owned_firm_id).country) {
      throw Error(ErrorKind::InvalidArgument, "link '" + link.owner_firm_id + "' -> '" +
                                                  link.owned_firm_id +
                                                  "' is domestic; filter transnational links first");
    }
    ids.push_back(link.owner_firm_id);
    ids.push_back(link.owned_firm_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  struct Edge {
    std::size_t to;
    const OwnershipLink* link;
  };
  std::vector<std::vector<Edge>> out(ids.size());
  std::vector<std::vector<std::size_t>> out_vertices(ids.size());
  for (const OwnershipLink& link : links) {
    const std::size_t a = index.at(link.owner_firm_id), b = index.at(link.owned_firm_id);
    out[a].push_back({b, &link});
    out_vertices[a].push_back(b);
  }
  for (auto& edges : out) {
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.to < y.to; });
  }

  ChainSet result;
  std::vector<bool> cyclic(ids.size(), false);
  for (auto& component : strongly_connected(out_vertices)) {
    if (component.size() < 2) continue;
    OwnershipCycle cycle;
    for (std::size_t v : component) {
      cyclic[v] = true;
      cycle.firm_ids.push_back(ids[v]);
    }
    std::sort(cycle.firm_ids.begin(), cycle.firm_ids.end());
    result.cycles.push_back(std::move(cycle));
  }
  std::sort(result.cycles.begin(), result.cycles.end(),
            [](const OwnershipCycle& x, const OwnershipCycle& y) { return x.firm_ids < y.firm_ids; });

  std::vector<const Firm*> firm(ids.size());
  std::vector<const City*> city(ids.size());
  std::vector<bool> in_cee(ids.size());
  std::vector<bool> has_onward(ids.size(), false), has_inbound(ids.size(), false);
  for (std::size_t v = 0; v < ids.size(); ++v) {
    firm[v] = &dataset.firm(ids[v]);
    city[v] = &dataset.city(firm[v]->city_id);
    in_cee[v] = dataset.region_of_city(*city[v]) == Region::Cee;
  }
  for (std::size_t a = 0; a < ids.size(); ++a) {
    if (cyclic[a]) continue;
    for (const Edge& edge : out[a]) {
      if (cyclic[edge.to]) continue;
      has_onward[a] = true;
      has_inbound[edge.to] = true;
    }
  }

  auto level = [&](std::size_t v) {
    return ChainLevel{ids[v], city[v]->id, city[v]->country};
  };

  std::vector<std::vector<Chain>> per_root(ids.size());
  parallel_for(ids.size(), workers, [&](std::size_t a) {
    if (cyclic[a]) return;
    for (const Edge& first : out[a]) {
      const std::size_t b = first.to;
      if (cyclic[b] || !in_cee[b]) continue;
      const double revenue = first.link->participation_rate * firm[b]->turnover;
      if (!has_onward[b]) {
        // Covered as the second edge of some x -> a -> b window already?
        if (in_cee[a] && has_inbound[a]) continue;
        per_root[a].push_back({"", {level(a), level(b)}, {first.link->force}, std::nullopt, revenue});
        continue;
      }
      for (const Edge& second : out[b]) {
        const std::size_t c = second.to;
        if (cyclic[c]) continue;
        Chain chain{"",
                    {level(a), level(b), level(c)},
                    {first.link->force, second.link->force},
                    classify_region(city[c]->country, dataset.taxonomy()),
                    revenue};
        per_root[a].push_back(std::move(chain));
      }
    }
  });

  for (auto& chains : per_root) {
    std::move(chains.begin(), chains.end(), std::back_inserter(result.chains));
  }
  std::sort(result.chains.begin(), result.chains.end(),
            [](const Chain& x, const Chain& y) { return chain_key(x) < chain_key(y); });
  for (std::size_t i = 0; i < result.chains.size(); ++i) result.chains[i].id = chain_id(i + 1);
  return result;
}

ChainSet build_chains(const Dataset& dataset, unsigned workers) {
  const auto links = filter_transnational(dataset.links(), dataset);
  return build_chains(dataset, links, workers);
}

Region classify_orientation(const Chain& chain, const RegionTaxonomy& taxonomy) {
  if (!chain.has_terminal()) {
    throw Error(ErrorKind::MissingTerminal, "chain '" + chain.id + "' has no N-2 level");
  }
  return classify_region(chain.n2().country, taxonomy);
}

std::map<Region, double> orientation_shares(std::span<const Chain> chains) {
  std::map<Region, std::size_t> counts;
  std::size_t total = 0;
  for (const Chain& chain : chains) {
    if (!chain.orientation) continue;
    ++counts[*chain.orientation];
    ++total;
  }
  if (total == 0) throw Error(ErrorKind::EmptyInput, "no chain with a defined orientation");
  std::map<Region, double> shares;
  for (Region region : kAllRegions) {
    shares[region] = static_cast<double>(counts[region]) / static_cast<double>(total);
  }
  return shares;
}

std::vector<AggregatedChainGroup> aggregate_by_n1(std::span<const Chain> chains) {
  std::map<std::string, AggregatedChainGroup> groups;
  for (const Chain& chain : chains) {
    auto& group = groups[chain.n1().city_id];
    group.n1_city_id = chain.n1().city_id;
    group.chain_ids.push_back(chain.id);
    group.total_fdi_revenue += chain.attributable_revenue;
    if (chain.orientation) ++group.orientations[*chain.orientation];
  }
  std::vector<AggregatedChainGroup> result;
  result.reserve(groups.size());
  for (auto& [city, group] : groups) result.push_back(std::move(group));
  return result;
}

void write_chains_csv(std::span<const Chain> chains, const std::filesystem::path& path,
                      const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& comment : header_comments) out << "# " << comment << '\n';
  csv::write_row(out, kChainsHeader);
  for (const Chain& chain : chains) {
    const bool full = chain.has_terminal();
    csv::write_row(out, {chain.id, chain.n().firm_id, chain.n().city_id, chain.n1().firm_id,
                         chain.n1().city_id, full ? chain.n2().firm_id : "",
                         full ? chain.n2().city_id : "",
                         chain.orientation ? std::string(to_string(*chain.orientation)) : "",
                         csv::format_double(chain.attributable_revenue),
                         csv::format_double(chain.link_forces.at(0)),
                         full ? csv::format_double(chain.link_forces.at(1)) : ""});
  }
}

std::vector<Chain> read_chains_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  if (table.header != kChainsHeader) {
    throw Error(ErrorKind::SchemaError, path.string() + ": unexpected chains header");
  }
  std::vector<Chain> chains;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[i]);
    if (row.size() != kChainsHeader.size()) throw Error(ErrorKind::SchemaError, where + ": wrong field count");
    Chain chain;
    chain.id = row[0];
    chain.levels = {{row[1], row[2], ""}, {row[3], row[4], ""}};
    double value = 0.0;
    auto number = [&](const std::string& text) {
      if (!csv::parse_double(text, value)) throw Error(ErrorKind::SchemaError, where + ": bad number '" + text + "'");
      return value;
    };
    chain.attributable_revenue = number(row[8]);
    chain.link_forces.push_back(number(row[9]));
    if (!row[5].empty()) {
      chain.levels.push_back({row[5], row[6], ""});
      chain.link_forces.push_back(number(row[10]));
      chain.orientation = parse_region(row[7]);
      if (!chain.orientation) throw Error(ErrorKind::SchemaError, where + ": bad orientation '" + row[7] + "'");
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace chainscope
