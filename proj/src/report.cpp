#include "chainscope/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "chainscope/ca.hpp"
#include "chainscope/citygraph.hpp"
#include "chainscope/csv.hpp"
#include "chainscope/metrics.hpp"
#include "chainscope/morphology.hpp"

namespace chainscope {

std::string_view to_string(SectoralMode mode) noexcept {
  return mode == SectoralMode::MonoSectoral ? "MONO-SECTORAL" : "PLURI-SECTORAL";
}

std::vector<CityEconomicProfile> economic_profiles(std::span<const Chain> chains, const Dataset& dataset) {
  std::map<std::string, std::set<Sector>> sectors;
  for (const Chain& chain : chains) {
    if (!chain.has_terminal()) continue;
    sectors[chain.n2().city_id].insert(dataset.firm(chain.n2().firm_id).sector);
  }
  std::vector<CityEconomicProfile> profiles;
  for (auto& [city, set] : sectors) {
    const SectoralMode mode = set.size() == 1 ? SectoralMode::MonoSectoral : SectoralMode::PluriSectoral;
    profiles.push_back({city, std::move(set), mode});
  }
  return profiles;
}

std::map<std::string, SizeClass> city_sizes(std::span<const City> cities) {
  std::map<std::string, SizeClass> sizes;
  for (const City& city : cities) sizes.emplace(city.id, city.size_class);
  return sizes;
}

namespace {

std::vector<std::string> size_labels() {
  std::vector<std::string> labels;
  for (SizeClass value : kTabulatedSizeClasses) labels.emplace_back(to_string(value));
  return labels;
}

// Table-1 column order.
constexpr std::array<Region, 4> kOrientationColumns{Region::EuNonCee, Region::Cee, Region::PostCommunist,
                                                    Region::OutsideEurope};

std::size_t orientation_column(Region region) {
  return static_cast<std::size_t>(std::find(kOrientationColumns.begin(), kOrientationColumns.end(), region) -
                                  kOrientationColumns.begin());
}

SizeClass size_of(const std::map<std::string, SizeClass>& sizes, const std::string& city) {
  const auto it = sizes.find(city);
  if (it == sizes.end()) throw Error(ErrorKind::DanglingReference, "no size class for city '" + city + "'");
  return it->second;
}

}  // namespace

ContingencyTable orientation_size_table(std::span<const Chain> chains,
                                        const std::map<std::string, SizeClass>& sizes) {
  std::vector<std::string> cols;
  for (Region region : kOrientationColumns) cols.emplace_back(short_code(region));
  ContingencyTable table = ContingencyTable::zeros(size_labels(), cols);
  for (const Chain& chain : chains) {
    if (!chain.orientation) continue;
    const SizeClass size = size_of(sizes, chain.n1().city_id);
    if (size == SizeClass::Unclassified) continue;
    ++table.counts[static_cast<std::size_t>(size)][orientation_column(*chain.orientation)];
  }
  return table;
}

ContingencyTable sector_size_table(std::span<const Chain> chains, const Dataset& dataset) {
  std::vector<std::string> rows;
  for (Sector sector : kAllSectors) rows.emplace_back(to_string(sector));
  ContingencyTable table = ContingencyTable::zeros(rows, size_labels());
  for (const Chain& chain : chains) {
    if (!chain.orientation) continue;
    const SizeClass size = dataset.city(chain.n2().city_id).size_class;
    if (size == SizeClass::Unclassified) continue;
    const Sector sector = dataset.firm(chain.n2().firm_id).sector;
    ++table.counts[static_cast<std::size_t>(sector)][static_cast<std::size_t>(size)];
  }
  return table;
}

ContingencyTable sectoral_mode_table(std::span<const CityEconomicProfile> profiles,
                                     const std::map<std::string, SizeClass>& sizes) {
  ContingencyTable table = ContingencyTable::zeros(
      {std::string(to_string(SectoralMode::MonoSectoral)), std::string(to_string(SectoralMode::PluriSectoral))},
      size_labels());
  for (const CityEconomicProfile& profile : profiles) {
    const SizeClass size = size_of(sizes, profile.city_id);
    if (size == SizeClass::Unclassified) continue;
    ++table.counts[profile.mode == SectoralMode::MonoSectoral ? 0 : 1][static_cast<std::size_t>(size)];
  }
  return table;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  std::string out(text.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  std::string lower = value;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "yes" || lower == "1") return true;
  if (lower == "false" || lower == "no" || lower == "0") return false;
  throw Error(ErrorKind::SchemaError, "config key '" + key + "' expects a boolean, got '" + value + "'");
}

std::size_t parse_count(const std::string& value, const std::string& key) {
  long long parsed = 0;
  if (!csv::parse_int(value, parsed) || parsed < 0) {
    throw Error(ErrorKind::SchemaError, "config key '" + key + "' expects a non-negative integer");
  }
  return static_cast<std::size_t>(parsed);
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
  };
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#' || stripped.front() == '[') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::SchemaError, path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    seen.insert(key);
    if (key == "cities") {
      config.inputs.cities = resolve(value);
    } else if (key == "firms") {
      config.inputs.firms = resolve(value);
    } else if (key == "links") {
      config.inputs.links = resolve(value);
    } else if (key == "regions") {
      config.inputs.regions = resolve(value);
    } else if (key == "sectors") {
      config.inputs.sectors = resolve(value);
    } else if (key == "input_dir") {
      config.inputs = DatasetPaths::in_directory(resolve(value));
      for (const char* k : {"cities", "firms", "links", "regions", "sectors"}) seen.insert(k);
    } else if (key == "force_mode") {
      const auto mode = parse_force_mode(value);
      if (!mode) throw Error(ErrorKind::SchemaError, "force_mode must be literal_ab_ratio or product");
      config.force_mode = *mode;
    } else if (key == "percent_input") {
      config.percent_input = parse_bool(value, key);
    } else if (key == "orientations") {
      config.orientations.clear();
      std::stringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        const auto region = parse_orientation(trim(item));
        if (!region) throw Error(ErrorKind::SchemaError, "unknown orientation '" + trim(item) + "'");
        if (std::find(config.orientations.begin(), config.orientations.end(), *region) == config.orientations.end()) {
          config.orientations.push_back(*region);
        }
      }
      std::sort(config.orientations.begin(), config.orientations.end());
    } else if (key == "ca_axes") {
      config.ca_axes = parse_count(value, key);
    } else if (key == "workers") {
      config.workers = static_cast<unsigned>(parse_count(value, key));
    } else if (key == "timestamp") {
      config.timestamp = value;
    } else {
      throw Error(ErrorKind::SchemaError, path.string() + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
  }
  for (const char* key : {"cities", "firms", "links", "regions", "sectors"}) {
    if (!seen.contains(key)) throw Error(ErrorKind::SchemaError, "config is missing input path '" + std::string(key) + "'");
  }
  return config;
}

// ---------------------------------------------------------------------------
// Digests

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

// Unreadable inputs are a stage failure, not a data validation failure.
bool is_validation_failure(const Error& cause) {
  const auto* validation = dynamic_cast<const ValidationError*>(&cause);
  if (validation == nullptr) return false;
  return std::none_of(validation->issues().begin(), validation->issues().end(),
                      [](const ValidationIssue& issue) { return issue.kind == ErrorKind::IoError; });
}

}  // namespace

PipelineError::PipelineError(std::string stage, const Error& cause)
    : Error(cause.kind(), "stage '" + stage + "': " + cause.what()),
      stage_(std::move(stage)),
      validation_(is_validation_failure(cause)) {}

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& error) {
    throw PipelineError(name, error);
  } catch (const std::exception& error) {
    throw PipelineError(name, Error(ErrorKind::IoError, error.what()));
  }
}

class BundleWriter {
 public:
  BundleWriter(std::filesystem::path dir, std::string digest, ForceMode mode)
      : dir_(std::move(dir)), digest_(std::move(digest)), mode_(mode) {}

  std::filesystem::path path(const std::string& name) {
    files_.emplace_back(name);
    return dir_ / name;
  }

  std::vector<std::string> comments(std::initializer_list<std::string> extra = {}) const {
    std::vector<std::string> lines{"chainscope " + std::string(kVersion),
                                   "manifest_sha256=" + digest_,
                                   "force_mode=" + std::string(to_string(mode_))};
    lines.insert(lines.end(), extra.begin(), extra.end());
    return lines;
  }

  void json(const std::string& name, nlohmann::json document) {
    document["manifest_sha256"] = digest_;
    document["force_mode"] = to_string(mode_);
    text(name, document.dump(2) + "\n");
  }

  void text(const std::string& name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + (dir_ / name).string());
    out << content;
  }

  std::vector<std::filesystem::path> files() const {
    auto sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }

 private:
  std::filesystem::path dir_;
  std::string digest_;
  ForceMode mode_;
  std::vector<std::filesystem::path> files_;
};

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

nlohmann::json ca_document(const ContingencyTable& table, std::size_t axes, std::string_view rows,
                           std::string_view cols) {
  nlohmann::json document{{"rows_are", rows}, {"columns_are", cols}};
  try {
    const CAResult result = fit_ca(table);
    const AxisReport report = axis_report(result, std::min(axes, result.axes()));
    document["status"] = result.degenerate ? "degenerate" : "ok";
    document["result"] = to_json(result, report);
  } catch (const Error& error) {
    if (error.kind() != ErrorKind::InsufficientTable && error.kind() != ErrorKind::EmptyInput) throw;
    document["status"] = "insufficient";
    document["reason"] = error.what();
  }
  return document;
}

std::string percent(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f%%", round_one_decimal(100.0 * value));
  return buffer;
}

}  // namespace

BundleSummary run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir) {
  const Dataset dataset = stage("ingest", [&] {
    return load_dataset(config.inputs, LoadOptions{config.percent_input, config.force_mode});
  });

  nlohmann::json manifest = stage("manifest", [&] {
    nlohmann::json inputs;
    const std::pair<const char*, const std::filesystem::path*> files[] = {
        {"cities", &config.inputs.cities}, {"firms", &config.inputs.firms},     {"links", &config.inputs.links},
        {"regions", &config.inputs.regions}, {"sectors", &config.inputs.sectors}};
    for (const auto& [key, file] : files) {
      inputs[key] = {{"file", file->filename().string()}, {"sha256", sha256_file(*file)}};
    }
    nlohmann::json orientations = nlohmann::json::array();
    for (Region region : config.orientations) orientations.push_back(to_string(region));
    return nlohmann::json{
        {"tool", "chainscope"},
        {"version", kVersion},
        {"created", config.timestamp},
        {"inputs", inputs},
        {"configuration",
         {{"force_mode", to_string(config.force_mode)},
          {"percent_input", config.percent_input},
          {"orientations", orientations},
          {"ca_axes", config.ca_axes}}},
    };
  });
  const std::string manifest_text = manifest.dump(2) + "\n";
  const std::string digest = sha256_hex(manifest_text);

  const ChainSet chain_set = stage("chains", [&] { return build_chains(dataset, config.workers); });
  const std::vector<Chain>& chains = chain_set.chains;

  struct NamedGraph {
    std::string name;
    CityGraph graph;
  };
  const std::vector<NamedGraph> graphs = stage("graphs", [&] {
    std::vector<NamedGraph> built{{"all", build_graph(chains, dataset)}};
    for (Region region : config.orientations) {
      built.push_back({lower(short_code(region)), build_graph(chains, dataset, {region, false})});
    }
    return built;
  });

  const CentralityReport centrality = stage("metrics", [&] {
    return compute_centrality(graphs.front().graph, {false, config.workers});
  });

  const MorphologyCensus morphology = stage("morphology", [&] { return census(chains, config.workers); });
  const auto sizes = city_sizes(dataset.cities());

  std::filesystem::create_directories(out_dir);
  BundleWriter bundle(out_dir, digest, config.force_mode);
  stage("write", [&] { bundle.text("manifest.json", manifest_text); });

  stage("write", [&] {
    write_chains_csv(chains, bundle.path("chains.csv"), bundle.comments());
    std::ofstream groups(bundle.path("chain_groups.csv"), std::ios::binary | std::ios::trunc);
    for (const auto& line : bundle.comments()) groups << "# " << line << '\n';
    csv::Row header{"n1_city", "chains", "total_fdi_revenue_eur"};
    for (Region region : kAllRegions) header.push_back("orientation_" + lower(short_code(region)));
    csv::write_row(groups, header);
    for (const auto& group : aggregate_by_n1(chains)) {
      csv::Row row{group.n1_city_id, std::to_string(group.chain_ids.size()),
                   csv::format_double(group.total_fdi_revenue)};
      for (Region region : kAllRegions) {
        const auto it = group.orientations.find(region);
        row.push_back(std::to_string(it == group.orientations.end() ? 0 : it->second));
      }
      csv::write_row(groups, row);
    }
  });

  stage("graphs", [&] {
    for (const auto& [name, graph] : graphs) {
      CityGraph annotated = graph;
      if (name == "all") {
        std::vector<std::int64_t> degree_in;
        std::vector<double> scores;
        for (const auto& city : centrality.cities) {
          degree_in.push_back(city.degree_in);
          scores.push_back(city.betweenness);
        }
        annotated = graph.with_centrality(degree_in, scores);
      }
      std::string xml = export_graph(annotated, GraphFormat::GraphMl);
      xml.insert(xml.find('\n') + 1, "<!-- manifest_sha256=" + digest + " -->\n");
      bundle.text("graph_" + name + ".graphml", xml);
    }
  });

  stage("metrics", [&] { write_centrality_csv(centrality, bundle.path("centrality.csv"), bundle.comments()); });

  stage("morphology", [&] {
    nlohmann::json counts;
    for (const auto& [structure, count] : morphology.counts) counts[std::string(to_string(structure))] = count;
    nlohmann::json components = nlohmann::json::array();
    for (const auto& component : morphology.components) {
      components.push_back({{"structure", to_string(component.structure)},
                            {"firms", component.firm_ids},
                            {"cities", component.city_ids},
                            {"chains", component.chain_ids}});
    }
    bundle.json("census.json", {{"counts", counts}, {"total", morphology.total}, {"components", components}});
  });

  stage("ca", [&] {
    std::vector<std::pair<std::string, std::string>> orientation_obs, structure_obs, sector_obs;
    for (const Chain& chain : chains) {
      const auto structure = morphology.structure_of_chain(chain.id);
      structure_obs.emplace_back(chain.n1().city_id, std::string(to_string(*structure)));
      if (!chain.orientation) continue;
      orientation_obs.emplace_back(chain.n1().city_id, std::string(short_code(*chain.orientation)));
      sector_obs.emplace_back(chain.n1().city_id, std::string(to_string(dataset.firm(chain.n2().firm_id).sector)));
    }
    std::vector<std::string> orientation_cols, structure_cols, sector_cols;
    for (Region region : kOrientationColumns) orientation_cols.emplace_back(short_code(region));
    for (StructureClass value : kAllStructures) structure_cols.emplace_back(to_string(value));
    for (Sector sector : kAllSectors) sector_cols.emplace_back(to_string(sector));
    auto fit = [&](const std::string& name, const auto& observations, const std::vector<std::string>& cols,
                   std::string_view col_kind) {
      nlohmann::json document;
      if (observations.empty()) {
        document = {{"status", "insufficient"}, {"reason", "no observations"}};
      } else {
        document = ca_document(cross_tab(observations, std::nullopt, cols), config.ca_axes, "n1_city", col_kind);
      }
      bundle.json(name, document);
    };
    fit("ca_orientation.json", orientation_obs, orientation_cols, "n2_orientation");
    fit("ca_structure.json", structure_obs, structure_cols, "structure_class");
    fit("ca_sector.json", sector_obs, sector_cols, "n2_sector");
  });

  const auto profiles = economic_profiles(chains, dataset);
  stage("tables", [&] {
    write_contingency_table(
        orientation_size_table(chains, sizes), bundle.path("table1_orientation_size.csv"), "n1_size_class",
        bundle.comments({"counts chain instances grouped by the N-1 city's size class and the N-2 orientation"}));
    write_percent_table(structure_by_size(chains, morphology, sizes), bundle.path("table2_structure_size.csv"),
                        "structure",
                        bundle.comments({"row percentages of chains by structure class and N-1 city size class"}));
    ContingencyTable sectors = sector_size_table(chains, dataset);
    const ContingencyTable modes = sectoral_mode_table(profiles, sizes);
    sectors.row_labels.insert(sectors.row_labels.end(), modes.row_labels.begin(), modes.row_labels.end());
    sectors.counts.insert(sectors.counts.end(), modes.counts.begin(), modes.counts.end());
    write_percent_table(sectors, bundle.path("table3_sector_size.csv"), "n2_sector",
                        bundle.comments({"sector rows: chains by N-2 firm sector and N-2 city size class",
                                         "mode rows: cities hosting N-2 firms, mono- or pluri-sectoral"}));
  });

  stage("summary", [&] {
    nlohmann::json shares_json;
    std::map<Region, double> shares;
    try {
      shares = orientation_shares(chains);
    } catch (const Error& error) {
      if (error.kind() != ErrorKind::EmptyInput) throw;
    }
    for (const auto& [region, share] : shares) shares_json[std::string(to_string(region))] = share;
    nlohmann::json graphs_json;
    for (const auto& [name, graph] : graphs) {
      graphs_json[name] = {{"nodes", graph.nodes().size()},
                           {"edges", graph.edges().size()},
                           {"links", graph.total_multiplicity()}};
    }
    nlohmann::json gateways = nlohmann::json::array();
    for (const auto& entry : gateway_profile(centrality)) {
      gateways.push_back({{"city", entry.city_id},
                          {"betweenness", entry.betweenness},
                          {"degree_in", entry.degree_in},
                          {"role", to_string(entry.role)}});
    }
    nlohmann::json cycles = nlohmann::json::array();
    for (const auto& cycle : chain_set.cycles) cycles.push_back(cycle.firm_ids);
    const auto degenerate = std::count_if(chains.begin(), chains.end(), [](const Chain& c) { return !c.has_terminal(); });
    bundle.json("summary.json", {{"chains", chains.size()},
                                 {"degenerate_chains", degenerate},
                                 {"ownership_cycles", cycles},
                                 {"orientation_shares", shares_json},
                                 {"graphs", graphs_json},
                                 {"gateway_ranking", gateways}});

    std::ostringstream text;
    text << "chainscope " << kVersion << "\n"
         << "manifest sha256: " << digest << "\n"
         << "force mode: " << to_string(config.force_mode) << "\n\n"
         << "chains: " << chains.size() << " (" << degenerate << " without N-2 level)\n"
         << "ownership cycles excluded: " << chain_set.cycles.size() << "\n\n"
         << "orientation of N-2 links:\n";
    for (const auto& [region, share] : shares) text << "  " << short_code(region) << "  " << percent(share) << "\n";
    text << "\ngraphs (nodes / links):\n";
    for (const auto& [name, graph] : graphs) {
      text << "  " << name << "  " << graph.nodes().size() << " / " << graph.total_multiplicity() << "\n";
    }
    text << "\ngateway cities (betweenness > 0):\n";
    for (const auto& entry : gateway_profile(centrality)) {
      if (entry.role != GatewayRole::Gateway) break;
      text << "  " << entry.city_id << "  " << csv::format_double(entry.betweenness) << "  (degree in "
           << entry.degree_in << ")\n";
    }
    text << "\nstructures:\n";
    for (const auto& [structure, count] : morphology.counts) text << "  " << to_string(structure) << "  " << count << "\n";
    bundle.text("summary.txt", text.str());
  });

  return {digest, bundle.files(), chains.size(), chain_set.cycles.size()};
}

}  // namespace chainscope
