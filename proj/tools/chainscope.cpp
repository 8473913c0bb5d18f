// chainscope command line front end.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chainscope/ca.hpp"
#include "chainscope/chains.hpp"
#include "chainscope/citygraph.hpp"
#include "chainscope/csv.hpp"
#include "chainscope/ingest.hpp"
#include "chainscope/metrics.hpp"
#include "chainscope/morphology.hpp"
#include "chainscope/report.hpp"

namespace cs = chainscope;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitStage = 2;

struct DatasetArgs {
  std::string dir;
  bool percent = false;
  std::string force_mode = "literal_ab_ratio";

  void attach(CLI::App* app) {
    app->add_option("--in", dir, "directory with cities/firms/links/country_regions/sector_map CSV files")
        ->required()
        ->check(CLI::ExistingDirectory);
    app->add_flag("--percent-input", percent, "participation rates are given in percent");
    app->add_option("--force-mode", force_mode, "literal_ab_ratio or product")
        ->check(CLI::IsMember({"literal_ab_ratio", "product"}));
  }

  cs::Dataset load() const {
    return cs::load_dataset(cs::DatasetPaths::in_directory(dir),
                            cs::LoadOptions{percent, *cs::parse_force_mode(force_mode)});
  }
};

void report_validation(const cs::ValidationError& error) {
  std::cerr << "validation failed with " << error.issues().size() << " issue(s)\n";
  for (const auto& issue : error.issues()) {
    std::cerr << "  " << issue.file;
    if (issue.line > 0) std::cerr << ':' << issue.line;
    std::cerr << ": " << cs::to_string(issue.kind) << ": " << issue.message << '\n';
  }
}

std::optional<cs::Region> orientation_arg(const std::string& text) {
  if (text == "all") return std::nullopt;
  const auto region = cs::parse_orientation(text);
  if (!region) throw cs::Error(cs::ErrorKind::InvalidArgument, "unknown orientation '" + text + "'");
  return region;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainscope: capital-control chains between cities"};
  app.set_version_flag("--version", std::string(cs::kVersion));
  app.require_subcommand(1);

  // ingest
  DatasetArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "validate a dataset and print its size");
  ingest_args.attach(ingest);
  ingest->callback([&] {
    const cs::Dataset dataset = ingest_args.load();
    const auto transnational = cs::filter_transnational(dataset.links(), dataset);
    std::cout << "cities " << dataset.cities().size() << "\nfirms " << dataset.firms().size() << "\nlinks "
              << dataset.links().size() << "\ntransnational_links " << transnational.size() << '\n';
  });

  // fixture
  std::uint64_t seed = 42;
  cs::FixtureSize size;
  std::string fixture_out, fixture_mode = "literal_ab_ratio";
  auto* fixture = app.add_subcommand("fixture", "write a seeded synthetic dataset");
  fixture->add_option("--seed", seed);
  fixture->add_option("--cities", size.cities);
  fixture->add_option("--firms", size.firms);
  fixture->add_option("--links", size.links);
  fixture->add_option("--force-mode", fixture_mode)->check(CLI::IsMember({"literal_ab_ratio", "product"}));
  fixture->add_option("--out", fixture_out)->required();
  fixture->callback([&] {
    cs::write_dataset(cs::generate_fixture(seed, size, *cs::parse_force_mode(fixture_mode)), fixture_out);
  });

  // chains
  DatasetArgs chains_args;
  std::string chains_out;
  unsigned workers = 1;
  auto* chains = app.add_subcommand("chains", "enumerate capital-control chains");
  chains_args.attach(chains);
  chains->add_option("--out", chains_out, "chains CSV")->required();
  chains->add_option("--workers", workers, "0 = hardware concurrency");
  chains->callback([&] {
    const cs::Dataset dataset = chains_args.load();
    const cs::ChainSet set = cs::build_chains(dataset, workers);
    cs::write_chains_csv(set.chains, chains_out);
    std::cout << "chains " << set.chains.size() << '\n';
    for (const auto& cycle : set.cycles) {
      std::cerr << "excluded ownership cycle:";
      for (const auto& id : cycle.firm_ids) std::cerr << ' ' << id;
      std::cerr << '\n';
    }
  });

  // graph
  DatasetArgs graph_args;
  std::string orientation = "all", graph_format, graph_out;
  bool no_degenerate = false;
  auto* graph = app.add_subcommand("graph", "build and export a city graph");
  graph_args.attach(graph);
  graph->add_option("--orientation", orientation, "all, cee, eu, pc or oe");
  graph->add_option("--format", graph_format, "graphml, dot or edgelist (default: from extension)");
  graph->add_flag("--no-degenerate", no_degenerate, "leave out chains without an N-2 level");
  graph->add_option("--out", graph_out)->required();
  graph->add_option("--workers", workers);
  graph->callback([&] {
    const cs::Dataset dataset = graph_args.load();
    const auto set = cs::build_chains(dataset, workers);
    const auto city_graph = cs::build_graph(set.chains, dataset, {orientation_arg(orientation), !no_degenerate});
    const auto format = graph_format.empty() ? cs::format_from_extension(graph_out) : cs::parse_graph_format(graph_format);
    if (!format) throw cs::Error(cs::ErrorKind::UnsupportedFormat, "cannot infer graph format for " + graph_out);
    cs::export_graph(city_graph, *format, graph_out);
    std::cout << "nodes " << city_graph.nodes().size() << "\nlinks " << city_graph.total_multiplicity() << '\n';
  });

  // metrics
  std::string metrics_graph, metrics_out;
  bool normalized = false;
  auto* metrics = app.add_subcommand("metrics", "degree and betweenness of an exported graph");
  metrics->add_option("--graph", metrics_graph)->required()->check(CLI::ExistingFile);
  metrics->add_option("--out", metrics_out, "centrality CSV")->required();
  metrics->add_flag("--normalized", normalized);
  metrics->add_option("--workers", workers);
  metrics->callback([&] {
    const auto report = cs::compute_centrality(cs::import_graph(std::filesystem::path(metrics_graph)),
                                               {normalized, workers});
    cs::write_centrality_csv(report, metrics_out);
    for (const auto& entry : cs::gateway_profile(report)) {
      if (entry.role != cs::GatewayRole::Gateway) break;
      std::cout << entry.city_id << ' ' << cs::csv::format_double(entry.betweenness) << '\n';
    }
  });

  // morphology
  DatasetArgs morphology_args;
  std::string morphology_table;
  auto* morphology = app.add_subcommand("morphology", "structure census of chain components");
  morphology_args.attach(morphology);
  morphology->add_option("--table", morphology_table, "also write the structure x size percent table");
  morphology->add_option("--workers", workers);
  morphology->callback([&] {
    const cs::Dataset dataset = morphology_args.load();
    const auto set = cs::build_chains(dataset, workers);
    const auto result = cs::census(set.chains, workers);
    for (const auto& [structure, count] : result.counts) std::cout << cs::to_string(structure) << ' ' << count << '\n';
    if (!morphology_table.empty()) {
      cs::write_percent_table(cs::structure_by_size(set.chains, result, cs::city_sizes(dataset.cities())),
                              morphology_table, "structure");
    }
  });

  // ca
  std::string ca_table, ca_out;
  std::size_t axes = 2;
  auto* ca = app.add_subcommand("ca", "correspondence analysis of a contingency table CSV");
  ca->add_option("--table", ca_table)->required()->check(CLI::ExistingFile);
  ca->add_option("--axes", axes);
  ca->add_option("--out", ca_out, "JSON output (default: stdout)");
  ca->callback([&] {
    const auto result = cs::fit_ca(cs::load_contingency_table(ca_table));
    const auto text = cs::to_json(result, cs::axis_report(result, std::min(axes, result.axes()))).dump(2) + "\n";
    if (ca_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream(ca_out, std::ios::binary) << text;
    }
  });

  // run
  std::string config_path, run_out;
  std::optional<unsigned> run_workers;
  auto* run = app.add_subcommand("run", "full pipeline into a report bundle");
  run->add_option("--config", config_path, "key = value file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out)->required();
  run->add_option("--workers", run_workers, "overrides the config value");
  run->callback([&] {
    cs::RunConfig config = cs::load_run_config(config_path);
    if (run_workers) config.workers = *run_workers;
    const auto summary = cs::run_pipeline(config, run_out);
    std::cout << "manifest " << summary.manifest_digest << "\nchains " << summary.chains << "\ncycles "
              << summary.cycles << '\n';
    for (const auto& file : summary.files) std::cout << "  " << file.string() << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitStage;
  } catch (const cs::PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.validation_failure()) return kExitValidation;
    return kExitStage;
  } catch (const cs::ValidationError& e) {
    report_validation(e);
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return 0;
}
