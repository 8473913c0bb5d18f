#include <doctest.h>

#include <nlohmann/json.hpp>

#include "chainscope/report.hpp"
#include "support.hpp"

using namespace chainscope;
using testing_support::TempDir;
using testing_support::slurp;
using testing_support::spit;

namespace {

std::filesystem::path write_config(const TempDir& dir, const std::string& extra = "") {
  spit(dir / "run.cfg", "# test run\ninput_dir = data\nforce_mode = literal_ab_ratio\n" + extra);
  return dir / "run.cfg";
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("orientation table: one chain, medium N-1, CEE orientation") {
  const std::vector<Chain> chains{
      {"CH000001", {{"F1", "A", "DE"}, {"F2", "B", "PL"}, {"F3", "C", "CZ"}}, {0.1, 0.1}, Region::Cee, 1}};
  const auto table = orientation_size_table(chains, {{"A", SizeClass::Large}, {"B", SizeClass::Medium}, {"C", SizeClass::Small}});
  CHECK(table.col_labels == std::vector<std::string>{"EU", "CEE", "PC", "OE"});
  CHECK(table.row_labels == std::vector<std::string>{"SMALL", "MEDIUM", "LARGE"});
  CHECK(table.grand_total() == 1);
  CHECK(table.counts[1][1] == 1);
}

TEST_CASE("economic profiles and the mono/pluri table") {
  std::vector<City> cities{{"A", "a", "DE", 900'000, {}}, {"B", "b", "PL", 20'000, {}}, {"C", "c", "CZ", 60'000, {}},
                           {"D", "d", "HU", 400'000, {}}};
  std::vector<Firm> firms{{"F1", "x", "A", "FINANCE", {}, 1e6}, {"F2", "x", "B", "SALES", {}, 1e6},
                          {"F3", "x", "C", "MEDIA", {}, 1e6},   {"F4", "x", "D", "FINANCE", {}, 1e6},
                          {"F5", "x", "D", "MEDIA", {}, 1e6},   {"F6", "x", "A", "IT", {}, 1e6}};
  std::vector<OwnershipLink> links{{"F1", "F2", 0.5, 0}, {"F2", "F3", 0.5, 0}, {"F2", "F4", 0.5, 0},
                                   {"F2", "F5", 0.5, 0}, {"F6", "F2", 0.5, 0}};
  const Dataset dataset(cities, firms, links, RegionTaxonomy::builtin(), SectorMap::builtin(), ForceMode::LiteralRatio);
  const auto chains = build_chains(dataset).chains;
  REQUIRE(chains.size() == 6);
  const auto profiles = economic_profiles(chains, dataset);
  REQUIRE(profiles.size() == 2);
  CHECK(profiles[0].city_id == "C");
  CHECK(profiles[0].mode == SectoralMode::MonoSectoral);
  CHECK(profiles[1].city_id == "D");
  CHECK(profiles[1].mode == SectoralMode::PluriSectoral);
  CHECK(profiles[1].sectors == std::set<Sector>{Sector::Finance, Sector::Media});

  const auto sizes = city_sizes(dataset.cities());
  const auto modes = sectoral_mode_table(profiles, sizes);
  CHECK(modes.counts == std::vector<std::vector<std::int64_t>>{{0, 1, 0}, {0, 0, 1}});
  // MONO + PLURI per size class equals the profiled cities of that class.
  for (std::size_t j = 0; j < 3; ++j) {
    std::int64_t profiled = 0;
    for (const auto& p : profiles) profiled += static_cast<std::size_t>(sizes.at(p.city_id)) == j;
    CHECK(modes.col_total(j) == profiled);
  }
  const auto sectors = sector_size_table(chains, dataset);
  CHECK(sectors.grand_total() == 6);
  CHECK(sectors.counts[static_cast<std::size_t>(Sector::Media)] == std::vector<std::int64_t>{0, 2, 2});
}

TEST_CASE("config parsing") {
  TempDir dir("config");
  std::filesystem::create_directories(dir / "data");
  const auto config = load_run_config(write_config(dir, "percent_input = yes\norientations = oe, cee\nca_axes = 3\nworkers = 4\n"));
  CHECK(config.inputs.links == dir / "data" / "links.csv");
  CHECK(config.percent_input);
  CHECK(config.orientations == std::vector<Region>{Region::Cee, Region::OutsideEurope});
  CHECK(config.ca_axes == 3);
  CHECK(config.workers == 4);
  CHECK_THROWS_AS(load_run_config(write_config(dir, "colour = blue\n")), Error);
  CHECK_THROWS_AS(load_run_config(write_config(dir, "force_mode = ratio\n")), Error);
  spit(dir / "partial.cfg", "cities = c.csv\n");
  CHECK_THROWS_AS(load_run_config(dir / "partial.cfg"), Error);
}

TEST_CASE("bundle inventory and idempotence") {
  TempDir dir("bundle");
  write_dataset(generate_fixture(42, {}), dir / "data");
  const auto config = load_run_config(write_config(dir));
  const auto first = run_pipeline(config, dir / "out1");
  const auto second = run_pipeline(config, dir / "out2");
  CHECK(first.manifest_digest == second.manifest_digest);
  REQUIRE(first.files == second.files);
  std::size_t graphs = 0, ca = 0, tables = 0;
  for (const auto& file : first.files) {
    const std::string name = file.string();
    graphs += name.starts_with("graph_");
    ca += name.starts_with("ca_");
    tables += name.starts_with("table");
    CHECK(slurp(dir / "out1" / file) == slurp(dir / "out2" / file));
  }
  CHECK(graphs == 5);
  CHECK(ca == 3);
  CHECK(tables == 3);
  CHECK(std::filesystem::exists(dir / "out1" / "centrality.csv"));
  CHECK(std::filesystem::exists(dir / "out1" / "census.json"));
  CHECK(std::filesystem::exists(dir / "out1" / "summary.txt"));
  CHECK(sha256_file(dir / "out1" / "manifest.json") == first.manifest_digest);
  const auto summary = nlohmann::json::parse(slurp(dir / "out1" / "summary.json"));
  CHECK(summary["manifest_sha256"] == first.manifest_digest);
  CHECK(summary["chains"].get<std::size_t>() == first.chains);
  const auto table1 = slurp(dir / "out1" / "table1_orientation_size.csv");
  CHECK(table1.find("# manifest_sha256=" + first.manifest_digest) != std::string::npos);
  CHECK(table1.find("chain instances") != std::string::npos);
}

TEST_CASE("failures name their stage") {
  TempDir dir("failure");
  write_dataset(generate_fixture(1, {}), dir / "data");
  std::filesystem::remove(dir / "data" / "links.csv");
  try {
    run_pipeline(load_run_config(write_config(dir)), dir / "out");
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "ingest");
    CHECK_FALSE(e.validation_failure());
  }
  spit(dir / "data" / "links.csv", "owner_firm_id,owned_firm_id,participation_rate\nF00001,F99999,0.5\n");
  try {
    run_pipeline(load_run_config(write_config(dir)), dir / "out");
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "ingest");
    CHECK(e.validation_failure());
  }
}

}
