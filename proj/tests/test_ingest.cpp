#include <doctest.h>

#include <algorithm>
#include <set>

#include "chainscope/csv.hpp"
#include "chainscope/ingest.hpp"
#include "support.hpp"

using namespace chainscope;
using testing_support::TempDir;
using testing_support::spit;

namespace {

void write_small(const TempDir& dir, const std::string& links_body) {
  spit(dir / "cities.csv",
       "id,name,country_code,population_2011\n"
       "C1,Brno,CZ,377028\n"
       "C2,Wien,AT,1741246\n"
       "C3,Kyiv,UA,2800000\n");
  spit(dir / "firms.csv",
       "id,name,city_id,raw_activity_label,turnover_eur\n"
       "F1,Alpha,C2,FINANCE,5000000\n"
       "F2,Beta,C1,repair and sale of motor vehicles,2000000\n"
       "F3,Gamma,C3,SALES,100000\n");
  spit(dir / "links.csv", "owner_firm_id,owned_firm_id,participation_rate\n" + links_body);
  write_region_taxonomy(RegionTaxonomy::builtin(), dir / "country_regions.csv");
  write_sector_map(SectorMap::builtin(), dir / "sector_map.csv");
}

std::vector<ValidationIssue> issues_of(const DatasetPaths& paths, const LoadOptions& options = {}) {
  try {
    load_dataset(paths, options);
  } catch (const ValidationError& error) {
    return error.issues();
  }
  return {};
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("a small dataset loads with derived fields") {
  TempDir dir("ingest");
  write_small(dir, "F1,F2,0.6\nF2,F3,0.25\n");
  const Dataset dataset = load_dataset(DatasetPaths::in_directory(dir.path()));
  CHECK(dataset.cities().size() == 3);
  CHECK(dataset.city("C1").size_class == SizeClass::Large);
  CHECK(dataset.firm("F2").sector == Sector::Automotive);
  CHECK(dataset.links()[0].force == doctest::Approx(0.6 / 2e6));
  CHECK(dataset.region_of_city(dataset.city("C3")) == Region::PostCommunist);
}

TEST_CASE("percent input divides by 100") {
  TempDir dir("percent");
  write_small(dir, "F1,F2,60\nF2,F3,25\n");
  const auto paths = DatasetPaths::in_directory(dir.path());
  const auto issues = issues_of(paths);
  REQUIRE(issues.size() == 2);
  CHECK(issues[0].message.find("(range)") != std::string::npos);
  const Dataset dataset = load_dataset(paths, {true, ForceMode::Product});
  CHECK(dataset.links()[0].participation_rate == doctest::Approx(0.6));
  CHECK(dataset.links()[0].force == doctest::Approx(0.6 * 2e6));
}

TEST_CASE("every problem is reported, with file and line") {
  TempDir dir("broken");
  write_small(dir, "F1,F2,0.5\nF1,F9,0.5\nF1,F2,0.2\nF3,F3,0.1\n");
  spit(dir / "firms.csv",
       "id,name,city_id,raw_activity_label,turnover_eur\n"
       "F1,Alpha,C2,FINANCE,5000000\n"
       "F2,Beta,C7,knitting,0\n"
       "F3,Gamma,C3,SALES,100000\n");
  const auto issues = issues_of(DatasetPaths::in_directory(dir.path()));
  std::multiset<ErrorKind> kinds;
  for (const auto& issue : issues) kinds.insert(issue.kind);
  CHECK(kinds.count(ErrorKind::DanglingReference) == 2);  // C7, F9
  CHECK(kinds.count(ErrorKind::UnknownSectorLabel) == 1);
  CHECK(kinds.count(ErrorKind::ZeroTurnover) == 2);  // both links into F2
  CHECK(kinds.count(ErrorKind::DuplicateId) == 1);
  CHECK(kinds.count(ErrorKind::SchemaError) == 1);  // self link
  const auto dangling = std::find_if(issues.begin(), issues.end(), [](const ValidationIssue& issue) {
    return issue.kind == ErrorKind::DanglingReference && issue.file == "firms.csv";
  });
  REQUIRE(dangling != issues.end());
  CHECK(dangling->line == 3);
}

TEST_CASE("unknown country and bad header") {
  TempDir dir("country");
  write_small(dir, "F1,F2,0.5\n");
  spit(dir / "cities.csv",
       "id,name,country_code,population_2011\nC1,Brno,CZ,377028\nC2,Wien,XX,1741246\nC3,Kyiv,UA,2800000\n");
  auto issues = issues_of(DatasetPaths::in_directory(dir.path()));
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == ErrorKind::UnknownCountry);

  spit(dir / "cities.csv", "id,label,country,population\nC1,Brno,CZ,1\n");
  issues = issues_of(DatasetPaths::in_directory(dir.path()));
  REQUIRE_FALSE(issues.empty());
  CHECK(issues[0].kind == ErrorKind::SchemaError);
}

TEST_CASE("missing file") {
  TempDir dir("missing");
  write_small(dir, "F1,F2,0.5\n");
  std::filesystem::remove(dir / "links.csv");
  const auto issues = issues_of(DatasetPaths::in_directory(dir.path()));
  REQUIRE_FALSE(issues.empty());
  CHECK(issues[0].kind == ErrorKind::IoError);
}

TEST_CASE("dataset write then load preserves every field") {
  for (std::uint64_t seed : {1u, 42u, 77u}) {
    for (ForceMode mode : {ForceMode::LiteralRatio, ForceMode::Product}) {
      TempDir dir("roundtrip");
      const Dataset original = generate_fixture(seed, {}, mode);
      write_dataset(original, dir.path());
      const Dataset loaded = load_dataset(DatasetPaths::in_directory(dir.path()), {false, mode});
      CHECK(loaded == original);
    }
  }
}

TEST_CASE("fixture spans every class and is reproducible") {
  const Dataset a = generate_fixture(42, {});
  const Dataset b = generate_fixture(42, {});
  CHECK(a == b);
  CHECK_FALSE(a == generate_fixture(43, {}));
  std::set<SizeClass> sizes;
  std::set<Region> regions;
  std::set<Sector> sectors;
  for (const auto& city : a.cities()) {
    sizes.insert(city.size_class);
    regions.insert(a.region_of_city(city));
  }
  for (const auto& firm : a.firms()) sectors.insert(firm.sector);
  CHECK(sizes.size() == 4);
  CHECK(regions.size() == 4);
  CHECK(sectors.size() == 9);
  CHECK(a.links().size() == 120);
  for (const auto& firm : a.firms()) {
    CHECK(firm.turnover == std::floor(firm.turnover));
    CHECK(firm.turnover >= 1e4);
  }
}

TEST_CASE("fixture size limits") {
  CHECK_THROWS_AS(generate_fixture(1, {0, 10, 5}), Error);
  CHECK_THROWS_AS(generate_fixture(1, {3, 1, 1}), Error);
  CHECK_THROWS_AS(generate_fixture(1, {3, 3, 0}), Error);
  CHECK_THROWS_AS(generate_fixture(1, {3, 3, 7}), Error);
  CHECK_NOTHROW(generate_fixture(1, {3, 3, 6}));
  CHECK_NOTHROW(generate_fixture(1, {1, 2, 1}));
}

TEST_CASE("shipped taxonomy files equal the built-in ones") {
  const auto dir = testing_support::data_dir();
  CHECK(load_region_taxonomy(dir / "country_regions.csv") == RegionTaxonomy::builtin());
  CHECK(load_sector_map(dir / "sector_map.csv") == SectorMap::builtin());
}

TEST_CASE("direct construction validates too") {
  std::vector<City> cities{{"C1", "A", "PL", 20000, SizeClass::Unclassified}};
  std::vector<Firm> firms{{"F1", "x", "C1", "FINANCE", Sector::Services, 10.0},
                          {"F2", "y", "C1", "FINANCE", Sector::Services, 10.0}};
  CHECK_NOTHROW(Dataset(cities, firms, {{"F1", "F2", 0.5, 0.0}}, RegionTaxonomy::builtin(), SectorMap::builtin(),
                        ForceMode::LiteralRatio));
  CHECK_THROWS_AS(Dataset(cities, firms, {{"F1", "F3", 0.5, 0.0}}, RegionTaxonomy::builtin(), SectorMap::builtin(),
                          ForceMode::LiteralRatio),
                  ValidationError);
}

}
