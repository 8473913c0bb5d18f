#include "chainscope/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "chainscope/csv.hpp"

namespace chainscope {

namespace {

const csv::Row kCitiesHeader{"id", "name", "country_code", "population_2011"};
const csv::Row kFirmsHeader{"id", "name", "city_id", "raw_activity_label", "turnover_eur"};
const csv::Row kLinksHeader{"owner_firm_id", "owned_firm_id", "participation_rate"};
const csv::Row kRegionsHeader{"country_code", "region"};
const csv::Row kSectorsHeader{"raw_activity_label", "sector"};

std::string join(const csv::Row& row) {
  std::string out;
  for (const auto& field : row) out += (out.empty() ? "" : ",") + field;
  return out;
}

std::string describe(const std::vector<ValidationIssue>& issues) {
  std::ostringstream out;
  out << issues.size() << " validation issue(s)";
  for (const auto& issue : issues) {
    out << "\n  [" << to_string(issue.kind) << "] " << issue.file;
    if (issue.line != 0) out << ":" << issue.line;
    out << ": " << issue.message;
  }
  return out.str();
}

class IssueLog {
 public:
  explicit IssueLog(std::string file) : file_(std::move(file)) {}

  void add(ErrorKind kind, std::size_t line, std::string message) {
    issues_.push_back({kind, file_, line, std::move(message)});
  }
  std::vector<ValidationIssue>& issues() { return issues_; }

 private:
  std::string file_;
  std::vector<ValidationIssue> issues_;
};

bool check_header(const csv::Table& table, const csv::Row& expected, IssueLog& log) {
  if (table.header == expected) return true;
  log.add(ErrorKind::SchemaError, 1,
          "header '" + join(table.header) + "' does not match required '" + join(expected) + "'");
  return false;
}

bool check_width(const csv::Row& row, std::size_t width, std::size_t line, IssueLog& log) {
  if (row.size() == width) return true;
  log.add(ErrorKind::SchemaError, line,
          "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()));
  return false;
}

std::size_t line_at(const std::vector<std::size_t>& lines, std::size_t i) {
  return i < lines.size() ? lines[i] : 0;
}

struct Records {
  std::vector<City> cities;
  std::vector<Firm> firms;
  std::vector<OwnershipLink> links;
  std::vector<std::size_t> city_lines, firm_lines, link_lines;
};

/// Referential and range validation shared by construction and loading.
std::vector<ValidationIssue> validate_records(Records& records, const RegionTaxonomy& taxonomy,
                                              const SectorMap& sector_map, ForceMode mode,
                                              const std::set<std::string>& broken_firms = {}) {
  IssueLog cities_log("cities.csv"), firms_log("firms.csv"), links_log("links.csv");

  std::unordered_map<std::string, std::size_t> city_index;
  for (std::size_t i = 0; i < records.cities.size(); ++i) {
    City& city = records.cities[i];
    const std::size_t line = line_at(records.city_lines, i);
    if (city.id.empty()) cities_log.add(ErrorKind::SchemaError, line, "empty city id");
    if (!city_index.emplace(city.id, i).second) {
      cities_log.add(ErrorKind::DuplicateId, line, "duplicate city id '" + city.id + "'");
    }
    if (city.population_2011 < 0) {
      cities_log.add(ErrorKind::SchemaError, line, "negative population for city '" + city.id + "'");
    }
    if (!taxonomy.contains(city.country)) {
      cities_log.add(ErrorKind::UnknownCountry, line,
                     "city '" + city.id + "' has unknown country '" + city.country + "'");
    }
    city.size_class = classify_city_size(city.population_2011);
  }

  std::unordered_map<std::string, std::size_t> firm_index;
  for (std::size_t i = 0; i < records.firms.size(); ++i) {
    Firm& firm = records.firms[i];
    const std::size_t line = line_at(records.firm_lines, i);
    if (firm.id.empty()) firms_log.add(ErrorKind::SchemaError, line, "empty firm id");
    if (!firm_index.emplace(firm.id, i).second) {
      firms_log.add(ErrorKind::DuplicateId, line, "duplicate firm id '" + firm.id + "'");
    }
    if (!city_index.contains(firm.city_id)) {
      firms_log.add(ErrorKind::DanglingReference, line,
                    "firm '" + firm.id + "' references unknown city '" + firm.city_id + "'");
    }
    if (auto sector = sector_map.lookup(firm.raw_activity_label)) {
      firm.sector = *sector;
    } else {
      firms_log.add(ErrorKind::UnknownSectorLabel, line,
                    "firm '" + firm.id + "' has unmapped activity label '" +
                        firm.raw_activity_label + "'");
    }
    if (!(firm.turnover >= 0.0)) {
      firms_log.add(ErrorKind::SchemaError, line, "negative turnover for firm '" + firm.id + "'");
    }
  }

  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (std::size_t i = 0; i < records.links.size(); ++i) {
    OwnershipLink& link = records.links[i];
    const std::size_t line = line_at(records.link_lines, i);
    const std::string label = "'" + link.owner_firm_id + "' -> '" + link.owned_firm_id + "'";
    bool endpoints_ok = true;
    for (const std::string* id : {&link.owner_firm_id, &link.owned_firm_id}) {
      if (!firm_index.contains(*id)) {
        links_log.add(ErrorKind::DanglingReference, line, "link " + label + " references unknown firm '" + *id + "'");
        endpoints_ok = false;
      }
    }
    if (link.owner_firm_id == link.owned_firm_id) {
      links_log.add(ErrorKind::SchemaError, line, "link " + label + " connects a firm to itself");
    }
    if (!seen_pairs.emplace(link.owner_firm_id, link.owned_firm_id).second) {
      links_log.add(ErrorKind::DuplicateId, line, "duplicate link " + label);
    }
    if (!(link.participation_rate >= 0.0 && link.participation_rate <= 1.0)) {
      links_log.add(ErrorKind::SchemaError, line,
                    "participation rate " + csv::format_double(link.participation_rate) +
                        " of link " + label + " is outside [0, 1] (range)");
      continue;
    }
    if (!endpoints_ok || broken_firms.contains(link.owned_firm_id)) continue;
    const Firm& owned = records.firms[firm_index.at(link.owned_firm_id)];
    if (!(owned.turnover >= 0.0)) continue;
    try {
      link.force = compute_force(link.participation_rate, owned.turnover, mode);
    } catch (const Error& error) {
      links_log.add(error.kind(), line, "link " + label + ": " + error.what());
    }
  }

  std::vector<ValidationIssue> issues;
  for (IssueLog* log : {&cities_log, &firms_log, &links_log}) {
    issues.insert(issues.end(), log->issues().begin(), log->issues().end());
  }
  return issues;
}

csv::Table read_table(const std::filesystem::path& path, std::string_view file, IssueLog& log) {
  try {
    return csv::read_file(path);
  } catch (const Error& error) {
    log.add(error.kind(), 0, std::string(file) + ": " + error.what());
    return {};
  }
}

struct TaxonomyParse {
  std::map<std::string, Region> mapping;
  std::vector<ValidationIssue> issues;
};

TaxonomyParse parse_region_taxonomy(const std::filesystem::path& path) {
  IssueLog log("country_regions.csv");
  TaxonomyParse result;
  const csv::Table table = read_table(path, "country_regions.csv", log);
  if (!log.issues().empty() || !check_header(table, kRegionsHeader, log)) {
    result.issues = std::move(log.issues());
    return result;
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    if (!check_width(row, 2, line, log)) continue;
    const auto region = parse_region(row[1]);
    if (!region) {
      log.add(ErrorKind::SchemaError, line, "unknown region '" + row[1] + "'");
      continue;
    }
    if (!result.mapping.emplace(row[0], *region).second) {
      log.add(ErrorKind::DuplicateId, line, "country '" + row[0] + "' listed twice");
    }
  }
  result.issues = std::move(log.issues());
  return result;
}

struct SectorParse {
  std::map<std::string, Sector> mapping;
  std::vector<ValidationIssue> issues;
};

SectorParse parse_sector_map(const std::filesystem::path& path) {
  IssueLog log("sector_map.csv");
  SectorParse result;
  const csv::Table table = read_table(path, "sector_map.csv", log);
  if (!log.issues().empty() || !check_header(table, kSectorsHeader, log)) {
    result.issues = std::move(log.issues());
    return result;
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    if (!check_width(row, 2, line, log)) continue;
    const auto sector = parse_sector(row[1]);
    if (!sector) {
      log.add(ErrorKind::SchemaError, line, "unknown sector '" + row[1] + "'");
      continue;
    }
    if (!result.mapping.emplace(row[0], *sector).second) {
      log.add(ErrorKind::DuplicateId, line, "activity label '" + row[0] + "' listed twice");
    }
  }
  result.issues = std::move(log.issues());
  return result;
}

template <typename T>
T throw_if_issues(T value, std::vector<ValidationIssue> issues) {
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return value;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(issues.empty() ? ErrorKind::SchemaError : issues.front().kind, describe(issues)),
      issues_(std::move(issues)) {}

Dataset::Dataset(std::vector<City> cities, std::vector<Firm> firms, std::vector<OwnershipLink> links,
                 RegionTaxonomy taxonomy, SectorMap sector_map, ForceMode force_mode)
    : taxonomy_(std::move(taxonomy)), sector_map_(std::move(sector_map)), force_mode_(force_mode) {
  Records records{std::move(cities), std::move(firms), std::move(links), {}, {}, {}};
  auto issues = validate_records(records, taxonomy_, sector_map_, force_mode_);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  cities_ = std::move(records.cities);
  firms_ = std::move(records.firms);
  links_ = std::move(records.links);
  for (std::size_t i = 0; i < cities_.size(); ++i) city_index_.emplace(cities_[i].id, i);
  for (std::size_t i = 0; i < firms_.size(); ++i) firm_index_.emplace(firms_[i].id, i);
}

const City& Dataset::city(std::string_view id) const {
  const auto it = city_index_.find(std::string(id));
  if (it == city_index_.end()) throw Error(ErrorKind::DanglingReference, "unknown city '" + std::string(id) + "'");
  return cities_[it->second];
}

const Firm& Dataset::firm(std::string_view id) const {
  const auto it = firm_index_.find(std::string(id));
  if (it == firm_index_.end()) throw Error(ErrorKind::DanglingReference, "unknown firm '" + std::string(id) + "'");
  return firms_[it->second];
}

bool Dataset::operator==(const Dataset& other) const {
  return cities_ == other.cities_ && firms_ == other.firms_ && links_ == other.links_ &&
         taxonomy_ == other.taxonomy_ && sector_map_ == other.sector_map_ &&
         force_mode_ == other.force_mode_;
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "cities.csv", dir / "firms.csv", dir / "links.csv", dir / "country_regions.csv",
          dir / "sector_map.csv"};
}

RegionTaxonomy load_region_taxonomy(const std::filesystem::path& path) {
  auto parsed = parse_region_taxonomy(path);
  return throw_if_issues(RegionTaxonomy(std::move(parsed.mapping)), std::move(parsed.issues));
}

SectorMap load_sector_map(const std::filesystem::path& path) {
  auto parsed = parse_sector_map(path);
  return throw_if_issues(SectorMap(std::move(parsed.mapping)), std::move(parsed.issues));
}

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options) {
  // The five files are parsed concurrently; the referential join below is sequential.
  auto regions_future = std::async(std::launch::async, parse_region_taxonomy, paths.regions);
  auto sectors_future = std::async(std::launch::async, parse_sector_map, paths.sectors);
  IssueLog cities_log("cities.csv"), firms_log("firms.csv"), links_log("links.csv");
  auto cities_future = std::async(std::launch::async, [&] { return read_table(paths.cities, "cities.csv", cities_log); });
  auto firms_future = std::async(std::launch::async, [&] { return read_table(paths.firms, "firms.csv", firms_log); });
  auto links_future = std::async(std::launch::async, [&] { return read_table(paths.links, "links.csv", links_log); });

  TaxonomyParse regions = regions_future.get();
  SectorParse sectors = sectors_future.get();
  const csv::Table cities_table = cities_future.get();
  const csv::Table firms_table = firms_future.get();
  const csv::Table links_table = links_future.get();

  std::vector<ValidationIssue> issues = regions.issues;
  issues.insert(issues.end(), sectors.issues.begin(), sectors.issues.end());

  RegionTaxonomy taxonomy;
  if (regions.issues.empty()) {
    try {
      taxonomy = RegionTaxonomy(regions.mapping);
    } catch (const Error& error) {
      issues.push_back({error.kind(), "country_regions.csv", 0, error.what()});
    }
  }
  const SectorMap sector_map(sectors.mapping);

  Records records;
  std::set<std::string> broken_firms;

  if (cities_log.issues().empty() && check_header(cities_table, kCitiesHeader, cities_log)) {
    for (std::size_t i = 0; i < cities_table.rows.size(); ++i) {
      const auto& row = cities_table.rows[i];
      const std::size_t line = cities_table.line_numbers[i];
      if (!check_width(row, 4, line, cities_log)) continue;
      long long population = 0;
      if (!csv::parse_int(row[3], population)) {
        cities_log.add(ErrorKind::SchemaError, line, "population '" + row[3] + "' is not an integer");
      }
      records.cities.push_back({row[0], row[1], row[2], population, SizeClass::Unclassified});
      records.city_lines.push_back(line);
    }
  }

  if (firms_log.issues().empty() && check_header(firms_table, kFirmsHeader, firms_log)) {
    for (std::size_t i = 0; i < firms_table.rows.size(); ++i) {
      const auto& row = firms_table.rows[i];
      const std::size_t line = firms_table.line_numbers[i];
      if (!check_width(row, 5, line, firms_log)) continue;
      double turnover = 0.0;
      if (!csv::parse_double(row[4], turnover)) {
        firms_log.add(ErrorKind::SchemaError, line, "turnover '" + row[4] + "' is not a number");
        broken_firms.insert(row[0]);
      }
      records.firms.push_back({row[0], row[1], row[2], row[3], Sector::Services, turnover});
      records.firm_lines.push_back(line);
    }
  }

  if (links_log.issues().empty() && check_header(links_table, kLinksHeader, links_log)) {
    for (std::size_t i = 0; i < links_table.rows.size(); ++i) {
      const auto& row = links_table.rows[i];
      const std::size_t line = links_table.line_numbers[i];
      if (!check_width(row, 3, line, links_log)) continue;
      double rate = 0.0;
      if (!csv::parse_double(row[2], rate)) {
        links_log.add(ErrorKind::SchemaError, line, "participation '" + row[2] + "' is not a number");
        continue;
      }
      if (options.percent_input) {
        if (rate < 0.0 || rate > 100.0) {
          links_log.add(ErrorKind::SchemaError, line,
                        "percent participation " + row[2] + " is outside [0, 100] (range)");
          continue;
        }
        rate /= 100.0;
      } else if (rate > 1.0 && rate <= 100.0) {
        links_log.add(ErrorKind::SchemaError, line,
                      "participation " + row[2] +
                          " is outside [0, 1] (range); it looks like a percentage, load with percent input enabled");
        continue;
      }
      records.links.push_back({row[0], row[1], rate, 0.0});
      records.link_lines.push_back(line);
    }
  }

  for (IssueLog* log : {&cities_log, &firms_log, &links_log}) {
    issues.insert(issues.end(), log->issues().begin(), log->issues().end());
  }
  // Referential checks need a usable taxonomy; without one every city would
  // be reported as an unknown country.
  if (regions.issues.empty()) {
    auto referential = validate_records(records, taxonomy, sector_map, options.force_mode, broken_firms);
    issues.insert(issues.end(), referential.begin(), referential.end());
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  return Dataset(std::move(records.cities), std::move(records.firms), std::move(records.links),
                 std::move(taxonomy), sector_map, options.force_mode);
}

void write_region_taxonomy(const RegionTaxonomy& taxonomy, const std::filesystem::path& path) {
  auto out = open_output(path);
  csv::write_row(out, kRegionsHeader);
  for (const auto& [country, region] : taxonomy.mapping()) {
    csv::write_row(out, {country, std::string(to_string(region))});
  }
}

void write_sector_map(const SectorMap& map, const std::filesystem::path& path) {
  auto out = open_output(path);
  csv::write_row(out, kSectorsHeader);
  for (const auto& [label, sector] : map.mapping()) {
    csv::write_row(out, {label, std::string(to_string(sector))});
  }
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const DatasetPaths paths = DatasetPaths::in_directory(dir);
  {
    auto out = open_output(paths.cities);
    csv::write_row(out, kCitiesHeader);
    for (const City& city : dataset.cities()) {
      csv::write_row(out, {city.id, city.name, city.country, std::to_string(city.population_2011)});
    }
  }
  {
    auto out = open_output(paths.firms);
    csv::write_row(out, kFirmsHeader);
    for (const Firm& firm : dataset.firms()) {
      csv::write_row(out, {firm.id, firm.name, firm.city_id, firm.raw_activity_label,
                           csv::format_double(firm.turnover)});
    }
  }
  {
    auto out = open_output(paths.links);
    csv::write_row(out, kLinksHeader);
    for (const OwnershipLink& link : dataset.links()) {
      csv::write_row(out, {link.owner_firm_id, link.owned_firm_id,
                           csv::format_double(link.participation_rate)});
    }
  }
  write_region_taxonomy(dataset.taxonomy(), paths.regions);
  write_sector_map(dataset.sector_map(), paths.sectors);
}

// ---------------------------------------------------------------------------
// Synthetic fixtures

namespace {

// Bounded draw with rejection; std::uniform_int_distribution is not
// portable across standard libraries, which would break byte-identical files.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value;
    do {
      value = engine_();
    } while (value >= limit);
    return value % bound;
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  template <typename T>
  const T& pick(const std::vector<T>& values) {
    return values[below(values.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded(char prefix, std::size_t number, int width) {
  std::string digits = std::to_string(number);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

}  // namespace

Dataset generate_fixture(std::uint64_t seed, const FixtureSize& size, ForceMode force_mode) {
  if (size.cities < 1 || size.firms < 2 || size.links < 1) {
    throw Error(ErrorKind::InvalidSize, "fixture needs >= 1 city, >= 2 firms and >= 1 link");
  }
  const std::size_t max_links = size.firms * (size.firms - 1);
  if (size.links > max_links) {
    throw Error(ErrorKind::InvalidSize, "requested " + std::to_string(size.links) +
                                            " links but only " + std::to_string(max_links) +
                                            " ordered firm pairs exist");
  }

  FixtureRng rng(seed);
  const RegionTaxonomy& taxonomy = RegionTaxonomy::builtin();
  std::map<Region, std::vector<std::string>> countries;
  for (const auto& [country, region] : taxonomy.mapping()) countries[region].push_back(country);

  constexpr std::array<SizeClass, 4> size_cycle{SizeClass::Small, SizeClass::Medium,
                                                SizeClass::Large, SizeClass::Unclassified};
  std::vector<City> cities;
  cities.reserve(size.cities);
  for (std::size_t i = 0; i < size.cities; ++i) {
    // The first four cities cover every region and size class; the rest lean CEE.
    Region region;
    SizeClass size_class;
    if (i < 4) {
      region = kAllRegions[i];
      size_class = size_cycle[(i + 1) % 4];
    } else {
      const std::uint64_t roll = rng.below(10);
      region = roll < 5 ? Region::Cee : kAllRegions[1 + roll % 3];
      size_class = size_cycle[rng.below(size_cycle.size())];
    }
    std::int64_t population = 0;
    switch (size_class) {
      case SizeClass::Small: population = rng.between(10'000, 49'999); break;
      case SizeClass::Medium: population = rng.between(50'000, 250'000); break;
      case SizeClass::Large: population = rng.between(250'001, 2'000'000); break;
      case SizeClass::Unclassified: population = rng.between(1'000, 9'999); break;
    }
    const std::string& country = rng.pick(countries[region]);
    const std::string id = padded('C', i + 1, 4);
    cities.push_back({id, "Synthetic " + country + " " + std::to_string(i + 1), country, population,
                      classify_city_size(population)});
  }

  std::map<Sector, std::vector<std::string>> labels;
  for (const auto& [label, sector] : SectorMap::builtin().mapping()) labels[sector].push_back(label);

  std::vector<Firm> firms;
  firms.reserve(size.firms);
  for (std::size_t i = 0; i < size.firms; ++i) {
    const Sector sector = i < kAllSectors.size() ? kAllSectors[i] : kAllSectors[rng.below(kAllSectors.size())];
    const City& city = cities[i < cities.size() ? i : rng.below(cities.size())];
    const std::string id = padded('F', i + 1, 5);
    firms.push_back({id, "Firm " + std::to_string(i + 1), city.id, rng.pick(labels[sector]), sector,
                     static_cast<double>(rng.between(10'000, 1'000'000'000))});
  }

  // Random firm ranking; "forward" pairs (lower rank owns higher rank) keep
  // the ownership graph acyclic. Backward pairs are used only once the
  // forward ones are exhausted.
  std::vector<std::size_t> rank(size.firms);
  std::iota(rank.begin(), rank.end(), 0);
  for (std::size_t i = rank.size(); i > 1; --i) std::swap(rank[i - 1], rank[rng.below(i)]);

  const std::size_t forward_pairs = max_links / 2;
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::vector<OwnershipLink> links;
  links.reserve(size.links);
  auto emit = [&](std::size_t owner, std::size_t owned) {
    chosen.emplace(owner, owned);
    const double rate = static_cast<double>(rng.between(1, 100)) / 100.0;
    links.push_back({firms[owner].id, firms[owned].id, rate, 0.0});
  };

  auto collect = [&](bool forward) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < size.firms; ++a) {
      for (std::size_t b = 0; b < size.firms; ++b) {
        if (a != b && (rank[a] < rank[b]) == forward && !chosen.contains({a, b})) pairs.emplace_back(a, b);
      }
    }
    return pairs;
  };

  const std::size_t forward_target = std::min(size.links, forward_pairs);
  if (forward_target * 2 <= forward_pairs) {
    while (links.size() < forward_target) {
      std::size_t a = rng.below(size.firms), b = rng.below(size.firms);
      if (a == b) continue;
      if (rank[a] > rank[b]) std::swap(a, b);
      if (!chosen.contains({a, b})) emit(a, b);
    }
  } else {
    auto pairs = collect(true);
    for (std::size_t i = 0; i < forward_target; ++i) {
      std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
      emit(pairs[i].first, pairs[i].second);
    }
  }
  if (links.size() < size.links) {
    auto pairs = collect(false);
    const std::size_t remaining = size.links - links.size();
    for (std::size_t i = 0; i < remaining; ++i) {
      std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
      emit(pairs[i].first, pairs[i].second);
    }
  }

  return Dataset(std::move(cities), std::move(firms), std::move(links), taxonomy,
                 SectorMap::builtin(), force_mode);
}

}  // namespace chainscope
