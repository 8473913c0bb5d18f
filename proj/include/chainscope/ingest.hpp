#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "chainscope/error.hpp"
#include "chainscope/model.hpp"

namespace chainscope {

struct ValidationIssue {
  ErrorKind kind;
  std::string file;
  std::size_t line = 0;  // 0 when not tied to a row
  std::string message;
};

/// Raised by dataset loading and construction. Carries every violation found,
/// not only the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// An immutable, referentially consistent collection of cities, firms and
/// ownership links together with the taxonomies used to interpret them.
class Dataset {
 public:
  Dataset() = default;
  /// Validates every invariant; throws ValidationError listing all violations.
  /// Link FORCE values are recomputed from `force_mode`.
  Dataset(std::vector<City> cities, std::vector<Firm> firms, std::vector<OwnershipLink> links,
          RegionTaxonomy taxonomy, SectorMap sector_map, ForceMode force_mode);

  const std::vector<City>& cities() const noexcept { return cities_; }
  const std::vector<Firm>& firms() const noexcept { return firms_; }
  const std::vector<OwnershipLink>& links() const noexcept { return links_; }
  const RegionTaxonomy& taxonomy() const noexcept { return taxonomy_; }
  const SectorMap& sector_map() const noexcept { return sector_map_; }
  ForceMode force_mode() const noexcept { return force_mode_; }

  const City& city(std::string_view id) const;
  const Firm& firm(std::string_view id) const;
  const City& city_of_firm(std::string_view firm_id) const { return city(firm(firm_id).city_id); }
  Region region_of_city(const City& city) const { return classify_region(city.country, taxonomy_); }

  bool operator==(const Dataset& other) const;

 private:
  std::vector<City> cities_;
  std::vector<Firm> firms_;
  std::vector<OwnershipLink> links_;
  RegionTaxonomy taxonomy_;
  SectorMap sector_map_;
  ForceMode force_mode_ = ForceMode::LiteralRatio;
  std::unordered_map<std::string, std::size_t> city_index_;
  std::unordered_map<std::string, std::size_t> firm_index_;
};

struct DatasetPaths {
  std::filesystem::path cities;
  std::filesystem::path firms;
  std::filesystem::path links;
  std::filesystem::path regions;
  std::filesystem::path sectors;

  /// cities.csv, firms.csv, links.csv, country_regions.csv, sector_map.csv
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

struct LoadOptions {
  // Participation given in percent (0-100) rather than as a fraction.
  bool percent_input = false;
  ForceMode force_mode = ForceMode::LiteralRatio;
};

RegionTaxonomy load_region_taxonomy(const std::filesystem::path& path);
SectorMap load_sector_map(const std::filesystem::path& path);

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options = {});

void write_region_taxonomy(const RegionTaxonomy& taxonomy, const std::filesystem::path& path);
void write_sector_map(const SectorMap& map, const std::filesystem::path& path);
/// Writes the five canonical files into `dir` (created if needed).
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

struct FixtureSize {
  std::size_t cities = 20;
  std::size_t firms = 60;
  std::size_t links = 120;
};

/// Seeded synthetic dataset using the built-in taxonomies. With at least four
/// cities and nine firms every size class, region and sector is represented.
/// Links prefer a fixed random firm ranking, so the result is acyclic as long
/// as `links <= firms * (firms - 1) / 2`.
Dataset generate_fixture(std::uint64_t seed, const FixtureSize& size,
                         ForceMode force_mode = ForceMode::LiteralRatio);

}  // namespace chainscope
