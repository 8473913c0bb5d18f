#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chainscope/error.hpp"

namespace chainscope {

enum class SizeClass { Small, Medium, Large, Unclassified };

enum class Region { Cee, EuNonCee, PostCommunist, OutsideEurope };

enum class Sector {
  Automotive,
  Finance,
  It,
  Industry,
  Media,
  RealEstate,
  Sales,
  Services,
  Energy,
};

/// How the FORCE intensity of an ownership link is derived from the
/// participation rate `a` and the owned firm's turnover `b`.
enum class ForceMode {
  LiteralRatio,  // a / b
  Product,       // a * b
};

inline constexpr std::array<SizeClass, 3> kTabulatedSizeClasses{SizeClass::Small, SizeClass::Medium,
                                                                SizeClass::Large};
inline constexpr std::array<Region, 4> kAllRegions{Region::Cee, Region::EuNonCee,
                                                   Region::PostCommunist, Region::OutsideEurope};
inline constexpr std::array<Sector, 9> kAllSectors{
    Sector::Automotive, Sector::Finance,  Sector::It,       Sector::Industry, Sector::Media,
    Sector::RealEstate, Sector::Sales,    Sector::Services, Sector::Energy};

// Canonical upper-case names used in files ("SMALL", "CEE", "REAL_ESTATE", ...).
std::string_view to_string(SizeClass value) noexcept;
std::string_view to_string(Region value) noexcept;
std::string_view to_string(Sector value) noexcept;
std::string_view to_string(ForceMode value) noexcept;

// Short orientation codes used in paper-style tables and on the command line.
std::string_view short_code(Region value) noexcept;

std::optional<SizeClass> parse_size_class(std::string_view text);
std::optional<Region> parse_region(std::string_view text);
std::optional<Sector> parse_sector(std::string_view text);
std::optional<ForceMode> parse_force_mode(std::string_view text);
// Accepts the short codes (cee, eu, pc, oe) case-insensitively, or canonical names.
std::optional<Region> parse_orientation(std::string_view text);

struct City {
  std::string id;
  std::string name;
  std::string country;
  std::int64_t population_2011 = 0;
  SizeClass size_class = SizeClass::Unclassified;

  bool operator==(const City&) const = default;
};

struct Firm {
  std::string id;
  std::string name;
  std::string city_id;
  std::string raw_activity_label;
  Sector sector = Sector::Services;
  double turnover = 0.0;

  bool operator==(const Firm&) const = default;
};

struct OwnershipLink {
  std::string owner_firm_id;
  std::string owned_firm_id;
  double participation_rate = 0.0;
  double force = 0.0;

  bool operator==(const OwnershipLink&) const = default;
};

/// Thresholds: LARGE > 250,000; MEDIUM [50,000, 250,000]; SMALL [10,000, 50,000).
SizeClass classify_city_size(std::int64_t population) noexcept;

/// Country code to region mapping. The CEE class is fixed to the eight
/// post-2004 EU members; construction rejects any mapping that disagrees.
class RegionTaxonomy {
 public:
  RegionTaxonomy() = default;
  explicit RegionTaxonomy(std::map<std::string, Region> mapping);

  /// Built-in mapping that covers every country used by generated fixtures.
  static const RegionTaxonomy& builtin();

  const std::map<std::string, Region>& mapping() const noexcept { return mapping_; }
  bool contains(std::string_view country) const;

  bool operator==(const RegionTaxonomy&) const = default;

 private:
  std::map<std::string, Region> mapping_;
};

Region classify_region(std::string_view country, const RegionTaxonomy& taxonomy);

bool is_cee_country(std::string_view country) noexcept;

/// Raw activity label to one of the nine aggregated sectors.
class SectorMap {
 public:
  SectorMap() = default;
  explicit SectorMap(std::map<std::string, Sector> mapping) : mapping_(std::move(mapping)) {}

  static const SectorMap& builtin();

  const std::map<std::string, Sector>& mapping() const noexcept { return mapping_; }
  std::optional<Sector> lookup(std::string_view label) const;

  bool operator==(const SectorMap&) const = default;

 private:
  std::map<std::string, Sector> mapping_;
};

/// FORCE intensity of a link. Literal mode divides participation by
/// turnover and fails with ZeroTurnover when the quotient is undefined.
double compute_force(double participation_rate, double turnover,
                     ForceMode mode = ForceMode::LiteralRatio);

}  // namespace chainscope
