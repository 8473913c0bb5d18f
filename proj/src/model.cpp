#include "chainscope/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace chainscope {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownCountry: return "UnknownCountry";
    case ErrorKind::UnknownSectorLabel: return "UnknownSectorLabel";
    case ErrorKind::ZeroTurnover: return "ZeroTurnover";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::TaxonomyError: return "TaxonomyError";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::MissingTerminal: return "MissingTerminal";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorKind::InsufficientTable: return "InsufficientTable";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

std::string_view to_string(SizeClass value) noexcept {
  switch (value) {
    case SizeClass::Small: return "SMALL";
    case SizeClass::Medium: return "MEDIUM";
    case SizeClass::Large: return "LARGE";
    case SizeClass::Unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

std::string_view to_string(Region value) noexcept {
  switch (value) {
    case Region::Cee: return "CEE";
    case Region::EuNonCee: return "EU_NON_CEE";
    case Region::PostCommunist: return "POST_COMMUNIST";
    case Region::OutsideEurope: return "OUTSIDE_EUROPE";
  }
  return "OUTSIDE_EUROPE";
}

std::string_view to_string(Sector value) noexcept {
  switch (value) {
    case Sector::Automotive: return "AUTOMOTIVE";
    case Sector::Finance: return "FINANCE";
    case Sector::It: return "IT";
    case Sector::Industry: return "INDUSTRY";
    case Sector::Media: return "MEDIA";
    case Sector::RealEstate: return "REAL_ESTATE";
    case Sector::Sales: return "SALES";
    case Sector::Services: return "SERVICES";
    case Sector::Energy: return "ENERGY";
  }
  return "SERVICES";
}

std::string_view to_string(ForceMode value) noexcept {
  return value == ForceMode::LiteralRatio ? "literal_ab_ratio" : "product";
}

std::string_view short_code(Region value) noexcept {
  switch (value) {
    case Region::Cee: return "CEE";
    case Region::EuNonCee: return "EU";
    case Region::PostCommunist: return "PC";
    case Region::OutsideEurope: return "OE";
  }
  return "OE";
}

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view text, const std::array<Enum, N>& values) {
  for (Enum value : values) {
    if (to_string(value) == text) return value;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SizeClass> parse_size_class(std::string_view text) {
  constexpr std::array<SizeClass, 4> all{SizeClass::Small, SizeClass::Medium, SizeClass::Large,
                                         SizeClass::Unclassified};
  return parse_enum(text, all);
}

std::optional<Region> parse_region(std::string_view text) { return parse_enum(text, kAllRegions); }

std::optional<Sector> parse_sector(std::string_view text) { return parse_enum(text, kAllSectors); }

std::optional<ForceMode> parse_force_mode(std::string_view text) {
  if (text == "literal_ab_ratio") return ForceMode::LiteralRatio;
  if (text == "product") return ForceMode::Product;
  return std::nullopt;
}

std::optional<Region> parse_orientation(std::string_view text) {
  const std::string key = upper(text);
  for (Region region : kAllRegions) {
    if (key == short_code(region) || key == to_string(region)) return region;
  }
  return std::nullopt;
}

SizeClass classify_city_size(std::int64_t population) noexcept {
  if (population > 250'000) return SizeClass::Large;
  if (population >= 50'000) return SizeClass::Medium;
  if (population >= 10'000) return SizeClass::Small;
  return SizeClass::Unclassified;
}

bool is_cee_country(std::string_view country) noexcept {
  constexpr std::array<std::string_view, 8> cee{"BG", "HR", "CZ", "HU", "PL", "SK", "SI", "RO"};
  return std::find(cee.begin(), cee.end(), country) != cee.end();
}

RegionTaxonomy::RegionTaxonomy(std::map<std::string, Region> mapping) : mapping_(std::move(mapping)) {
  std::string problems;
  for (const auto& [country, region] : mapping_) {
    if ((region == Region::Cee) != is_cee_country(country)) {
      problems += " " + country + "->" + std::string(to_string(region));
    }
  }
  for (std::string_view code : {"BG", "HR", "CZ", "HU", "PL", "SK", "SI", "RO"}) {
    if (!mapping_.contains(std::string(code))) problems += " missing " + std::string(code);
  }
  if (!problems.empty()) {
    throw Error(ErrorKind::TaxonomyError,
                "CEE must be exactly {BG, HR, CZ, HU, PL, SK, SI, RO}:" + problems);
  }
}

const RegionTaxonomy& RegionTaxonomy::builtin() {
  static const RegionTaxonomy taxonomy = [] {
    std::map<std::string, Region> mapping;
    for (auto code : {"BG", "HR", "CZ", "HU", "PL", "SK", "SI", "RO"}) mapping[code] = Region::Cee;
    // EU members outside the CEE set, plus western European non-members.
    for (auto code : {"AT", "BE", "CY", "DE", "DK", "EE", "ES", "FI", "FR", "GB", "GR", "IE",
                      "IT", "LT", "LU", "LV", "MT", "NL", "PT", "SE", "NO", "CH", "IS", "LI"}) {
      mapping[code] = Region::EuNonCee;
    }
    for (auto code : {"AL", "BA", "BY", "MD", "ME", "MK", "RS", "RU", "UA", "XK"}) {
      mapping[code] = Region::PostCommunist;
    }
    for (auto code : {"AE", "AU", "BR", "CA", "CN", "HK", "IL", "IN", "JP", "KR", "SG", "US",
                      "ZA"}) {
      mapping[code] = Region::OutsideEurope;
    }
    return RegionTaxonomy(std::move(mapping));
  }();
  return taxonomy;
}

bool RegionTaxonomy::contains(std::string_view country) const {
  return mapping_.find(std::string(country)) != mapping_.end();
}

Region classify_region(std::string_view country, const RegionTaxonomy& taxonomy) {
  const auto it = taxonomy.mapping().find(std::string(country));
  if (it == taxonomy.mapping().end()) {
    throw Error(ErrorKind::UnknownCountry, "country code '" + std::string(country) +
                                               "' is not in the region taxonomy");
  }
  return it->second;
}

const SectorMap& SectorMap::builtin() {
  static const SectorMap map = [] {
    std::map<std::string, Sector> mapping;
    for (Sector sector : kAllSectors) mapping[std::string(to_string(sector))] = sector;
    mapping["repair and sale of motor vehicles"] = Sector::Automotive;
    mapping["life insurance"] = Sector::Finance;
    mapping["financial leasing"] = Sector::Finance;
    mapping["banking"] = Sector::Finance;
    mapping["IT services activities"] = Sector::It;
    mapping["manufacture of chemical products"] = Sector::Industry;
    mapping["manufacture of cement"] = Sector::Industry;
    mapping["manufacture of textiles"] = Sector::Industry;
    mapping["manufacture of plastics"] = Sector::Industry;
    mapping["manufacture of household appliances"] = Sector::Industry;
    mapping["manufacture of paper"] = Sector::Industry;
    mapping["television programming"] = Sector::Media;
    mapping["radio broadcasting"] = Sector::Media;
    mapping["wireless telecommunications activities"] = Sector::Media;
    mapping["advertising"] = Sector::Media;
    mapping["real estate agency"] = Sector::RealEstate;
    mapping["hotels and similar accommodation"] = Sector::RealEstate;
    mapping["wholesale of machinery"] = Sector::Sales;
    mapping["wholesale of chemicals"] = Sector::Sales;
    mapping["wholesale of pharmaceuticals"] = Sector::Sales;
    mapping["wholesale of textiles"] = Sector::Sales;
    mapping["wholesale of food products"] = Sector::Sales;
    mapping["construction"] = Sector::Services;
    mapping["business services"] = Sector::Services;
    mapping["electricity and gas supply"] = Sector::Energy;
    return SectorMap(std::move(mapping));
  }();
  return map;
}

std::optional<Sector> SectorMap::lookup(std::string_view label) const {
  const auto it = mapping_.find(std::string(label));
  if (it == mapping_.end()) return std::nullopt;
  return it->second;
}

double compute_force(double participation_rate, double turnover, ForceMode mode) {
  if (!(participation_rate >= 0.0 && participation_rate <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "participation rate must lie in [0, 1]");
  }
  if (!(turnover >= 0.0) || !std::isfinite(turnover)) {
    throw Error(ErrorKind::InvalidArgument, "turnover must be a finite non-negative amount");
  }
  if (mode == ForceMode::Product) return participation_rate * turnover;
  if (participation_rate == 0.0) return 0.0;
  if (turnover == 0.0) {
    throw Error(ErrorKind::ZeroTurnover, "owned firm has zero turnover but positive participation");
  }
  return participation_rate / turnover;
}

}  // namespace chainscope
