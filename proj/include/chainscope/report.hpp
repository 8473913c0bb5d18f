#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainscope/chains.hpp"
#include "chainscope/error.hpp"
#include "chainscope/ingest.hpp"
#include "chainscope/tables.hpp"

namespace chainscope {

inline constexpr std::string_view kVersion = "1.0.0";

enum class SectoralMode { MonoSectoral, PluriSectoral };

std::string_view to_string(SectoralMode mode) noexcept;

struct CityEconomicProfile {
  std::string city_id;
  std::set<Sector> sectors;
  SectoralMode mode = SectoralMode::MonoSectoral;
};

/// Sectors of the N-2 firms hosted by each city, over oriented chains.
std::vector<CityEconomicProfile> economic_profiles(std::span<const Chain> chains, const Dataset& dataset);

std::map<std::string, SizeClass> city_sizes(std::span<const City> cities);

/// Table 1 shape: rows SMALL/MEDIUM/LARGE (N-1 city), columns EU/CEE/PC/OE
/// (N-2 orientation). Each oriented chain counts once.
ContingencyTable orientation_size_table(std::span<const Chain> chains,
                                        const std::map<std::string, SizeClass>& sizes);

/// Rows: the nine sectors of N-2 firms; columns: size class of the N-2 city.
ContingencyTable sector_size_table(std::span<const Chain> chains, const Dataset& dataset);

/// Rows MONO-SECTORAL / PLURI-SECTORAL; columns: size class; counts cities.
ContingencyTable sectoral_mode_table(std::span<const CityEconomicProfile> profiles,
                                     const std::map<std::string, SizeClass>& sizes);

struct RunConfig {
  DatasetPaths inputs;
  ForceMode force_mode = ForceMode::LiteralRatio;
  bool percent_input = false;
  std::vector<Region> orientations{kAllRegions.begin(), kAllRegions.end()};
  std::size_t ca_axes = 2;
  unsigned workers = 1;  // not part of the manifest: output never depends on it
  std::string timestamp = "unspecified";
};

/// Reads `key = value` lines ('#' comments). Relative input paths resolve
/// against the config file's directory.
RunConfig load_run_config(const std::filesystem::path& path);

/// Failure inside run_pipeline, tagged with the stage that raised it.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }
  bool validation_failure() const noexcept { return validation_; }

 private:
  std::string stage_;
  bool validation_ = false;
};

struct BundleSummary {
  std::string manifest_digest;
  std::vector<std::filesystem::path> files;  // relative to the bundle directory, sorted
  std::size_t chains = 0;
  std::size_t cycles = 0;
};

/// ingest -> transnational filter -> chains -> graphs -> metrics ->
/// morphology -> correspondence analyses -> tables. Re-running on the same
/// inputs and configuration writes a byte-identical bundle.
BundleSummary run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace chainscope
