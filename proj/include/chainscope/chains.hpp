#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainscope/ingest.hpp"
#include "chainscope/model.hpp"

namespace chainscope {

struct ChainLevel {
  std::string firm_id;
  std::string city_id;
  std::string country;  // empty when read back from a chains file

  bool operator==(const ChainLevel&) const = default;
};

/// A capital-control chain: N (owner abroad) -> N-1 (CEE intermediate) ->
/// N-2 (terminal). Degenerate chains stop at N-1 and carry no orientation.
struct Chain {
  std::string id;
  std::vector<ChainLevel> levels;
  std::vector<double> link_forces;  // one per edge, in level order
  std::optional<Region> orientation;
  // participation(N -> N-1) * turnover(N-1 firm)
  double attributable_revenue = 0.0;

  const ChainLevel& n() const { return levels.at(0); }
  const ChainLevel& n1() const { return levels.at(1); }
  const ChainLevel& n2() const { return levels.at(2); }
  bool has_terminal() const noexcept { return levels.size() >= 3; }

  bool operator==(const Chain&) const = default;
};

struct OwnershipCycle {
  std::vector<std::string> firm_ids;  // sorted

  bool operator==(const OwnershipCycle&) const = default;
};

struct ChainSet {
  std::vector<Chain> chains;  // canonical order: (n firm, n1 firm, n2 firm)
  std::vector<OwnershipCycle> cycles;  // excluded strongly connected components
};

/// Links whose owner and owned firms are located in different countries.
std::vector<OwnershipLink> filter_transnational(std::span<const OwnershipLink> links,
                                                const Dataset& dataset);

/// Enumerates chains over already filtered links. Every 3-level window whose
/// middle firm sits in a CEE city is a chain; a link into a CEE firm with no
/// onward link, not already covered by a 3-level window, is kept as a
/// degenerate 2-level chain. Firms on ownership cycles are excluded and the
/// cycles are reported. Output order does not depend on `workers`.
ChainSet build_chains(const Dataset& dataset, std::span<const OwnershipLink> transnational_links,
                      unsigned workers = 1);
/// Filters the dataset's links, then enumerates.
ChainSet build_chains(const Dataset& dataset, unsigned workers = 1);

/// Region of the terminal (N-2) firm's country; MissingTerminal for
/// degenerate chains.
Region classify_orientation(const Chain& chain, const RegionTaxonomy& taxonomy);

/// Fraction of oriented chains per region (all four regions present).
std::map<Region, double> orientation_shares(std::span<const Chain> chains);

struct AggregatedChainGroup {
  std::string n1_city_id;
  std::vector<std::string> chain_ids;
  double total_fdi_revenue = 0.0;
  std::map<Region, std::size_t> orientations;
};

/// One group per distinct N-1 city, sorted by city id.
std::vector<AggregatedChainGroup> aggregate_by_n1(std::span<const Chain> chains);

void write_chains_csv(std::span<const Chain> chains, const std::filesystem::path& path,
                      const std::vector<std::string>& header_comments = {});
std::vector<Chain> read_chains_csv(const std::filesystem::path& path);

}  // namespace chainscope
