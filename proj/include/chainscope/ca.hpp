#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chainscope/tables.hpp"

namespace chainscope {

/// Correspondence analysis of a contingency table.
///
/// With P = N / n, row masses r and column masses c, the standardized
/// residuals S_ij = (P_ij - r_i c_j) / sqrt(r_i c_j) are decomposed as
/// S = U diag(sigma) V^T. Principal coordinates are
///   rows:    F = diag(r)^-1/2 U diag(sigma)
///   columns: G = diag(c)^-1/2 V diag(sigma)
/// and axis k carries inertia sigma_k^2. The total inertia equals the
/// Pearson chi-square statistic divided by n.
///
/// Axes with sigma_k < 1e-10 * sigma_1 are discarded. Each axis is oriented so
/// that its largest-magnitude row coordinate is positive.
struct CAResult {
  std::vector<std::string> row_labels;  // after zero-margin rows were dropped
  std::vector<std::string> col_labels;
  std::vector<std::string> dropped_rows;
  std::vector<std::string> dropped_cols;
  double n = 0.0;
  std::vector<double> row_masses;
  std::vector<double> col_masses;
  std::vector<double> singular_values;
  std::vector<double> inertias;
  std::vector<double> shares;  // inertia share per axis
  double total_inertia = 0.0;
  // Independence table: no axis survives, total inertia is zero.
  bool degenerate = false;
  std::vector<std::vector<double>> row_coordinates;  // rows x axes
  std::vector<std::vector<double>> col_coordinates;  // cols x axes

  std::size_t axes() const noexcept { return singular_values.size(); }
};

/// InsufficientTable when fewer than two rows or columns remain after the
/// zero-margin drop; EmptyInput when the table sums to zero.
CAResult fit_ca(const ContingencyTable& table);

struct AxisReport {
  std::size_t axes = 0;
  double cumulative_share = 0.0;
  // mass * coordinate^2 / axis inertia; each axis column sums to 1.
  std::vector<std::vector<double>> row_contributions;
  std::vector<std::vector<double>> col_contributions;
};

/// Summary of the first `k` axes; AxisOutOfRange when k exceeds result.axes().
AxisReport axis_report(const CAResult& result, std::size_t k);

nlohmann::json to_json(const CAResult& result, const AxisReport& report);

}  // namespace chainscope
