#include "chainscope/ca.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "chainscope/error.hpp"

namespace chainscope {

namespace {

constexpr double kRelativeAxisCutoff = 1e-10;
// Below this the residual matrix is rounding noise from an independence table.
constexpr double kDegenerateSigma = 1e-12;

}  // namespace

CAResult fit_ca(const ContingencyTable& table) {
  table.check_shape();
  CAResult result;

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    (table.row_total(i) > 0 ? rows.push_back(i) : result.dropped_rows.push_back(table.row_labels[i]));
  }
  for (std::size_t j = 0; j < table.cols(); ++j) {
    (table.col_total(j) > 0 ? cols.push_back(j) : result.dropped_cols.push_back(table.col_labels[j]));
  }
  for (std::size_t i : rows) result.row_labels.push_back(table.row_labels[i]);
  for (std::size_t j : cols) result.col_labels.push_back(table.col_labels[j]);

  const auto grand = table.grand_total();
  if (grand == 0) throw Error(ErrorKind::EmptyInput, "contingency table sums to zero");
  if (rows.size() < 2 || cols.size() < 2) {
    throw Error(ErrorKind::InsufficientTable, "correspondence analysis needs >= 2 non-empty rows and columns, have " +
                                                  std::to_string(rows.size()) + " x " + std::to_string(cols.size()));
  }
  result.n = static_cast<double>(grand);

  const auto I = static_cast<Eigen::Index>(rows.size());
  const auto J = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd P(I, J);
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      P(i, j) = static_cast<double>(table.counts[rows[i]][cols[j]]) / result.n;
    }
  }
  const Eigen::VectorXd r = P.rowwise().sum();
  const Eigen::VectorXd c = P.colwise().sum().transpose();
  const Eigen::VectorXd r_isqrt = r.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_isqrt = c.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = r_isqrt.asDiagonal() * (P - r * c.transpose()) * c_isqrt.asDiagonal();

  result.row_masses.assign(r.data(), r.data() + I);
  result.col_masses.assign(c.data(), c.data() + J);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::MatrixXd U = svd.matrixU();
  Eigen::MatrixXd V = svd.matrixV();

  Eigen::Index kept = 0;
  if (sigma.size() > 0 && sigma(0) >= kDegenerateSigma) {
    const Eigen::Index limit = std::min(I, J) - 1;
    while (kept < sigma.size() && kept < limit && sigma(kept) >= kRelativeAxisCutoff * sigma(0)) ++kept;
  }
  result.degenerate = kept == 0;

  for (Eigen::Index k = 0; k < kept; ++k) {
    Eigen::Index pivot = 0;
    U.col(k).cwiseProduct(r_isqrt).cwiseAbs().maxCoeff(&pivot);
    if (U(pivot, k) < 0.0) {
      U.col(k) *= -1.0;
      V.col(k) *= -1.0;
    }
    result.singular_values.push_back(sigma(k));
    result.inertias.push_back(sigma(k) * sigma(k));
    result.total_inertia += sigma(k) * sigma(k);
  }
  for (double inertia : result.inertias) result.shares.push_back(inertia / result.total_inertia);

  result.row_coordinates.assign(rows.size(), std::vector<double>(kept));
  result.col_coordinates.assign(cols.size(), std::vector<double>(kept));
  for (Eigen::Index k = 0; k < kept; ++k) {
    for (Eigen::Index i = 0; i < I; ++i) result.row_coordinates[i][k] = r_isqrt(i) * U(i, k) * sigma(k);
    for (Eigen::Index j = 0; j < J; ++j) result.col_coordinates[j][k] = c_isqrt(j) * V(j, k) * sigma(k);
  }
  return result;
}

AxisReport axis_report(const CAResult& result, std::size_t k) {
  if (k > result.axes()) {
    throw Error(ErrorKind::AxisOutOfRange,
                "requested " + std::to_string(k) + " axes, result has " + std::to_string(result.axes()));
  }
  AxisReport report;
  report.axes = k;
  for (std::size_t a = 0; a < k; ++a) report.cumulative_share += result.shares[a];
  auto contributions = [&](const std::vector<std::vector<double>>& coords, const std::vector<double>& masses) {
    std::vector<std::vector<double>> out(coords.size(), std::vector<double>(k));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        out[i][a] = masses[i] * coords[i][a] * coords[i][a] / result.inertias[a];
      }
    }
    return out;
  };
  report.row_contributions = contributions(result.row_coordinates, result.row_masses);
  report.col_contributions = contributions(result.col_coordinates, result.col_masses);
  return report;
}

nlohmann::json to_json(const CAResult& result, const AxisReport& report) {
  using nlohmann::json;
  auto points = [&](const std::vector<std::string>& labels, const std::vector<double>& masses,
                    const std::vector<std::vector<double>>& coords,
                    const std::vector<std::vector<double>>& contributions) {
    json list = json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      list.push_back({{"label", labels[i]},
                      {"mass", masses[i]},
                      {"coordinates", coords[i]},
                      {"contributions", contributions[i]}});
    }
    return list;
  };
  return {
      {"n", result.n},
      {"total_inertia", result.total_inertia},
      {"chi_square", result.total_inertia * result.n},
      {"degenerate", result.degenerate},
      {"singular_values", result.singular_values},
      {"inertias", result.inertias},
      {"shares", result.shares},
      {"reported_axes", report.axes},
      {"cumulative_share", report.cumulative_share},
      {"dropped_rows", result.dropped_rows},
      {"dropped_columns", result.dropped_cols},
      {"rows", points(result.row_labels, result.row_masses, result.row_coordinates, report.row_contributions)},
      {"columns", points(result.col_labels, result.col_masses, result.col_coordinates, report.col_contributions)},
  };
}

}  // namespace chainscope
