#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chainscope {

/// Labeled matrix of non-negative counts.
struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::int64_t>> counts;  // rows x cols

  std::size_t rows() const noexcept { return row_labels.size(); }
  std::size_t cols() const noexcept { return col_labels.size(); }
  std::int64_t row_total(std::size_t row) const;
  std::int64_t col_total(std::size_t col) const;
  std::int64_t grand_total() const;

  /// Zero-filled table with the given labels.
  static ContingencyTable zeros(std::vector<std::string> rows, std::vector<std::string> cols);
  /// Throws SchemaError when labels and the count matrix disagree in shape
  /// or a count is negative.
  void check_shape() const;

  bool operator==(const ContingencyTable&) const = default;
};

/// Counts (row label, column label) observations. Label order follows
/// `row_order` / `col_order` when given (unknown labels are an error),
/// otherwise first-seen order sorted lexicographically. EmptyInput when
/// there are no observations.
ContingencyTable cross_tab(std::span<const std::pair<std::string, std::string>> observations,
                           const std::optional<std::vector<std::string>>& row_order = std::nullopt,
                           const std::optional<std::vector<std::string>>& col_order = std::nullopt);

/// One decimal, halves away from zero.
double round_one_decimal(double value);

/// Row percentages rounded to one decimal. Rows with a zero total yield an
/// empty vector.
std::vector<std::vector<double>> row_percentages(const ContingencyTable& table);

/// CSV: header "<corner>,<col labels...>", one row per label.
ContingencyTable load_contingency_table(const std::filesystem::path& path);
void write_contingency_table(const ContingencyTable& table, const std::filesystem::path& path,
                             std::string_view corner = "row",
                             const std::vector<std::string>& header_comments = {});
/// Paper-style percentage table: "<corner>,<cols...>,TOTAL,n"; zero rows omitted.
void write_percent_table(const ContingencyTable& table, const std::filesystem::path& path,
                         std::string_view corner = "row",
                         const std::vector<std::string>& header_comments = {});

}  // namespace chainscope
