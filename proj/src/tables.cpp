#include "chainscope/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "chainscope/csv.hpp"
#include "chainscope/error.hpp"

namespace chainscope {

std::int64_t ContingencyTable::row_total(std::size_t row) const {
  return std::accumulate(counts.at(row).begin(), counts.at(row).end(), std::int64_t{0});
}

std::int64_t ContingencyTable::col_total(std::size_t col) const {
  std::int64_t total = 0;
  for (const auto& row : counts) total += row.at(col);
  return total;
}

std::int64_t ContingencyTable::grand_total() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) total += row_total(i);
  return total;
}

ContingencyTable ContingencyTable::zeros(std::vector<std::string> rows, std::vector<std::string> cols) {
  ContingencyTable table{std::move(rows), std::move(cols), {}};
  table.counts.assign(table.row_labels.size(), std::vector<std::int64_t>(table.col_labels.size(), 0));
  return table;
}

void ContingencyTable::check_shape() const {
  if (counts.size() != row_labels.size()) throw Error(ErrorKind::SchemaError, "row count mismatch");
  for (const auto& row : counts) {
    if (row.size() != col_labels.size()) throw Error(ErrorKind::SchemaError, "column count mismatch");
    for (std::int64_t value : row) {
      if (value < 0) throw Error(ErrorKind::SchemaError, "negative count in contingency table");
    }
  }
}

ContingencyTable cross_tab(std::span<const std::pair<std::string, std::string>> observations,
                           const std::optional<std::vector<std::string>>& row_order,
                           const std::optional<std::vector<std::string>>& col_order) {
  if (observations.empty()) throw Error(ErrorKind::EmptyInput, "cross_tab needs at least one observation");
  auto labels = [&](const std::optional<std::vector<std::string>>& fixed, bool first) {
    if (fixed) return *fixed;
    std::vector<std::string> seen;
    for (const auto& [row, col] : observations) seen.push_back(first ? row : col);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    return seen;
  };
  ContingencyTable table = ContingencyTable::zeros(labels(row_order, true), labels(col_order, false));
  std::map<std::string, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < table.rows(); ++i) row_index.emplace(table.row_labels[i], i);
  for (std::size_t j = 0; j < table.cols(); ++j) col_index.emplace(table.col_labels[j], j);
  for (const auto& [row, col] : observations) {
    const auto r = row_index.find(row);
    const auto c = col_index.find(col);
    if (r == row_index.end() || c == col_index.end()) {
      throw Error(ErrorKind::InvalidArgument, "observation (" + row + ", " + col + ") outside the label set");
    }
    ++table.counts[r->second][c->second];
  }
  return table;
}

double round_one_decimal(double value) { return std::round(value * 10.0) / 10.0; }

std::vector<std::vector<double>> row_percentages(const ContingencyTable& table) {
  std::vector<std::vector<double>> result(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const std::int64_t total = table.row_total(i);
    if (total == 0) continue;
    for (std::int64_t value : table.counts[i]) {
      result[i].push_back(round_one_decimal(100.0 * static_cast<double>(value) / static_cast<double>(total)));
    }
  }
  return result;
}

ContingencyTable load_contingency_table(const std::filesystem::path& path) {
  const csv::Table file = csv::read_file(path);
  if (file.header.size() < 2) throw Error(ErrorKind::SchemaError, path.string() + ": need a label column and >= 1 category");
  ContingencyTable table;
  table.col_labels.assign(file.header.begin() + 1, file.header.end());
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const auto& row = file.rows[i];
    const std::string where = path.string() + ":" + std::to_string(file.line_numbers[i]);
    if (row.size() != file.header.size()) throw Error(ErrorKind::SchemaError, where + ": wrong field count");
    table.row_labels.push_back(row[0]);
    std::vector<std::int64_t> counts;
    for (std::size_t j = 1; j < row.size(); ++j) {
      long long value = 0;
      if (!csv::parse_int(row[j], value) || value < 0) {
        throw Error(ErrorKind::SchemaError, where + ": '" + row[j] + "' is not a non-negative integer count");
      }
      counts.push_back(value);
    }
    table.counts.push_back(std::move(counts));
  }
  return table;
}

namespace {

std::ofstream open_table(const std::filesystem::path& path, const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& comment : comments) out << "# " << comment << '\n';
  return out;
}

std::string one_decimal(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", value);
  return buffer;
}

}  // namespace

void write_contingency_table(const ContingencyTable& table, const std::filesystem::path& path,
                             std::string_view corner, const std::vector<std::string>& header_comments) {
  table.check_shape();
  auto out = open_table(path, header_comments);
  csv::Row header{std::string(corner)};
  header.insert(header.end(), table.col_labels.begin(), table.col_labels.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    csv::Row row{table.row_labels[i]};
    for (std::int64_t value : table.counts[i]) row.push_back(std::to_string(value));
    csv::write_row(out, row);
  }
}

void write_percent_table(const ContingencyTable& table, const std::filesystem::path& path,
                         std::string_view corner, const std::vector<std::string>& header_comments) {
  table.check_shape();
  auto out = open_table(path, header_comments);
  csv::Row header{std::string(corner)};
  header.insert(header.end(), table.col_labels.begin(), table.col_labels.end());
  header.push_back("TOTAL");
  header.push_back("n");
  csv::write_row(out, header);
  const auto percents = row_percentages(table);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (percents[i].empty()) continue;
    csv::Row row{table.row_labels[i]};
    for (double value : percents[i]) row.push_back(one_decimal(value));
    row.push_back("100.0");
    row.push_back(std::to_string(table.row_total(i)));
    csv::write_row(out, row);
  }
}

}  // namespace chainscope
