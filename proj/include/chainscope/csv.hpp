#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chainscope::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  // 1-based physical line number of each data row, for error reporting.
  std::vector<std::size_t> line_numbers;
  // Leading '#' lines, without the marker.
  std::vector<std::string> comments;
};

/// Parses RFC-4180 text: comma separated, double-quote escaping, CRLF or LF
/// line ends. Lines starting with '#' before the header are kept as comments.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

std::string escape_field(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
/// Strict full-string parses; return false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

}  // namespace chainscope::csv
