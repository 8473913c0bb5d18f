#include <doctest.h>

#include <random>

#include "chainscope/csv.hpp"
#include "chainscope/tables.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chainscope;

TEST_SUITE("tables") {

TEST_CASE("rounding goes half away from zero") {
  CHECK(round_one_decimal(33.35) == doctest::Approx(33.4));
  CHECK(round_one_decimal(0.25) == doctest::Approx(0.3));
  CHECK(round_one_decimal(-0.25) == doctest::Approx(-0.3));
  CHECK(round_one_decimal(100.0 / 3.0) == doctest::Approx(33.3));
}

TEST_CASE("cross tabulation") {
  const std::vector<std::pair<std::string, std::string>> obs{{"a", "x"}, {"b", "y"}, {"a", "x"}, {"a", "y"}};
  const auto table = cross_tab(obs);
  CHECK(table.row_labels == std::vector<std::string>{"a", "b"});
  CHECK(table.counts == std::vector<std::vector<std::int64_t>>{{2, 1}, {0, 1}});
  const auto ordered = cross_tab(obs, std::vector<std::string>{"b", "a", "c"}, std::vector<std::string>{"y", "x"});
  CHECK(ordered.counts == std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 2}, {0, 0}});
  CHECK_THROWS_AS(cross_tab(obs, std::vector<std::string>{"a"}), Error);
  CHECK_THROWS_AS(cross_tab(std::vector<std::pair<std::string, std::string>>{}), Error);
}

TEST_CASE("row percentages sum to 100 within half a point") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    const auto table = oracle::random_table(rng, 10, 9, 50);
    const auto pct = row_percentages(table);
    for (std::size_t i = 0; i < table.rows(); ++i) {
      if (table.row_total(i) == 0) {
        CHECK(pct[i].empty());
        continue;
      }
      double sum = 0.0;
      for (double v : pct[i]) sum += v;
      CHECK(std::abs(sum - 100.0) <= 0.5);
    }
  }
}

TEST_CASE("published percentage tables respect the same tolerance") {
  for (const char* name : {"paper_table2.csv", "paper_table3.csv"}) {
    const auto table = csv::read_file(testing_support::data_dir() / name);
    for (const auto& row : table.rows) {
      double sum = 0.0, value = 0.0;
      for (std::size_t j = 1; j + 1 < row.size(); ++j) {
        REQUIRE(csv::parse_double(row[j], value));
        sum += value;
      }
      CHECK(std::abs(sum - 100.0) <= 1.0);
    }
  }
}

TEST_CASE("contingency CSV round-trip and percent output") {
  testing_support::TempDir dir("tables");
  const ContingencyTable table{{"SMALL", "MEDIUM"}, {"EU", "CEE", "PC"}, {{1, 2, 0}, {0, 0, 0}}};
  write_contingency_table(table, dir / "t.csv", "size", {"hello"});
  CHECK(load_contingency_table(dir / "t.csv") == table);
  write_percent_table(table, dir / "p.csv", "size");
  const auto pct = csv::read_file(dir / "p.csv");
  CHECK(pct.header == csv::Row{"size", "EU", "CEE", "PC", "TOTAL", "n"});
  REQUIRE(pct.rows.size() == 1);
  CHECK(pct.rows[0] == csv::Row{"SMALL", "33.3", "66.7", "0.0", "100.0", "3"});
}

TEST_CASE("shape checks") {
  ContingencyTable bad{{"a"}, {"x", "y"}, {{1}}};
  CHECK_THROWS_AS(bad.check_shape(), Error);
  ContingencyTable negative{{"a"}, {"x"}, {{-1}}};
  CHECK_THROWS_AS(negative.check_shape(), Error);
}

}
