#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fuzzyblock::app {

// Comma-separated table with a mandatory header row. Lines starting with '#'
// before the header are comments.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;  // -1 when absent
  int require_column(std::string_view name) const;
  double number(std::size_t row, int col) const;
};

CsvTable parse_csv(std::string_view text, const std::string& label = "csv");
std::string to_csv(const CsvTable& t);

// Shortest representation that parses back to the same double.
std::string fmt_num(double v);

}  // namespace fuzzyblock::app
