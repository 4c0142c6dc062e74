#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qicd {

/// Shortest decimal string that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);

using CsvCell = std::variant<double, std::int64_t, std::string>;

/// A table with `#`-prefixed metadata lines above the header row.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;

  void add_meta(std::string key, std::string value);
  void add_row(std::vector<CsvCell> row);
  void write(std::ostream& out) const;
  std::string str() const;
};

void write_csv_file(const CsvTable& table, const std::string& path);

}  // namespace qicd
