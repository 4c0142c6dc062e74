#include "qicd/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qicd/error.hpp"

namespace qicd {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("format_number: conversion failed");
  return std::string(buf, end);
}

void CsvTable::add_meta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != columns.size()) throw ValidationError("CsvTable: row width does not match header");
  rows.push_back(std::move(row));
}

namespace {

struct CellWriter {
  std::ostream& out;
  void operator()(double v) const { out << format_number(v); }
  void operator()(std::int64_t v) const { out << v; }
  void operator()(const std::string& v) const {
    if (v.find_first_of(",\"\n") == std::string::npos) {
      out << v;
      return;
    }
    out << '"';
    for (char ch : v) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << '"';
  }
};

}  // namespace

void CsvTable::write(std::ostream& out) const {
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(CellWriter{out}, row[i]);
    }
    out << '\n';
  }
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void write_csv_file(const CsvTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  table.write(f);
  if (!f) throw Error("write failed: " + path);
}

}  // namespace qicd
