#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kickdyn/errors.hpp"

namespace kickdyn::app {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns.at(i);
  }
  throw ArgumentError("csv: no column named '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  if (table.header.size() != table.columns.size()) throw ArgumentError("csv: header/column count mismatch");
  for (const auto& c : table.columns) {
    if (c.size() != table.rows()) throw ArgumentError("csv: ragged columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << format_double(table.columns[j][i]);
    out << '\n';
  }
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("csv: empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  t.columns.resize(t.header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= t.columns.size()) throw ArgumentError("csv: too many fields on line " + std::to_string(lineno));
      try {
        t.columns[j++].push_back(std::stod(cell));
      } catch (const std::logic_error&) {
        throw ArgumentError("csv: bad number '" + cell + "' on line " + std::to_string(lineno));
      }
    }
    if (j != t.columns.size()) throw ArgumentError("csv: too few fields on line " + std::to_string(lineno));
  }
  return t;
}

}  // namespace kickdyn::app
