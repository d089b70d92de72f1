#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kickdyn::app {

/// 17 significant digits; parses back to the identical double.
[[nodiscard]] std::string format_double(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  [[nodiscard]] std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Throws ArgumentError for an unknown column name.
  [[nodiscard]] const std::vector<double>& column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const Table& table);
[[nodiscard]] Table read_csv(const std::filesystem::path& path);

}  // namespace kickdyn::app
