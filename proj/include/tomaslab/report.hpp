#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace tomaslab {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rectangular table with a provenance note (config echo and seed).
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string provenance;

  /// Throws if the row arity differs from the header.
  void add_row(std::vector<Cell> row);
};

/// Doubles as %.17g; inf and nan spelled out. Strings containing commas or
/// quotes are quoted.
std::string format_cell(const Cell& cell);

/// Header first, one line per row, newline-terminated.
std::string render_csv(const ReportTable& table);
void emit_csv(const ReportTable& table, const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tomaslab
