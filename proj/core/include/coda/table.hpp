#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace coda {

/// A table cell. monostate renders as "NA" (missing or undefined).
using Cell = std::variant<std::monostate, std::string, double, long long>;

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
};

enum class TableFormat { csv, markdown };

TableFormat table_format_from_string(std::string_view name);

/// Fixed-point with `decimals` digits, '.' separator, no locale. Negative zero
/// prints as zero.
std::string format_fixed(double value, int decimals);

/// Renders `table`. Doubles use `decimals` fixed digits, every row ends with a
/// newline, and an empty row list yields the header alone. Throws
/// ValidationError on ragged rows.
std::string render_table(const Table& table, TableFormat format, int decimals);

/// render_table written to `path` (parent directories created).
void emit_table(const Table& table, TableFormat format, int decimals, const std::filesystem::path& path);

}  // namespace coda
