#include "coda/table.hpp"

#include <cmath>

#include <fmt/format.h>

#include "coda/dataset.hpp"
#include "coda/errors.hpp"

namespace coda {

namespace {

std::string render_cell(const Cell& cell, int decimals) {
  if (std::holds_alternative<std::monostate>(cell)) return std::string(kMissingMarker);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<long long>(&cell)) return fmt::format("{}", *i);
  return format_fixed(std::get<double>(cell), decimals);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string markdown_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

TableFormat table_format_from_string(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "markdown" || name == "md") return TableFormat::markdown;
  throw ValidationError(fmt::format("unknown table format '{}' (expected csv or markdown)", name));
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  std::string s = fmt::format("{:.{}f}", value, decimals < 0 ? 0 : decimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string render_table(const Table& table, TableFormat format, int decimals) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.headers.size()) {
      throw ValidationError(fmt::format("table row {} has {} cells, header has {}", r + 1, table.rows[r].size(),
                                        table.headers.size()));
    }
  }
  std::string out;
  if (format == TableFormat::csv) {
    auto line = [&](auto&& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(cells[c]);
      }
      out += '\n';
    };
    line(table.headers);
    for (const auto& row : table.rows) {
      std::vector<std::string> cells;
      for (const auto& cell : row) cells.push_back(render_cell(cell, decimals));
      line(cells);
    }
    return out;
  }
  auto line = [&](auto&& cells) {
    out += '|';
    for (const auto& c : cells) out += ' ' + markdown_escape(c) + " |";
    out += '\n';
  };
  line(table.headers);
  out += '|';
  for (std::size_t c = 0; c < table.headers.size(); ++c) out += " --- |";
  out += '\n';
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (const auto& cell : row) cells.push_back(render_cell(cell, decimals));
    line(cells);
  }
  return out;
}

void emit_table(const Table& table, TableFormat format, int decimals, const std::filesystem::path& path) {
  write_text_file(path, render_table(table, format, decimals));
}

}  // namespace coda
