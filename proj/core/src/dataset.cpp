#include "coda/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one record. Double-quoted fields may contain the delimiter; "" is a
// literal quote.
std::vector<std::string> split_record(std::string_view line, char delimiter, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (ch == delimiter) {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", row);
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string> default_part_columns(const std::vector<std::string>& header) {
  static const std::regex part_name("x[0-9]+");
  std::vector<std::string> out;
  for (const auto& h : header) {
    if (std::regex_match(h, part_name)) out.push_back(h);
  }
  return out;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string quote_if_needed(const std::string& s, char delimiter) {
  if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos && s.find('\n') == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

CompositionSet parse_dataset(std::string_view text, const DatasetLayout& layout) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    records.push_back(split_record(line, layout.delimiter, line_no));
    line_numbers.push_back(line_no);
  }
  if (records.empty()) throw ParseError("empty file");

  const auto& header = records.front();
  {
    std::unordered_set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c].empty()) throw ParseError("empty column name", line_numbers[0], c + 1);
      if (!seen.insert(header[c]).second) throw ParseError("duplicate column '" + header[c] + "'", line_numbers[0], c + 1);
    }
  }
  auto column_of = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(fmt::format("missing column '{}'", name), line_numbers[0]);
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t firm_col = column_of(layout.firm_column);
  const std::vector<std::string> part_names =
      layout.part_columns.empty() ? default_part_columns(header) : layout.part_columns;
  if (part_names.size() < 2) throw ParseError("need at least 2 compositional columns", line_numbers[0]);
  std::vector<std::size_t> part_cols;
  for (const auto& p : part_names) {
    const std::size_t c = column_of(p);
    if (c == firm_col) throw ParseError(fmt::format("column '{}' cannot be both firm id and part", p), line_numbers[0]);
    part_cols.push_back(c);
  }
  std::vector<std::size_t> extra_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != firm_col && std::find(part_cols.begin(), part_cols.end(), c) == part_cols.end()) extra_cols.push_back(c);
  }

  const std::size_t n = records.size() - 1;
  std::vector<std::string> ids;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(part_cols.size()));
  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t line = line_numbers[r];
    if (rec.size() != header.size()) {
      throw ParseError(fmt::format("expected {} fields, found {}", header.size(), rec.size()), line);
    }
    if (rec[firm_col].empty()) throw ParseError("empty firm id", line, firm_col + 1);
    if (!seen_ids.insert(rec[firm_col]).second) {
      throw ParseError(fmt::format("duplicate firm id '{}'", rec[firm_col]), line, firm_col + 1);
    }
    ids.push_back(rec[firm_col]);
    for (std::size_t j = 0; j < part_cols.size(); ++j) {
      double v = 0.0;
      if (!parse_double(rec[part_cols[j]], v)) {
        throw ParseError(fmt::format("compositional cell '{}' in column '{}' is not a finite number", rec[part_cols[j]],
                                     header[part_cols[j]]),
                         line, part_cols[j] + 1);
      }
      values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(j)) = v;
    }
  }

  std::vector<ExtraColumn> extras;
  for (std::size_t c : extra_cols) {
    const bool forced_categorical = std::find(layout.categorical_columns.begin(), layout.categorical_columns.end(),
                                              header[c]) != layout.categorical_columns.end();
    bool numeric = !forced_categorical;
    ExtraColumn::Numeric nums;
    ExtraColumn::Categorical cats;
    for (std::size_t r = 1; r < records.size(); ++r) {
      const std::string& cell = records[r][c];
      if (cell == kMissingMarker || cell.empty()) {
        nums.emplace_back(std::nullopt);
        cats.emplace_back(std::nullopt);
        continue;
      }
      cats.emplace_back(cell);
      double v = 0.0;
      if (numeric && parse_double(cell, v)) {
        nums.emplace_back(v);
      } else {
        numeric = false;
      }
    }
    if (numeric) {
      extras.push_back({header[c], std::move(nums)});
    } else {
      extras.push_back({header[c], std::move(cats)});
    }
  }

  std::vector<PartLabel> parts;
  for (const auto& p : part_names) {
    const auto d = layout.part_descriptions.find(p);
    parts.push_back({p, d == layout.part_descriptions.end() ? std::string{} : d->second});
  }
  return CompositionSet(std::move(parts), std::move(ids), std::move(values), std::move(extras));
}

CompositionSet read_dataset(const std::filesystem::path& path, const DatasetLayout& layout) {
  return parse_dataset(read_text_file(path), layout);
}

std::string format_dataset(const CompositionSet& set, char delimiter) {
  std::string out = quote_if_needed("Firm", delimiter);
  for (const auto& p : set.parts()) out += delimiter + quote_if_needed(p.name, delimiter);
  for (const auto& e : set.extras()) out += delimiter + quote_if_needed(e.name, delimiter);
  out += '\n';
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    out += quote_if_needed(set.firm_ids()[i], delimiter);
    for (Eigen::Index j = 0; j < set.values().cols(); ++j) {
      out += delimiter + format_number(set.values()(static_cast<Eigen::Index>(i), j));
    }
    for (const auto& e : set.extras()) {
      out += delimiter;
      if (e.is_missing(i)) {
        out += kMissingMarker;
      } else if (e.is_numeric()) {
        out += format_number(*e.number(i));
      } else {
        out += quote_if_needed(*e.label(i), delimiter);
      }
    }
    out += '\n';
  }
  return out;
}

void write_dataset(const CompositionSet& set, const std::filesystem::path& path, char delimiter) {
  write_text_file(path, format_dataset(set, delimiter));
}

CompositionSet recode_binary(const CompositionSet& set, std::string_view column, std::string_view positive_label) {
  const ExtraColumn& src = set.extra(column);
  std::vector<std::string> levels;
  ExtraColumn::Numeric coded;
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    const auto label = src.label(i);
    if (!label) {
      coded.emplace_back(std::nullopt);
      continue;
    }
    if (std::find(levels.begin(), levels.end(), *label) == levels.end()) levels.push_back(*label);
    coded.emplace_back(*label == positive_label ? 1.0 : 0.0);
  }
  if (levels.size() > 2) {
    throw ValidationError(fmt::format("column '{}' has {} levels; a binary recode needs at most 2", column, levels.size()));
  }
  if (std::find(levels.begin(), levels.end(), positive_label) == levels.end()) {
    throw ValidationError(fmt::format("column '{}' has no level '{}'", column, positive_label));
  }
  return set.with_extra({std::string(column), std::move(coded)});
}

CompositionSet load_winery() {
  DatasetLayout layout;
  layout.part_columns = {"x1", "x2", "x3", "x4"};
  layout.part_descriptions = {{"x1", "Revenues"}, {"x2", "Costs"}, {"x3", "Liabilities"}, {"x4", "Assets"}};
  return parse_dataset(bundled_winery_csv(), layout);
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coda
