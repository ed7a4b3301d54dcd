#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coda/composition.hpp"

namespace coda {

/// How to map the columns of a delimited file onto a CompositionSet.
struct DatasetLayout {
  std::string firm_column = "Firm";
  /// Compositional columns in order. Empty: every column named x<digits>.
  std::vector<std::string> part_columns;
  /// Optional descriptions for part columns.
  std::map<std::string, std::string> part_descriptions;
  /// Columns forced to be categorical even if every cell is numeric.
  std::vector<std::string> categorical_columns;
  char delimiter = ',';
};

inline constexpr std::string_view kMissingMarker = "NA";

/// Parses a header-first delimited table. Compositional cells must be finite
/// decimals (zeros allowed at this stage); extras cells may be "NA". Extras
/// columns whose non-missing cells all parse as numbers become numeric.
/// Throws ParseError with the 1-based row/column of the first problem.
CompositionSet parse_dataset(std::string_view text, const DatasetLayout& layout = {});
CompositionSet read_dataset(const std::filesystem::path& path, const DatasetLayout& layout = {});

/// Writes firm id, parts, then extras with 17 significant digits, so that
/// parse_dataset reproduces the set exactly.
std::string format_dataset(const CompositionSet& set, char delimiter = ',');
void write_dataset(const CompositionSet& set, const std::filesystem::path& path, char delimiter = ',');

/// Numeric 0/1 copy of a two-level column: cells equal to `positive_label`
/// become 1, the other level 0, missing stays missing. The result replaces the
/// column. Throws ValidationError if the column has more than two levels or
/// lacks `positive_label`.
CompositionSet recode_binary(const CompositionSet& set, std::string_view column, std::string_view positive_label);

/// The 109-firm Spanish winery data set (Firm, x1..x4, Brand, Age).
std::string_view bundled_winery_csv();

/// The bundled data parsed with part descriptions
/// x1 Revenues, x2 Costs, x3 Liabilities, x4 Assets.
CompositionSet load_winery();

/// Writes `contents` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace coda
