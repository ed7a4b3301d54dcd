#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coda/composition.hpp"
#include "coda/industry_stats.hpp"
#include "coda/multivariate.hpp"
#include "coda/ratio_graph.hpp"
#include "coda/transforms.hpp"

namespace coda {

/// SBP text: one partition per line, D whitespace-separated tokens from
/// {+, -, 0} in the order of `parts`. A line may start with "name:" to name
/// the coordinate. Blank lines and lines starting with '#' are ignored.
SbpMatrix parse_sbp(std::string_view text, const std::vector<std::string>& parts);
std::string format_sbp(const SbpMatrix& sbp);

/// Graph text: one edge per line, "name: numerator / denominator".
LogRatioGraph parse_graph(std::string_view text, const std::vector<std::string>& parts);
std::string format_graph(const LogRatioGraph& graph);

/// The same SBP with its columns permuted to `parts` (a permutation of sbp.parts()).
SbpMatrix reorder_sbp(const SbpMatrix& sbp, const std::vector<std::string>& parts);

/// Everything an analysis run needs besides the data.
struct AnalysisConfig {
  /// Empty: no ratio scheme (built-in SBPs then follow the data's part order).
  std::optional<SchemeKind> scheme;
  std::map<std::string, std::string> role_to_part;  // empty: positional
  std::string sbp;                                  // built-in name or file path; empty: none
  std::optional<std::filesystem::path> graph;
  std::optional<std::string> group_by;
  KMeansOptions kmeans;
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  std::vector<std::string> responses;
  std::vector<std::string> predictors;
  std::filesystem::path out_dir = "out";
};

/// Config objects resolved against a data set.
struct ResolvedConfig {
  std::optional<RatioScheme> scheme;
  std::optional<SbpMatrix> sbp;  // columns in the data's part order
  std::optional<LogRatioGraph> graph;
};

/// Checks that every referenced column exists and that the graph and SBP
/// validate. Throws ValidationError with the first problem found.
ResolvedConfig resolve_config(const AnalysisConfig& config, const CompositionSet& set);

}  // namespace coda
