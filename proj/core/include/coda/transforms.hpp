#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"

namespace coda {

/// A named pairwise log-ratio log(numerator / denominator).
struct LogRatioSpec {
  std::string name;
  std::string numerator;
  std::string denominator;

  /// The same log-ratio with numerator and denominator swapped.
  LogRatioSpec reversed() const;

  friend bool operator==(const LogRatioSpec&, const LogRatioSpec&) = default;
};

enum class LogRatioKind { pairwise, clr, ilr };

std::string_view to_string(LogRatioKind kind) noexcept;

/// n x m matrix of log-ratio variables with column names.
struct LogRatioMatrix {
  LogRatioKind kind = LogRatioKind::pairwise;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  /// Column by name; throws ValidationError if absent.
  Eigen::VectorXd column(std::string_view name) const;
};

/// log(x_num) - log(x_den) for every firm. Throws on unknown parts or a
/// non-positive cell in either part.
Eigen::VectorXd pairwise_logratio(const CompositionSet& set, const LogRatioSpec& spec);

LogRatioMatrix pairwise_logratios(const CompositionSet& set, std::span<const LogRatioSpec> specs);

/// Centred log-ratios; column j is named "clr.<part>".
LogRatioMatrix clr(const CompositionSet& set);

/// clr of a single composition.
Eigen::VectorXd clr(const Composition& c);

/// Sequential binary partition as a (D-1) x D sign matrix (+1 numerator,
/// -1 denominator, 0 not involved). Rows may carry user-supplied names.
class SbpMatrix {
 public:
  /// Throws ValidationError only for shape problems (column count != D,
  /// entries outside {-1,0,1}, names count mismatch). Use validate_sbp for the
  /// partition rules.
  SbpMatrix(std::vector<std::string> parts, Eigen::MatrixXi signs, std::vector<std::string> row_names = {});

  const std::vector<std::string>& parts() const noexcept { return parts_; }
  const Eigen::MatrixXi& signs() const noexcept { return signs_; }
  std::size_t row_count() const noexcept { return static_cast<std::size_t>(signs_.rows()); }
  const std::vector<std::string>& row_names() const noexcept { return row_names_; }

  /// Name of coordinate k: the user-supplied one, else "ilr_<k+1>:+a,b|-c,d".
  std::string coordinate_name(std::size_t k) const;

  /// Number of + and - entries in row k.
  std::size_t numerator_count(std::size_t k) const;
  std::size_t denominator_count(std::size_t k) const;

 private:
  std::vector<std::string> parts_;
  Eigen::MatrixXi signs_;
  std::vector<std::string> row_names_;
};

struct SbpViolation {
  std::size_t row = 0;  // 1-based; 0 for matrix-level problems
  std::string rule;
};

std::vector<SbpViolation> validate_sbp(const SbpMatrix& sbp);

/// Names of the partitions shipped with the library: "dupont4", "balance6".
std::vector<std::string> builtin_sbp_names();

/// Built-in partition bound to `parts` (given in the scheme's role order:
/// revenues, costs, liabilities, assets for dupont4; non-current assets,
/// current assets, non-current liabilities, current liabilities, revenues,
/// costs for balance6). Throws ValidationError for unknown names or a part
/// count that does not match.
SbpMatrix builtin_sbp(std::string_view name, std::vector<std::string> parts);

/// sqrt(r*s/(r+s)).
double scaling_constant(std::size_t r, std::size_t s);

/// Isometric log-ratio coordinates for `sbp`. The SBP's part names must equal
/// the set's part names (same order). Throws ValidationError on an invalid SBP.
LogRatioMatrix ilr(const CompositionSet& set, const SbpMatrix& sbp);

}  // namespace coda
