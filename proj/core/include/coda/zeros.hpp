#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"

namespace coda {

/// Parts with more zeros than this fraction are flagged.
inline constexpr double kZeroFractionThreshold = 0.20;
inline constexpr double kDefaultZeroReplacementFraction = 0.65;

struct ZeroReport {
  std::vector<std::string> parts;
  std::vector<double> per_part_zero_fraction;
  double overall_zero_fraction = 0.0;
  /// Fraction of rows where both parts are zero; diagonal = per-part fraction.
  Eigen::MatrixXd cooccurrence;
  std::vector<std::string> flagged_parts;
};

/// Requires finite, non-negative cells (throws ValidationError otherwise).
ZeroReport zero_report(const CompositionSet& set);

struct DetectionLimits {
  std::vector<std::string> parts;
  std::vector<double> per_part_limit;
};

/// Per-part minimum over strictly positive cells. Throws ValidationError
/// "part has no positive observations" for an all-zero part.
DetectionLimits detection_limits(const CompositionSet& set);

/// Replaces each zero in part j by fraction * limit_j. Non-zero cells are left
/// untouched (raw accounting figures are not closed to a constant sum).
/// Throws ValidationError listing the flagged parts unless `allow_flagged`.
CompositionSet replace_zeros(const CompositionSet& set, const DetectionLimits& limits,
                             double fraction = kDefaultZeroReplacementFraction, bool allow_flagged = false);

}  // namespace coda
