#include "coda/zeros.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

void require_non_negative(const CompositionSet& set) {
  const auto& v = set.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (!std::isfinite(v(i, j)) || v(i, j) < 0.0) {
        throw ValidationError(fmt::format("firm '{}', part '{}': zero handling needs finite non-negative cells, got {}",
                                          set.firm_ids()[i], set.parts()[j].name, v(i, j)));
      }
    }
  }
}

}  // namespace

ZeroReport zero_report(const CompositionSet& set) {
  require_non_negative(set);
  const auto& v = set.values();
  const auto n = static_cast<double>(v.rows());
  const Eigen::MatrixXd zero = (v.array() == 0.0).cast<double>().matrix();

  ZeroReport out;
  out.parts = set.part_names();
  out.cooccurrence = n > 0 ? Eigen::MatrixXd(zero.transpose() * zero / n)
                           : Eigen::MatrixXd::Zero(v.cols(), v.cols());
  out.overall_zero_fraction = v.size() > 0 ? zero.sum() / static_cast<double>(v.size()) : 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double f = out.cooccurrence(j, j);
    out.per_part_zero_fraction.push_back(f);
    if (f > kZeroFractionThreshold) out.flagged_parts.push_back(out.parts[static_cast<std::size_t>(j)]);
  }
  return out;
}

DetectionLimits detection_limits(const CompositionSet& set) {
  require_non_negative(set);
  const auto& v = set.values();
  DetectionLimits out{set.part_names(), {}};
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    double limit = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (v(i, j) > 0.0) limit = std::min(limit, v(i, j));
    }
    if (!std::isfinite(limit)) {
      throw ValidationError(fmt::format("part '{}': part has no positive observations", set.parts()[j].name));
    }
    out.per_part_limit.push_back(limit);
  }
  return out;
}

CompositionSet replace_zeros(const CompositionSet& set, const DetectionLimits& limits, double fraction,
                             bool allow_flagged) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValidationError(fmt::format("zero replacement fraction must lie in (0,1), got {}", fraction));
  }
  if (limits.parts != set.part_names()) throw ValidationError("detection limits do not match the data parts");
  for (double l : limits.per_part_limit) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError(fmt::format("detection limit must be positive, got {}", l));
  }
  const ZeroReport report = zero_report(set);
  if (!report.flagged_parts.empty() && !allow_flagged) {
    throw ValidationError(fmt::format("parts with more than {:.0f}% zeros: {} (pass --allow-flagged-zeros to override)",
                                      kZeroFractionThreshold * 100.0, fmt::join(report.flagged_parts, ", ")));
  }
  Eigen::MatrixXd v = set.values();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double replacement = fraction * limits.per_part_limit[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (v(i, j) == 0.0) v(i, j) = replacement;
    }
  }
  return set.with_values(std::move(v));
}

}  // namespace coda
