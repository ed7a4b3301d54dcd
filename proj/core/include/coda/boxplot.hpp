#pragma once

#include <span>
#include <string>
#include <vector>

namespace coda {

/// Five-number summary with Tukey fences.
struct BoxplotStats {
  std::string group;
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;  // smallest value >= q1 - 1.5 IQR
  double upper_whisker = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;  // ascending
};

/// Quantile by linear interpolation at position 1 + (n-1)p of the sorted data.
double quantile(std::span<const double> sorted, double p);

/// Throws ValidationError on an empty or non-finite sample.
BoxplotStats boxplot_stats(std::span<const double> values, std::string group = {});

/// One BoxplotStats per distinct label, in order of first appearance.
/// `groups` must be as long as `values`.
std::vector<BoxplotStats> boxplot_stats(std::span<const double> values, std::span<const std::string> groups);

}  // namespace coda
