#include "coda/boxplot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotStats boxplot_stats(std::span<const double> values, std::string group) {
  if (values.empty()) throw ValidationError(fmt::format("empty group '{}'", group));
  std::vector<double> v(values.begin(), values.end());
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    throw ValidationError(fmt::format("non-finite value in group '{}'", group));
  }
  std::sort(v.begin(), v.end());
  BoxplotStats s;
  s.group = std::move(group);
  s.count = v.size();
  s.q1 = quantile(v, 0.25);
  s.median = quantile(v, 0.5);
  s.q3 = quantile(v, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.lower_whisker = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo_fence; });
  s.upper_whisker = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi_fence; });
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) s.outliers.push_back(x);
  }
  return s;
}

std::vector<BoxplotStats> boxplot_stats(std::span<const double> values, std::span<const std::string> groups) {
  if (values.size() != groups.size()) {
    throw ValidationError(fmt::format("{} values but {} group labels", values.size(), groups.size()));
  }
  std::vector<std::string> order;
  for (const auto& g : groups) {
    if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);
  }
  std::vector<BoxplotStats> out;
  for (const auto& g : order) {
    std::vector<double> sub;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (groups[i] == g) sub.push_back(values[i]);
    }
    out.push_back(boxplot_stats(sub, g));
  }
  return out;
}

}  // namespace coda
