#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coda/boxplot.hpp"
#include "coda/multivariate.hpp"

namespace coda {

// Every renderer validates its input and returns a complete standalone SVG
// document. Data marks carry a class attribute ("box", "point", "ray",
// "tile", "link") so the output can be inspected mechanically.

struct BoxplotFigure {
  std::string title;
  std::string y_label;
  std::vector<BoxplotStats> boxes;
};
std::string render_boxplot(const BoxplotFigure& fig);

struct ScatterFigure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> groups;  // empty, or one label per point
  bool connect = false;             // draw a polyline through the points in order
};
std::string render_scatter(const ScatterFigure& fig);

/// Mosaic layout: one column per `column_labels` category with width
/// proportional to its size, split into segments whose heights are the shares
/// of each `segment_labels` category within the column.
struct MosaicSegment {
  std::string label;
  std::size_t count = 0;
  double share = 0.0;
};
struct MosaicColumn {
  std::string label;
  std::size_t count = 0;
  double width_fraction = 0.0;
  std::vector<MosaicSegment> segments;  // in the order of the segment categories
};
struct MosaicFigure {
  std::string title;
  std::vector<std::string> column_labels;   // one per observation
  std::vector<std::string> segment_labels;  // one per observation
};
/// Columns and segments sorted by label (numerically when every label is a number).
std::vector<MosaicColumn> mosaic_layout(const MosaicFigure& fig);
std::string render_mosaic(const MosaicFigure& fig);

struct BiplotFigure {
  std::string title;
  const BiplotModel* model = nullptr;
  std::vector<std::string> groups;  // empty, or one label per firm
  std::vector<std::pair<std::string, std::string>> links;  // (numerator, denominator)
};
std::string render_biplot(const BiplotFigure& fig);

}  // namespace coda
