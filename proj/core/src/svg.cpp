#include "coda/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                "#e6ab02", "#a6761d", "#666666", "#1f78b4", "#b2df8a"};

std::string esc(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

struct Scale {
  double lo, hi, px_lo, px_hi;
  double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Scale make_scale(double lo, double hi, double px_lo, double px_hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, px_lo, px_hi};
}

bool as_number(const std::string& s, double& v) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> sorted_levels(const std::vector<std::string>& labels) {
  std::vector<std::string> levels;
  for (const auto& l : labels) {
    if (std::find(levels.begin(), levels.end(), l) == levels.end()) levels.push_back(l);
  }
  double a = 0, b = 0;
  const bool numeric = std::all_of(levels.begin(), levels.end(), [&](const std::string& s) { return as_number(s, a); });
  std::sort(levels.begin(), levels.end(), [&](const std::string& x, const std::string& y) {
    if (numeric) {
      as_number(x, a);
      as_number(y, b);
      return a < b;
    }
    return x < y;
  });
  return levels;
}

class Doc {
 public:
  explicit Doc(const std::string& title) {
    body_ += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
        kWidth, kHeight);
    body_ += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) text(kWidth / 2, 24, title, "middle", 16);
  }
  void raw(const std::string& s) { body_ += s; }
  void text(double x, double y, const std::string& s, const char* anchor = "start", int size = 12) {
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"{}\">{}</text>\n",
                         num(x), num(y), size, anchor, esc(s));
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke, const char* cls = nullptr,
            double width = 1.0) {
    body_ += fmt::format("<line{} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                         cls ? fmt::format(" class=\"{}\"", cls) : std::string{}, num(x1), num(y1), num(x2), num(y2),
                         stroke, width);
  }
  void axes(const Scale& sx, const Scale& sy, const std::string& xl, const std::string& yl) {
    const double bottom = kHeight - kMargin;
    line(kMargin, bottom, kWidth - kMargin, bottom, "black");
    line(kMargin, kMargin, kMargin, bottom, "black");
    for (int i = 0; i <= 4; ++i) {
      const double vx = sx.lo + (sx.hi - sx.lo) * i / 4.0;
      const double vy = sy.lo + (sy.hi - sy.lo) * i / 4.0;
      text(sx(vx), bottom + 16, fmt::format("{:.3g}", vx), "middle", 10);
      text(kMargin - 6, sy(vy) + 4, fmt::format("{:.3g}", vy), "end", 10);
    }
    if (!xl.empty()) text(kWidth / 2, kHeight - 16, xl, "middle");
    if (!yl.empty()) {
      body_ += fmt::format(
          "<text x=\"16\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
          "transform=\"rotate(-90 16 {0})\">{1}</text>\n",
          num(kHeight / 2), esc(yl));
    }
  }
  void legend(const std::vector<std::string>& levels) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double y = kMargin + 14.0 * static_cast<double>(i);
      body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", num(kWidth - kMargin + 6),
                           num(y), kPalette[i % std::size(kPalette)]);
      text(kWidth - kMargin + 20, y + 9, levels[i], "start", 10);
    }
  }
  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

const char* colour_for(const std::vector<std::string>& levels, const std::string& label) {
  const auto it = std::find(levels.begin(), levels.end(), label);
  return kPalette[static_cast<std::size_t>(it - levels.begin()) % std::size(kPalette)];
}

void require_finite(const std::vector<double>& v, const char* what) {
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    throw ValidationError(fmt::format("{} contains non-finite values", what));
  }
}

}  // namespace

std::string render_boxplot(const BoxplotFigure& fig) {
  if (fig.boxes.empty()) throw ValidationError("boxplot needs at least one group");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& b : fig.boxes) {
    lo = std::min({lo, b.lower_whisker, b.outliers.empty() ? lo : b.outliers.front()});
    hi = std::max({hi, b.upper_whisker, b.outliers.empty() ? hi : b.outliers.back()});
  }
  const Scale sy = make_scale(lo, hi, kHeight - kMargin, kMargin);
  Doc doc(fig.title);
  const double bottom = kHeight - kMargin;
  doc.line(kMargin, bottom, kWidth - kMargin, bottom, "black");
  doc.line(kMargin, kMargin, kMargin, bottom, "black");
  for (int i = 0; i <= 4; ++i) {
    const double v = sy.lo + (sy.hi - sy.lo) * i / 4.0;
    doc.text(kMargin - 6, sy(v) + 4, fmt::format("{:.3g}", v), "end", 10);
  }
  if (!fig.y_label.empty()) doc.text(16, kMargin - 16, fig.y_label);
  const double slot = (kWidth - 2 * kMargin) / static_cast<double>(fig.boxes.size());
  for (std::size_t i = 0; i < fig.boxes.size(); ++i) {
    const auto& b = fig.boxes[i];
    const double cx = kMargin + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(40.0, slot * 0.3);
    doc.line(cx, sy(b.lower_whisker), cx, sy(b.q1), "black", "whisker");
    doc.line(cx, sy(b.q3), cx, sy(b.upper_whisker), "black", "whisker");
    doc.raw(fmt::format(
        "<rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#cfe2f3\" stroke=\"black\"/>\n",
        num(cx - half), num(sy(b.q3)), num(2 * half), num(sy(b.q1) - sy(b.q3))));
    doc.line(cx - half, sy(b.median), cx + half, sy(b.median), "black", "median", 2.0);
    for (double o : b.outliers) {
      doc.raw(fmt::format("<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n",
                          num(cx), num(sy(o))));
    }
    doc.text(cx, bottom + 16, b.group, "middle");
  }
  return doc.finish();
}

std::string render_scatter(const ScatterFigure& fig) {
  if (fig.x.size() != fig.y.size()) {
    throw ValidationError(fmt::format("scatter has {} x values and {} y values", fig.x.size(), fig.y.size()));
  }
  if (fig.x.empty()) throw ValidationError("scatter needs at least one point");
  if (!fig.groups.empty() && fig.groups.size() != fig.x.size()) {
    throw ValidationError("scatter group labels do not match the number of points");
  }
  require_finite(fig.x, "scatter x");
  require_finite(fig.y, "scatter y");
  const auto [xmin, xmax] = std::minmax_element(fig.x.begin(), fig.x.end());
  const auto [ymin, ymax] = std::minmax_element(fig.y.begin(), fig.y.end());
  const Scale sx = make_scale(*xmin, *xmax, kMargin, kWidth - kMargin);
  const Scale sy = make_scale(*ymin, *ymax, kHeight - kMargin, kMargin);
  Doc doc(fig.title);
  doc.axes(sx, sy, fig.x_label, fig.y_label);
  if (fig.connect && fig.x.size() > 1) {
    std::string pts;
    for (std::size_t i = 0; i < fig.x.size(); ++i) pts += fmt::format("{}{},{}", i ? " " : "", num(sx(fig.x[i])), num(sy(fig.y[i])));
    doc.raw(fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#888888\"/>\n", pts));
  }
  const auto levels = sorted_levels(fig.groups);
  for (std::size_t i = 0; i < fig.x.size(); ++i) {
    const char* fill = fig.groups.empty() ? "#333333" : colour_for(levels, fig.groups[i]);
    doc.raw(fmt::format("<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", num(sx(fig.x[i])),
                        num(sy(fig.y[i])), fill));
  }
  if (!levels.empty()) doc.legend(levels);
  return doc.finish();
}

std::vector<MosaicColumn> mosaic_layout(const MosaicFigure& fig) {
  if (fig.column_labels.size() != fig.segment_labels.size()) {
    throw ValidationError("mosaic needs one segment label per column label");
  }
  if (fig.column_labels.empty()) throw ValidationError("mosaic needs at least one observation");
  const auto cols = sorted_levels(fig.column_labels);
  const auto segs = sorted_levels(fig.segment_labels);
  const double n = static_cast<double>(fig.column_labels.size());
  std::vector<MosaicColumn> out;
  for (const auto& c : cols) {
    MosaicColumn col;
    col.label = c;
    for (const auto& s : segs) {
      MosaicSegment seg;
      seg.label = s;
      for (std::size_t i = 0; i < fig.column_labels.size(); ++i) {
        if (fig.column_labels[i] == c && fig.segment_labels[i] == s) ++seg.count;
      }
      col.count += seg.count;
      col.segments.push_back(seg);
    }
    col.width_fraction = static_cast<double>(col.count) / n;
    for (auto& seg : col.segments) seg.share = static_cast<double>(seg.count) / static_cast<double>(col.count);
    out.push_back(std::move(col));
  }
  return out;
}

std::string render_mosaic(const MosaicFigure& fig) {
  const auto layout = mosaic_layout(fig);
  Doc doc(fig.title);
  constexpr double kGap = 4.0;
  const double usable = kWidth - 2 * kMargin - kGap * static_cast<double>(layout.size() - 1);
  const double height = kHeight - 2 * kMargin;
  std::vector<std::string> seg_levels;
  for (const auto& s : layout.front().segments) seg_levels.push_back(s.label);
  double x = kMargin;
  for (const auto& col : layout) {
    const double w = usable * col.width_fraction;
    double y = kMargin;
    for (const auto& seg : col.segments) {
      const double h = height * seg.share;
      doc.raw(fmt::format(
          "<rect class=\"tile\" data-column=\"{}\" data-segment=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
          "fill=\"{}\" stroke=\"white\"/>\n",
          esc(col.label), esc(seg.label), num(x), num(y), num(w), num(h), colour_for(seg_levels, seg.label)));
      y += h;
    }
    doc.text(x + w / 2, kHeight - kMargin + 16, fmt::format("{} (n={})", col.label, col.count), "middle", 11);
    x += w + kGap;
  }
  doc.legend(seg_levels);
  return doc.finish();
}

std::string render_biplot(const BiplotFigure& fig) {
  if (fig.model == nullptr) throw ValidationError("biplot render needs a fitted biplot model");
  const BiplotModel& m = *fig.model;
  const auto n = static_cast<std::size_t>(m.firm_scores.rows());
  if (!fig.groups.empty() && fig.groups.size() != n) {
    throw ValidationError(fmt::format("biplot has {} firms but {} group labels", n, fig.groups.size()));
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> link_idx;
  for (const auto& [a, b] : fig.links) {
    const auto ia = std::find(m.parts.begin(), m.parts.end(), a);
    const auto ib = std::find(m.parts.begin(), m.parts.end(), b);
    if (ia == m.parts.end() || ib == m.parts.end()) {
      throw ValidationError(fmt::format("link {}/{} names a part that is not in the biplot", a, b));
    }
    link_idx.emplace_back(ia - m.parts.begin(), ib - m.parts.begin());
  }
  double lim = 0.0;
  for (Eigen::Index i = 0; i < m.firm_scores.rows(); ++i) lim = std::max(lim, m.firm_scores.row(i).cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < m.ray_coords.rows(); ++j) lim = std::max(lim, m.ray_coords.row(j).cwiseAbs().maxCoeff());
  if (!std::isfinite(lim)) throw ValidationError("biplot coordinates are not finite");
  if (lim == 0.0) lim = 1.0;
  const Scale sx = make_scale(-lim, lim, kMargin, kWidth - kMargin);
  const Scale sy = make_scale(-lim, lim, kHeight - kMargin, kMargin);
  const auto frac = m.variance_fractions();
  Doc doc(fig.title);
  doc.axes(sx, sy, fmt::format("Dim 1 ({:.2f}%)", 100.0 * frac(0)),
           fmt::format("Dim 2 ({:.2f}%)", frac.size() > 1 ? 100.0 * frac(1) : 0.0));
  doc.line(sx(-lim), sy(0), sx(lim), sy(0), "#dddddd");
  doc.line(sx(0), sy(-lim), sx(0), sy(lim), "#dddddd");
  const auto levels = sorted_levels(fig.groups);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const char* fill = fig.groups.empty() ? "#555555" : colour_for(levels, fig.groups[i]);
    doc.raw(fmt::format("<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n",
                        num(sx(m.firm_scores(r, 0))), num(sy(m.firm_scores(r, 1))), fill));
  }
  for (std::size_t j = 0; j < m.parts.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    const double x = sx(m.ray_coords(r, 0));
    const double y = sy(m.ray_coords(r, 1));
    doc.line(sx(0), sy(0), x, y, "#b22222", "ray", 1.5);
    doc.text(x + 4, y - 4, m.parts[j], "start", 12);
  }
  for (const auto& [a, b] : link_idx) {
    doc.raw(fmt::format(
        "<line class=\"link\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1f4e79\" stroke-dasharray=\"4 3\"/>\n",
        num(sx(m.ray_coords(b, 0))), num(sy(m.ray_coords(b, 1))), num(sx(m.ray_coords(a, 0))),
        num(sy(m.ray_coords(a, 1)))));
  }
  if (!levels.empty()) doc.legend(levels);
  return doc.finish();
}

}  // namespace coda
