#include "coda/reports.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

}  // namespace

Table centre_table(const std::vector<std::string>& column_names, std::span<const CompositionalCentre> centres) {
  if (column_names.size() != centres.size()) throw ValidationError("centre table needs one name per centre");
  if (centres.empty()) throw ValidationError("centre table needs at least one centre");
  Table t;
  t.headers = {"part", "description"};
  t.headers.insert(t.headers.end(), column_names.begin(), column_names.end());
  const auto& parts = centres.front().parts();
  for (std::size_t j = 0; j < parts.size(); ++j) {
    std::vector<Cell> row{parts[j].name, parts[j].description};
    for (const auto& c : centres) row.emplace_back(c[j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ratio_table(std::span<const GroupRatioRow> rows) {
  Table t;
  t.headers = {"group", "firms"};
  if (!rows.empty()) t.headers.insert(t.headers.end(), rows.front().ratios.names.begin(), rows.front().ratios.names.end());
  for (const auto& r : rows) {
    std::vector<Cell> row{r.group, static_cast<long long>(r.firms)};
    for (const auto& v : r.ratios.values) row.push_back(opt_cell(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table centre_ratio_table(const std::vector<std::string>& labels, std::span<const CompositionalCentre> centres,
                         const RatioScheme& scheme) {
  if (labels.size() != centres.size()) throw ValidationError("ratio table needs one label per centre");
  Table t;
  t.headers = {"group"};
  const auto& names = ratio_names(scheme.kind());
  t.headers.insert(t.headers.end(), names.begin(), names.end());
  for (std::size_t i = 0; i < centres.size(); ++i) {
    const StandardRatios r = centre_ratios(centres[i], scheme);
    std::vector<Cell> row{labels[i]};
    for (const auto& v : r.values) row.push_back(opt_cell(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table regression_table(std::span<const RegressionFit> fits) {
  Table t;
  t.headers = {"response", "predictor", "estimate", "std_error", "t", "p_value", "r_squared", "dof"};
  for (const auto& f : fits) {
    for (std::size_t k = 0; k < f.columns.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      t.rows.push_back({f.response, f.columns[k], f.coefficients(i), f.standard_errors(i), f.t_statistics(i),
                        f.p_values(i), f.r_squared, static_cast<long long>(f.dof)});
    }
  }
  return t;
}

Table regression_summary_table(std::span<const RegressionFit> fits) {
  Table t;
  t.headers = {"response"};
  if (!fits.empty()) {
    for (std::size_t k = 1; k < fits.front().columns.size(); ++k) {
      t.headers.push_back(fits.front().columns[k] + " estimate");
      t.headers.push_back(fits.front().columns[k] + " p_value");
    }
  }
  t.headers.push_back("r_squared");
  for (const auto& f : fits) {
    std::vector<Cell> row{f.response};
    for (std::size_t k = 1; k < f.columns.size(); ++k) {
      row.emplace_back(f.coefficients(static_cast<Eigen::Index>(k)));
      row.emplace_back(f.p_values(static_cast<Eigen::Index>(k)));
    }
    row.emplace_back(f.r_squared);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table logratio_table(const CompositionSet& set, const LogRatioMatrix& m) {
  Table t;
  t.headers = {"Firm"};
  t.headers.insert(t.headers.end(), m.columns.begin(), m.columns.end());
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    std::vector<Cell> row{set.firm_ids()[i]};
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) row.emplace_back(m.values(static_cast<Eigen::Index>(i), c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table assignment_table(const CompositionSet& set, std::span<const int> assignment) {
  Table t;
  t.headers = {"Firm", "cluster"};
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    t.rows.push_back({set.firm_ids()[i], static_cast<long long>(assignment[i] + 1)});
  }
  return t;
}

Table sweep_table(const SweepResult& sweep) {
  Table t;
  t.headers = {"k", "silhouette", "calinski_harabasz", "within_ss"};
  for (const auto& r : sweep.rows) {
    t.rows.push_back({static_cast<long long>(r.k), r.silhouette, r.calinski_harabasz, r.within_ss});
  }
  return t;
}

Table zero_table(const ZeroReport& report) {
  Table t;
  t.headers = {"part", "zero_fraction", "flagged"};
  for (std::size_t j = 0; j < report.parts.size(); ++j) {
    const bool flagged = std::find(report.flagged_parts.begin(), report.flagged_parts.end(), report.parts[j]) !=
                         report.flagged_parts.end();
    t.rows.push_back({report.parts[j], report.per_part_zero_fraction[j], std::string(flagged ? "yes" : "no")});
  }
  t.rows.push_back({std::string("overall"), report.overall_zero_fraction, std::string("")});
  return t;
}

Table violation_table(std::span<const Violation> violations) {
  Table t;
  t.headers = {"firm", "part", "value", "reason"};
  for (const auto& v : violations) t.rows.push_back({v.firm, v.part, v.value, v.reason});
  return t;
}

Table biplot_table(const CompositionSet& set, const BiplotModel& model) {
  Table t;
  t.headers = {"kind", "name", "dim1", "dim2"};
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    t.rows.push_back({std::string("firm"), set.firm_ids()[i], model.firm_scores(r, 0), model.firm_scores(r, 1)});
  }
  for (std::size_t j = 0; j < model.parts.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    t.rows.push_back({std::string("ray"), model.parts[j], model.ray_coords(r, 0), model.ray_coords(r, 1)});
  }
  return t;
}

Table graph_table(const LogRatioGraph& graph) {
  Table t;
  t.headers = {"edge", "numerator", "denominator"};
  for (const auto& e : graph.edges()) t.rows.push_back({e.name, e.numerator, e.denominator});
  return t;
}

}  // namespace coda
