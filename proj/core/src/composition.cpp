#include "coda/composition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

const char* cell_problem(double v) {
  if (!std::isfinite(v)) return "non-finite";
  if (v == 0.0) return "zero";
  if (v < 0.0) return "negative";
  return nullptr;
}

}  // namespace

Composition::Composition(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw ValidationError(fmt::format("a composition needs at least 2 parts, got {}", values_.size()));
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (const char* problem = cell_problem(values_[j])) {
      throw ValidationError(fmt::format("part {} is {} ({})", j + 1, problem, values_[j]));
    }
  }
}

std::size_t ExtraColumn::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, data);
}

bool ExtraColumn::is_missing(std::size_t row) const {
  return std::visit([row](const auto& v) { return !v.at(row).has_value(); }, data);
}

std::optional<std::string> ExtraColumn::label(std::size_t row) const {
  if (const auto* numeric = std::get_if<Numeric>(&data)) {
    const auto& cell = numeric->at(row);
    if (!cell) return std::nullopt;
    return fmt::format("{}", *cell);
  }
  return std::get<Categorical>(data).at(row);
}

std::optional<double> ExtraColumn::number(std::size_t row) const {
  const auto* numeric = std::get_if<Numeric>(&data);
  if (numeric == nullptr) {
    throw ValidationError(fmt::format("column '{}' is categorical, not numeric", name));
  }
  return numeric->at(row);
}

CompositionSet::CompositionSet(std::vector<PartLabel> parts, std::vector<std::string> firm_ids,
                               Eigen::MatrixXd values, std::vector<ExtraColumn> extras)
    : parts_(std::move(parts)),
      firm_ids_(std::move(firm_ids)),
      values_(std::move(values)),
      extras_(std::move(extras)) {
  if (parts_.size() < 2) {
    throw ValidationError(fmt::format("a composition set needs at least 2 parts, got {}", parts_.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& p : parts_) {
    if (!seen.insert(p.name).second) throw ValidationError("duplicate part name '" + p.name + "'");
  }
  seen.clear();
  for (const auto& id : firm_ids_) {
    if (!seen.insert(id).second) throw ValidationError("duplicate firm id '" + id + "'");
  }
  if (static_cast<std::size_t>(values_.rows()) != firm_ids_.size() ||
      static_cast<std::size_t>(values_.cols()) != parts_.size()) {
    throw ValidationError(fmt::format("value matrix is {}x{}, expected {}x{}", values_.rows(),
                                      values_.cols(), firm_ids_.size(), parts_.size()));
  }
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      if (std::isnan(values_(i, j))) {
        throw ValidationError(fmt::format("firm '{}', part '{}': compositional cells may not be missing",
                                          firm_ids_[i], parts_[j].name));
      }
    }
  }
  seen.clear();
  for (const auto& e : extras_) {
    if (!seen.insert(e.name).second) throw ValidationError("duplicate extras column '" + e.name + "'");
    if (e.size() != firm_ids_.size()) {
      throw ValidationError(fmt::format("extras column '{}' has {} rows, expected {}", e.name, e.size(),
                                        firm_ids_.size()));
    }
  }
}

std::vector<std::string> CompositionSet::part_names() const {
  std::vector<std::string> names;
  names.reserve(parts_.size());
  for (const auto& p : parts_) names.push_back(p.name);
  return names;
}

Composition CompositionSet::row(std::size_t i) const {
  std::vector<double> v(parts_.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return Composition(std::move(v));
}

std::size_t CompositionSet::part_index(std::string_view name) const {
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (parts_[j].name == name) return j;
  }
  throw ValidationError(fmt::format("unknown part '{}'", name));
}

bool CompositionSet::has_part(std::string_view name) const noexcept {
  return std::any_of(parts_.begin(), parts_.end(), [&](const PartLabel& p) { return p.name == name; });
}

bool CompositionSet::has_extra(std::string_view name) const noexcept {
  return std::any_of(extras_.begin(), extras_.end(), [&](const ExtraColumn& e) { return e.name == name; });
}

const ExtraColumn& CompositionSet::extra(std::string_view name) const {
  for (const auto& e : extras_) {
    if (e.name == name) return e;
  }
  throw ValidationError(fmt::format("unknown column '{}'", name));
}

CompositionSet CompositionSet::with_values(Eigen::MatrixXd values) const {
  return CompositionSet(parts_, firm_ids_, std::move(values), extras_);
}

CompositionSet CompositionSet::subset(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  Eigen::MatrixXd v(static_cast<Eigen::Index>(rows.size()), values_.cols());
  std::vector<ExtraColumn> extras;
  for (const auto& e : extras_) extras.push_back(ExtraColumn{e.name, {}});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t i = rows[k];
    if (i >= row_count()) throw ValidationError(fmt::format("row index {} out of range", i));
    ids.push_back(firm_ids_[i]);
    v.row(static_cast<Eigen::Index>(k)) = values_.row(static_cast<Eigen::Index>(i));
  }
  for (std::size_t c = 0; c < extras_.size(); ++c) {
    std::visit(
        [&](const auto& src) {
          std::remove_cvref_t<decltype(src)> out;
          for (std::size_t i : rows) out.push_back(src[i]);
          extras[c].data = std::move(out);
        },
        extras_[c].data);
  }
  return CompositionSet(parts_, std::move(ids), std::move(v), std::move(extras));
}

CompositionSet CompositionSet::with_extra(ExtraColumn column) const {
  auto extras = extras_;
  auto it = std::find_if(extras.begin(), extras.end(), [&](const ExtraColumn& e) { return e.name == column.name; });
  if (it != extras.end()) {
    *it = std::move(column);
  } else {
    extras.push_back(std::move(column));
  }
  return CompositionSet(parts_, firm_ids_, values_, std::move(extras));
}

std::vector<Violation> validate(const CompositionSet& set) {
  std::vector<Violation> out;
  const auto& v = set.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (const char* problem = cell_problem(v(i, j))) {
        out.push_back({set.firm_ids()[i], set.parts()[j].name, v(i, j), problem});
      }
    }
  }
  return out;
}

void require_valid(const CompositionSet& set) {
  const auto violations = validate(set);
  if (violations.empty()) return;
  const auto& first = violations.front();
  throw ValidationError(fmt::format("{} non-positive or non-finite compositional cell(s); first: firm '{}', part '{}' is {} ({})",
                                    violations.size(), first.firm, first.part, first.reason, first.value));
}

RowFilter rows_where(const CompositionSet& set, std::string_view column, std::string_view label) {
  const ExtraColumn& col = set.extra(column);
  std::vector<bool> keep(set.row_count());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto l = col.label(i);
    keep[i] = l.has_value() && *l == label;
  }
  return [keep = std::move(keep)](std::size_t row) { return row < keep.size() && keep[row]; };
}

std::vector<std::size_t> selected_rows(const CompositionSet& set, const RowFilter& filter) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    if (!filter || filter(i)) rows.push_back(i);
  }
  return rows;
}

Composition closure(const Composition& c) {
  const auto v = c.values();
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= total;
  return Composition(std::move(out));
}

double per_firm_geometric_mean(const Composition& c) {
  double sum_log = 0.0;
  for (double x : c.values()) sum_log += std::log(x);
  return std::exp(sum_log / static_cast<double>(c.size()));
}

std::vector<double> geometric_mean_by_part(const CompositionSet& set, const RowFilter& filter) {
  const auto rows = selected_rows(set, filter);
  if (rows.empty()) throw ComputationError("empty group");
  const auto& v = set.values();
  std::vector<double> out(set.part_count(), 0.0);
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double x = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError(fmt::format("firm '{}', part '{}': geometric means need positive values, got {}",
                                          set.firm_ids()[i], set.parts()[j].name, x));
      }
      out[j] += std::log(x);
    }
  }
  for (double& s : out) s = std::exp(s / static_cast<double>(rows.size()));
  return out;
}

CompositionalCentre::CompositionalCentre(std::vector<PartLabel> parts, std::vector<double> values)
    : parts_(std::move(parts)), values_(std::move(values)) {
  if (parts_.size() != values_.size()) throw ValidationError("centre parts and values differ in length");
  double total = 0.0;
  for (double x : values_) {
    if (!(x > 0.0 && x < 1.0)) throw ValidationError(fmt::format("centre entry {} outside (0,1)", x));
    total += x;
  }
  if (std::abs(total - 1.0) > kClosureTolerance) {
    throw ValidationError(fmt::format("centre sums to {}, not 1", total));
  }
}

double CompositionalCentre::at(std::string_view part) const {
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (parts_[j].name == part) return values_[j];
  }
  throw ValidationError(fmt::format("unknown part '{}'", part));
}

CompositionalCentre compositional_centre(const CompositionSet& set, const RowFilter& filter) {
  const Composition closed = closure(Composition(geometric_mean_by_part(set, filter)));
  return CompositionalCentre(set.parts(), {closed.values().begin(), closed.values().end()});
}

}  // namespace coda
