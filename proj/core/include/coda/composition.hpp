#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace coda {

/// Tolerance used when checking that a closed composition sums to one.
inline constexpr double kClosureTolerance = 1e-12;

struct PartLabel {
  std::string name;
  std::string description;

  friend bool operator==(const PartLabel&, const PartLabel&) = default;
};

/// D >= 2 strictly positive, finite values.
class Composition {
 public:
  /// Throws ValidationError if D < 2 or any value is not finite and > 0.
  explicit Composition(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  friend bool operator==(const Composition&, const Composition&) = default;

 private:
  std::vector<double> values_;
};

/// A per-firm column that is not part of the composition (Brand, Age, ...).
/// Numeric and categorical cells may both be missing.
struct ExtraColumn {
  using Numeric = std::vector<std::optional<double>>;
  using Categorical = std::vector<std::optional<std::string>>;

  std::string name;
  std::variant<Numeric, Categorical> data;

  bool is_numeric() const noexcept { return std::holds_alternative<Numeric>(data); }
  std::size_t size() const noexcept;
  bool is_missing(std::size_t row) const;

  /// Cell rendered as a group label: categorical cells verbatim, numeric cells
  /// in shortest round-trip form ("0", "1", "2.5"). nullopt when missing.
  std::optional<std::string> label(std::size_t row) const;

  /// Numeric cell. Throws ValidationError for categorical columns.
  std::optional<double> number(std::size_t row) const;
};

/// n firms by D parts, plus optional non-compositional columns.
///
/// Construction enforces the structural invariants (unique part names, unique
/// firm ids, rectangular shape, no missing compositional cells). Zero,
/// negative and infinite cells are stored so that `validate` and the zeros
/// module can report them; every log-ratio operation re-checks positivity.
class CompositionSet {
 public:
  CompositionSet(std::vector<PartLabel> parts, std::vector<std::string> firm_ids,
                 Eigen::MatrixXd values, std::vector<ExtraColumn> extras = {});

  const std::vector<PartLabel>& parts() const noexcept { return parts_; }
  std::vector<std::string> part_names() const;
  std::size_t part_count() const noexcept { return parts_.size(); }
  std::size_t row_count() const noexcept { return firm_ids_.size(); }
  const std::vector<std::string>& firm_ids() const noexcept { return firm_ids_; }

  /// n x D matrix of raw part values.
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// Row i as a validated Composition (throws if it holds a non-positive cell).
  Composition row(std::size_t i) const;

  /// Index of the part with the given name; throws ValidationError if absent.
  std::size_t part_index(std::string_view name) const;
  bool has_part(std::string_view name) const noexcept;

  const std::vector<ExtraColumn>& extras() const noexcept { return extras_; }
  bool has_extra(std::string_view name) const noexcept;
  const ExtraColumn& extra(std::string_view name) const;

  /// Same labels and extras, new part values (same shape required).
  CompositionSet with_values(Eigen::MatrixXd values) const;
  /// Rows listed in `rows`, in that order.
  CompositionSet subset(std::span<const std::size_t> rows) const;
  /// Appends (or replaces) an extras column.
  CompositionSet with_extra(ExtraColumn column) const;

 private:
  std::vector<PartLabel> parts_;
  std::vector<std::string> firm_ids_;
  Eigen::MatrixXd values_;
  std::vector<ExtraColumn> extras_;
};

/// One offending compositional cell.
struct Violation {
  std::string firm;
  std::string part;
  double value = 0.0;
  std::string reason;  // "zero", "negative" or "non-finite"
};

std::vector<Violation> validate(const CompositionSet& set);

/// Throws ValidationError summarising `validate(set)` if it is non-empty.
void require_valid(const CompositionSet& set);

/// Row predicate used to restrict geometric means to a group of firms.
/// An empty function selects every row.
using RowFilter = std::function<bool(std::size_t row)>;

/// Rows whose extras column `column` carries group label `label`.
RowFilter rows_where(const CompositionSet& set, std::string_view column, std::string_view label);

/// Indices selected by `filter` (all rows when the filter is empty).
std::vector<std::size_t> selected_rows(const CompositionSet& set, const RowFilter& filter);

Composition closure(const Composition& c);

/// exp(mean(log x)) over all parts of one firm.
double per_firm_geometric_mean(const Composition& c);

/// exp(mean(log x_ij)) over the selected firms, per part j.
/// Throws ComputationError("empty group") when no row is selected.
std::vector<double> geometric_mean_by_part(const CompositionSet& set, const RowFilter& filter = {});

class CompositionalCentre {
 public:
  /// Throws ValidationError unless values are in (0,1) and sum to 1 within
  /// kClosureTolerance.
  CompositionalCentre(std::vector<PartLabel> parts, std::vector<double> values);

  const std::vector<PartLabel>& parts() const noexcept { return parts_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  double at(std::string_view part) const;

 private:
  std::vector<PartLabel> parts_;
  std::vector<double> values_;
};

/// Closure of the per-part geometric means over the selected firms.
CompositionalCentre compositional_centre(const CompositionSet& set, const RowFilter& filter = {});

}  // namespace coda
