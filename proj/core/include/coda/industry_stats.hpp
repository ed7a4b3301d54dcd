#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coda/composition.hpp"

namespace coda {

enum class SchemeKind { dupont4, balance6 };

std::string_view to_string(SchemeKind kind) noexcept;
SchemeKind scheme_kind_from_string(std::string_view name);

/// Scheme roles in canonical order.
///   dupont4:  revenues, costs, liabilities, assets
///   balance6: noncurrent_assets, current_assets, noncurrent_liabilities,
///             current_liabilities, revenues, costs
const std::vector<std::string>& scheme_roles(SchemeKind kind);

/// A ratio scheme bound to the parts of a data set.
class RatioScheme {
 public:
  /// Binds roles to parts. With an empty mapping, roles map positionally to
  /// the first parts in order. Throws ValidationError if a role is missing,
  /// maps to an unknown part, or two roles share a part.
  static RatioScheme bind(SchemeKind kind, const std::vector<PartLabel>& parts,
                          const std::map<std::string, std::string>& role_to_part = {});

  SchemeKind kind() const noexcept { return kind_; }
  const std::vector<PartLabel>& parts() const noexcept { return parts_; }
  /// Part index for a role.
  std::size_t index(std::string_view role) const;
  const std::string& part_for(std::string_view role) const;

  /// Part names in the scheme's role order (the order builtin_sbp expects).
  std::vector<std::string> parts_in_role_order() const;

 private:
  SchemeKind kind_ = SchemeKind::dupont4;
  std::vector<PartLabel> parts_;
  std::vector<std::size_t> role_index_;
};

/// Named ratios in a fixed order. An undefined ratio (non-positive equity in a
/// denominator) is nullopt.
struct StandardRatios {
  std::vector<std::string> names;
  std::vector<std::optional<double>> values;
  std::vector<std::string> notes;

  std::optional<double> get(std::string_view name) const;
};

/// Ratio names for a scheme, in output order.
const std::vector<std::string>& ratio_names(SchemeKind kind);

StandardRatios standard_ratios(const Composition& c, const RatioScheme& scheme);

/// Ratios of the centre treated as a composition (geometric-mean ratios).
StandardRatios centre_ratios(const CompositionalCentre& centre, const RatioScheme& scheme);

struct GroupRatioRow {
  std::string group;  // group label, or "overall"
  std::size_t firms = 0;
  CompositionalCentre centre;
  StandardRatios ratios;
};

/// One row per distinct label of `group_column` (sorted; missing labels
/// skipped), then an "overall" row.
std::vector<GroupRatioRow> group_ratio_table(const CompositionSet& set, const RatioScheme& scheme,
                                             std::string_view group_column);

/// Geometric mean over selected firms of x_i / x_j.
double geometric_mean_of_ratio(const CompositionSet& set, std::size_t i, std::size_t j, const RowFilter& filter = {});

/// Arithmetic mean over selected firms of x_i / x_j. Diagnostic only: it is
/// not permutation-consistent and is never used by the analysis paths.
double arithmetic_mean_of_ratio(const CompositionSet& set, std::size_t i, std::size_t j, const RowFilter& filter = {});

}  // namespace coda
