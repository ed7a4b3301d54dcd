#include "coda/industry_stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

struct RatioBuilder {
  StandardRatios out;

  void add(std::string name, double numerator, double denominator, const char* undefined_note = nullptr) {
    out.names.push_back(std::move(name));
    if (denominator > 0.0) {
      out.values.emplace_back(numerator / denominator);
    } else {
      out.values.emplace_back(std::nullopt);
      out.notes.push_back(fmt::format("{} undefined: {}", out.names.back(),
                                      undefined_note != nullptr ? undefined_note : "non-positive denominator"));
    }
  }
};

StandardRatios ratios_from_values(std::span<const double> x, const RatioScheme& scheme) {
  auto at = [&](std::string_view role) { return x[scheme.index(role)]; };
  RatioBuilder b;
  if (scheme.kind() == SchemeKind::dupont4) {
    const double revenues = at("revenues");
    const double costs = at("costs");
    const double liabilities = at("liabilities");
    const double assets = at("assets");
    const double profit = revenues - costs;
    const double equity = assets - liabilities;
    b.add("turnover", revenues, assets);
    b.add("margin", profit, revenues);
    b.add("leverage", assets, equity, "non-positive equity");
    b.add("roe", profit, equity, "non-positive equity");
  } else {
    const double nca = at("noncurrent_assets");
    const double ca = at("current_assets");
    const double ncl = at("noncurrent_liabilities");
    const double cl = at("current_liabilities");
    const double revenues = at("revenues");
    const double costs = at("costs");
    const double assets = nca + ca;
    const double liabilities = ncl + cl;
    const double profit = revenues - costs;
    const double equity = assets - liabilities;
    b.add("turnover", revenues, assets);
    b.add("current_asset_turnover", revenues, ca);
    b.add("margin", profit, revenues);
    b.add("leverage", assets, equity, "non-positive equity");
    b.add("roa", profit, assets);
    b.add("roe", profit, equity, "non-positive equity");
    b.add("indebtedness", liabilities, assets);
    b.add("current_ratio", ca, cl);
    b.add("debt_maturity", ncl, liabilities);
    b.add("asset_structure", nca, assets);
  }
  return std::move(b.out);
}

bool parse_number(const std::string& s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string_view to_string(SchemeKind kind) noexcept {
  return kind == SchemeKind::dupont4 ? "dupont4" : "balance6";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
  if (name == "dupont4") return SchemeKind::dupont4;
  if (name == "balance6") return SchemeKind::balance6;
  throw ValidationError(fmt::format("unknown ratio scheme '{}' (known: dupont4, balance6)", name));
}

const std::vector<std::string>& scheme_roles(SchemeKind kind) {
  static const std::vector<std::string> dupont{"revenues", "costs", "liabilities", "assets"};
  static const std::vector<std::string> balance{"noncurrent_assets",   "current_assets", "noncurrent_liabilities",
                                                "current_liabilities", "revenues",       "costs"};
  return kind == SchemeKind::dupont4 ? dupont : balance;
}

const std::vector<std::string>& ratio_names(SchemeKind kind) {
  static const std::vector<std::string> dupont{"turnover", "margin", "leverage", "roe"};
  static const std::vector<std::string> balance{"turnover",     "current_asset_turnover", "margin",       "leverage",
                                                "roa",          "roe",                    "indebtedness", "current_ratio",
                                                "debt_maturity", "asset_structure"};
  return kind == SchemeKind::dupont4 ? dupont : balance;
}

RatioScheme RatioScheme::bind(SchemeKind kind, const std::vector<PartLabel>& parts,
                              const std::map<std::string, std::string>& role_to_part) {
  const auto& roles = scheme_roles(kind);
  RatioScheme s;
  s.kind_ = kind;
  s.parts_ = parts;
  std::set<std::size_t> used;
  for (std::size_t r = 0; r < roles.size(); ++r) {
    std::size_t idx = 0;
    if (role_to_part.empty()) {
      if (r >= parts.size()) {
        throw ValidationError(fmt::format("scheme {} needs {} parts, data has {}", to_string(kind), roles.size(), parts.size()));
      }
      idx = r;
    } else {
      const auto it = role_to_part.find(roles[r]);
      if (it == role_to_part.end()) {
        throw ValidationError(fmt::format("scheme {}: role '{}' is not mapped to a part", to_string(kind), roles[r]));
      }
      const auto p = std::find_if(parts.begin(), parts.end(), [&](const PartLabel& l) { return l.name == it->second; });
      if (p == parts.end()) {
        throw ValidationError(fmt::format("scheme {}: role '{}' maps to unknown part '{}'", to_string(kind), roles[r], it->second));
      }
      idx = static_cast<std::size_t>(p - parts.begin());
    }
    if (!used.insert(idx).second) {
      throw ValidationError(fmt::format("scheme {}: part '{}' is mapped to more than one role", to_string(kind), parts[idx].name));
    }
    s.role_index_.push_back(idx);
  }
  for (const auto& [role, part] : role_to_part) {
    if (std::find(roles.begin(), roles.end(), role) == roles.end()) {
      throw ValidationError(fmt::format("scheme {} has no role '{}'", to_string(kind), role));
    }
  }
  return s;
}

std::size_t RatioScheme::index(std::string_view role) const {
  const auto& roles = scheme_roles(kind_);
  const auto it = std::find(roles.begin(), roles.end(), role);
  if (it == roles.end()) throw ValidationError(fmt::format("scheme {} has no role '{}'", to_string(kind_), role));
  return role_index_[static_cast<std::size_t>(it - roles.begin())];
}

const std::string& RatioScheme::part_for(std::string_view role) const { return parts_[index(role)].name; }

std::vector<std::string> RatioScheme::parts_in_role_order() const {
  std::vector<std::string> out;
  for (std::size_t idx : role_index_) out.push_back(parts_[idx].name);
  return out;
}

std::optional<double> StandardRatios::get(std::string_view name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return values[k];
  }
  throw ValidationError(fmt::format("unknown ratio '{}'", name));
}

StandardRatios standard_ratios(const Composition& c, const RatioScheme& scheme) {
  if (c.size() != scheme.parts().size()) {
    throw ValidationError(fmt::format("composition has {} parts, scheme is bound to {}", c.size(), scheme.parts().size()));
  }
  return ratios_from_values(c.values(), scheme);
}

StandardRatios centre_ratios(const CompositionalCentre& centre, const RatioScheme& scheme) {
  if (centre.parts() != scheme.parts()) throw ValidationError("centre parts do not match the scheme's parts");
  return ratios_from_values(centre.values(), scheme);
}

std::vector<GroupRatioRow> group_ratio_table(const CompositionSet& set, const RatioScheme& scheme,
                                             std::string_view group_column) {
  const ExtraColumn& col = set.extra(group_column);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    if (auto l = col.label(i)) labels.push_back(*l);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& l) {
    double x = 0.0;
    return parse_number(l, x);
  });
  if (numeric) {
    std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      double x = 0.0;
      double y = 0.0;
      parse_number(a, x);
      parse_number(b, y);
      return x < y;
    });
  }

  std::vector<GroupRatioRow> rows;
  for (const auto& label : labels) {
    const RowFilter filter = rows_where(set, group_column, label);
    auto centre = compositional_centre(set, filter);
    auto ratios = centre_ratios(centre, scheme);
    rows.push_back({label, selected_rows(set, filter).size(), std::move(centre), std::move(ratios)});
  }
  auto overall = compositional_centre(set);
  auto ratios = centre_ratios(overall, scheme);
  rows.push_back({"overall", set.row_count(), std::move(overall), std::move(ratios)});
  return rows;
}

double geometric_mean_of_ratio(const CompositionSet& set, std::size_t i, std::size_t j, const RowFilter& filter) {
  const auto rows = selected_rows(set, filter);
  if (rows.empty()) throw ComputationError("empty group");
  double sum = 0.0;
  for (std::size_t r : rows) {
    const double a = set.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
    const double b = set.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
    if (!(a > 0.0 && b > 0.0)) throw ValidationError("geometric mean of a ratio needs positive parts");
    sum += std::log(a) - std::log(b);
  }
  return std::exp(sum / static_cast<double>(rows.size()));
}

double arithmetic_mean_of_ratio(const CompositionSet& set, std::size_t i, std::size_t j, const RowFilter& filter) {
  const auto rows = selected_rows(set, filter);
  if (rows.empty()) throw ComputationError("empty group");
  double sum = 0.0;
  for (std::size_t r : rows) {
    sum += set.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) /
           set.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
  }
  return sum / static_cast<double>(rows.size());
}

}  // namespace coda
