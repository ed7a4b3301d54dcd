#include "coda/transforms.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

Eigen::MatrixXd log_values(const CompositionSet& set) {
  require_valid(set);
  return set.values().array().log().matrix();
}

}  // namespace

LogRatioSpec LogRatioSpec::reversed() const { return {name, denominator, numerator}; }

std::string_view to_string(LogRatioKind kind) noexcept {
  switch (kind) {
    case LogRatioKind::pairwise: return "pairwise";
    case LogRatioKind::clr: return "clr";
    case LogRatioKind::ilr: return "ilr";
  }
  return "unknown";
}

Eigen::VectorXd LogRatioMatrix::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return values.col(static_cast<Eigen::Index>(c));
  }
  throw ValidationError(fmt::format("unknown log-ratio column '{}'", name));
}

Eigen::VectorXd pairwise_logratio(const CompositionSet& set, const LogRatioSpec& spec) {
  if (spec.numerator == spec.denominator) {
    throw ValidationError(fmt::format("log-ratio '{}' has the same numerator and denominator", spec.name));
  }
  const auto num = static_cast<Eigen::Index>(set.part_index(spec.numerator));
  const auto den = static_cast<Eigen::Index>(set.part_index(spec.denominator));
  Eigen::VectorXd out(set.values().rows());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double a = set.values()(i, num);
    const double b = set.values()(i, den);
    if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw ValidationError(fmt::format("firm '{}': log-ratio '{}' needs positive parts", set.firm_ids()[i], spec.name));
    }
    out(i) = std::log(a) - std::log(b);
  }
  return out;
}

LogRatioMatrix pairwise_logratios(const CompositionSet& set, std::span<const LogRatioSpec> specs) {
  LogRatioMatrix out{LogRatioKind::pairwise, {}, Eigen::MatrixXd(set.values().rows(), static_cast<Eigen::Index>(specs.size()))};
  for (std::size_t c = 0; c < specs.size(); ++c) {
    out.columns.push_back(specs[c].name);
    out.values.col(static_cast<Eigen::Index>(c)) = pairwise_logratio(set, specs[c]);
  }
  return out;
}

LogRatioMatrix clr(const CompositionSet& set) {
  Eigen::MatrixXd logs = log_values(set);
  const Eigen::VectorXd row_means = logs.rowwise().mean();
  logs.colwise() -= row_means;
  LogRatioMatrix out{LogRatioKind::clr, {}, std::move(logs)};
  for (const auto& p : set.parts()) out.columns.push_back("clr." + p.name);
  return out;
}

Eigen::VectorXd clr(const Composition& c) {
  Eigen::VectorXd logs(static_cast<Eigen::Index>(c.size()));
  for (std::size_t j = 0; j < c.size(); ++j) logs(static_cast<Eigen::Index>(j)) = std::log(c[j]);
  return logs.array() - logs.mean();
}

SbpMatrix::SbpMatrix(std::vector<std::string> parts, Eigen::MatrixXi signs, std::vector<std::string> row_names)
    : parts_(std::move(parts)), signs_(std::move(signs)), row_names_(std::move(row_names)) {
  if (static_cast<std::size_t>(signs_.cols()) != parts_.size()) {
    throw ValidationError(fmt::format("SBP has {} columns but {} parts", signs_.cols(), parts_.size()));
  }
  if ((signs_.array().abs() > 1).any()) throw ValidationError("SBP entries must be +1, -1 or 0");
  if (!row_names_.empty() && row_names_.size() != row_count()) {
    throw ValidationError("SBP row names must match the number of rows");
  }
}

std::size_t SbpMatrix::numerator_count(std::size_t k) const {
  return static_cast<std::size_t>((signs_.row(static_cast<Eigen::Index>(k)).array() > 0).count());
}

std::size_t SbpMatrix::denominator_count(std::size_t k) const {
  return static_cast<std::size_t>((signs_.row(static_cast<Eigen::Index>(k)).array() < 0).count());
}

std::string SbpMatrix::coordinate_name(std::size_t k) const {
  if (!row_names_.empty() && !row_names_[k].empty()) return row_names_[k];
  std::vector<std::string> num;
  std::vector<std::string> den;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const int s = signs_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
    if (s > 0) num.push_back(parts_[j]);
    if (s < 0) den.push_back(parts_[j]);
  }
  return fmt::format("ilr_{}:+{}|-{}", k + 1, fmt::join(num, ","), fmt::join(den, ","));
}

std::vector<SbpViolation> validate_sbp(const SbpMatrix& sbp) {
  std::vector<SbpViolation> out;
  const auto& s = sbp.signs();
  const auto d = static_cast<Eigen::Index>(sbp.parts().size());
  if (d < 2) {
    out.push_back({0, "an SBP needs at least 2 parts"});
    return out;
  }
  if (s.rows() != d - 1) {
    out.push_back({0, fmt::format("expected {} rows for {} parts, got {}", d - 1, d, s.rows())});
  }
  // Groups that later rows may split: the + and - supports of earlier rows.
  struct Group {
    std::vector<bool> members;
    bool split = false;
  };
  std::vector<Group> groups;
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    const std::size_t row = static_cast<std::size_t>(k) + 1;
    const auto r = s.row(k).array();
    const bool has_num = (r > 0).any();
    const bool has_den = (r < 0).any();
    if (!has_num) out.push_back({row, "row lacks a numerator group"});
    if (!has_den) out.push_back({row, "row lacks a denominator group"});
    std::vector<bool> support(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) support[static_cast<std::size_t>(j)] = r(j) != 0;
    if (k == 0) {
      if ((r == 0).any()) out.push_back({row, "first row must involve every part"});
    } else {
      auto match = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.members == support; });
      if (match == groups.end()) {
        out.push_back({row, "row support is not a sign-group of an earlier row"});
      } else if (match->split) {
        out.push_back({row, "row splits a group that an earlier row already split"});
      } else {
        match->split = true;
      }
    }
    if (has_num && has_den) {
      Group num{std::vector<bool>(static_cast<std::size_t>(d))};
      Group den{std::vector<bool>(static_cast<std::size_t>(d))};
      for (Eigen::Index j = 0; j < d; ++j) {
        num.members[static_cast<std::size_t>(j)] = r(j) > 0;
        den.members[static_cast<std::size_t>(j)] = r(j) < 0;
      }
      groups.push_back(std::move(num));
      groups.push_back(std::move(den));
    }
  }
  return out;
}

std::vector<std::string> builtin_sbp_names() { return {"dupont4", "balance6"}; }

SbpMatrix builtin_sbp(std::string_view name, std::vector<std::string> parts) {
  Eigen::MatrixXi signs;
  std::vector<std::string> names;
  if (name == "dupont4") {
    // revenues, costs, liabilities, assets
    signs.resize(3, 4);
    signs << 1, 1, -1, -1,
             1, -1, 0, 0,
             0, 0, 1, -1;
  } else if (name == "balance6") {
    // non-current assets, current assets, non-current liabilities,
    // current liabilities, revenues, costs
    signs.resize(5, 6);
    signs << -1, -1, -1, -1, 1, 1,
             0, 0, 0, 0, 1, -1,
             -1, -1, 1, 1, 0, 0,
             1, -1, 0, 0, 0, 0,
             0, 0, 1, -1, 0, 0;
  } else {
    throw ValidationError(fmt::format("unknown built-in SBP '{}' (known: dupont4, balance6)", name));
  }
  if (static_cast<Eigen::Index>(parts.size()) != signs.cols()) {
    throw ValidationError(fmt::format("built-in SBP '{}' needs {} parts, got {}", name, signs.cols(), parts.size()));
  }
  return SbpMatrix(std::move(parts), std::move(signs), std::move(names));
}

double scaling_constant(std::size_t r, std::size_t s) {
  const auto rd = static_cast<double>(r);
  const auto sd = static_cast<double>(s);
  return std::sqrt(rd * sd / (rd + sd));
}

LogRatioMatrix ilr(const CompositionSet& set, const SbpMatrix& sbp) {
  if (sbp.parts() != set.part_names()) {
    throw ValidationError(fmt::format("SBP parts ({}) do not match the data parts ({})", fmt::join(sbp.parts(), ","),
                                      fmt::join(set.part_names(), ",")));
  }
  const auto violations = validate_sbp(sbp);
  if (!violations.empty()) {
    throw ValidationError(fmt::format("invalid SBP: row {}: {}", violations.front().row, violations.front().rule));
  }
  const Eigen::MatrixXd logs = log_values(set);
  // Each coordinate is logs * w with w = c/r on + parts and -c/s on - parts.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(logs.cols(), static_cast<Eigen::Index>(sbp.row_count()));
  LogRatioMatrix out{LogRatioKind::ilr, {}, {}};
  for (std::size_t k = 0; k < sbp.row_count(); ++k) {
    const std::size_t r = sbp.numerator_count(k);
    const std::size_t s = sbp.denominator_count(k);
    const double c = scaling_constant(r, s);
    for (Eigen::Index j = 0; j < logs.cols(); ++j) {
      const int sign = sbp.signs()(static_cast<Eigen::Index>(k), j);
      if (sign > 0) basis(j, static_cast<Eigen::Index>(k)) = c / static_cast<double>(r);
      if (sign < 0) basis(j, static_cast<Eigen::Index>(k)) = -c / static_cast<double>(s);
    }
    out.columns.push_back(sbp.coordinate_name(k));
  }
  out.values = logs * basis;
  return out;
}

}  // namespace coda
