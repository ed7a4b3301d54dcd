#include "coda/regress.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/errors.hpp"

namespace coda {

Eigen::VectorXd DesignMatrix::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(kept_rows.size()));
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    if (static_cast<Eigen::Index>(kept_rows[r]) >= full.size()) throw ValidationError("response shorter than the data set");
    out(static_cast<Eigen::Index>(r)) = full(static_cast<Eigen::Index>(kept_rows[r]));
  }
  return out;
}

DesignMatrix build_design(const CompositionSet& set, std::span<const std::string> predictors) {
  std::vector<const ExtraColumn*> cols;
  for (const auto& name : predictors) {
    const ExtraColumn& c = set.extra(name);
    if (!c.is_numeric()) {
      throw ValidationError(fmt::format("predictor '{}' is categorical; recode it to numeric 0/1 first", name));
    }
    cols.push_back(&c);
  }
  DesignMatrix d;
  d.columns.push_back("(Intercept)");
  d.columns.insert(d.columns.end(), predictors.begin(), predictors.end());
  for (std::size_t i = 0; i < set.row_count(); ++i) {
    const bool complete = std::none_of(cols.begin(), cols.end(), [i](const ExtraColumn* c) { return c->is_missing(i); });
    if (complete) {
      d.kept_rows.push_back(i);
    } else {
      ++d.dropped_rows;
    }
  }
  d.x.resize(static_cast<Eigen::Index>(d.kept_rows.size()), static_cast<Eigen::Index>(d.columns.size()));
  for (std::size_t r = 0; r < d.kept_rows.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    d.x(row, 0) = 1.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      d.x(row, static_cast<Eigen::Index>(c + 1)) = *cols[c]->number(d.kept_rows[r]);
    }
  }
  return d;
}

std::vector<Response> responses_from(const LogRatioMatrix& m, const DesignMatrix& design) {
  std::vector<Response> out;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    out.push_back({m.columns[c], design.restrict(m.values.col(static_cast<Eigen::Index>(c)))});
  }
  return out;
}

std::vector<RegressionFit> ols(std::span<const Response> responses, const DesignMatrix& design) {
  const Eigen::Index n = design.x.rows();
  const Eigen::Index p = design.x.cols();
  if (n <= p) throw ValidationError(fmt::format("OLS needs more observations than columns (n={}, p={})", n, p));

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
  if (qr.rank() < p) {
    std::vector<std::string> collinear;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      collinear.push_back(design.columns[static_cast<std::size_t>(qr.colsPermutation().indices()(k))]);
    }
    throw ComputationError(fmt::format("rank-deficient design (rank {} of {}); collinear column(s): {}", qr.rank(), p,
                                       fmt::join(collinear, ", ")));
  }

  // (X^T X)^-1 = P R^-1 R^-T P^T
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();

  std::vector<RegressionFit> fits;
  for (const auto& resp : responses) {
    if (resp.values.size() != n) {
      throw ValidationError(fmt::format("response '{}' has {} rows, design has {}", resp.name, resp.values.size(), n));
    }
    RegressionFit f;
    f.response = resp.name;
    f.columns = design.columns;
    f.dof = static_cast<std::size_t>(n - p);
    f.coefficients = qr.solve(resp.values);
    f.residuals = resp.values - design.x * f.coefficients;
    const double ssr = f.residuals.squaredNorm();
    const double sst = (resp.values.array() - resp.values.mean()).matrix().squaredNorm();
    if (!(sst > 0.0)) throw ComputationError(fmt::format("response '{}' is constant", resp.name));
    f.r_squared = 1.0 - ssr / sst;
    const double sigma2 = ssr / static_cast<double>(f.dof);
    f.standard_errors = (sigma2 * xtx_inv.diagonal().array()).sqrt().matrix();
    f.t_statistics = f.coefficients.array() / f.standard_errors.array();
    f.p_values.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      f.p_values(k) = student_t_two_sided_p(f.t_statistics(k), static_cast<double>(f.dof));
    }
    fits.push_back(std::move(f));
  }
  return fits;
}

std::vector<HypothesisRow> hypothesis_table(std::span<const RegressionFit> fits, double alpha) {
  std::vector<HypothesisRow> rows;
  for (const auto& f : fits) {
    for (std::size_t k = 1; k < f.columns.size(); ++k) {
      const auto idx = static_cast<Eigen::Index>(k);
      rows.push_back({f.response, f.columns[k], f.coefficients(idx), f.p_values(idx), f.p_values(idx) < alpha});
    }
  }
  return rows;
}

}  // namespace coda
