#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"
#include "coda/transforms.hpp"

namespace coda {

/// Intercept plus named numeric predictors over the firms that have no
/// missing predictor value (listwise deletion).
struct DesignMatrix {
  std::vector<std::string> columns;  // "(Intercept)" first
  Eigen::MatrixXd x;                 // rows = kept firms
  std::vector<std::size_t> kept_rows;
  std::size_t dropped_rows = 0;

  /// Entries of a full-length (all firms) column at the kept rows.
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
};

/// Builds the design from numeric extras columns. Binary predictors must
/// already be coded 0/1. Throws ValidationError for unknown or categorical
/// columns.
DesignMatrix build_design(const CompositionSet& set, std::span<const std::string> predictors);

/// A response column aligned with the design rows.
struct Response {
  std::string name;
  Eigen::VectorXd values;
};

/// Responses for each column of a log-ratio matrix, restricted to the design's kept rows.
std::vector<Response> responses_from(const LogRatioMatrix& m, const DesignMatrix& design);

struct RegressionFit {
  std::string response;
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd t_statistics;
  Eigen::VectorXd p_values;  // two-sided Student-t, dof = n - p
  double r_squared = 0.0;
  Eigen::VectorXd residuals;
  std::size_t dof = 0;
};

/// Ordinary least squares via column-pivoted QR. Throws ValidationError when
/// n <= p and ComputationError naming the collinear columns when the design is
/// rank deficient.
std::vector<RegressionFit> ols(std::span<const Response> responses, const DesignMatrix& design);

struct HypothesisRow {
  std::string response;
  std::string predictor;
  double estimate = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p < alpha
};

inline constexpr double kSignificanceLevel = 0.05;

/// One row per (response, non-intercept predictor).
std::vector<HypothesisRow> hypothesis_table(std::span<const RegressionFit> fits, double alpha = kSignificanceLevel);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);

/// 2 * P(T > |t|).
double student_t_two_sided_p(double t, double dof);

}  // namespace coda
