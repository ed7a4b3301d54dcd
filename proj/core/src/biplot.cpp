#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "coda/errors.hpp"
#include "coda/multivariate.hpp"
#include "coda/transforms.hpp"

namespace coda {

namespace {

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return v(static_cast<Eigen::Index>(a)) < v(static_cast<Eigen::Index>(b));
  });
  Eigen::VectorXd ranks(v.size());
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && v(static_cast<Eigen::Index>(order[end])) == v(static_cast<Eigen::Index>(order[start]))) ++end;
    const double rank = 0.5 * static_cast<double>(start + end - 1) + 1.0;
    for (std::size_t t = start; t < end; ++t) ranks(static_cast<Eigen::Index>(order[t])) = rank;
    start = end;
  }
  return ranks;
}

}  // namespace

Eigen::VectorXd BiplotModel::variance_fractions() const {
  const Eigen::VectorXd sq = singular_values.array().square();
  return sq / sq.sum();
}

BiplotModel biplot(const CompositionSet& set) {
  const auto n = static_cast<Eigen::Index>(set.row_count());
  const auto d = static_cast<Eigen::Index>(set.part_count());
  if (n <= d) {
    throw ComputationError(fmt::format("biplot needs more firms than parts (n={}, D={})", n, d));
  }
  Eigen::MatrixXd z = clr(set).values;
  const double magnitude = std::max(1.0, z.cwiseAbs().maxCoeff());
  z.rowwise() -= z.colwise().mean();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double total = sigma.squaredNorm();
  if (!(total > 0.0) || sigma(0) <= 1e-10 * magnitude * std::sqrt(static_cast<double>(n))) {
    throw ComputationError("degenerate: zero variance");
  }

  BiplotModel out;
  out.parts = set.part_names();
  out.singular_values = sigma;
  out.explained_variance_fraction = sigma.head(2).squaredNorm() / total;

  const double scale = std::sqrt(static_cast<double>(n - 1));
  Eigen::MatrixXd u = svd.matrixU().leftCols(2);
  Eigen::MatrixXd v = svd.matrixV().leftCols(2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    Eigen::Index arg = 0;
    v.col(c).cwiseAbs().maxCoeff(&arg);
    if (v(arg, c) < 0.0) {
      v.col(c) *= -1.0;
      u.col(c) *= -1.0;
    }
  }
  out.firm_scores = u * scale;
  out.ray_coords = v * sigma.head(2).asDiagonal() / scale;
  return out;
}

double spearman_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) throw ValidationError("rank correlation needs two equal-length vectors of length >= 2");
  Eigen::VectorXd ra = average_ranks(a);
  Eigen::VectorXd rb = average_ranks(b);
  ra.array() -= ra.mean();
  rb.array() -= rb.mean();
  const double denom = std::sqrt(ra.squaredNorm() * rb.squaredNorm());
  if (denom == 0.0) throw ComputationError("rank correlation undefined for constant input");
  return ra.dot(rb) / denom;
}

LinkProjection link_projection(const BiplotModel& biplot, std::string_view numerator, std::string_view denominator,
                               const CompositionSet& set) {
  if (numerator == denominator) throw ValidationError("a link needs two different parts");
  auto find = [&](std::string_view part) {
    const auto it = std::find(biplot.parts.begin(), biplot.parts.end(), part);
    if (it == biplot.parts.end()) throw ValidationError(fmt::format("unknown part '{}'", part));
    return static_cast<Eigen::Index>(it - biplot.parts.begin());
  };
  const Eigen::Index i = find(numerator);
  const Eigen::Index j = find(denominator);
  const Eigen::Vector2d link = (biplot.ray_coords.row(i) - biplot.ray_coords.row(j)).transpose();
  const double length = link.norm();
  if (length < 1e-9) throw ComputationError("link too short to define a direction");

  LinkProjection out;
  out.numerator = std::string(numerator);
  out.denominator = std::string(denominator);
  out.projections = biplot.firm_scores * (link / length);
  const Eigen::VectorXd exact = pairwise_logratio(set, {"link", out.numerator, out.denominator});
  out.rank_correlation = spearman_correlation(out.projections, exact);
  return out;
}

}  // namespace coda
