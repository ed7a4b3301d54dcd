#pragma once

// Shared fixtures and brute-force oracles. The oracles deliberately avoid the
// library's own numerical routines so they can catch errors in them.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"

namespace coda::testing {

inline std::vector<PartLabel> part_labels(std::size_t d) {
  std::vector<PartLabel> parts;
  for (std::size_t j = 0; j < d; ++j) parts.push_back({"x" + std::to_string(j + 1), ""});
  return parts;
}

/// n firms, d log-normal parts spread over several orders of magnitude.
inline CompositionSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> z(0.0, 1.5);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("f" + std::to_string(i + 1));
    for (std::size_t j = 0; j < d; ++j) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(z(rng) + 3.0);
  }
  return CompositionSet(part_labels(d), std::move(ids), std::move(v));
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Solves A x = b by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Inverse of a small dense matrix, column by column.
inline std::vector<std::vector<double>> gauss_inverse(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto col = gauss_solve(a, e);
    for (std::size_t r = 0; r < n; ++r) inv[r][c] = col[r];
  }
  return inv;
}

struct NormalEquationsFit {
  std::vector<double> beta;
  std::vector<double> se;
  double r_squared = 0.0;
};

/// OLS through the normal equations (X'X) b = X'y.
inline NormalEquationsFit normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) * y(static_cast<Eigen::Index>(i));
      for (std::size_t b = 0; b < p; ++b) {
        xtx[a][b] += x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) *
                     x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
      }
    }
  }
  NormalEquationsFit fit;
  fit.beta = gauss_solve(xtx, xty);
  double ssr = 0.0, mean = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += y(static_cast<Eigen::Index>(i));
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double yhat = 0.0;
    for (std::size_t a = 0; a < p; ++a) yhat += x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) * fit.beta[a];
    const double yi = y(static_cast<Eigen::Index>(i));
    ssr += (yi - yhat) * (yi - yhat);
    sst += (yi - mean) * (yi - mean);
  }
  fit.r_squared = 1.0 - ssr / sst;
  const double sigma2 = ssr / static_cast<double>(n - p);
  const auto inv = gauss_inverse(xtx);
  for (std::size_t a = 0; a < p; ++a) fit.se.push_back(std::sqrt(sigma2 * inv[a][a]));
  return fit;
}

/// Two-sided Student-t p-value by composite Simpson integration of the density
/// over [0, |t|].
inline double simpson_two_sided_p(double t, double dof) {
  const double logc = std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2) - 0.5 * std::log(dof * M_PI);
  auto pdf = [&](double x) { return std::exp(logc - (dof + 1) / 2 * std::log1p(x * x / dof)); };
  const int m = 20000;
  const double b = std::abs(t);
  const double h = b / m;
  double s = pdf(0) + pdf(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
  const double half = s * h / 3.0;
  return 1.0 - 2.0 * half;
}

/// Fraction of total variance in the two leading eigen-directions of the
/// covariance of the column-centred rows, by power iteration with deflation.
inline double power_iteration_top2(const Eigen::MatrixXd& centred) {
  Eigen::MatrixXd c = centred.transpose() * centred;
  const double total = c.trace();
  double captured = 0.0;
  for (int dim = 0; dim < 2; ++dim) {
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(c.rows(), 1.0, 2.0);
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
      Eigen::VectorXd w = c * v;
      const double norm = w.norm();
      if (norm == 0.0) break;
      w /= norm;
      if ((w - v).norm() < 1e-15) {
        v = w;
        break;
      }
      v = w;
    }
    lambda = v.dot(c * v);
    captured += lambda;
    c -= lambda * v * v.transpose();
  }
  return captured / total;
}

/// Silhouette straight from the definition.
inline double brute_silhouette(const Eigen::MatrixXd& pts, const std::vector<int>& lab) {
  const auto n = static_cast<std::size_t>(pts.rows());
  int k = 0;
  for (int l : lab) k = std::max(k, l + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sum[static_cast<std::size_t>(lab[j])] +=
          (pts.row(static_cast<Eigen::Index>(i)) - pts.row(static_cast<Eigen::Index>(j))).norm();
      ++cnt[static_cast<std::size_t>(lab[j])];
    }
    const auto own = static_cast<std::size_t>(lab[i]);
    if (cnt[own] == 0) continue;  // singleton scores 0
    const double a = sum[own] / cnt[own];
    double b = INFINITY;
    for (std::size_t c = 0; c < sum.size(); ++c) {
      if (c != own && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
    }
    const double m = std::max(a, b);
    total += m > 0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

inline double brute_calinski_harabasz(const Eigen::MatrixXd& pts, const std::vector<int>& lab) {
  const auto n = pts.rows();
  int k = 0;
  for (int l : lab) k = std::max(k, l + 1);
  const Eigen::RowVectorXd grand = pts.colwise().mean();
  double between = 0.0, within = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(pts.cols());
    int cnt = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lab[static_cast<std::size_t>(i)] == c) {
        m += pts.row(i);
        ++cnt;
      }
    }
    m /= cnt;
    between += cnt * (m - grand).squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lab[static_cast<std::size_t>(i)] == c) within += (pts.row(i) - m).squaredNorm();
    }
  }
  return (between / (k - 1)) / (within / static_cast<double>(n - k));
}

}  // namespace coda::testing
