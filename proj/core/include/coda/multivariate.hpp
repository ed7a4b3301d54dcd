#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"

namespace coda {

// ---------------------------------------------------------------------------
// Covariance biplot of the clr-transformed data
// ---------------------------------------------------------------------------

/// Form (covariance) biplot of the column-centred clr matrix Z = U S V^T:
///   firm scores = sqrt(n-1) * U[:, 0:2]
///   ray coords  = V[:, 0:2] * S[0:2] / sqrt(n-1)
/// Each dimension's sign is chosen so that its largest-magnitude ray
/// coordinate is positive.
struct BiplotModel {
  std::vector<std::string> parts;  // one ray per part (clr variable)
  Eigen::MatrixXd firm_scores;     // n x 2
  Eigen::MatrixXd ray_coords;      // D x 2
  Eigen::VectorXd singular_values; // min(n, D), descending
  double explained_variance_fraction = 0.0;

  /// sigma_k^2 / sum sigma^2 for every dimension.
  Eigen::VectorXd variance_fractions() const;
};

/// Requires n > D and a non-zero centred clr matrix; throws ComputationError
/// ("degenerate: zero variance") otherwise.
BiplotModel biplot(const CompositionSet& set);

struct LinkProjection {
  std::string numerator;
  std::string denominator;
  Eigen::VectorXd projections;  // one per firm
  double rank_correlation = 0.0; // Spearman vs. log(x_num / x_den)
};

/// Projects firm scores on the unit vector from the denominator's ray vertex
/// to the numerator's. Throws ValidationError when the parts coincide and
/// ComputationError when the link is shorter than 1e-9.
LinkProjection link_projection(const BiplotModel& biplot, std::string_view numerator, std::string_view denominator,
                               const CompositionSet& set);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// ---------------------------------------------------------------------------
// k-means on clr coordinates
// ---------------------------------------------------------------------------

struct KMeansOptions {
  std::size_t k = 3;
  std::size_t restarts = 25;
  std::uint64_t seed = 42;
  std::size_t max_iterations = 1000;
  /// Run restarts on separate threads. Results are identical either way.
  bool parallel = false;
};

/// One Lloyd run: assignment (0-based), centroids and within-cluster SS.
struct KMeansRun {
  std::vector<int> assignment;
  Eigen::MatrixXd centroids;
  double within_ss = 0.0;
  std::size_t iterations = 0;
};

/// Best of `restarts` Lloyd runs on the rows of `points`. Each restart draws k
/// distinct initial rows from its own pre-drawn seed; the lowest within-SS
/// wins (ties go to the lower restart index). Labels are renumbered in order
/// of first appearance in the data. Empty clusters are reseeded with the point
/// farthest from its centroid.
KMeansRun kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options,
                 std::vector<double>* restart_within_ss = nullptr);

struct ClusterModel {
  std::size_t k = 0;
  std::vector<int> assignment;              // 0-based cluster per firm
  Eigen::MatrixXd clr_centroids;            // k x D
  std::vector<CompositionalCentre> centres; // geometric-mean centre per cluster
  std::vector<std::size_t> sizes;
  double within_ss = 0.0;
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  std::vector<double> restart_within_ss;
};

/// Requires 2 <= k <= n-1.
ClusterModel kmeans_clr(const CompositionSet& set, const KMeansOptions& options);

/// Mean silhouette width with Euclidean distances. Points in singleton
/// clusters score 0. Requires at least two non-empty clusters.
double silhouette(const Eigen::MatrixXd& points, std::span<const int> assignment);

/// [B/(k-1)] / [W/(n-k)]; +infinity when the within-cluster SS is zero.
double calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> assignment);

struct SweepRow {
  std::size_t k = 0;
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  double within_ss = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by k
  std::size_t best_silhouette_k = 0;
  std::size_t best_calinski_harabasz_k = 0;
};

/// kmeans_clr for every k in [k_min, k_max] with the options' seed/restarts.
SweepResult sweep_k(const CompositionSet& set, std::size_t k_min, std::size_t k_max, const KMeansOptions& options);

}  // namespace coda
