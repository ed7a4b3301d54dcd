#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "coda/errors.hpp"
#include "coda/multivariate.hpp"
#include "coda/transforms.hpp"

namespace coda {

namespace {

// Uniform draw in [0, bound) by rejection, independent of the standard
// library's distribution implementations.
std::size_t draw_below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + draw_below(rng, n - i)]);
  pool.resize(k);
  return pool;
}

std::size_t cluster_count(std::span<const int> assignment) {
  int k = -1;
  for (int a : assignment) {
    if (a < 0) throw ValidationError("cluster labels must be non-negative");
    k = std::max(k, a);
  }
  return static_cast<std::size_t>(k + 1);
}

void recompute_centroids(const Eigen::MatrixXd& points, const std::vector<int>& assignment, Eigen::MatrixXd& centroids,
                         std::vector<std::size_t>& sizes) {
  centroids.setZero();
  std::fill(sizes.begin(), sizes.end(), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)]);
    centroids.row(static_cast<Eigen::Index>(c)) += points.row(i);
    ++sizes[c];
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] > 0) centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(sizes[c]);
  }
}

KMeansRun lloyd(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed, std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::mt19937_64 rng(seed);
  const auto init = sample_without_replacement(rng, n, k);

  KMeansRun run;
  run.centroids.resize(static_cast<Eigen::Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c) run.centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(init[c]));
  run.assignment.assign(n, -1);
  std::vector<std::size_t> sizes(k, 0);

  for (run.iterations = 0; run.iterations < max_iterations; ++run.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = (points.row(static_cast<Eigen::Index>(i)) - run.centroids.row(static_cast<Eigen::Index>(c))).squaredNorm();
        if (dist < best_d) {  // strict: ties keep the lowest index
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    recompute_centroids(points, run.assignment, run.centroids, sizes);

    // Reseed each empty cluster with the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(run.assignment[i]);
        if (sizes[own] < 2) continue;
        const double dist = (points.row(static_cast<Eigen::Index>(i)) - run.centroids.row(static_cast<Eigen::Index>(own))).squaredNorm();
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      if (far == n) throw ComputationError("k-means: cannot repair an empty cluster");
      run.assignment[far] = static_cast<int>(c);
      recompute_centroids(points, run.assignment, run.centroids, sizes);
    }
  }

  run.within_ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.within_ss += (points.row(static_cast<Eigen::Index>(i)) -
                      run.centroids.row(static_cast<Eigen::Index>(run.assignment[i]))).squaredNorm();
  }
  return run;
}

void relabel_by_first_appearance(KMeansRun& run, std::size_t k) {
  std::vector<int> map(k, -1);
  int next = 0;
  for (int& a : run.assignment) {
    auto& m = map[static_cast<std::size_t>(a)];
    if (m < 0) m = next++;
    a = m;
  }
  Eigen::MatrixXd centroids(run.centroids.rows(), run.centroids.cols());
  for (std::size_t c = 0; c < k; ++c) {
    if (map[c] >= 0) centroids.row(map[c]) = run.centroids.row(static_cast<Eigen::Index>(c));
  }
  run.centroids = std::move(centroids);
}

}  // namespace

KMeansRun kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options, std::vector<double>* restart_within_ss) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (options.k < 2 || options.k >= n) {
    throw ValidationError(fmt::format("k must satisfy 2 <= k <= n-1 (k={}, n={})", options.k, n));
  }
  if (options.restarts < 1) throw ValidationError("k-means needs at least one restart");

  std::mt19937_64 master(options.seed);
  std::vector<std::uint64_t> seeds(options.restarts);
  for (auto& s : seeds) s = master();

  std::vector<KMeansRun> runs(options.restarts);
  if (options.parallel) {
    std::vector<std::future<KMeansRun>> futures;
    for (auto s : seeds) {
      futures.push_back(std::async(std::launch::async, [&points, &options, s] {
        return lloyd(points, options.k, s, options.max_iterations);
      }));
    }
    for (std::size_t r = 0; r < runs.size(); ++r) runs[r] = futures[r].get();
  } else {
    for (std::size_t r = 0; r < runs.size(); ++r) runs[r] = lloyd(points, options.k, seeds[r], options.max_iterations);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].within_ss < runs[best].within_ss) best = r;
  }
  if (restart_within_ss != nullptr) {
    restart_within_ss->clear();
    for (const auto& r : runs) restart_within_ss->push_back(r.within_ss);
  }
  KMeansRun winner = std::move(runs[best]);
  relabel_by_first_appearance(winner, options.k);
  return winner;
}

ClusterModel kmeans_clr(const CompositionSet& set, const KMeansOptions& options) {
  const Eigen::MatrixXd points = clr(set).values;
  ClusterModel model;
  KMeansRun run = kmeans(points, options, &model.restart_within_ss);
  model.k = options.k;
  model.assignment = std::move(run.assignment);
  model.clr_centroids = std::move(run.centroids);
  model.within_ss = run.within_ss;
  model.restarts = options.restarts;
  model.seed = options.seed;
  model.sizes.assign(model.k, 0);
  for (int a : model.assignment) ++model.sizes[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < model.k; ++c) {
    model.centres.push_back(
        compositional_centre(set, [&](std::size_t row) { return model.assignment[row] == static_cast<int>(c); }));
  }
  model.silhouette = silhouette(points, model.assignment);
  model.calinski_harabasz = calinski_harabasz(points, model.assignment);
  return model;
}

double silhouette(const Eigen::MatrixXd& points, std::span<const int> assignment) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (assignment.size() != n) throw ValidationError("assignment length differs from the number of points");
  const std::size_t k = cluster_count(assignment);
  std::vector<std::size_t> sizes(k, 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  if (k < 2) throw ValidationError("silhouette needs at least 2 clusters");
  if (std::find(sizes.begin(), sizes.end(), 0u) != sizes.end()) throw ValidationError("silhouette: empty cluster");

  double total = 0.0;
  std::vector<double> sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(assignment[i]);
    if (sizes[own] == 1) continue;  // singleton scores 0
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(assignment[j])] +=
          (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).norm();
    }
    const double a = sum[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> assignment) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (assignment.size() != n) throw ValidationError("assignment length differs from the number of points");
  const std::size_t k = cluster_count(assignment);
  if (k < 2 || k > n) throw ValidationError(fmt::format("Calinski-Harabasz needs 2 <= k <= n (k={}, n={})", k, n));

  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
  std::vector<std::size_t> sizes(k, 0);
  recompute_centroids(points, {assignment.begin(), assignment.end()}, centroids, sizes);
  if (std::find(sizes.begin(), sizes.end(), 0u) != sizes.end()) throw ValidationError("Calinski-Harabasz: empty cluster");

  const Eigen::RowVectorXd grand = points.colwise().mean();
  double within = 0.0;
  double between = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    within += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(assignment[i])).squaredNorm();
  }
  for (std::size_t c = 0; c < k; ++c) {
    between += static_cast<double>(sizes[c]) * (centroids.row(static_cast<Eigen::Index>(c)) - grand).squaredNorm();
  }
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

SweepResult sweep_k(const CompositionSet& set, std::size_t k_min, std::size_t k_max, const KMeansOptions& options) {
  if (k_min < 2 || k_min > k_max) throw ValidationError(fmt::format("invalid k range [{}, {}]", k_min, k_max));
  if (k_max >= set.row_count()) {
    throw ValidationError(fmt::format("k_max must be at most n-1 (k_max={}, n={})", k_max, set.row_count()));
  }
  SweepResult out;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    KMeansOptions o = options;
    o.k = k;
    const ClusterModel m = kmeans_clr(set, o);
    out.rows.push_back({k, m.silhouette, m.calinski_harabasz, m.within_ss});
  }
  const auto best_sil = std::max_element(out.rows.begin(), out.rows.end(),
                                         [](const SweepRow& a, const SweepRow& b) { return a.silhouette < b.silhouette; });
  const auto best_ch = std::max_element(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.calinski_harabasz < b.calinski_harabasz;
  });
  out.best_silhouette_k = best_sil->k;
  out.best_calinski_harabasz_k = best_ch->k;
  return out;
}

}  // namespace coda
