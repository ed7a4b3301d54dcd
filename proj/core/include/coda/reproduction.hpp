#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coda/composition.hpp"
#include "coda/industry_stats.hpp"
#include "coda/multivariate.hpp"
#include "coda/regress.hpp"
#include "coda/transforms.hpp"

namespace coda {

/// The seven-firm two-part toy set (x1 = 10^(7-i), x2 = 10^(i-1)).
CompositionSet toy_firms();

/// Pairwise log-ratios of the DuPont graph: turnover x1/x4, margin x1/x2,
/// leverage x3/x4.
std::vector<LogRatioSpec> dupont_logratios();

/// Everything computed for the winery case study.
struct CaseStudy {
  CompositionSet data;
  RatioScheme scheme;
  CompositionalCentre overall;
  std::vector<GroupRatioRow> brand_rows;  // "0", "1", "overall"
  BiplotModel biplot_model;
  ClusterModel clusters;
  /// Reference cluster number (1-based) for each of our cluster labels, matched by
  /// nearest centre.
  std::vector<int> reference_cluster_of;
  SweepResult sweep;
  LogRatioMatrix pairwise;
  LogRatioMatrix ilr_coords;
  std::vector<RegressionFit> pairwise_fits;
  std::vector<RegressionFit> ilr_fits;
};

CaseStudy run_case_study(const KMeansOptions& kmeans);

struct GoldenCheck {
  std::string id;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReproductionReport {
  std::vector<GoldenCheck> checks;
  std::vector<std::string> notes;
  bool all_pass() const;
  /// Plain text, one line per check, then a summary line.
  std::string render() const;
};

ReproductionReport compare_with_reference(const CaseStudy& run);

/// Writes every table (csv and markdown), every figure (svg) and report.txt
/// into `dir`. Returns the written paths in order.
std::vector<std::filesystem::path> write_case_study_artifacts(const CaseStudy& run, const ReproductionReport& report,
                                                         const std::filesystem::path& dir);

}  // namespace coda
