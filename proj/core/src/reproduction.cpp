#include "coda/reproduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "coda/boxplot.hpp"
#include "coda/dataset.hpp"
#include "coda/errors.hpp"
#include "coda/reports.hpp"
#include "coda/svg.hpp"

namespace coda {

namespace {

// Reference values and the tolerance implied by their rounding.
constexpr std::array<double, 4> kOverallCentre{0.2354, 0.2149, 0.1590, 0.3907};
constexpr std::array<std::array<double, 4>, 2> kBrandCentre{{{0.2684, 0.2522, 0.1558, 0.3237},
                                                             {0.2259, 0.2045, 0.1593, 0.4102}}};
// turnover, margin, leverage, roe for brand 0, brand 1, overall
constexpr std::array<std::array<double, 4>, 3> kBrandRatios{{{0.829, 0.060, 1.928, 0.096},
                                                             {0.551, 0.095, 1.635, 0.085},
                                                             {0.603, 0.087, 1.686, 0.089}}};
constexpr double kExplainedVariance = 0.9899;
constexpr std::array<std::size_t, 3> kClusterSizes{36, 23, 50};
constexpr std::array<std::array<double, 4>, 3> kClusterCentre{{{0.3090, 0.2979, 0.1324, 0.2607},
                                                               {0.1923, 0.1549, 0.0788, 0.5739},
                                                               {0.1934, 0.1797, 0.2281, 0.3988}}};
constexpr std::array<std::array<double, 4>, 3> kClusterRatios{{{1.185, 0.036, 2.032, 0.087},
                                                               {0.335, 0.194, 1.159, 0.076},
                                                               {0.485, 0.071, 2.336, 0.080}}};
constexpr double kSilhouette = 0.422;
constexpr double kCalinskiHarabasz = 86.9;
// per response: age estimate, age p, brand estimate, brand p, r squared
constexpr std::array<std::array<double, 5>, 3> kPairwiseRegression{{{-0.0002, 0.9538, -0.4068, 0.0064, 0.0739},
                                                                    {-0.0005, 0.4004, 0.0447, 0.1762, 0.0194},
                                                                    {-0.0019, 0.5469, -0.1869, 0.2664, 0.0198}}};
constexpr std::array<std::array<double, 5>, 3> kIlrRegression{{{0.0010, 0.6699, -0.3357, 0.0117, 0.0592},
                                                               {-0.0004, 0.4004, 0.0316, 0.1762, 0.0194},
                                                               {-0.0013, 0.5469, -0.1322, 0.2664, 0.0198}}};

constexpr double kCentreTol = 5e-5;
constexpr double kRatioTol = 5e-4;
constexpr double kLeverageTol = 5e-3;
constexpr double kVarianceTol = 1e-3;
constexpr double kClusterCentreTol = 5e-4;
constexpr double kClusterRatioTol = 5e-3;
constexpr double kSilhouetteTol = 5e-3;
constexpr double kCalinskiHarabaszTol = 0.5;
constexpr double kRegressionTol = 5e-4;
constexpr double kToyTol = 0.01;

const std::array<std::string, 4> kRatioKeys{"turnover", "margin", "leverage", "roe"};
const std::array<std::string, 3> kResponseKeys{"turnover", "margin", "leverage"};

std::vector<int> match_clusters(const ClusterModel& m) {
  // Exhaustive over permutations of the (few) clusters: minimise the summed
  // squared distance between our centres and the published ones.
  std::vector<int> perm(m.k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();
  if (m.k != kClusterCentre.size()) return {};
  do {
    double cost = 0.0;
    for (std::size_t c = 0; c < m.k; ++c) {
      for (std::size_t j = 0; j < 4; ++j) {
        const double d = m.centres[c][j] - kClusterCentre[static_cast<std::size_t>(perm[c])][j];
        cost += d * d;
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int& p : best) ++p;
  return best;
}

std::vector<double> column_values(const Eigen::MatrixXd& m, Eigen::Index c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

std::vector<std::string> labels_of(const CompositionSet& set, const std::string& column) {
  const ExtraColumn& e = set.extra(column);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < set.row_count(); ++i) out.push_back(e.label(i).value_or(std::string(kMissingMarker)));
  return out;
}

}  // namespace

CompositionSet toy_firms() {
  std::vector<std::string> ids;
  Eigen::MatrixXd v(7, 2);
  for (int i = 0; i < 7; ++i) {
    ids.push_back(std::to_string(i + 1));
    v(i, 0) = std::pow(10.0, 6 - i);
    v(i, 1) = std::pow(10.0, i);
  }
  return CompositionSet({{"x1", ""}, {"x2", ""}}, std::move(ids), std::move(v));
}

std::vector<LogRatioSpec> dupont_logratios() {
  return {{"turnover", "x1", "x4"}, {"margin", "x1", "x2"}, {"leverage", "x3", "x4"}};
}

CaseStudy run_case_study(const KMeansOptions& kmeans) {
  CompositionSet data = load_winery();
  require_valid(data);
  RatioScheme scheme = RatioScheme::bind(SchemeKind::dupont4, data.parts());
  CompositionalCentre overall = compositional_centre(data);
  auto brand_rows = group_ratio_table(data, scheme, "Brand");
  BiplotModel b = biplot(data);
  KMeansOptions k3 = kmeans;
  k3.k = 3;
  ClusterModel clusters = kmeans_clr(data, k3);
  auto reference_cluster_of = match_clusters(clusters);
  SweepResult sweep = sweep_k(data, 2, 8, kmeans);
  const auto specs = dupont_logratios();
  LogRatioMatrix pairwise = pairwise_logratios(data, specs);
  SbpMatrix sbp = builtin_sbp("dupont4", scheme.parts_in_role_order());
  sbp = SbpMatrix(sbp.parts(), sbp.signs(), {"turnover", "margin", "leverage"});
  LogRatioMatrix ilr_coords = ilr(data, sbp);
  const std::vector<std::string> predictors{"Age", "Brand"};
  const DesignMatrix design = build_design(data, predictors);
  auto pairwise_fits = ols(responses_from(pairwise, design), design);
  auto ilr_fits = ols(responses_from(ilr_coords, design), design);
  return CaseStudy{std::move(data),      std::move(scheme),        std::move(overall),   std::move(brand_rows),
                  std::move(b),         std::move(clusters),      std::move(reference_cluster_of), std::move(sweep),
                  std::move(pairwise),  std::move(ilr_coords),    std::move(pairwise_fits),    std::move(ilr_fits)};
}

bool ReproductionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const GoldenCheck& c) { return c.pass; });
}

std::string ReproductionReport::render() const {
  std::string out;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.pass ? 1 : 0;
    out += fmt::format("{} {} expected={:.6g} actual={:.6g} |diff|={:.3g} tol={:.3g}\n", c.pass ? "PASS" : "FAIL", c.id,
                       c.expected, c.actual, std::abs(c.actual - c.expected), c.tolerance);
  }
  for (const auto& n : notes) out += "NOTE " + n + "\n";
  out += fmt::format("SUMMARY {}/{} checks passed: {}\n", passed, checks.size(), all_pass() ? "all-pass" : "FAILURES");
  return out;
}

ReproductionReport compare_with_reference(const CaseStudy& run) {
  ReproductionReport rep;
  auto check = [&](std::string id, double expected, double actual, double tol) {
    const bool pass = std::isfinite(actual) && std::abs(actual - expected) <= tol;
    rep.checks.push_back({std::move(id), expected, actual, tol, pass});
  };
  const auto parts = run.data.part_names();

  for (std::size_t j = 0; j < 4; ++j) check(fmt::format("centre.overall.{}", parts[j]), kOverallCentre[j], run.overall[j], kCentreTol);

  for (std::size_t g = 0; g < 2; ++g) {
    const auto& row = run.brand_rows.at(g);
    for (std::size_t j = 0; j < 4; ++j) {
      check(fmt::format("centre.brand{}.{}", row.group, parts[j]), kBrandCentre[g][j], row.centre[j], kCentreTol);
    }
  }
  for (std::size_t g = 0; g < 3; ++g) {
    const auto& row = run.brand_rows.at(g);
    for (std::size_t r = 0; r < 4; ++r) {
      const auto v = row.ratios.get(kRatioKeys[r]);
      check(fmt::format("ratios.brand.{}.{}", row.group, kRatioKeys[r]), kBrandRatios[g][r],
            v.value_or(std::numeric_limits<double>::quiet_NaN()), kRatioKeys[r] == "leverage" ? kLeverageTol : kRatioTol);
      if (!rep.checks.back().pass) {
        // The reference ratios were derived from the centre rounded to 4 decimals.
        std::vector<double> rounded;
        for (double x : row.centre.values()) rounded.push_back(std::round(x * 1e4) / 1e4);
        double total = 0.0;
        for (double x : rounded) total += x;
        for (double& x : rounded) x /= total;
        const auto alt = centre_ratios(CompositionalCentre(row.centre.parts(), rounded), run.scheme).get(kRatioKeys[r]);
        rep.notes.push_back(fmt::format("{}: from the centre rounded to 4 decimals the ratio is {:.6f}",
                                        rep.checks.back().id, alt.value_or(std::numeric_limits<double>::quiet_NaN())));
      }
    }
  }

  check("biplot.explained_variance", kExplainedVariance, run.biplot_model.explained_variance_fraction, kVarianceTol);

  const ClusterModel& cl = run.clusters;
  if (run.reference_cluster_of.size() == kClusterSizes.size()) {
    for (std::size_t c = 0; c < cl.k; ++c) {
      const auto p = static_cast<std::size_t>(run.reference_cluster_of[c] - 1);
      check(fmt::format("cluster{}.size", p + 1), static_cast<double>(kClusterSizes[p]),
            static_cast<double>(cl.sizes[c]), 0.0);
      for (std::size_t j = 0; j < 4; ++j) {
        check(fmt::format("cluster{}.centre.{}", p + 1, parts[j]), kClusterCentre[p][j], cl.centres[c][j],
              kClusterCentreTol);
      }
      const StandardRatios r = centre_ratios(cl.centres[c], run.scheme);
      for (std::size_t q = 0; q < 4; ++q) {
        check(fmt::format("cluster{}.ratio.{}", p + 1, kRatioKeys[q]), kClusterRatios[p][q],
              r.get(kRatioKeys[q]).value_or(std::numeric_limits<double>::quiet_NaN()), kClusterRatioTol);
      }
    }
  } else {
    rep.notes.push_back(fmt::format("cluster model has k={}, expected 3; cluster centres and ratios not compared", cl.k));
  }
  check("cluster.silhouette", kSilhouette, cl.silhouette, kSilhouetteTol);
  check("cluster.calinski_harabasz", kCalinskiHarabasz, cl.calinski_harabasz, kCalinskiHarabaszTol);
  check("cluster.best_k.silhouette", 3.0, static_cast<double>(run.sweep.best_silhouette_k), 0.0);
  check("cluster.best_k.calinski_harabasz", 3.0, static_cast<double>(run.sweep.best_calinski_harabasz_k), 0.0);

  auto regression = [&](const char* table, const std::vector<RegressionFit>& fits,
                        const std::array<std::array<double, 5>, 3>& gold) {
    for (std::size_t r = 0; r < 3; ++r) {
      const auto& f = fits.at(r);
      const std::string stem = fmt::format("{}.{}", table, kResponseKeys[r]);
      check(stem + ".Age.estimate", gold[r][0], f.coefficients(1), kRegressionTol);
      check(stem + ".Age.p_value", gold[r][1], f.p_values(1), kRegressionTol);
      check(stem + ".Brand.estimate", gold[r][2], f.coefficients(2), kRegressionTol);
      check(stem + ".Brand.p_value", gold[r][3], f.p_values(2), kRegressionTol);
      check(stem + ".r_squared", gold[r][4], f.r_squared, kRegressionTol);
    }
  };
  regression("regression.pairwise", run.pairwise_fits, kPairwiseRegression);
  regression("regression.ilr", run.ilr_fits, kIlrRegression);
  for (std::size_t r = 1; r < 3; ++r) {
    const std::string stem = fmt::format("regression.pairwise_vs_ilr.{}", kResponseKeys[r]);
    check(stem + ".Brand.p_value", run.pairwise_fits[r].p_values(2), run.ilr_fits[r].p_values(2), 1e-10);
    check(stem + ".r_squared", run.pairwise_fits[r].r_squared, run.ilr_fits[r].r_squared, 1e-10);
  }

  const CompositionSet toy = toy_firms();
  const auto rows = [](std::initializer_list<std::size_t> firms) {
    return RowFilter([v = std::vector<std::size_t>(firms)](std::size_t i) {
      return std::find(v.begin(), v.end(), i + 1) != v.end();
    });
  };
  check("toy.gmean.x2/x1.firms345", 1.0, geometric_mean_of_ratio(toy, 1, 0, rows({3, 4, 5})), 1e-10);
  check("toy.gmean.x2/x1.firms456", 100.0, geometric_mean_of_ratio(toy, 1, 0, rows({4, 5, 6})), 1e-8);
  check("toy.gmean.x1/x2.firms456", 0.01, geometric_mean_of_ratio(toy, 0, 1, rows({4, 5, 6})), 1e-12);
  check("toy.amean.x2/x1.firms345", 33.67, arithmetic_mean_of_ratio(toy, 1, 0, rows({3, 4, 5})), kToyTol);
  check("toy.amean.x2/x1.firms456", 3367.0, arithmetic_mean_of_ratio(toy, 1, 0, rows({4, 5, 6})), kToyTol);
  check("toy.amean.x1/x2.firms456", 0.3367, arithmetic_mean_of_ratio(toy, 0, 1, rows({4, 5, 6})), kToyTol);

  rep.notes.push_back(fmt::format("k-means seed {} with {} restarts", cl.seed, cl.restarts));
  return rep;
}

std::vector<std::filesystem::path> write_case_study_artifacts(const CaseStudy& run, const ReproductionReport& report,
                                                         const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto table = [&](const std::string& stem, const Table& t, int decimals) {
    for (const auto fmt : {TableFormat::csv, TableFormat::markdown}) {
      const auto path = dir / (stem + (fmt == TableFormat::csv ? ".csv" : ".md"));
      emit_table(t, fmt, decimals, path);
      written.push_back(path);
    }
  };
  auto figure = [&](const std::string& stem, const std::string& svg) {
    const auto path = dir / (stem + ".svg");
    write_text_file(path, svg);
    written.push_back(path);
  };

  const CompositionSet& data = run.data;
  const auto brand = labels_of(data, "Brand");

  // Tables.
  std::vector<CompositionalCentre> overall{run.overall};
  table("centre_overall", centre_table({"overall"}, overall), 4);
  std::vector<CompositionalCentre> brand_centres;
  std::vector<std::string> brand_names;
  for (const auto& r : run.brand_rows) {
    brand_centres.push_back(r.centre);
    brand_names.push_back(r.group == "overall" ? "overall" : "Brand " + r.group);
  }
  table("centre_by_brand", centre_table(brand_names, brand_centres), 4);
  table("ratios_by_brand", ratio_table(run.brand_rows), 3);

  std::vector<std::size_t> order(run.clusters.k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> reference_of = run.reference_cluster_of;
  if (reference_of.size() != run.clusters.k) {
    reference_of.resize(run.clusters.k);
    std::iota(reference_of.begin(), reference_of.end(), 1);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return reference_of[a] < reference_of[b]; });
  std::vector<CompositionalCentre> cluster_centres;
  std::vector<std::string> cluster_names;
  for (std::size_t c : order) {
    cluster_centres.push_back(run.clusters.centres[c]);
    cluster_names.push_back(fmt::format("Cluster {} (n={})", reference_of[c], run.clusters.sizes[c]));
  }
  std::vector<int> reference_assignment;
  for (int a : run.clusters.assignment) reference_assignment.push_back(reference_of[static_cast<std::size_t>(a)] - 1);
  table("centre_by_cluster", centre_table(cluster_names, cluster_centres), 4);
  table("ratios_by_cluster", centre_ratio_table(cluster_names, cluster_centres, run.scheme), 3);
  table("cluster_assignment", assignment_table(data, reference_assignment), 0);
  table("cluster_sweep", sweep_table(run.sweep), 4);
  table("regression_pairwise", regression_summary_table(run.pairwise_fits), 4);
  table("regression_ilr", regression_summary_table(run.ilr_fits), 4);
  table("regression_pairwise_detail", regression_table(run.pairwise_fits), 6);
  table("regression_ilr_detail", regression_table(run.ilr_fits), 6);
  table("pairwise_logratios", logratio_table(data, run.pairwise), 6);
  table("biplot_coordinates", biplot_table(data, run.biplot_model), 6);

  // Figures.
  {
    BoxplotFigure f{"Standard ratios", "", {}};
    const RatioScheme& s = run.scheme;
    for (const auto& name : kRatioKeys) {
      std::vector<double> vals;
      for (std::size_t i = 0; i < data.row_count(); ++i) {
        const auto v = standard_ratios(data.row(i), s).get(name);
        if (v) vals.push_back(*v);
      }
      f.boxes.push_back(boxplot_stats(vals, name));
    }
    figure("standard_ratios_boxplot", render_boxplot(f));
  }
  {
    BoxplotFigure f{"Pairwise log-ratios", "log-ratio", {}};
    for (Eigen::Index c = 0; c < run.pairwise.values.cols(); ++c) {
      f.boxes.push_back(boxplot_stats(column_values(run.pairwise.values, c), run.pairwise.columns[static_cast<std::size_t>(c)]));
    }
    figure("pairwise_logratios_boxplot", render_boxplot(f));
  }
  {
    const LogRatioMatrix z = clr(data);
    BoxplotFigure f{"Centred log-ratios", "clr", {}};
    for (Eigen::Index c = 0; c < z.values.cols(); ++c) {
      f.boxes.push_back(boxplot_stats(column_values(z.values, c), z.columns[static_cast<std::size_t>(c)]));
    }
    figure("clr_boxplot", render_boxplot(f));
  }
  {
    std::vector<std::pair<std::string, std::string>> links;
    for (const auto& s : dupont_logratios()) links.emplace_back(s.numerator, s.denominator);
    figure("biplot_by_brand", render_biplot({"CoDa biplot by brand", &run.biplot_model, brand, links}));
    std::vector<std::string> cl;
    for (int a : reference_assignment) cl.push_back(std::to_string(a + 1));
    figure("biplot_by_cluster", render_biplot({"CoDa biplot by cluster", &run.biplot_model, cl, {}}));
    figure("mosaic_cluster_brand", render_mosaic({"Cluster by brand", cl, brand}));
    std::vector<double> age;
    std::vector<std::string> age_group;
    const ExtraColumn& age_col = data.extra("Age");
    for (std::size_t i = 0; i < data.row_count(); ++i) {
      if (const auto a = age_col.number(i)) {
        age.push_back(*a);
        age_group.push_back(cl[i]);
      }
    }
    BoxplotFigure f{"Firm age by cluster", "years", boxplot_stats(age, age_group)};
    std::sort(f.boxes.begin(), f.boxes.end(), [](const BoxplotStats& a, const BoxplotStats& b) { return a.group < b.group; });
    figure("age_by_cluster_boxplot", render_boxplot(f));
  }
  auto by_brand = [&](const LogRatioMatrix& m, const std::string& stem, const std::string& title) {
    BoxplotFigure f{title, "", {}};
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      auto groups = boxplot_stats(column_values(m.values, c), brand);
      std::sort(groups.begin(), groups.end(), [](const BoxplotStats& a, const BoxplotStats& b) { return a.group < b.group; });
      for (auto& g : groups) {
        g.group = m.columns[static_cast<std::size_t>(c)] + " / " + g.group;
        f.boxes.push_back(std::move(g));
      }
    }
    figure(stem, render_boxplot(f));
  };
  by_brand(run.pairwise, "pairwise_by_brand_boxplot", "Pairwise log-ratios by brand");
  {
    const ExtraColumn& age_col = data.extra("Age");
    for (Eigen::Index c = 0; c < run.pairwise.values.cols(); ++c) {
      ScatterFigure f;
      f.title = run.pairwise.columns[static_cast<std::size_t>(c)] + " vs age";
      f.x_label = "Age";
      f.y_label = run.pairwise.columns[static_cast<std::size_t>(c)];
      for (std::size_t i = 0; i < data.row_count(); ++i) {
        if (const auto a = age_col.number(i)) {
          f.x.push_back(*a);
          f.y.push_back(run.pairwise.values(static_cast<Eigen::Index>(i), c));
        }
      }
      figure(run.pairwise.columns[static_cast<std::size_t>(c)] + "_vs_age_scatter", render_scatter(f));
    }
  }
  by_brand(run.ilr_coords, "ilr_by_brand_boxplot", "ilr coordinates by brand");
  {
    ScatterFigure sil{"Silhouette by k", "k", "silhouette", {}, {}, {}, true};
    ScatterFigure ch{"Calinski-Harabasz by k", "k", "Calinski-Harabasz", {}, {}, {}, true};
    for (const auto& r : run.sweep.rows) {
      sil.x.push_back(static_cast<double>(r.k));
      sil.y.push_back(r.silhouette);
      ch.x.push_back(static_cast<double>(r.k));
      ch.y.push_back(r.calinski_harabasz);
    }
    figure("cluster_sweep_silhouette", render_scatter(sil));
    figure("cluster_sweep_calinski_harabasz", render_scatter(ch));
  }

  const auto report_path = dir / "report.txt";
  write_text_file(report_path, report.render());
  written.push_back(report_path);
  return written;
}

}  // namespace coda
