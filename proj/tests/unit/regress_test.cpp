#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coda/dataset.hpp"
#include "coda/errors.hpp"
#include "coda/regress.hpp"
#include "coda/reproduction.hpp"
#include "support.hpp"

namespace coda {
namespace {

DesignMatrix random_design(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::normal_distribution<double> g;
  DesignMatrix d;
  d.columns.push_back("(Intercept)");
  for (Eigen::Index k = 1; k < p; ++k) d.columns.push_back("z" + std::to_string(k));
  d.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.x(i, 0) = 1.0;
    for (Eigen::Index k = 1; k < p; ++k) d.x(i, k) = g(rng);
    d.kept_rows.push_back(static_cast<std::size_t>(i));
  }
  return d;
}

TEST(StudentT, KnownValues) {
  EXPECT_DOUBLE_EQ(student_t_sf(0.0, 7.0), 0.5);
  EXPECT_NEAR(student_t_sf(1.0, 1.0), 0.25, 1e-14);
  EXPECT_NEAR(student_t_sf(-1.0, 1.0), 0.75, 1e-14);
  EXPECT_NEAR(student_t_two_sided_p(2.776, 106.0), testing::simpson_two_sided_p(2.776, 106.0), 1e-9);
  EXPECT_NEAR(student_t_sf(2.776, 106.0), 0.0032, 1e-4);
  EXPECT_NEAR(student_t_two_sided_p(2.0, 4.0), testing::simpson_two_sided_p(2.0, 4.0), 1e-9);
  EXPECT_THROW(student_t_sf(1.0, 0.0), ValidationError);
}

TEST(IncompleteBeta, Symmetry) {
  for (double x : {0.1, 0.3, 0.5, 0.9}) {
    EXPECT_NEAR(regularized_incomplete_beta(2.5, 4.0, x) + regularized_incomplete_beta(4.0, 2.5, 1.0 - x), 1.0, 1e-13);
  }
  EXPECT_NEAR(regularized_incomplete_beta(1.0, 1.0, 0.37), 0.37, 1e-14);
}

TEST(Ols, MatchesNormalEquations) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  const DesignMatrix d = random_design(rng, 60, 4);
  Eigen::VectorXd y(60);
  for (Eigen::Index i = 0; i < 60; ++i) y(i) = 1.0 + 0.5 * d.x(i, 1) - 2.0 * d.x(i, 3) + g(rng);
  const std::vector<Response> rs{{"y", y}};
  const RegressionFit f = ols(rs, d).front();
  const auto oracle = testing::normal_equations(d.x, y);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(f.coefficients(k), oracle.beta[static_cast<std::size_t>(k)], 1e-9);
    EXPECT_NEAR(f.standard_errors(k), oracle.se[static_cast<std::size_t>(k)], 1e-9);
    EXPECT_NEAR(f.p_values(k), testing::simpson_two_sided_p(f.t_statistics(k), 56.0), 1e-8);
  }
  EXPECT_NEAR(f.r_squared, oracle.r_squared, 1e-9);
  EXPECT_EQ(f.dof, 56u);
  EXPECT_LT((d.x.transpose() * f.residuals).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Ols, ScalingEquivariance) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  const DesignMatrix d = random_design(rng, 40, 3);
  Eigen::VectorXd y(40);
  for (Eigen::Index i = 0; i < 40; ++i) y(i) = d.x(i, 1) + g(rng);
  const std::vector<Response> rs{{"y", y}, {"y7", 7.0 * y}};
  const auto fits = ols(rs, d);
  EXPECT_LT((fits[1].coefficients - 7.0 * fits[0].coefficients).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((fits[1].t_statistics - fits[0].t_statistics).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(fits[1].r_squared, fits[0].r_squared, 1e-12);
}

TEST(Ols, ExactFitAndFailures) {
  std::mt19937_64 rng(23);
  DesignMatrix d = random_design(rng, 20, 3);
  const Eigen::VectorXd y = 2.0 + 3.0 * d.x.col(1).array();
  const std::vector<Response> exact{{"y", y}};
  EXPECT_NEAR(ols(exact, d).front().r_squared, 1.0, 1e-12);

  d.x.col(2) = 2.0 * d.x.col(1);
  try {
    ols(exact, d);
    FAIL() << "expected ComputationError";
  } catch (const ComputationError& e) {
    EXPECT_NE(std::string(e.what()).find("rank-deficient"), std::string::npos);
  }
  const DesignMatrix tiny = random_design(rng, 3, 3);
  const std::vector<Response> short_y{{"y", Eigen::VectorXd::Ones(3)}};
  EXPECT_THROW(ols(short_y, tiny), ValidationError);
  const std::vector<Response> wrong{{"y", Eigen::VectorXd::Ones(5)}};
  EXPECT_THROW(ols(wrong, random_design(rng, 20, 2)), ValidationError);
}

TEST(Design, ListwiseDeletionAndCategoricals) {
  CompositionSet s = load_winery();
  ExtraColumn::Numeric age;
  for (std::size_t i = 0; i < s.row_count(); ++i) age.emplace_back(i == 5 ? std::nullopt : s.extra("Age").number(i));
  s = s.with_extra({"Age", age});
  const std::vector<std::string> preds{"Age", "Brand"};
  const DesignMatrix d = build_design(s, preds);
  EXPECT_EQ(d.dropped_rows, 1u);
  EXPECT_EQ(d.x.rows(), 108);
  EXPECT_EQ(d.columns.front(), "(Intercept)");

  const CompositionSet cat = s.with_extra({"Kind", ExtraColumn::Categorical(109, std::string("a"))});
  const std::vector<std::string> bad{"Kind"};
  EXPECT_THROW(build_design(cat, bad), ValidationError);
  const std::vector<std::string> missing{"Nope"};
  EXPECT_THROW(build_design(s, missing), ValidationError);
}

TEST(Winery, HypothesisTableFlagsBrandTurnoverOnly) {
  const CompositionSet s = load_winery();
  const std::vector<std::string> preds{"Age", "Brand"};
  const DesignMatrix d = build_design(s, preds);
  const auto specs = dupont_logratios();
  const auto fits = ols(responses_from(pairwise_logratios(s, specs), d), d);
  const auto rows = hypothesis_table(fits);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.significant, r.response == "turnover" && r.predictor == "Brand") << r.response << " " << r.predictor;
  }
  EXPECT_NEAR(fits[0].coefficients(2), -0.4068, 5e-4);
}

// Under the null the p-values are uniform: about 5% fall below 0.05.
TEST(Ols, NullCalibration) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  int rejected = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const DesignMatrix d = random_design(rng, 30, 2);
    Eigen::VectorXd y(30);
    for (Eigen::Index i = 0; i < 30; ++i) y(i) = g(rng);
    const std::vector<Response> rs{{"y", y}};
    if (ols(rs, d).front().p_values(1) < 0.05) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / reps;
  EXPECT_GT(rate, 0.035);
  EXPECT_LT(rate, 0.065);
}

}  // namespace
}  // namespace coda
