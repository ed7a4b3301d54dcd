#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "coda/composition.hpp"
#include "coda/dataset.hpp"
#include "coda/errors.hpp"
#include "support.hpp"

namespace coda {
namespace {

CompositionSet tiny() {
  Eigen::MatrixXd v(3, 3);
  v << 1, 2, 4,
       2, 2, 2,
       8, 4, 1;
  return CompositionSet(testing::part_labels(3), {"a", "b", "c"}, v,
                        {{"Brand", ExtraColumn::Numeric{1.0, 0.0, 1.0}},
                         {"Region", ExtraColumn::Categorical{"north", std::nullopt, "south"}}});
}

TEST(Composition, RejectsNonPositiveAndShortInput) {
  EXPECT_THROW(Composition({1.0}), ValidationError);
  EXPECT_THROW(Composition({1.0, 0.0}), ValidationError);
  EXPECT_THROW(Composition({1.0, -2.0}), ValidationError);
  EXPECT_THROW(Composition({1.0, std::numeric_limits<double>::infinity()}), ValidationError);
  EXPECT_NO_THROW(Composition({1e-300, 1e300}));
}

TEST(Composition, ClosureSumsToOneAndKeepsRatios) {
  const Composition c({3.0, 1.0, 6.0});
  const Composition k = closure(c);
  EXPECT_NEAR(k[0] + k[1] + k[2], 1.0, kClosureTolerance);
  EXPECT_DOUBLE_EQ(k[0] / k[1], 3.0);
  EXPECT_DOUBLE_EQ(k[2], 0.6);
}

TEST(Composition, PerFirmGeometricMean) {
  EXPECT_NEAR(per_firm_geometric_mean(Composition({1.0, 10.0, 100.0})), 10.0, 1e-12);
  // huge values do not overflow
  EXPECT_NEAR(per_firm_geometric_mean(Composition({1e300, 1e300})), 1e300, 1e288);
}

TEST(CompositionSet, StructuralChecks) {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2, 3, 4;
  EXPECT_THROW(CompositionSet(testing::part_labels(2), {"a", "a"}, v), ValidationError);
  EXPECT_THROW(CompositionSet({{"x", ""}, {"x", ""}}, {"a", "b"}, v), ValidationError);
  EXPECT_THROW(CompositionSet(testing::part_labels(3), {"a", "b"}, v), ValidationError);
  EXPECT_THROW(CompositionSet(testing::part_labels(2), {"a", "b"}, v, {{"e", ExtraColumn::Numeric{1.0}}}),
               ValidationError);
  v(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(CompositionSet(testing::part_labels(2), {"a", "b"}, v), ValidationError);
}

TEST(CompositionSet, ZerosAreStoredButReported) {
  Eigen::MatrixXd v(2, 2);
  v << 1, 0, -3, 4;
  const CompositionSet s(testing::part_labels(2), {"a", "b"}, v);
  const auto viol = validate(s);
  ASSERT_EQ(viol.size(), 2u);
  EXPECT_EQ(viol[0].firm, "a");
  EXPECT_EQ(viol[0].reason, "zero");
  EXPECT_EQ(viol[1].reason, "negative");
  EXPECT_THROW(require_valid(s), ValidationError);
  EXPECT_THROW(s.row(0), ValidationError);
}

TEST(CompositionSet, ExtrasAccess) {
  const CompositionSet s = tiny();
  EXPECT_TRUE(s.extra("Brand").is_numeric());
  EXPECT_EQ(s.extra("Brand").label(0), "1");
  EXPECT_TRUE(s.extra("Region").is_missing(1));
  EXPECT_EQ(s.extra("Region").label(1), std::nullopt);
  EXPECT_THROW(s.extra("Region").number(0), ValidationError);
  EXPECT_THROW(s.extra("Nope"), ValidationError);
  EXPECT_EQ(s.part_index("x3"), 2u);
  EXPECT_THROW(s.part_index("x9"), ValidationError);
}

TEST(CompositionSet, SubsetKeepsExtrasAligned) {
  const std::vector<std::size_t> rows{2, 0};
  const CompositionSet s = tiny().subset(rows);
  EXPECT_EQ(s.firm_ids(), (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(s.values()(0, 0), 8.0);
  EXPECT_EQ(s.extra("Region").label(0), "south");
}

TEST(Centre, GeometricMeansPerPart) {
  const CompositionSet s = tiny();
  const auto g = geometric_mean_by_part(s);
  EXPECT_NEAR(g[0], std::cbrt(16.0), 1e-12);
  EXPECT_NEAR(g[1], std::cbrt(16.0), 1e-12);
  EXPECT_NEAR(g[2], 2.0, 1e-12);
  const CompositionalCentre c = compositional_centre(s);
  const double total = g[0] + g[1] + g[2];
  EXPECT_NEAR(c.at("x1"), g[0] / total, 1e-15);
  EXPECT_NEAR(c[0] + c[1] + c[2], 1.0, kClosureTolerance);
}

TEST(Centre, GroupFilter) {
  const CompositionSet s = tiny();
  const CompositionalCentre c = compositional_centre(s, rows_where(s, "Brand", "1"));
  const double g1 = std::sqrt(8.0), g2 = std::sqrt(8.0), g3 = 2.0;
  EXPECT_NEAR(c[0], g1 / (g1 + g2 + g3), 1e-15);
  EXPECT_THROW(compositional_centre(s, [](std::size_t) { return false; }), ComputationError);
  EXPECT_EQ(selected_rows(s, rows_where(s, "Region", "north")), (std::vector<std::size_t>{0}));
}

TEST(Centre, SingleFirmIsItsOwnClosure) {
  const CompositionSet s = tiny();
  const CompositionalCentre c = compositional_centre(s, [](std::size_t i) { return i == 0; });
  EXPECT_NEAR(c[0], 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(c[2], 4.0 / 7.0, 1e-15);
}

TEST(Centre, ValidatesClosure) {
  EXPECT_THROW(CompositionalCentre(testing::part_labels(2), {0.5, 0.6}), ValidationError);
  EXPECT_THROW(CompositionalCentre(testing::part_labels(2), {0.0, 1.0}), ValidationError);
  EXPECT_NO_THROW(CompositionalCentre(testing::part_labels(2), {0.25, 0.75}));
}

TEST(Centre, ScaleInvariantPerFirm) {
  std::mt19937_64 rng(7);
  const CompositionSet s = testing::random_set(rng, 30, 5);
  Eigen::MatrixXd scaled = s.values();
  std::uniform_real_distribution<double> u(0.001, 1000.0);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= u(rng);
  const auto a = compositional_centre(s);
  const auto b = compositional_centre(s.with_values(scaled));
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
}

TEST(Centre, WineryOverall) {
  const CompositionSet s = load_winery();
  const auto c = compositional_centre(s);
  EXPECT_NEAR(c.at("x1"), 0.2354, 5e-5);
  EXPECT_NEAR(c.at("x2"), 0.2149, 5e-5);
  EXPECT_NEAR(c.at("x3"), 0.1590, 5e-5);
  EXPECT_NEAR(c.at("x4"), 0.3907, 5e-5);
}

}  // namespace
}  // namespace coda
