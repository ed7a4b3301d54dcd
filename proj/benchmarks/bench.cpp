#include <benchmark/benchmark.h>

#include <random>

#include "coda/dataset.hpp"
#include "coda/multivariate.hpp"
#include "coda/regress.hpp"
#include "coda/transforms.hpp"

namespace {

coda::CompositionSet scaled_winery(std::size_t copies) {
  const coda::CompositionSet base = coda::load_winery();
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> jitter(0.0, 0.05);
  const auto n = static_cast<Eigen::Index>(base.row_count());
  Eigen::MatrixXd v(n * static_cast<Eigen::Index>(copies), base.values().cols());
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < copies; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(c) * n + i;
      for (Eigen::Index j = 0; j < v.cols(); ++j) v(r, j) = base.values()(i, j) * jitter(rng);
      ids.push_back(std::to_string(r));
    }
  }
  return coda::CompositionSet(base.parts(), ids, v);
}

void BM_Clr(benchmark::State& state) {
  const auto s = scaled_winery(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coda::clr(s));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.row_count()));
}
BENCHMARK(BM_Clr)->Arg(1)->Arg(100);

void BM_Biplot(benchmark::State& state) {
  const auto s = scaled_winery(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coda::biplot(s));
}
BENCHMARK(BM_Biplot)->Arg(1)->Arg(100);

void BM_KMeans(benchmark::State& state) {
  const auto s = coda::load_winery();
  coda::KMeansOptions o;
  o.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(coda::kmeans_clr(s, o));
}
BENCHMARK(BM_KMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Ols(benchmark::State& state) {
  const auto s = coda::load_winery();
  const std::vector<std::string> predictors{"Age", "Brand"};
  const auto design = coda::build_design(s, predictors);
  const std::vector<coda::LogRatioSpec> specs{{"turnover", "x1", "x4"}, {"margin", "x1", "x2"}, {"leverage", "x3", "x4"}};
  const auto responses = coda::responses_from(coda::pairwise_logratios(s, specs), design);
  for (auto _ : state) benchmark::DoNotOptimize(coda::ols(responses, design));
}
BENCHMARK(BM_Ols);

}  // namespace

BENCHMARK_MAIN();
