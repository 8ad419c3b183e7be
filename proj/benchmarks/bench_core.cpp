#include <benchmark/benchmark.h>

#include "rproj/dataset.hpp"
#include "rproj/geometry.hpp"
#include "rproj/pca.hpp"
#include "rproj/projection.hpp"
#include "rproj/sparse.hpp"

namespace {

using namespace rproj;

void BM_GenerateDense(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto r = ProjectionMatrix::generate(1024, m, Recipe::dense_gaussian, seed++);
    benchmark::DoNotOptimize(r.entries().data());
  }
  state.SetItemsProcessed(state.iterations() * m * 1024);
}
BENCHMARK(BM_GenerateDense)->Arg(32)->Arg(128)->Arg(512);

void BM_GenerateSparse(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto r = ProjectionMatrix::generate(1024, m, Recipe::sparse_achlioptas, seed++);
    benchmark::DoNotOptimize(r.entries().data());
  }
  state.SetItemsProcessed(state.iterations() * m * 1024);
}
BENCHMARK(BM_GenerateSparse)->Arg(32)->Arg(128)->Arg(512);

void BM_ProjectDataset(benchmark::State& state) {
  const auto data = generate_union(1024, 8, std::vector<int>(8, 4), std::vector<int>(8, 64), 1);
  const auto r = ProjectionMatrix::generate(1024, static_cast<int>(state.range(0)),
                                            Recipe::dense_gaussian, 2);
  for (auto _ : state) {
    auto projected = project_dataset(r, data);
    benchmark::DoNotOptimize(projected.vectors().data());
  }
}
BENCHMARK(BM_ProjectDataset)->Arg(64)->Arg(256);

void BM_PcaFit(benchmark::State& state) {
  const auto data = generate_union(512, 8, std::vector<int>(8, 4), std::vector<int>(8, 64), 3);
  for (auto _ : state) {
    auto model = pca_fit(data, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(model.components.data());
  }
}
BENCHMARK(BM_PcaFit)->Arg(32)->Arg(128);

void BM_SubspaceMargin(benchmark::State& state) {
  const auto data = generate_union(256, 2, {8, 8}, {8, 8}, 4);
  const auto& a = data.bases()[0];
  const auto& b = data.bases()[1];
  for (auto _ : state) {
    auto p = subspace_margin(a, b);
    benchmark::DoNotOptimize(p.margin);
  }
}
BENCHMARK(BM_SubspaceMargin);

void BM_BasisPursuit(benchmark::State& state) {
  const auto data = generate_union(100, 4, std::vector<int>(4, 3),
                                   std::vector<int>(4, 12), 5);
  const Dictionary dict(data.vectors().transpose(), data.labels());
  const Eigen::VectorXd y = data.sample(0) * 0.75 + data.sample(1) * 0.25;
  for (auto _ : state) {
    auto code = basis_pursuit(dict, y);
    benchmark::DoNotOptimize(code.coefficients.data());
  }
}
BENCHMARK(BM_BasisPursuit);

}  // namespace

BENCHMARK_MAIN();
