#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <anderson/anderson.hpp>

using namespace anderson;

namespace {

DenseMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> normal;
  DenseMatrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(g);
  return M;
}

AccelConfig accel(std::size_t m, std::size_t iters) {
  AccelConfig c;
  c.window_m = m;
  c.max_iters = iters;
  c.stop_tol = 1e-300;
  return c;
}

void BM_MinNormLstsq(benchmark::State& state) {
  const auto cols = static_cast<Index>(state.range(0));
  const DenseMatrix R = random_matrix(200, cols, 1);
  const Vector rhs = random_matrix(200, 1, 2).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(min_norm_lstsq(R, rhs).coeffs.data());
}
BENCHMARK(BM_MinNormLstsq)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_AaStep(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = problem_linear_200(-0.3, 0.3, -0.3);
  const auto trace = aa_run(p, Vector::Constant(200, 0.1), accel(m, m));
  std::vector<HistoryEntry> history;
  for (const Vector& x : trace.iterates) history.push_back(make_history_entry(p, x));
  for (auto _ : state) benchmark::DoNotOptimize(aa_step(history).first.data());
}
BENCHMARK(BM_AaStep)->Arg(1)->Arg(4)->Arg(16);

void BM_AaRunLinear200(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = problem_linear_200(-0.9, 0.7, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(aa_run(p, Vector::Constant(200, 0.1), accel(m, 100)).status);
}
BENCHMARK(BM_AaRunLinear200)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PsiApply(benchmark::State& state) {
  const auto m = static_cast<Index>(state.range(0));
  const auto p = problem_linear_200(-0.3, 0.3, -0.3);
  const AugmentedState z(random_matrix(200 * (m + 1), 1, 3).col(0), 200);
  for (auto _ : state) benchmark::DoNotOptimize(psi_apply(p, z).stacked.data());
}
BENCHMARK(BM_PsiApply)->Arg(1)->Arg(4);

void BM_Gmres(benchmark::State& state) {
  const auto p = problem_linear_200(-0.3, 0.3, -0.3);
  const Vector x0 = random_matrix(200, 1, 4).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(gmres_run(*p.affine, x0, accel(0, static_cast<std::size_t>(state.range(0)))).status);
}
BENCHMARK(BM_Gmres)->Arg(10)->Arg(40);

}  // namespace
BENCHMARK_MAIN();
