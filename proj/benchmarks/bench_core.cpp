#include <benchmark/benchmark.h>

#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/dilation.hpp"
#include "cocycle_lab/matrix_semigroup.hpp"
#include "cocycle_lab/poincare.hpp"

using namespace cocycle_lab;

namespace {

AlgebraElement sample(const GroupPtr& g) {
  rng::Stream s(1, rng::Tag::battery, 0);
  return AlgebraElement::random(g, s);
}

// state.range(0): heisenberg n
void BM_GammaKernel(benchmark::State& state) {
  const Semigroup sg(builtins::heisenberg_wordlength(static_cast<std::size_t>(state.range(0))));
  const auto f = sample(sg.group_ptr());
  for (auto _ : state) benchmark::DoNotOptimize(gamma2(sg, f, f));
}
BENCHMARK(BM_GammaKernel)->Arg(2)->Arg(3)->Arg(4);

void BM_GammaDefinitional(benchmark::State& state) {
  const Semigroup sg(builtins::heisenberg_wordlength(static_cast<std::size_t>(state.range(0))));
  const auto f = sample(sg.group_ptr());
  for (auto _ : state) benchmark::DoNotOptimize(gamma2(sg, f, f, GammaPath::definitional));
}
BENCHMARK(BM_GammaDefinitional)->Arg(2)->Arg(3)->Arg(4);

void BM_AlphaBisection(benchmark::State& state) {
  const auto k = gromov_form(builtins::wordlength(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(best_alpha_bisection(k));
}
BENCHMARK(BM_AlphaBisection)->Arg(16)->Arg(64)->Arg(128);

void BM_AlphaPencil(benchmark::State& state) {
  const auto k = gromov_form(builtins::wordlength(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(best_alpha_pencil(k));
}
BENCHMARK(BM_AlphaPencil)->Arg(16)->Arg(64)->Arg(128);

void BM_LpNorm(benchmark::State& state) {
  const auto psi = builtins::walsh(2, static_cast<std::size_t>(state.range(0)));
  const auto f = sample(psi.group_ptr());
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, 6.0));
}
BENCHMARK(BM_LpNorm)->Arg(3)->Arg(5)->Arg(7);

void BM_MatrixGamma2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto A = heisenberg_multiplier(n, MultiplierMode::delta);
  rng::Stream s(2, rng::Tag::battery, 0);
  const auto x = random_matrix(n, s);
  for (auto _ : state) benchmark::DoNotOptimize(superop_gamma2(A, x, x));
}
BENCHMARK(BM_MatrixGamma2)->Arg(2)->Arg(4)->Arg(8);

void BM_MartingaleTransform(benchmark::State& state) {
  const Semigroup sg(builtins::walsh(2, 2));
  const DilationModel m(sg);
  const auto s = sample_scenario(m.cocycle(), 32, 1.0 / 16, static_cast<std::size_t>(state.range(0)), 3);
  const auto x = sample(sg.group_ptr());
  for (auto _ : state) benchmark::DoNotOptimize(martingale_transform(m, x, s, false));
}
BENCHMARK(BM_MartingaleTransform)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
