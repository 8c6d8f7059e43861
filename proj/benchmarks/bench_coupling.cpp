#include "trop/coupling.hpp"
#include "trop/tropical.hpp"

#include <benchmark/benchmark.h>

using namespace trop;

namespace {

void BM_MecExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  ProbSpace p = ProbSpace::uniform(n);
  ProbSpace q = ProbSpace::uniform(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_entropy_coupling_exact(p, q, n * m));
  }
}
BENCHMARK(BM_MecExact)->Args({3, 4})->Args({4, 5})->Args({4, 6})->Args({5, 6})
    ->Unit(benchmark::kMillisecond);

void BM_GreedyGrouped(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  ProbSpace skew({{"0", Rat(1, 4)}, {"1", Rat(3, 4)}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(aep_point(skew, n));
  }
}
BENCHMARK(BM_GreedyGrouped)->Arg(32)->Arg(64)->Arg(128)
    ->Unit(benchmark::kMillisecond);

void BM_IkdExactFan(benchmark::State& state) {
  IndexingCategory shape = IndexingCategory::validate(
      {"O1", "O12", "O2"}, {{"O12", "O1"}, {"O12", "O2"}});
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  maps[{1, 0}] = {0, 0, 0, 1, 1, 1};
  maps[{1, 2}] = {0, 0, 1, 1, 2, 2};
  Diagram x = Diagram::build_indexed(
      shape,
      {ProbSpace::uniform(2), ProbSpace::uniform(6), ProbSpace::uniform(3)},
      maps);
  Diagram y = tensor(x, x);
  // 6 x 36 is past the cap, so exact runs on the small pair only.
  for (auto _ : state) {
    benchmark::DoNotOptimize(ikd(x, x, CouplingMode::exact));
  }
}
BENCHMARK(BM_IkdExactFan)->Unit(benchmark::kMillisecond);

void BM_TensorPowerEntropy(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  QuasiLinearSequence seq = linear_sequence(constant_diagram(
      IndexingCategory::chain(1), ProbSpace::uniform(2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_vector(seq.at(n)).l1());
  }
}
BENCHMARK(BM_TensorPowerEntropy)->Arg(8)->Arg(12)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
