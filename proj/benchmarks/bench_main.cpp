#include <benchmark/benchmark.h>

#include <complex>

#include "carleman/extension.hpp"
#include "carleman/growth.hpp"
#include "carleman/moments.hpp"

using namespace carleman;

static void BM_SequencePrefix(benchmark::State& state) {
  for (auto _ : state) {
    auto s = SequenceModel::alphabeta(1.0, 2.0);
    benchmark::DoNotOptimize(s.prefix(std::size_t(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SequencePrefix)->Arg(10'000)->Arg(100'000);

static void BM_BigM(benchmark::State& state) {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  (void)g.bigM(1e4);
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.bigM(t));
    t = t < 1e4 ? t * 1.01 : 1.0;
  }
}
BENCHMARK(BM_BigM);

static void BM_Omega(benchmark::State& state) {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(omega(g, std::size_t(state.range(0))));
}
BENCHMARK(BM_Omega)->Arg(10'000);

static void BM_Moment(benchmark::State& state) {
  Kernel k(gevrey_weight(2.0), KernelVariant::classical);
  for (auto _ : state) benchmark::DoNotOptimize(moment(k, double(state.range(0))));
}
BENCHMARK(BM_Moment)->Arg(5)->Arg(40);

static void BM_ExtensionEval(benchmark::State& state) {
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  const auto seq = SequenceModel::gevrey(1.0);
  Extension f(geometric_sequence(seq, 0.5, 12), k, moment_table(k, 40));
  for (auto _ : state) benchmark::DoNotOptimize(f.eval({0.1, 0.3}));
}
BENCHMARK(BM_ExtensionEval);

static void BM_BorelRecover(benchmark::State& state) {
  const auto seq = SequenceModel::gevrey(1.0);
  auto f = [](PolarPoint z) { return std::exp(-1.0L / std::polar((long double)z.r, (long double)z.theta)); };
  for (auto _ : state) benchmark::DoNotOptimize(borel_recover(f, seq, 8));
}
BENCHMARK(BM_BorelRecover)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
