// OpenMP kernels against their serial reference versions.
//   selci_bench --benchmark_filter=Oga

#include "selci/dgp.hpp"
#include "selci/factor_model.hpp"
#include "selci/oga.hpp"
#include "selci/resample_engine.hpp"
#include "selci/resampler.hpp"

#include <benchmark/benchmark.h>

#include <map>

namespace {

using namespace selci;

const Dataset& lai_data(Index n, Index p) {
  static std::map<std::pair<Index, Index>, Dataset> cache;
  auto it = cache.find({n, p});
  if (it == cache.end()) {
    it = cache.emplace(std::make_pair(n, p), generate(DgpConfig{Setting::Lai, n, p, 3, 200}, make_beta(p))).first;
  }
  return it->second;
}

void BM_OgaParallel(benchmark::State& state) {
  const Dataset& ds = lai_data(state.range(0), state.range(1));
  const Index steps = max_oga_steps(ds.n(), ds.p());
  for (auto _ : state) benchmark::DoNotOptimize(oga(ds.X, ds.Y, steps));
}

void BM_OgaSerial(benchmark::State& state) {
  const Dataset& ds = lai_data(state.range(0), state.range(1));
  const Index steps = max_oga_steps(ds.n(), ds.p());
  for (auto _ : state) benchmark::DoNotOptimize(reference::oga(ds.X, ds.Y, steps));
}

struct EngineFixture {
  const Dataset& ds;
  Matrix F_hat;
  ResampleSet rs;
  StatisticConfig sc;
  Index j = 0;
  double theta = 0.0;

  EngineFixture(Index n, Index p, Index B) : ds(lai_data(n, p)) {
    const SelectionResult sel = oga_hdbic(ds.X, ds.Y);
    F_hat = estimate_factors(ds.X).F_hat;
    ResampleOptions opts;
    opts.B = B;
    opts.seed = 5;
    rs = generate_w(ds, sel.j_hat, F_hat, opts);
    j = sel.j_hat.front();
    theta = rs.beta_tilde(0);
  }
};

void BM_StatisticsEngine(benchmark::State& state) {
  EngineFixture f(state.range(0), state.range(1), 50);
  const ResampleEngine engine(f.ds.X, f.F_hat, f.rs, f.sc);
  for (auto _ : state) benchmark::DoNotOptimize(engine.statistics(f.j, f.theta));
}

void BM_StatisticsReference(benchmark::State& state) {
  EngineFixture f(state.range(0), state.range(1), 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::resample_statistics(f.ds.X, f.F_hat, f.rs, f.sc, f.j, f.theta));
  }
}

}  // namespace

BENCHMARK(BM_OgaParallel)->Args({200, 250})->Args({400, 500})->Args({800, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OgaSerial)->Args({200, 250})->Args({400, 500})->Args({800, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StatisticsEngine)->Args({200, 250})->Args({400, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StatisticsReference)->Args({200, 250})->Args({400, 500})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
