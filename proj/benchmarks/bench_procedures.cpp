#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "slabtest/procedures.hpp"
#include "slabtest/weight_mmle.hpp"

namespace {

slabtest::ObservationBatch sparse_batch(std::size_t n) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = z(gen) + (i < n / 1000 ? 5.0 : 0.0);
  return slabtest::ObservationBatch(std::move(x));
}

void BM_LValues(benchmark::State& state) {
  const auto prior = slabtest::make_prior(state.range(1) ? "laplace:0.5" : "quasi-cauchy");
  const auto batch = sparse_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::l_values(*prior, batch, 0.01));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LValues)->Args({10000, 0})->Args({10000, 1})->Args({1000000, 0});

void BM_EstimateWeight(benchmark::State& state) {
  const slabtest::QuasiCauchyPrior qc;
  const auto batch = sparse_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::estimate_weight(qc, batch));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateWeight)->Arg(10000)->Arg(1000000);

void BM_SC(benchmark::State& state) {
  const slabtest::QuasiCauchyPrior qc;
  const auto batch = sparse_batch(static_cast<std::size_t>(state.range(0)));
  const slabtest::TestingContext ctx(qc, batch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::sc_procedure(ctx, 0.2));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SC)->Arg(10000)->Arg(1000000);

void BM_EBayesQ(benchmark::State& state) {
  const slabtest::QuasiCauchyPrior qc;
  const auto batch = sparse_batch(10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::ebayes_q(qc, batch, 0.1));
  }
}
BENCHMARK(BM_EBayesQ);

}  // namespace
