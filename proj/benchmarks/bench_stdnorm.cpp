#include <benchmark/benchmark.h>

#include <vector>

#include "slabtest/stdnorm.hpp"

namespace {

void BM_UpperTailInv(benchmark::State& state) {
  std::vector<double> p(1024);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (i + 0.5) / p.size();
  for (auto _ : state) {
    double sum = 0.0;
    for (double v : p) sum += slabtest::stdnorm::upper_tail_inv(v);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size()));
}
BENCHMARK(BM_UpperTailInv);

void BM_UpperTail(benchmark::State& state) {
  std::vector<double> x(1024);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -8.0 + 16.0 * i / x.size();
  for (auto _ : state) {
    double sum = 0.0;
    for (double v : x) sum += slabtest::stdnorm::upper_tail(v);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_UpperTail);

}  // namespace
