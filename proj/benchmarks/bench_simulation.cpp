#include <benchmark/benchmark.h>

#include "slabtest/simulation.hpp"

namespace {

void BM_Generate(benchmark::State& state) {
  slabtest::SimulationCell cell;
  cell.n = static_cast<std::size_t>(state.range(0));
  cell.s = cell.n / 1000;
  cell.mu = 3.0;
  cell.scenario = slabtest::Scenario::uniform_random;
  const slabtest::QuasiCauchyPrior qc;
  std::size_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::generate(cell, qc, rep++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(10000)->Arg(1000000);

void BM_RunCell(benchmark::State& state) {
  slabtest::SimulationCell cell;
  cell.n = 10000;
  cell.s = 10;
  cell.mu = 5.0;
  cell.reps = 20;
  cell.procedures = {{slabtest::ProcedureId::ebayes_l, 0.2, std::nullopt},
                     {slabtest::ProcedureId::ebayes_q, 0.2, std::nullopt}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(slabtest::run_cell(cell));
  }
}
BENCHMARK(BM_RunCell)->Unit(benchmark::kMillisecond);

}  // namespace
