// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "cbe/equilibrium.hpp"
#include "cbe/instances.hpp"
#include "cbe/lp_models.hpp"
#include "cbe/oracles.hpp"

namespace cbe {
namespace {

void BM_ConfigLp(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Market market = gen_random(RandomClass::kExplicitMonotone, m, 3, 42);
  for (auto _ : state) benchmark::DoNotOptimize(config_lp(market).fractional);
}
BENCHMARK(BM_ConfigLp)->DenseRange(2, 5);

void BM_Cap2Lp(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Market market = gen_random(RandomClass::kSuperadditive, m, 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(cap2_lp(market).fractional);
}
BENCHMARK(BM_Cap2Lp)->DenseRange(2, 4);

PricedBundling singleton_prices(int m) {
  PricedBundling pb{Bundling::singletons(m), {}};
  for (int j = 0; j < m; ++j) pb.prices.push_back(rat(j + 1, 3));
  return pb;
}

void BM_DemandBrute(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Market market = gen_random(RandomClass::kAdditive, m, 1, 3);
  PricedBundling pb = singleton_prices(m);
  for (auto _ : state) benchmark::DoNotOptimize(demand_query(market.valuation(0), pb).payoff);
}
BENCHMARK(BM_DemandBrute)->DenseRange(4, 10, 3);

void BM_DemandFast(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Market market = gen_random(RandomClass::kAdditive, m, 1, 3);
  PricedBundling pb = singleton_prices(m);
  for (auto _ : state) benchmark::DoNotOptimize(demand_fast(market.valuation(0), pb).payoff);
}
BENCHMARK(BM_DemandFast)->DenseRange(4, 10, 3);

void BM_CbeSearch(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Market market = gen_random(RandomClass::kExplicitMonotone, m, 3, 11);
  SearchOptions options;
  options.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cbe_search(market, options).best_welfare);
}
BENCHMARK(BM_CbeSearch)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cbe

BENCHMARK_MAIN();
