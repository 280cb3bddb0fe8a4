// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ccmavf/array_model.hpp"
#include "ccmavf/baselines.hpp"
#include "ccmavf/ccm_avf.hpp"
#include "ccmavf/harness.hpp"
#include "ccmavf/scenario.hpp"
#include "ccmavf/stats_estimators.hpp"

using namespace ccmavf;

namespace {

SourceSet busy_sources() {
  return SourceSet{{90.0, 30.0, 45.0, 60.0, 75.0, 105.0, 120.0, 135.0, 150.0, 160.0},
                   std::vector<double>(10, 1.0)};
}

std::vector<CVector> snapshots(int m, int n) {
  Rng rng(1);
  const ArrayGeometry g{m, 0.5};
  const auto src = busy_sources();
  std::vector<CVector> out;
  for (int i = 0; i < n; ++i) out.push_back(generate_snapshot(g, src, 1.0, rng).received);
  return out;
}

void BM_Accumulate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto xs = snapshots(m, 256);
  const CVector w = initialize_weights(steering_vector({m, 0.5}, 90.0));
  for (auto _ : state) {
    MomentEstimates est(m);
    HistoryBuffer hist;
    hist.reserve(xs.size());
    for (const auto& x : xs) accumulate(est, hist, x, w);
    benchmark::DoNotOptimize(est.r_tilde.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_Accumulate)->Arg(8)->Arg(40);

void BM_CcmAvfSnapshot(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto xs = snapshots(m, 500);
  const auto a0 = steering_vector({m, 0.5}, 90.0);
  for (auto _ : state) {
    CcmAvfBeamformer bf(a0, AvfConfig{}, xs.size());
    for (const auto& x : xs) bf.process(x);
    benchmark::DoNotOptimize(bf.weights().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_CcmAvfSnapshot)->Arg(8)->Arg(40);

void BM_CcmClosedForm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto xs = snapshots(m, 4 * m);
  CMatrix r = CMatrix::Zero(m, m);
  CVector p = CVector::Zero(m);
  for (const auto& x : xs) {
    r += x * x.adjoint();
    p += x;
  }
  const auto a0 = steering_vector({m, 0.5}, 90.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccm_closed_form({r, p}, a0).data());
  }
}
BENCHMARK(BM_CcmClosedForm)->Arg(8)->Arg(40);

void BM_CmvAvfWeights(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto xs = snapshots(m, 4 * m);
  CMatrix r = CMatrix::Zero(m, m);
  for (const auto& x : xs) r += x * x.adjoint();
  const auto a0 = steering_vector({m, 0.5}, 90.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmv_avf_weights(r, a0, 8).weights.data());
  }
}
BENCHMARK(BM_CmvAvfWeights)->Arg(8)->Arg(40);

void BM_ScenarioTrial(benchmark::State& state) {
  Scenario s = *builtin_scenario("fig1a");
  s.num_trials = 1;
  s.num_snapshots = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s, RunOptions{1, {}}).columns_db.data());
  }
}
BENCHMARK(BM_ScenarioTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
