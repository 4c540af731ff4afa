// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// Microbenchmarks for the hot loops: one optimizer step, one Euler-Maruyama
// interval, and the symmetric eigensolver behind psd_sqrt.

#include "samsde/core_math.hpp"
#include "samsde/models.hpp"
#include "samsde/optim.hpp"
#include "samsde/oracle.hpp"
#include "samsde/rng.hpp"
#include "samsde/sde.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace samsde;

SymMatrix hessian(Index d) {
  RngStream rng(17, 0);
  return random_spd_hessian(d, rng);
}

void BM_OptimizerStep(benchmark::State& state, Variant v) {
  const auto d = static_cast<Index>(state.range(0));
  const auto model = quadratic_model(hessian(d));
  const GradOracle oracle = GradOracle::additive_gaussian(0.01);
  OptimizerSpec spec;
  spec.variant = v;
  spec.eta = 1e-3;
  spec.rho = 0.03;
  RngStream rng(1, 0);
  StepWorkspace ws;
  ws.resize(d);
  Vector x = Vector::Constant(d, 0.1);
  for (auto _ : state) {
    step_inplace(spec, *model, oracle, x, rng, ws);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK_CAPTURE(BM_OptimizerStep, sgd, Variant::sgd)->Arg(10)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_OptimizerStep, sam, Variant::sam)->Arg(10)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_OptimizerStep, usam, Variant::usam)->Arg(10)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_OptimizerStep, dnsam, Variant::dnsam)->Arg(10)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_OptimizerStep, psam, Variant::psam)->Arg(10)->Arg(100)->Arg(400);

void BM_EulerStep(benchmark::State& state, SdeVariant v) {
  const auto d = static_cast<Index>(state.range(0));
  SdeConfig cfg;
  cfg.eta = 1e-3;
  cfg.rho = 0.03;
  cfg.mc_samples = 64;
  const SdeSystem sys(v, quadratic_model(hessian(d)), GradOracle::additive_gaussian(0.01), cfg);
  RngStream rng(2, 0);
  const Vector x0 = Vector::Constant(d, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(em_run(sys, x0, 1, rng, [](Index, const Vector&) { return true; }));
  }
}
BENCHMARK_CAPTURE(BM_EulerStep, sgd, SdeVariant::sgd)->Arg(10)->Arg(100);
BENCHMARK_CAPTURE(BM_EulerStep, usam_simplified, SdeVariant::usam_simplified)->Arg(10)->Arg(100);
BENCHMARK_CAPTURE(BM_EulerStep, dnsam, SdeVariant::dnsam)->Arg(10)->Arg(100);
BENCHMARK_CAPTURE(BM_EulerStep, sam_simplified, SdeVariant::sam_simplified)->Arg(10)->Arg(100);
BENCHMARK_CAPTURE(BM_EulerStep, sam_general, SdeVariant::sam_general)->Arg(10)->Arg(50);

void BM_Eigendecompose(benchmark::State& state) {
  const SymMatrix h = hessian(static_cast<Index>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym_eigendecompose(h).values.data());
  }
}
BENCHMARK(BM_Eigendecompose)->Arg(10)->Arg(100)->Arg(400);

void BM_PsdSqrt(benchmark::State& state) {
  const SymMatrix h = hessian(static_cast<Index>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(psd_sqrt(h).root.matrix().data());
  }
}
BENCHMARK(BM_PsdSqrt)->Arg(10)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
