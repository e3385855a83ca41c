#include <benchmark/benchmark.h>

#include "finsler/distributions.hpp"
#include "finsler/presets.hpp"

namespace {

finsler::FinslerSpace preset_space(const char* name) {
  const finsler::Preset p = finsler::find_preset(name);
  return finsler::FinslerSpace(finsler::parse(p.source, p.dim));
}

void BM_JetMultiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::vector<finsler::Jet1> vars;
  for (int i = 0; i < 6; ++i) vars.push_back(finsler::Jet1::variable(6, order, i, 0.5 + i));
  finsler::Jet1 acc = vars[0];
  for (auto _ : state) {
    for (int i = 1; i < 6; ++i) acc = acc * vars[i] / vars[i];
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_JetMultiply)->DenseRange(1, 4);

void BM_PointGeometry(benchmark::State& state, const char* preset) {
  const finsler::FinslerSpace space = preset_space(preset);
  const finsler::TangentPoint z = finsler::find_preset(preset).default_point;
  for (auto _ : state) benchmark::DoNotOptimize(space.compute(z));
}
BENCHMARK_CAPTURE(BM_PointGeometry, counterexample, "paper-counterexample")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PointGeometry, riemann, "riemann-constant-curvature")->Unit(benchmark::kMillisecond);

void BM_Distributions(benchmark::State& state) {
  const finsler::FinslerSpace space = preset_space("paper-counterexample");
  const finsler::PointGeometry geo = space.compute(finsler::find_preset("paper-counterexample").default_point);
  for (auto _ : state) {
    benchmark::DoNotOptimize(finsler::coincide(geo));
    benchmark::DoNotOptimize(finsler::isotropy_check(geo));
  }
}
BENCHMARK(BM_Distributions);

}  // namespace

BENCHMARK_MAIN();
