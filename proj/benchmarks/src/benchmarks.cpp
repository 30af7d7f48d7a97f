#include <complex>

#include <benchmark/benchmark.h>

#include "mandelq/closed_forms.hpp"
#include "mandelq/fock.hpp"
#include "mandelq/minimizer.hpp"
#include "mandelq/moments.hpp"

using namespace mandelq;

namespace {

SphereQuadratic sample_quadratic() {
  SphereQuadratic q;
  q.A << 1.3, -0.4, 0.2, -0.4, 0.7, 0.9, 0.2, 0.9, -1.1;
  q.b = Eigen::Vector3d(0.3, -1.2, 0.5);
  q.c = 0.7;
  q.scale = 0.125;
  return q;
}

void bm_secular_minimize(benchmark::State& state) {
  const SphereQuadratic quadratic = sample_quadratic();
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_sphere_quadratic(quadratic));
  }
}
BENCHMARK(bm_secular_minimize)->Unit(benchmark::kMicrosecond);

void bm_extract_moments_squeezed_coherent(benchmark::State& state) {
  const TwoModeState sc{SqueezedCoherent{Complex(1.2, 0.4), Complex(-0.3, 0.9), 0.6, 0.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_moments(sc));
  }
}
BENCHMARK(bm_extract_moments_squeezed_coherent)->Unit(benchmark::kMicrosecond);

void bm_extract_moments_superposition(benchmark::State& state) {
  const TwoModeState sup{CoherentSuperposition{0.7, -0.5, 1.1, 0.3, 0.8, 2.1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_moments(sup));
  }
}
BENCHMARK(bm_extract_moments_superposition)->Unit(benchmark::kMicrosecond);

void bm_closed_form_squeezed_coherent(benchmark::State& state) {
  const SphereDirection direction = sphere_direction(1.1, 2.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_squeezed_coherent(1.2, 0.4, 0.9, 2.0, 0.6, 0.2,
                                                 direction.theta, direction.phi));
  }
}
BENCHMARK(bm_closed_form_squeezed_coherent)->Unit(benchmark::kMicrosecond);

void bm_invariant_mandel_q_thermal(benchmark::State& state) {
  const TwoModeState thermal{SqueezedThermal{1.0, 0.4, 0.2}};
  InvariantOptions options;
  options.cross_check_closed_form = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(invariant_mandel_q(thermal, options));
  }
}
BENCHMARK(bm_invariant_mandel_q_thermal)->Unit(benchmark::kMicrosecond);

void bm_thermal_direct_oracle(benchmark::State& state) {
  const TwoModeState thermal{SqueezedThermal{1.5, 0.3, 0.3}};
  const SU2Element alpha = alpha_of_q(sphere_direction(0.9, 1.7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mandel_q_direct(thermal, alpha));
  }
}
BENCHMARK(bm_thermal_direct_oracle)->Unit(benchmark::kMillisecond);

void bm_single_mode_squeeze(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(single_mode_squeeze(0.5, n_max));
  }
}
BENCHMARK(bm_single_mode_squeeze)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void bm_minimize_grid_thermal_form(benchmark::State& state) {
  const auto objective = [](double theta, double phi) {
    return q_squeezed_thermal(1.0, 0.4, 0.2, sphere_direction(theta, phi));
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_grid(objective));
  }
}
BENCHMARK(bm_minimize_grid_thermal_form)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
