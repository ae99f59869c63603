// Serial reference against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vfbm/kernels.hpp"

namespace ks = vfbm::kernels::serial;
namespace kp = vfbm::kernels::parallel;

namespace {

std::vector<double> walk(size_t count) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  std::vector<double> v(count);
  double acc = 0.0;
  for (auto& x : v) x = acc += 0.05 * z(rng);
  return v;
}

template <auto Fn>
void increment_profile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = walk(n + 1);
  std::vector<double> out(n + 1);
  for (auto _ : state) {
    Fn(f, 1, 1.0 / n, 1.3, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(n);
}

template <auto Fn>
void weyl_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = walk(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, 1.0 / n, 0.3));
}

template <auto Fn>
void holder_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = walk(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, 1, 1.0 / n, 0.7));
}

template <auto Fn>
void rs_sums(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const size_t entries = static_cast<size_t>(n + 1) * (n + 2) / 2;
  const auto kernel = walk(entries);
  const auto dg = walk(n);
  std::vector<double> out(n + 1);
  for (auto _ : state) {
    Fn(kernel, n + 1, 1, 1, dg, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

#define PAIR(name)                                                                               \
  BENCHMARK_TEMPLATE(name, ks::name)->Name("serial/" #name)->RangeMultiplier(2)->Range(256, 2048); \
  BENCHMARK_TEMPLATE(name, kp::name)->Name("parallel/" #name)->RangeMultiplier(2)->Range(256, 2048)

PAIR(increment_profile);
PAIR(weyl_sweep);
PAIR(holder_sweep);
PAIR(rs_sums);

BENCHMARK_MAIN();
