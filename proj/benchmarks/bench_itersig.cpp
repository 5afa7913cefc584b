#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "itersig/ergodic_lab.hpp"
#include "itersig/iterated_sums.hpp"
#include "itersig/processes.hpp"
#include "itersig/random.hpp"
#include "itersig/tensor.hpp"

using namespace itersig;

namespace {

std::vector<double> random_flat(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (double& x : out) x = 2.0 * uniform01(rng) - 1.0;
  return out;
}

void bm_push(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  const auto data = random_flat(4096 * static_cast<std::size_t>(d), 1);
  SignatureState sig(d, depth);
  std::size_t cursor = 0;
  for (auto _ : state) {
    sig.push({data.data() + cursor * static_cast<std::size_t>(d), static_cast<std::size_t>(d)});
    cursor = (cursor + 1) % 4096;
    benchmark::DoNotOptimize(sig.level(depth).values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void bm_push_compensated(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  const auto data = random_flat(4096 * static_cast<std::size_t>(d), 1);
  SignatureState sig(d, depth, true);
  std::size_t cursor = 0;
  for (auto _ : state) {
    sig.push({data.data() + cursor * static_cast<std::size_t>(d), static_cast<std::size_t>(d)});
    cursor = (cursor + 1) % 4096;
    benchmark::DoNotOptimize(sig.level(depth).values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void bm_push_segment(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  const auto data = random_flat(4096 * static_cast<std::size_t>(d), 2);
  SignatureState sig(d, depth);
  std::size_t cursor = 0;
  for (auto _ : state) {
    sig.push_segment({data.data() + cursor * static_cast<std::size_t>(d), static_cast<std::size_t>(d)},
                     1.0);
    cursor = (cursor + 1) % 4096;
    benchmark::DoNotOptimize(sig.level(depth).values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void bm_chen_concat(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  std::vector<double> v(static_cast<std::size_t>(d), 0.37);
  const auto a = tensor_exp(v, 1.0, depth);
  const auto b = tensor_exp(v, 2.0, depth);
  for (auto _ : state) {
    auto out = chen_concat(a, b);
    benchmark::DoNotOptimize(out.level(depth).values().data());
  }
}

void bm_coordinate_track(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SampleSeries series(1, random_flat(n, 3));
  const Word w(1, {1, 1});
  for (auto _ : state) {
    auto track = coordinate_track(series, w);
    benchmark::DoNotOptimize(track.values.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}

void bm_scan_max_prefix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SampleSeries series(1, random_flat(n, 4));
  const Word w(1, {1});
  const auto track = coordinate_track(series, w);
  for (auto _ : state) benchmark::DoNotOptimize(er_scan_max(track, n, 64));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}

void bm_scan_max_naive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SampleSeries series(1, random_flat(n, 4));
  const Word w(1, {1});
  for (auto _ : state) benchmark::DoNotOptimize(er_scan_max_naive(series, w, n, 64));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}

void bm_generate_markov(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto chain =
      ProcessModel::markov_functional({{{0.9, 0.1}, {0.5, 0.5}}, {{0.0}, {1.0}}});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto series = generate(chain, n, ++seed);
    benchmark::DoNotOptimize(series.data.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(bm_push)->Args({2, 3})->Args({3, 4})->Args({8, 5});
BENCHMARK(bm_push_compensated)->Args({3, 4});
BENCHMARK(bm_push_segment)->Args({2, 3})->Args({3, 4});
BENCHMARK(bm_chen_concat)->Args({3, 4})->Args({8, 5});
BENCHMARK(bm_coordinate_track)->Arg(1 << 16);
BENCHMARK(bm_scan_max_prefix)->Arg(1 << 16);
BENCHMARK(bm_scan_max_naive)->Arg(1 << 14);
BENCHMARK(bm_generate_markov)->Arg(1 << 16);

BENCHMARK_MAIN();
