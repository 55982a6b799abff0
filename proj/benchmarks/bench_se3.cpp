#include <benchmark/benchmark.h>

#include <random>

#include "rodcomp/se3.hpp"

namespace {

std::vector<rodcomp::Twist> random_twists(int count, double angular_scale) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<rodcomp::Twist> twists;
  twists.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::Vector3d w(dist(rng), dist(rng), dist(rng));
    Eigen::Vector3d v(dist(rng), dist(rng), dist(rng));
    twists.emplace_back(w.normalized() * angular_scale * std::abs(dist(rng)), v);
  }
  return twists;
}

void BM_exp_se3(benchmark::State& state) {
  const auto twists = random_twists(256, 2.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::exp_se3(twists[i++ % twists.size()], 0.02));
  }
}
BENCHMARK(BM_exp_se3);

void BM_dexp_closed_form(benchmark::State& state) {
  const auto twists = random_twists(256, 2.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::dexp_se3(twists[i++ % twists.size()]));
  }
}
BENCHMARK(BM_dexp_closed_form);

void BM_dexp_series_branch(benchmark::State& state) {
  const auto twists = random_twists(256, 0.05);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::dexp_se3(twists[i++ % twists.size()]));
  }
}
BENCHMARK(BM_dexp_series_branch);

}  // namespace
