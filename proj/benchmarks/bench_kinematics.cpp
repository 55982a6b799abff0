#include <benchmark/benchmark.h>

#include <random>

#include "rodcomp/rod_kinematics.hpp"

namespace {

Eigen::VectorXd bench_coeffs(const rodcomp::ShapeBasis& basis) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  Eigen::VectorXd c(basis.coeff_count());
  for (int i = 0; i < c.size(); ++i) c(i) = dist(rng);
  return c;
}

void BM_integrate_pose(benchmark::State& state) {
  const int steps = static_cast<int>(state.range(0));
  const rodcomp::ShapeBasis basis = rodcomp::ShapeBasis::uniform(4, 0.2);
  const Eigen::VectorXd c = bench_coeffs(basis);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::integrate_pose(basis, c, steps));
  }
}
BENCHMARK(BM_integrate_pose)->Arg(10)->Arg(40)->Arg(160);

void BM_body_jacobian(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const rodcomp::ShapeBasis basis = rodcomp::ShapeBasis::uniform(order, 0.2);
  const Eigen::VectorXd c = bench_coeffs(basis);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::body_jacobian(basis, c, 10, 0.2));
  }
}
BENCHMARK(BM_body_jacobian)->Arg(0)->Arg(4)->Arg(10);

}  // namespace
