#include <benchmark/benchmark.h>

#include <random>

#include "rodcomp/rod_compliance.hpp"

namespace {

// speed-vs-order tradeoff of the full task-space compliance, and the cost
// of the Jacobian-derivative term it is dominated by
void BM_single_rod_compliance(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const rodcomp::RodProperties rod = rodcomp::RodProperties::circular(0.2, 0.002, 60e9, 0.3);
  const rodcomp::ShapeBasis basis = rodcomp::ShapeBasis::uniform(order, rod.length);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  Eigen::VectorXd c(basis.coeff_count());
  for (int i = 0; i < c.size(); ++i) c(i) = dist(rng);
  const rodcomp::Wrench load(Eigen::Vector3d(0.2, -0.1, 0.0), Eigen::Vector3d(0.5, 0.5, 0.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rodcomp::single_rod_compliance(basis, c, rod, 10, load));
  }
}
BENCHMARK(BM_single_rod_compliance)->Arg(0)->Arg(2)->Arg(4)->Arg(6);

void BM_compliance_without_jacobian_derivative(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const rodcomp::RodProperties rod = rodcomp::RodProperties::circular(0.2, 0.002, 60e9, 0.3);
  const rodcomp::ShapeBasis basis = rodcomp::ShapeBasis::uniform(order, rod.length);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  Eigen::VectorXd c(basis.coeff_count());
  for (int i = 0; i < c.size(); ++i) c(i) = dist(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rodcomp::single_rod_compliance_no_jacobian_derivative(basis, c, rod, 10));
  }
}
BENCHMARK(BM_compliance_without_jacobian_derivative)->Arg(0)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
