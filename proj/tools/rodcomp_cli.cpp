#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rodcomp/errors.hpp"
#include "rodcomp/experiments.hpp"
#include "rodcomp/oracle.hpp"
#include "rodcomp/rod_compliance.hpp"
#include "rodcomp/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config_path;
  std::vector<int> orders;
  int steps = 0;
  std::string out_dir;
  int jobs = 0;
  std::string format;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  auto* config = cmd->add_option("--config", flags->config_path, "experiment config file");
  if (config_required) config->required();
  cmd->add_option("--orders", flags->orders, "basis orders to sweep (overrides config)")
      ->delimiter(',');
  cmd->add_option("--steps", flags->steps, "integration steps (overrides config)");
  cmd->add_option("--out-dir", flags->out_dir, "output directory (overrides config)");
  cmd->add_option("--jobs", flags->jobs, "parallel worker count (overrides config)");
  cmd->add_option("--format", flags->format, "report format: csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

rodcomp::ExperimentConfig load_config(const CommonFlags& flags) {
  rodcomp::ExperimentConfig config = flags.config_path.empty()
                                         ? rodcomp::ExperimentConfig{}
                                         : rodcomp::parse_config_file(flags.config_path);
  if (!flags.orders.empty()) config.orders = flags.orders;
  if (flags.steps > 0) config.steps = flags.steps;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.jobs > 0) config.jobs = flags.jobs;
  if (!flags.format.empty()) config.format = flags.format;
  return config;
}

void print_summary(const rodcomp::StudyReport& report,
                   const std::vector<std::string>& paths) {
  std::printf("%s: %zu rows\n", report.study.c_str(), report.rows.size());
  std::printf("%6s %14s %14s %14s %14s %12s\n", "order", "mean e_p [mm]", "max e_p [mm]",
              "mean rot [deg]", "max rot [deg]", "speed [Hz]");
  for (const auto& agg : report.aggregates) {
    std::printf("%6d %14.6g %14.6g %14.6g %14.6g %12.1f\n", agg.order, agg.mean_e_p_mm,
                agg.max_e_p_mm, agg.mean_rot_err_deg, agg.max_rot_err_deg, agg.throughput_hz);
  }
  for (const auto& path : paths) std::printf("wrote %s\n", path.c_str());
}

int run_rod_demo() {
  using namespace rodcomp;
  const RodProperties rod = RodProperties::circular(0.2, 0.002, 60e9, 0.3);
  const ShapeBasis basis = ShapeBasis::uniform(2, rod.length);
  const Eigen::VectorXd straight = Eigen::VectorXd::Zero(basis.coeff_count());

  std::printf("rod: L = %.3f m, EI = %.6g N m^2, GJ = %.6g N m^2\n", rod.length,
              rod.stiffness(0), rod.stiffness(2));

  const ComplianceMatrix c0 = single_rod_compliance(basis, straight, rod, 10, Wrench());
  std::printf("\nstraight-rod task-space compliance (order 2, hybrid frame):\n");
  std::cout << c0.matrix << "\n";
  std::printf("\ncantilever constants: L^3/3EI = %.9g m/N, L/EI = %.9g 1/(N m), L/GJ = %.9g\n",
              std::pow(rod.length, 3) / (3.0 * rod.stiffness(0)), rod.length / rod.stiffness(0),
              rod.length / rod.stiffness(2));

  const Wrench tip_load(Eigen::Vector3d(0.05, 0, 0), Eigen::Vector3d(0, 0.5, 0));
  const RodBvpSolution gt = solve_rod_bvp(rod, tip_load);
  const Eigen::VectorXd fitted = fit_modal_coefficients(bvp_curvature_samples(gt, rod), basis);
  const ModalEquilibrium eq = solve_modal_equilibrium(basis, rod, tip_load, fitted);
  const ComplianceMatrix c1 = single_rod_compliance(basis, eq.coeffs, rod, 10, tip_load);
  std::printf("\nloaded rod (0.05 N m, 0.5 N lateral): tip at [%.6f %.6f %.6f] m\n",
              gt.tip().position.x(), gt.tip().position.y(), gt.tip().position.z());
  std::printf("compliance under load (order 2):\n");
  std::cout << c1.matrix << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic compliance matrices for Kirchhoff rods and tendon-actuated "
               "continuum segments"};
  app.set_version_flag("--version", rodcomp::kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* converge = app.add_subcommand("converge", "compliance-vs-oracle convergence study");
  add_common_flags(converge, &flags, true);
  CLI::App* ablate =
      app.add_subcommand("ablate", "convergence study without the Jacobian-derivative term");
  add_common_flags(ablate, &flags, true);
  CLI::App* segment = app.add_subcommand("segment", "tendon-segment validation scenario");
  add_common_flags(segment, &flags, true);
  CLI::App* demo = app.add_subcommand("rod-demo", "print compliance matrices for a demo rod");

  CLI11_PARSE(app, argc, argv);

  try {
    if (demo->parsed()) return run_rod_demo();
    const rodcomp::ExperimentConfig config = load_config(flags);
    rodcomp::StudyReport report;
    if (converge->parsed()) {
      report = rodcomp::run_convergence_study(config);
    } else if (ablate->parsed()) {
      report = rodcomp::run_ablation_study(config);
    } else if (segment->parsed()) {
      report = rodcomp::run_segment_scenario(config);
    }
    const auto paths = rodcomp::emit_report(report, config);
    print_summary(report, paths);
    return kExitOk;
  } catch (const rodcomp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rodcomp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rodcomp::ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
