#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "rodcomp/modal_basis.hpp"
#include "rodcomp/oracle.hpp"
#include "rodcomp/report.hpp"
#include "rodcomp/se3.hpp"
#include "rodcomp/tendon_segment.hpp"

namespace rodcomp {

// Differencing stencil for the ground-truth tip increments. One-sided
// re-solves carry O(step^2) truncation (~0.2 mm mean on the standard rod),
// central O(step^3) (~0.03 mm); Richardson-extrapolated central differences
// at {step, step/2} cancel the cubic term as well, leaving the comparison
// dominated by the model error the study is meant to measure.
enum class IncrementScheme { kCentralRichardson, kCentral, kOneSided };

const char* to_string(IncrementScheme scheme);

// Parsed experiment configuration. All quantities are SI here; the
// config file carries explicit unit tags.
struct ExperimentConfig {
  // [rod]
  RodProperties rod{0.2, Eigen::Vector3d::Ones()};

  // [basis]
  std::vector<int> orders{0, 2, 4, 6};

  // [integration]
  int steps = 10;

  // [grid]
  std::vector<double> force_levels{-1.0, 0.0, 1.0};
  std::vector<double> moment_levels{-0.5, 0.0, 0.5};
  std::string grid_preset = "wrench729";  // force27 | wrench729 | grid2187

  // [increments]
  double force_step = 0.1;
  double moment_step = 0.05;
  IncrementScheme scheme = IncrementScheme::kCentralRichardson;

  // [segment]
  struct SegmentScenario {
    double length = 0.3006;
    double pitch_radius = 0.0652;
    double bending_stiffness = 3.20;
    double torsion_ratio = 1950.0;  // JG = ratio * EI (inert for the torsion-free basis)
    double line_stiffness = 1.23e5;
    int tendon_count = 2;
    int basis_order = 2;
    int quadrature_nodes = 32;
    std::vector<Eigen::VectorXd> pull_configurations;  // per-configuration pull-ins, m
    std::vector<double> load_forces;                   // N
    std::vector<std::string> load_directions;          // +x, -x, +y, -y, +xy, -xy
  } segment;

  // [output]
  std::string out_dir = "out";
  std::string format = "both";  // csv | json | both
  int jobs = 1;
  unsigned seed = 0;

  TendonTermMode tendon_mode = kDefaultTendonTermMode;

  std::string raw_text;  // config file contents, echoed into the JSON report
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// The wrench grid for the configured preset, in a fixed deterministic
/// order. wrench729 is the full 3-level grid over all six axes; force27
/// spans the force axes only; grid2187 crosses wrench729 with a
/// documented 3-level x-force scale dimension.
std::vector<Wrench> generate_wrench_grid(const ExperimentConfig& config);

// Equilibrium shapes for the grid; non-convergent corners stay empty and
// are reported, not fatal.
struct ShapeSet {
  std::vector<Wrench> wrenches;
  std::vector<std::optional<RodBvpSolution>> solutions;

  int solved_count() const;
};

ShapeSet generate_shape_set(const ExperimentConfig& config);

/// Convergence study: analytic compliance deflection predictions against
/// oracle re-solves over the shape set, per basis order.
StudyReport run_convergence_study(const ExperimentConfig& config);

/// Same protocol with the Jacobian-derivative term dropped.
StudyReport run_ablation_study(const ExperimentConfig& config);

/// Tendon-segment scenario: pull loads on pre-bent configurations,
/// task-space compliance predictions against segment equilibrium re-solves.
StudyReport run_segment_scenario(const ExperimentConfig& config);

/// Writes the report in the requested format(s) into config.out_dir.
/// Returns the written paths.
std::vector<std::string> emit_report(const StudyReport& report, const ExperimentConfig& config);

/// Builds the segment model described by config.segment.
SegmentModel build_segment_model(const ExperimentConfig::SegmentScenario& scenario);

/// Spearman rank correlation of (x, y) pairs; ties get average ranks.
double spearman_rank_correlation(const std::vector<std::pair<double, double>>& pairs);

}  // namespace rodcomp
