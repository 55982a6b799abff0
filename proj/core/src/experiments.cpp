#include "rodcomp/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <thread>

#include "rodcomp/errors.hpp"
#include "rodcomp/rod_compliance.hpp"
#include "rodcomp/rod_kinematics.hpp"
#include "rodcomp/version.hpp"

namespace rodcomp {

namespace {

constexpr const char* kAxisNames[6] = {"mx", "my", "mz", "fx", "fy", "fz"};

void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::min(std::max(1, jobs), count > 0 ? count : 1);
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int j = 0; j < jobs; ++j) {
    workers.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) break;
        body(i);
      }
    });
  }
  for (auto& worker : workers) worker.join();
}

double geodesic_angle_deg(const Eigen::Vector3d& rot_gt, const Eigen::Vector3d& rot_model) {
  const Eigen::Matrix3d relative = exp_so3(rot_gt).transpose() * exp_so3(rot_model);
  return log_so3(relative).norm() * 180.0 / M_PI;
}

double elapsed_us(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start)
      .count();
}

Eigen::Vector3d parse_direction(const std::string& label) {
  const double diag = 1.0 / std::sqrt(2.0);
  if (label == "+x") return {1, 0, 0};
  if (label == "-x") return {-1, 0, 0};
  if (label == "+y") return {0, 1, 0};
  if (label == "-y") return {0, -1, 0};
  if (label == "+xy") return {diag, diag, 0};
  if (label == "-xy") return {-diag, -diag, 0};
  if (label == "+x-y") return {diag, -diag, 0};
  if (label == "-x+y") return {-diag, diag, 0};
  throw ConfigError("unknown load direction '" + label + "'");
}

// Ground-truth tip increment for one wrench axis, by re-solving the rod
// BVP warm-started from the base-shape reactions.
struct TipIncrement {
  Eigen::Vector3d dp;
  Eigen::Vector3d rot;
};

TipIncrement central_increment(const RodProperties& rod, const Wrench& base_wrench,
                               const RodBvpOptions& options, int axis, double step) {
  Vector6d w_plus = base_wrench.vec();
  w_plus(axis) += step;
  const RodBvpSolution plus = solve_rod_bvp(rod, Wrench::from_vec(w_plus), Pose(), options);
  Vector6d w_minus = base_wrench.vec();
  w_minus(axis) -= step;
  const RodBvpSolution minus = solve_rod_bvp(rod, Wrench::from_vec(w_minus), Pose(), options);
  return {0.5 * (plus.tip().position - minus.tip().position),
          0.5 * log_so3(plus.tip().rotation * minus.tip().rotation.transpose())};
}

TipIncrement oracle_increment(const RodProperties& rod, const Wrench& base_wrench,
                              const RodBvpSolution& base_solution, int axis, double step,
                              IncrementScheme scheme) {
  RodBvpOptions options;
  options.continuation = {1.0};
  options.initial_reactions = base_solution.base_reactions();

  if (scheme == IncrementScheme::kOneSided) {
    Vector6d w_plus = base_wrench.vec();
    w_plus(axis) += step;
    const RodBvpSolution plus = solve_rod_bvp(rod, Wrench::from_vec(w_plus), Pose(), options);
    return {plus.tip().position - base_solution.tip().position,
            log_so3(plus.tip().rotation * base_solution.tip().rotation.transpose())};
  }

  const TipIncrement at_step = central_increment(rod, base_wrench, options, axis, step);
  if (scheme == IncrementScheme::kCentral) return at_step;

  // Richardson: I = (8 I(step/2) - I(step)) / 3 cancels the cubic term of
  // the central stencil; what remains is O(step^5).
  const TipIncrement at_half = central_increment(rod, base_wrench, options, axis, 0.5 * step);
  return {(8.0 * at_half.dp - at_step.dp) / 3.0, (8.0 * at_half.rot - at_step.rot) / 3.0};
}

void add_common_metadata(StudyReport& report, const ExperimentConfig& config) {
  report.metadata["library_version"] = kVersion;
  report.metadata["integrator"] = "magnus4_gauss2";
  report.metadata["integration_steps"] = std::to_string(config.steps);
  report.metadata["increment_scheme"] = to_string(config.scheme);
  report.metadata["force_step_n"] = std::to_string(config.force_step);
  report.metadata["moment_step_nm"] = std::to_string(config.moment_step);
  report.metadata["tendon_term_mode"] = to_string(config.tendon_mode);
  report.metadata["rotation_error_metric"] = "geodesic angle between rotation increments";
  report.metadata["seed"] = std::to_string(config.seed);
  report.metadata["jobs"] = std::to_string(config.jobs);
}

StudyReport run_rod_study(const ExperimentConfig& config, bool ablation,
                          const std::string& study_name) {
  const ShapeSet shapes = generate_shape_set(config);
  const int shape_count = static_cast<int>(shapes.wrenches.size());
  const int order_count = static_cast<int>(config.orders.size());

  StudyReport report;
  report.study = study_name;
  report.config_echo = config.raw_text;
  add_common_metadata(report, config);
  report.metadata["grid_preset"] = config.grid_preset;
  report.metadata["shape_count"] = std::to_string(shape_count);
  report.metadata["shapes_solved"] = std::to_string(shapes.solved_count());
  report.metadata["jacobian_derivative_term"] = ablation ? "neglected" : "included";
  report.metadata["bvp_integration_steps"] = "200";
  std::string kernel_nodes;
  for (int order : config.orders) {
    const ShapeBasis basis = ShapeBasis::uniform(order, config.rod.length);
    if (!kernel_nodes.empty()) kernel_nodes += ",";
    kernel_nodes += "n" + std::to_string(order) + ":" +
                    std::to_string(energy_kernel_node_count(basis));
  }
  report.metadata["energy_kernel_quadrature_nodes"] = kernel_nodes;

  // Ground-truth increments are order independent; re-solve them once per
  // shape and reuse across the basis sweep.
  struct ShapeIncrements {
    std::array<bool, 6> ok{};
    std::array<TipIncrement, 6> increment;
  };
  std::vector<ShapeIncrements> oracle(shape_count);
  parallel_for(shape_count, config.jobs, [&](int shape_id) {
    if (!shapes.solutions[shape_id]) return;
    for (int axis = 0; axis < 6; ++axis) {
      const double step = axis < 3 ? config.moment_step : config.force_step;
      try {
        oracle[shape_id].increment[axis] =
            oracle_increment(config.rod, shapes.wrenches[shape_id], *shapes.solutions[shape_id],
                             axis, step, config.scheme);
        oracle[shape_id].ok[axis] = true;
      } catch (const std::exception&) {
        oracle[shape_id].ok[axis] = false;
      }
    }
  });

  report.rows.resize(static_cast<std::size_t>(order_count) * shape_count * 6);

  for (int order_idx = 0; order_idx < order_count; ++order_idx) {
    const int order = config.orders[order_idx];
    const ShapeBasis basis = ShapeBasis::uniform(order, config.rod.length);

    parallel_for(shape_count, config.jobs, [&](int shape_id) {
      StudyRow* rows = &report.rows[(static_cast<std::size_t>(order_idx) * shape_count +
                                     shape_id) * 6];
      const Wrench& wrench = shapes.wrenches[shape_id];
      for (int axis = 0; axis < 6; ++axis) {
        rows[axis].shape_id = shape_id;
        rows[axis].order = order;
        rows[axis].wrench_axis = kAxisNames[axis];
        rows[axis].increment = axis < 3 ? config.moment_step : config.force_step;
      }
      if (!shapes.solutions[shape_id]) {
        for (int axis = 0; axis < 6; ++axis) rows[axis].status = "oracle_failed";
        return;
      }
      const RodBvpSolution& base = *shapes.solutions[shape_id];

      Eigen::VectorXd coeffs;
      try {
        const Eigen::VectorXd c_init =
            fit_modal_coefficients(bvp_curvature_samples(base, config.rod), basis);
        ModalSolveOptions options;
        options.integration_steps = config.steps;
        options.continuation = {1.0};  // warm start from the fitted curvature
        coeffs = solve_modal_equilibrium(basis, config.rod, wrench, c_init, options).coeffs;
      } catch (const std::exception&) {
        try {
          ModalSolveOptions options;
          options.integration_steps = config.steps;
          coeffs = solve_modal_equilibrium(basis, config.rod, wrench,
                                           Eigen::VectorXd::Zero(basis.coeff_count()), options)
                       .coeffs;
        } catch (const std::exception&) {
          for (int axis = 0; axis < 6; ++axis) rows[axis].status = "model_failed";
          return;
        }
      }

      ComplianceMatrix compliance;
      double time_us = 0.0;
      try {
        const auto start = std::chrono::steady_clock::now();
        compliance = ablation
                         ? single_rod_compliance_no_jacobian_derivative(basis, coeffs, config.rod,
                                                                        config.steps)
                         : single_rod_compliance(basis, coeffs, config.rod, config.steps, wrench);
        time_us = elapsed_us(start);
      } catch (const std::exception&) {
        for (int axis = 0; axis < 6; ++axis) rows[axis].status = "model_failed";
        return;
      }

      for (int axis = 0; axis < 6; ++axis) {
        rows[axis].time_us = time_us;
        if (!oracle[shape_id].ok[axis]) {
          rows[axis].status = "oracle_failed";
          continue;
        }
        const TipIncrement& gt = oracle[shape_id].increment[axis];
        Vector6d dw = Vector6d::Zero();
        dw(axis) = rows[axis].increment;
        const Vector6d dx = compliance.matrix * dw;
        rows[axis].e_p_mm = (gt.dp - dx.tail<3>()).norm() * 1e3;
        rows[axis].rot_err_deg = geodesic_angle_deg(gt.rot, dx.head<3>());
      }
    });
  }

  report.finalize();
  return report;
}

}  // namespace

int ShapeSet::solved_count() const {
  int count = 0;
  for (const auto& solution : solutions) {
    if (solution) ++count;
  }
  return count;
}

std::vector<Wrench> generate_wrench_grid(const ExperimentConfig& config) {
  std::vector<double> force_scales{1.0};
  std::vector<double> moment_levels = config.moment_levels;
  if (config.grid_preset == "force27") {
    moment_levels = {0.0};
  } else if (config.grid_preset == "grid2187") {
    // The printed shape count implies a seventh 3-level dimension; an
    // x-force magnitude scale is the documented assumption here.
    force_scales = {0.5, 0.75, 1.0};
  } else if (config.grid_preset != "wrench729") {
    throw ConfigError("unknown grid preset '" + config.grid_preset + "'");
  }

  std::vector<Wrench> grid;
  for (double scale : force_scales) {
    for (double mx : moment_levels) {
      for (double my : moment_levels) {
        for (double mz : moment_levels) {
          for (double fx : config.force_levels) {
            for (double fy : config.force_levels) {
              for (double fz : config.force_levels) {
                grid.emplace_back(Eigen::Vector3d(mx, my, mz),
                                  Eigen::Vector3d(scale * fx, fy, fz));
              }
            }
          }
        }
      }
    }
  }
  return grid;
}

ShapeSet generate_shape_set(const ExperimentConfig& config) {
  ShapeSet set;
  set.wrenches = generate_wrench_grid(config);
  set.solutions.resize(set.wrenches.size());
  parallel_for(static_cast<int>(set.wrenches.size()), config.jobs, [&](int i) {
    try {
      set.solutions[i] = solve_rod_bvp(config.rod, set.wrenches[i]);
    } catch (const std::exception&) {
      set.solutions[i] = std::nullopt;
    }
  });
  return set;
}

StudyReport run_convergence_study(const ExperimentConfig& config) {
  return run_rod_study(config, false, "converge");
}

StudyReport run_ablation_study(const ExperimentConfig& config) {
  return run_rod_study(config, true, "ablate");
}

SegmentModel build_segment_model(const ExperimentConfig::SegmentScenario& scenario) {
  const double ei = scenario.bending_stiffness;
  RodProperties props(scenario.length,
                      Eigen::Vector3d(ei, ei, scenario.torsion_ratio * ei));
  ShapeBasis basis = ShapeBasis::bending_only(scenario.basis_order, scenario.length);
  TendonRouting routing = TendonRouting::constant_pitch(scenario.tendon_count,
                                                        scenario.pitch_radius, scenario.length);
  Eigen::VectorXd k_line =
      Eigen::VectorXd::Constant(scenario.tendon_count, scenario.line_stiffness);
  return SegmentModel(std::move(props), std::move(basis), std::move(routing), std::move(k_line),
                      10, scenario.quadrature_nodes);
}

StudyReport run_segment_scenario(const ExperimentConfig& config) {
  const auto& scenario = config.segment;
  SegmentModel model = build_segment_model(scenario);
  model.integration_steps = config.steps;

  std::vector<Eigen::VectorXd> pulls = scenario.pull_configurations;
  if (pulls.empty()) {
    pulls.push_back(Eigen::VectorXd::Zero(model.tendon_count()));
  }
  std::vector<double> forces = scenario.load_forces;
  if (forces.empty()) forces = {8.9, 17.8, 26.7, 35.6, 44.5};
  std::vector<std::string> directions = scenario.load_directions;
  if (directions.empty()) directions = {"+x", "-x", "+y", "-y", "+xy", "-xy"};

  // Ten pulls per configuration, cycling masses against directions, plus
  // one zero-load row.
  struct Load {
    double force;
    std::string direction;
  };
  std::vector<Load> loads;
  loads.push_back({0.0, "zero"});
  for (int k = 0; k < 10; ++k) {
    loads.push_back({forces[k % forces.size()], directions[k % directions.size()]});
  }

  StudyReport report;
  report.study = "segment";
  report.config_echo = config.raw_text;
  add_common_metadata(report, config);
  report.metadata["segment_length_m"] = std::to_string(scenario.length);
  report.metadata["pitch_radius_m"] = std::to_string(scenario.pitch_radius);
  report.metadata["line_quadrature_nodes"] = std::to_string(model.quadrature_nodes);
  report.metadata["actuation_lines"] = "bilateral linear stiffness";

  const int config_count = static_cast<int>(pulls.size());
  const int rows_per_config = static_cast<int>(loads.size());
  report.rows.resize(static_cast<std::size_t>(config_count) * rows_per_config);

  std::vector<double> c_tau_norms(config_count, 0.0);
  std::vector<double> min_tensions(config_count, 0.0);

  parallel_for(config_count, config.jobs, [&](int config_id) {
    StudyRow* rows = &report.rows[static_cast<std::size_t>(config_id) * rows_per_config];
    for (int k = 0; k < rows_per_config; ++k) {
      rows[k].shape_id = config_id;
      rows[k].order = scenario.basis_order;
      rows[k].wrench_axis = loads[k].direction;
      rows[k].increment = loads[k].force;
    }

    ModalSolveOptions options;
    options.integration_steps = model.integration_steps;

    ActuationState actuation;
    Eigen::VectorXd c0;
    Eigen::VectorXd tau0;
    ComplianceMatrix compliance;
    double time_us = 0.0;
    try {
      actuation = actuation_from_pulls(model, pulls[config_id]);
      c0 = solve_segment_equilibrium(model, actuation, Wrench(),
                                     Eigen::VectorXd::Zero(model.basis.coeff_count()), options,
                                     config.tendon_mode)
               .coeffs;
      tau0 = line_tensions(model, actuation, c0);
      c_tau_norms[config_id] = c_tau(model, c0, tau0).norm();
      min_tensions[config_id] = tau0.size() > 0 ? tau0.minCoeff() : 0.0;
      const auto start = std::chrono::steady_clock::now();
      compliance = task_space_compliance(model, c0, tau0, Wrench(), config.tendon_mode);
      time_us = elapsed_us(start);
    } catch (const std::exception&) {
      for (int k = 0; k < rows_per_config; ++k) rows[k].status = "model_failed";
      return;
    }

    const Pose tip0 = integrate_pose(model.basis, c0, model.integration_steps).tip();
    for (int k = 0; k < rows_per_config; ++k) {
      rows[k].time_us = time_us;
      if (loads[k].force == 0.0) {
        // zero pull: prediction and re-solve are both the unloaded shape
        continue;
      }
      Wrench w;
      try {
        w = Wrench(Eigen::Vector3d::Zero(), loads[k].force * parse_direction(loads[k].direction));
      } catch (const std::exception&) {
        rows[k].status = "bad_direction";
        continue;
      }
      Eigen::VectorXd c_loaded;
      try {
        c_loaded = solve_segment_equilibrium(model, actuation, w, c0, options, config.tendon_mode)
                       .coeffs;
      } catch (const std::exception&) {
        rows[k].status = "oracle_failed";
        continue;
      }
      const Pose tip = integrate_pose(model.basis, c_loaded, model.integration_steps).tip();
      const Vector6d dx = compliance.matrix * w.vec();
      rows[k].e_p_mm = ((tip.position - tip0.position) - dx.tail<3>()).norm() * 1e3;
      rows[k].rot_err_deg =
          geodesic_angle_deg(log_so3(tip.rotation * tip0.rotation.transpose()), dx.head<3>());
    }
  });

  double max_c_tau = 0.0;
  double min_tension = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config_count; ++i) {
    max_c_tau = std::max(max_c_tau, c_tau_norms[i]);
    min_tension = std::min(min_tension, min_tensions[i]);
  }
  report.metadata["max_c_tau_norm"] = std::to_string(max_c_tau);
  report.metadata["min_line_tension_n"] = std::to_string(min_tension);

  // Percent-of-length aggregates and the force/error rank correlation over
  // the loaded rows.
  double sum_pct = 0.0, max_pct = 0.0;
  std::vector<std::pair<double, double>> force_error;
  int loaded_ok = 0;
  for (const auto& row : report.rows) {
    if (row.status != "ok" || row.increment <= 0.0) continue;
    const double pct = row.e_p_mm * 1e-3 / scenario.length * 100.0;
    sum_pct += pct;
    max_pct = std::max(max_pct, pct);
    force_error.emplace_back(row.increment, row.e_p_mm);
    ++loaded_ok;
  }
  report.metadata["mean_e_p_percent_of_length"] =
      std::to_string(loaded_ok > 0 ? sum_pct / loaded_ok : 0.0);
  report.metadata["max_e_p_percent_of_length"] = std::to_string(max_pct);
  report.metadata["force_error_rank_correlation"] =
      std::to_string(spearman_rank_correlation(force_error));

  report.finalize();
  return report;
}

double spearman_rank_correlation(const std::vector<std::pair<double, double>>& pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 2) return 0.0;
  auto ranks = [n](const std::vector<double>& values) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<double> rank(n);
    int i = 0;
    while (i < n) {
      int j = i;
      while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
      const double mean_rank = 0.5 * (i + j) + 1.0;
      for (int k = i; k <= j; ++k) rank[idx[k]] = mean_rank;
      i = j + 1;
    }
    return rank;
  };
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = pairs[i].first;
    ys[i] = pairs[i].second;
  }
  const std::vector<double> rx = ranks(xs);
  const std::vector<double> ry = ranks(ys);
  double mean_x = 0.0, mean_y = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= n;
  mean_y /= n;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (int i = 0; i < n; ++i) {
    cov += (rx[i] - mean_x) * (ry[i] - mean_y);
    var_x += (rx[i] - mean_x) * (rx[i] - mean_x);
    var_y += (ry[i] - mean_y) * (ry[i] - mean_y);
  }
  if (var_x == 0.0 || var_y == 0.0) return 0.0;
  return cov / std::sqrt(var_x * var_y);
}

std::vector<std::string> emit_report(const StudyReport& report, const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("emit_report: cannot create directory " + config.out_dir);
  std::vector<std::string> paths;
  if (config.format == "csv" || config.format == "both") {
    const std::string path = config.out_dir + "/" + report.study + ".csv";
    write_csv(report, path);
    paths.push_back(path);
  }
  if (config.format == "json" || config.format == "both") {
    const std::string path = config.out_dir + "/" + report.study + ".json";
    write_json(report, path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace rodcomp
