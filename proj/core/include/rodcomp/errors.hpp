#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodcomp {

// Inner matrix of a compliance expression lost invertibility (buckling /
// instability proximity). Carries the estimated condition number.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double condition_number)
      : std::runtime_error(what + " (condition number " + std::to_string(condition_number) + ")"),
        condition_number_(condition_number) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

// Iterative solver failed to reach tolerance; keeps the last iterate and
// residual history for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate,
                   std::vector<double> residual_history)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_history_(std::move(residual_history)) {}
  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  const std::vector<double>& residual_history() const { return residual_history_; }
  double final_residual() const {
    return residual_history_.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : residual_history_.back();
  }

 private:
  Eigen::VectorXd last_iterate_;
  std::vector<double> residual_history_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rodcomp
