#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fuzzyblock::kbt {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;
};

// maximize c.x  subject to  A x <= b,  x >= 0.
// Dense two-phase tableau simplex with Bland's rule; meant for the handful of
// constraints that arise in pyramid tests, not for large problems.
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace fuzzyblock::kbt
