#pragma once

#include "mlsm/elasticity.hpp"

#include <Eigen/Core>

#include <vector>

namespace mlsm {

enum class SolverMethod { kBicgstabIlut, kDirect };

struct SolverConfig {
  SolverMethod method = SolverMethod::kBicgstabIlut;
  double tolerance = 1e-10;
  /// 0 selects 10 sqrt(2N) + 1000.
  std::size_t max_iterations = 0;
  double ilut_fill = 40.0;
  double ilut_drop = 1e-5;
  /// Scale every row to unit max-norm before factorizing; the solution is unchanged.
  bool equilibrate = true;

  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  /// ||Ax - b|| / ||b|| of the assembled system.
  double relative_residual = 0.0;
  /// Same measure on the row-equilibrated system; this is what meets the tolerance.
  double scaled_residual = 0.0;
  double preconditioner_seconds = 0.0;
  double iteration_seconds = 0.0;
  std::vector<double> residual_history;
};

struct Solution {
  Eigen::VectorXd x;
  SolveReport report;
};

/// ||Ax - b|| / ||b|| (or ||Ax|| when b = 0).
double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x);

/// Solves the assembled system. Throws NonConvergence on breakdown or when the
/// iteration budget is exhausted.
Solution solve(const SparseSystem& system, const SolverConfig& config = {});

}  // namespace mlsm
