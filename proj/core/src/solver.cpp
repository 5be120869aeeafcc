#include "mlsm/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace mlsm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Unrestarted BiCGSTAB (van der Vorst), right-preconditioned through `precond.solve`.
template <class Precond>
Eigen::VectorXd bicgstab(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, const Eigen::VectorXd& b,
                         Eigen::VectorXd x, const Precond& precond, double tol, std::size_t max_iter,
                         SolveReport& report) {
  const Eigen::Index n = b.size();
  const double b_norm = b.norm();
  auto& history = report.residual_history;
  if (b_norm == 0.0) {
    x.setZero();
    report.relative_residual = 0.0;
    return x;
  }
  Eigen::VectorXd r = b - a * x;
  if (r.norm() / b_norm <= tol) {
    report.relative_residual = r.norm() / b_norm;
    return x;
  }
  Eigen::VectorXd r_hat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n), p = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y(n), z(n), s(n), t(n);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    double rho_next = r_hat.dot(r);
    if (rho_next == 0.0 && r.squaredNorm() > 0.0) {
      // r has become orthogonal to the shadow residual; restart the Krylov space from r.
      r_hat = r;
      rho_next = r.squaredNorm();
      rho = alpha = omega = 1.0;
      p.setZero();
      v.setZero();
    }
    if (rho_next == 0.0 || !std::isfinite(rho_next)) {
      throw NonConvergence("BiCGSTAB breakdown (rho = 0) after " + std::to_string(it - 1) + " iterations",
                           history);
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    p = r + beta * (p - omega * v);
    y = precond.solve(p);
    v.noalias() = a * y;
    const double denom = r_hat.dot(v);
    if (denom == 0.0 || !std::isfinite(denom)) {
      throw NonConvergence("BiCGSTAB breakdown (r_hat . v = 0)", history);
    }
    alpha = rho / denom;
    s = r - alpha * v;
    if (s.norm() / b_norm <= tol) {
      x += alpha * y;
      r = s;
      history.push_back(r.norm() / b_norm);
      report.iterations += it;
      report.relative_residual = history.back();
      return x;
    }
    z = precond.solve(s);
    t.noalias() = a * z;
    const double tt = t.squaredNorm();
    if (tt == 0.0) throw NonConvergence("BiCGSTAB breakdown (t = 0)", history);
    omega = t.dot(s) / tt;
    if (omega == 0.0 || !std::isfinite(omega)) {
      throw NonConvergence("BiCGSTAB breakdown (omega = 0)", history);
    }
    x += alpha * y + omega * z;
    r = s - omega * t;
    history.push_back(r.norm() / b_norm);
    if (!std::isfinite(history.back())) throw NonConvergence("BiCGSTAB diverged", history);
    if (history.back() <= tol) {
      report.iterations += it;
      report.relative_residual = history.back();
      return x;
    }
  }
  throw NonConvergence("BiCGSTAB did not reach tolerance in " + std::to_string(max_iter) +
                           " iterations (residual " +
                           std::to_string(history.empty() ? 1.0 : history.back()) + ")",
                       history);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidArgument("solver tolerance must lie in (0, 1)");
  if (!(ilut_fill > 0.0)) throw InvalidArgument("ILUT fill factor must be positive");
  if (!(ilut_drop >= 0.0)) throw InvalidArgument("ILUT drop tolerance must be non-negative");
}

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = system.matrix * x - system.rhs;
  const double b = system.rhs.norm();
  return b > 0.0 ? r.norm() / b : r.norm();
}

Solution solve(const SparseSystem& system, const SolverConfig& config) {
  config.validate();
  if (system.matrix.rows() != system.matrix.cols() || system.matrix.rows() != system.rhs.size()) {
    throw InvalidArgument("system is not square or the right-hand side has the wrong size");
  }
  Solution out;
  SolveReport& report = out.report;

  // Row equilibration: rows of the block system differ in magnitude by E / h^2.
  Eigen::SparseMatrix<double, Eigen::RowMajor> scaled_a = system.matrix;
  Eigen::VectorXd scaled_b = system.rhs;
  if (config.equilibrate) {
    for (Eigen::Index r = 0; r < scaled_a.outerSize(); ++r) {
      double m = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(scaled_a, r); it; ++it) {
        m = std::max(m, std::abs(it.value()));
      }
      if (m == 0.0) continue;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(scaled_a, r); it; ++it) {
        it.valueRef() /= m;
      }
      scaled_b(r) /= m;
    }
  }
  const SparseSystem scaled{std::move(scaled_a), std::move(scaled_b)};

  if (config.method == SolverMethod::kDirect) {
    const Eigen::SparseMatrix<double> a = scaled.matrix;
    auto start = Clock::now();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    report.preconditioner_seconds = seconds_since(start);
    if (lu.info() != Eigen::Success) {
      throw NonConvergence("sparse LU factorization failed: " + lu.lastErrorMessage(), {});
    }
    start = Clock::now();
    out.x = lu.solve(scaled.rhs);
    report.iteration_seconds = seconds_since(start);
    report.relative_residual = relative_residual(system, out.x);
    report.scaled_residual = relative_residual(scaled, out.x);
    report.residual_history = {report.scaled_residual};
    if (!std::isfinite(report.relative_residual)) throw NonConvergence("sparse LU produced non-finite values", {});
    return out;
  }

  const auto n = static_cast<double>(system.matrix.rows());
  const std::size_t max_iter =
      config.max_iterations ? config.max_iterations
                            : static_cast<std::size_t>(10.0 * std::sqrt(n)) + 1000;

  auto start = Clock::now();
  Eigen::IncompleteLUT<double> ilut;
  ilut.setDroptol(config.ilut_drop);
  ilut.setFillfactor(static_cast<int>(std::lround(config.ilut_fill)));
  ilut.compute(scaled.matrix);
  report.preconditioner_seconds = seconds_since(start);
  if (ilut.info() != Eigen::Success) throw NonConvergence("ILUT factorization failed", {});

  start = Clock::now();
  out.x = Eigen::VectorXd::Zero(system.rhs.size());
  // The recurrence residual can drift from the true one; restart from the current
  // iterate a few times until the recomputed residual meets the tolerance.
  for (int attempt = 0;; ++attempt) {
    out.x = bicgstab(scaled.matrix, scaled.rhs, out.x, ilut, config.tolerance,
                     max_iter - std::min(max_iter - 1, report.iterations), report);
    report.scaled_residual = relative_residual(scaled, out.x);
    if (report.scaled_residual <= config.tolerance) break;
    if (attempt == 3) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", report.scaled_residual);
      throw NonConvergence(std::string("BiCGSTAB stagnated at true residual ") + buf,
                           report.residual_history);
    }
  }
  report.relative_residual = relative_residual(system, out.x);
  report.iteration_seconds = seconds_since(start);
  return out;
}

}  // namespace mlsm
