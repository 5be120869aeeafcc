#include "mlsm/elasticity.hpp"

#include "mlsm/parallel.hpp"

#include <cmath>
#include <ostream>

namespace mlsm {

void Material::validate() const {
  if (!(young > 0.0)) throw InvalidArgument("Young's modulus must be positive");
  if (!(poisson > -1.0 && poisson < 0.5)) throw InvalidArgument("Poisson's ratio must lie in (-1, 0.5)");
}

LameParameters Material::lame() const { return lame_parameters(young, poisson, formulation); }

LameParameters lame_parameters(double young, double poisson, Formulation formulation) {
  Material{young, poisson, formulation}.validate();
  const double mu = young / (2.0 * (1.0 + poisson));
  double lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  if (formulation == Formulation::kPlaneStress) lambda = 2.0 * lambda * mu / (lambda + 2.0 * mu);
  return {lambda, mu};
}

std::vector<OperatorSet> required_operators(const NodeSet& nodes) {
  std::vector<OperatorSet> ops(nodes.size(), OperatorSet{Operator::kDx, Operator::kDy});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_boundary()) ops[i] = ops[i] | OperatorSet{Operator::kDxx, Operator::kDxy, Operator::kDyy};
  }
  return ops;
}

double SparseSystem::nonzero_fraction() const {
  const double n = static_cast<double>(matrix.rows());
  return static_cast<double>(matrix.nonZeros()) / (n * n);
}

SparseSystem assemble(const NodeSet& nodes, const ShapeSet& shapes, const Material& material,
                      const BoundaryConditions& bcs, unsigned threads) {
  const std::size_t count = nodes.size();
  if (bcs.size() != count) throw InvalidArgument("boundary conditions must list every node");
  if (shapes.size() != count) throw InvalidArgument("shape set does not match the node set");
  const auto [lam, mu] = material.lame();
  const auto big_n = static_cast<Eigen::Index>(count);

  // Rows of node i land at i (u equation) and N + i (v equation); each node fills its own slot.
  using Triplet = Eigen::Triplet<double>;
  std::vector<std::vector<Triplet>> per_node(count);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * big_n);

  parallel_for(count, threads, [&](std::size_t i) {
    const Node& node = nodes[i];
    const auto ri = static_cast<Eigen::Index>(i);
    auto& out = per_node[i];
    const auto& bc = bcs[i];
    if (node.is_boundary() && !bc) {
      throw InvalidArgument("boundary node " + std::to_string(i) + " has no boundary condition");
    }
    if (!node.is_boundary() && bc) {
      throw InvalidArgument("interior node " + std::to_string(i) + " carries a boundary condition");
    }
    if (bc && std::holds_alternative<Essential>(*bc)) {
      const Vec2& u0 = std::get<Essential>(*bc).displacement;
      out.emplace_back(ri, ri, 1.0);
      out.emplace_back(big_n + ri, big_n + ri, 1.0);
      rhs(ri) = u0.x();
      rhs(big_n + ri) = u0.y();
      return;
    }

    const ShapeRows& rows = shapes.shapes(i);
    const Support& support = shapes.support(i);
    auto need = [&](Operator op) -> const Eigen::VectorXd& {
      if (!rows.has(op)) {
        throw InvalidArgument("node " + std::to_string(i) + " lacks the " + operator_name(op) + " stencil");
      }
      return rows[op];
    };

    if (!bc) {
      const Eigen::VectorXd& dxx = need(Operator::kDxx);
      const Eigen::VectorXd& dxy = need(Operator::kDxy);
      const Eigen::VectorXd& dyy = need(Operator::kDyy);
      for (std::size_t j = 0; j < support.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(support.indices[j]);
        const auto k = static_cast<Eigen::Index>(j);
        out.emplace_back(ri, col, (lam + 2 * mu) * dxx(k) + mu * dyy(k));
        out.emplace_back(ri, big_n + col, (lam + mu) * dxy(k));
        out.emplace_back(big_n + ri, col, (lam + mu) * dxy(k));
        out.emplace_back(big_n + ri, big_n + col, mu * dxx(k) + (lam + 2 * mu) * dyy(k));
      }
      return;
    }

    const Vec2& t0 = std::get<Traction>(*bc).traction;
    const double n1 = node.normal.x(), n2 = node.normal.y();
    const Eigen::VectorXd& dx = need(Operator::kDx);
    const Eigen::VectorXd& dy = need(Operator::kDy);
    for (std::size_t j = 0; j < support.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(support.indices[j]);
      const auto k = static_cast<Eigen::Index>(j);
      out.emplace_back(ri, col, mu * n2 * dy(k) + (2 * mu + lam) * n1 * dx(k));
      out.emplace_back(ri, big_n + col, lam * n1 * dy(k) + mu * n2 * dx(k));
      out.emplace_back(big_n + ri, col, mu * n1 * dy(k) + lam * n2 * dx(k));
      out.emplace_back(big_n + ri, big_n + col, mu * n1 * dx(k) + (2 * mu + lam) * n2 * dy(k));
    }
    rhs(ri) = t0.x();
    rhs(big_n + ri) = t0.y();
  });

  std::vector<Triplet> triplets;
  std::size_t total = 0;
  for (const auto& t : per_node) total += t.size();
  triplets.reserve(total);
  for (const auto& t : per_node) triplets.insert(triplets.end(), t.begin(), t.end());

  SparseSystem system;
  system.matrix.resize(2 * big_n, 2 * big_n);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.rhs = std::move(rhs);
  return system;
}

Displacements split_solution(const Eigen::VectorXd& x) {
  const auto n = x.size() / 2;
  Displacements d;
  d.u.assign(x.data(), x.data() + n);
  d.v.assign(x.data() + n, x.data() + 2 * n);
  return d;
}

double von_mises(double sxx, double syy, double sxy) {
  return std::sqrt(std::max(0.0, sxx * sxx - sxx * syy + syy * syy + 3.0 * sxy * sxy));
}

std::vector<double> StressField::von_mises() const {
  std::vector<double> out(xx.size());
  for (std::size_t i = 0; i < xx.size(); ++i) out[i] = mlsm::von_mises(xx[i], yy[i], xy[i]);
  return out;
}

StressField compute_stresses(const NodeSet& nodes, const ShapeSet& shapes, const Material& material,
                             const Displacements& disp) {
  const std::size_t count = nodes.size();
  if (disp.u.size() != count || disp.v.size() != count) {
    throw InvalidArgument("displacement fields do not match the node count");
  }
  const auto [lam, mu] = material.lame();
  StressField s;
  s.xx.resize(count);
  s.yy.resize(count);
  s.xy.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double ux = shapes.apply(i, Operator::kDx, disp.u);
    const double uy = shapes.apply(i, Operator::kDy, disp.u);
    const double vx = shapes.apply(i, Operator::kDx, disp.v);
    const double vy = shapes.apply(i, Operator::kDy, disp.v);
    s.xx[i] = (2 * mu + lam) * ux + lam * vy;
    s.yy[i] = lam * ux + (2 * mu + lam) * vy;
    s.xy[i] = mu * (uy + vx);
  }
  return s;
}

void write_matrix_coordinates(std::ostream& out, const SparseSystem& system) {
  const auto old = out.precision(17);
  const auto& a = system.matrix;
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, r); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  out.precision(old);
}

}  // namespace mlsm
