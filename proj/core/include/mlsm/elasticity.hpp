#pragma once

#include "mlsm/approximation.hpp"
#include "mlsm/common.hpp"
#include "mlsm/nodeset.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace mlsm {

enum class Formulation { kPlaneStress, kPlaneStrain };

struct LameParameters {
  double lambda;  // effective value used in the equations
  double mu;
};

/// Isotropic linear-elastic material.
struct Material {
  double young = 72.1e9;
  double poisson = 0.33;
  Formulation formulation = Formulation::kPlaneStress;

  /// Throws InvalidArgument unless E > 0 and -1 < nu < 0.5.
  void validate() const;
  LameParameters lame() const;
};

/// Returns (lambda, mu); for plane stress lambda is replaced by 2 lambda mu / (lambda + 2 mu).
LameParameters lame_parameters(double young, double poisson, Formulation formulation);

/// Prescribed displacement.
struct Essential {
  Vec2 displacement = Vec2::Zero();
};

/// Prescribed surface traction sigma n.
struct Traction {
  Vec2 traction = Vec2::Zero();
};

using BoundaryCondition = std::variant<Essential, Traction>;
/// One entry per node; set exactly for the boundary nodes.
using BoundaryConditions = std::vector<std::optional<BoundaryCondition>>;

/// Operators each node needs for assembly and stress recovery.
std::vector<OperatorSet> required_operators(const NodeSet& nodes);

/// 2N x 2N block system; unknowns ordered u_0..u_{N-1}, v_0..v_{N-1}.
struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;

  std::size_t node_count() const { return static_cast<std::size_t>(rhs.size() / 2); }
  double nonzero_fraction() const;
};

SparseSystem assemble(const NodeSet& nodes, const ShapeSet& shapes, const Material& material,
                      const BoundaryConditions& bcs, unsigned threads = 1);

struct Displacements {
  std::vector<double> u;
  std::vector<double> v;
};

/// Splits a stacked solution vector into u and v.
Displacements split_solution(const Eigen::VectorXd& x);

struct StressField {
  std::vector<double> xx;
  std::vector<double> yy;
  std::vector<double> xy;

  std::size_t size() const { return xx.size(); }
  std::vector<double> von_mises() const;
};

StressField compute_stresses(const NodeSet& nodes, const ShapeSet& shapes, const Material& material,
                             const Displacements& disp);

double von_mises(double sxx, double syy, double sxy);

/// Coordinate dump: `rows cols nnz` header then `row col value` lines, 0-based.
void write_matrix_coordinates(std::ostream& out, const SparseSystem& system);

}  // namespace mlsm
