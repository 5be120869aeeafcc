#pragma once

#include "mlsm/common.hpp"
#include "mlsm/kdtree.hpp"

#include <Eigen/Core>

#include <array>
#include <bitset>
#include <span>
#include <utility>
#include <vector>

namespace mlsm {

class NodeSet;

enum class Operator { kValue = 0, kDx, kDy, kDxx, kDxy, kDyy };
inline constexpr std::size_t kOperatorCount = 6;
inline constexpr std::array<Operator, kOperatorCount> kAllOperators = {
    Operator::kValue, Operator::kDx, Operator::kDy, Operator::kDxx, Operator::kDxy, Operator::kDyy};

/// Derivative order of an operator (0, 1 or 2).
int operator_order(Operator op);
const char* operator_name(Operator op);

/// Set of operators to build stencils for.
class OperatorSet {
 public:
  constexpr OperatorSet() = default;
  constexpr OperatorSet(std::initializer_list<Operator> ops) {
    for (Operator op : ops) bits_ |= 1u << static_cast<unsigned>(op);
  }
  static constexpr OperatorSet all() {
    return {Operator::kValue, Operator::kDx, Operator::kDy, Operator::kDxx, Operator::kDxy, Operator::kDyy};
  }
  constexpr bool has(Operator op) const { return (bits_ >> static_cast<unsigned>(op)) & 1u; }
  constexpr OperatorSet operator|(OperatorSet o) const {
    OperatorSet r;
    r.bits_ = bits_ | o.bits_;
    return r;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool operator==(const OperatorSet&) const = default;

 private:
  unsigned bits_ = 0;
};

/// Approximation basis. Monomials are listed as (power of x, power of y).
struct BasisSpec {
  enum class Kind { kMonomial, kGaussian };

  Kind kind = Kind::kMonomial;
  std::vector<std::pair<int, int>> exponents;
  /// Gaussian basis: number of functions, centred on the closest support nodes.
  std::size_t gaussian_count = 9;
  /// Gaussian basis shape parameter, in units of the support's p_min.
  double sigma = 1.0;

  /// {1, x, y, x^2, y^2, xy, x^2 y, x y^2, x^2 y^2}
  static BasisSpec monomial9();
  static BasisSpec gaussian9(double sigma = 1.0);
  static BasisSpec monomials(std::vector<std::pair<int, int>> exponents);

  std::size_t size() const;
};

/// What to do when the truncated SVD leaves a requested operator undetermined.
enum class RankPolicy {
  kStrict,       // throw IllConditionedStencil
  kMinimumNorm,  // keep the pseudo-inverse's minimum-norm stencil
  kGrowSupport,  // retry with the next nearest nodes added, up to twice the support size
};

struct WeightSpec {
  /// Shape parameter, in units of the support's p_min.
  double sigma = 1.0;
};

/// Gaussian weight exp(-(|p0 - p| / (sigma p_min))^2).
double weight(const Vec2& p, const Vec2& p0, double p_min, double sigma);

/// Weighted least-squares fit over one support.
///
/// Holds (WB)^+ W computed by a truncated SVD in coordinates centred on `center`
/// and scaled by p_min. Shape rows for any operator and evaluation point follow
/// from one product with the basis derivatives.
class LocalApproximation {
 public:
  LocalApproximation(std::span<const Vec2> support, const Vec2& center, const BasisSpec& basis,
                     const WeightSpec& weight, double rcond = 1e-12,
                     RankPolicy rank_policy = RankPolicy::kStrict);

  /// L b(p)^T (WB)^+ W, one coefficient per support node.
  /// Under kStrict, throws IllConditionedStencil when the truncated null space of WB leaves
  /// L b(p) undetermined.
  Eigen::VectorXd shape(Operator op, const Vec2& p) const;
  Eigen::VectorXd shape(Operator op) const { return shape(op, center_); }

  std::size_t rank() const { return rank_; }
  std::size_t basis_size() const { return static_cast<std::size_t>(pinv_.rows()); }
  double p_min() const { return scale_; }
  /// Basis functions (or their derivatives) at p, in physical units.
  Eigen::VectorXd basis_values(Operator op, const Vec2& p) const;

 private:
  Eigen::VectorXd local_basis(Operator op, const Vec2& q) const;

  BasisSpec basis_;
  RankPolicy rank_policy_;
  Vec2 center_;
  double scale_ = 1.0;
  std::vector<Vec2> gaussian_centers_;  // local coordinates
  Eigen::MatrixXd pinv_;                // (WB)^+ W, m x n
  Eigen::MatrixXd null_space_;          // truncated right singular vectors, m x (m - rank)
  std::size_t rank_ = 0;
};

/// Stencils of one node for the requested operators.
struct ShapeRows {
  OperatorSet ops;
  std::array<Eigen::VectorXd, kOperatorCount> rows;

  const Eigen::VectorXd& operator[](Operator op) const { return rows[static_cast<std::size_t>(op)]; }
  bool has(Operator op) const { return ops.has(op); }
};

ShapeRows compute_shapes(std::span<const Vec2> support, const Vec2& center, const BasisSpec& basis,
                         const WeightSpec& weight, OperatorSet ops, double rcond = 1e-12,
                         RankPolicy rank_policy = RankPolicy::kStrict);

/// Dot product of a stencil with field samples over its support.
double apply_shape(const Eigen::VectorXd& row, std::span<const double> values);

/// Precomputed stencils for every node of a discretization.
class ShapeSet {
 public:
  ShapeSet(std::vector<Support> supports, std::vector<ShapeRows> shapes)
      : supports_(std::move(supports)), shapes_(std::move(shapes)) {}

  std::size_t size() const { return shapes_.size(); }
  const Support& support(std::size_t i) const { return supports_[i]; }
  const ShapeRows& shapes(std::size_t i) const { return shapes_[i]; }
  const Eigen::VectorXd& row(std::size_t i, Operator op) const { return shapes_[i][op]; }

  /// Applies node i's stencil to a global nodal field.
  double apply(std::size_t i, Operator op, std::span<const double> field) const;

 private:
  std::vector<Support> supports_;
  std::vector<ShapeRows> shapes_;
};

/// Builds stencils for each node from its support; ops_per_node[i] selects node i's operators.
/// Failures are reported as IllConditionedStencil carrying the node and support indices.
ShapeSet build_shape_set(const NodeSet& nodes, std::vector<Support> supports, const BasisSpec& basis,
                         const WeightSpec& weight, std::span<const OperatorSet> ops_per_node,
                         unsigned threads = 1, double rcond = 1e-12,
                         RankPolicy rank_policy = RankPolicy::kStrict);
ShapeSet build_shape_set(const NodeSet& nodes, std::vector<Support> supports, const BasisSpec& basis,
                         const WeightSpec& weight, OperatorSet ops, unsigned threads = 1,
                         double rcond = 1e-12,
                         RankPolicy rank_policy = RankPolicy::kStrict);

/// Debug dump: one line per node and operator, `node,op,neighbour indices...;coefficients...`.
void write_stencils_csv(std::ostream& out, const ShapeSet& shapes);

}  // namespace mlsm
