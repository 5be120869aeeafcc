#include "mlsm/approximation.hpp"

#include "mlsm/kdtree.hpp"
#include "mlsm/nodeset.hpp"
#include "mlsm/parallel.hpp"

#include <Eigen/SVD>
#include <algorithm>

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace mlsm {

int operator_order(Operator op) {
  switch (op) {
    case Operator::kValue: return 0;
    case Operator::kDx:
    case Operator::kDy: return 1;
    default: return 2;
  }
}

const char* operator_name(Operator op) {
  switch (op) {
    case Operator::kValue: return "val";
    case Operator::kDx: return "dx";
    case Operator::kDy: return "dy";
    case Operator::kDxx: return "dxx";
    case Operator::kDxy: return "dxy";
    case Operator::kDyy: return "dyy";
  }
  return "?";
}

BasisSpec BasisSpec::monomial9() {
  return monomials({{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {2, 1}, {1, 2}, {2, 2}});
}

BasisSpec BasisSpec::gaussian9(double sigma) {
  BasisSpec b;
  b.kind = Kind::kGaussian;
  b.gaussian_count = 9;
  b.sigma = sigma;
  return b;
}

BasisSpec BasisSpec::monomials(std::vector<std::pair<int, int>> exponents) {
  BasisSpec b;
  b.kind = Kind::kMonomial;
  b.exponents = std::move(exponents);
  return b;
}

std::size_t BasisSpec::size() const {
  return kind == Kind::kMonomial ? exponents.size() : gaussian_count;
}

double weight(const Vec2& p, const Vec2& p0, double p_min, double sigma) {
  if (!(p_min > 0.0)) throw InvalidArgument("weight needs a positive p_min");
  if (!(sigma > 0.0)) throw InvalidArgument("weight needs a positive shape parameter");
  const double r = (p0 - p).norm() / (sigma * p_min);
  return std::exp(-r * r);
}

namespace {

// d^k/dt^k of t^e evaluated at t.
double power_derivative(double t, int e, int k) {
  if (k > e) return 0.0;
  double coeff = 1.0;
  for (int i = 0; i < k; ++i) coeff *= e - i;
  const int rest = e - k;
  double v = 1.0;
  for (int i = 0; i < rest; ++i) v *= t;
  return coeff * v;
}

std::pair<int, int> derivative_orders(Operator op) {
  switch (op) {
    case Operator::kValue: return {0, 0};
    case Operator::kDx: return {1, 0};
    case Operator::kDy: return {0, 1};
    case Operator::kDxx: return {2, 0};
    case Operator::kDxy: return {1, 1};
    case Operator::kDyy: return {0, 2};
  }
  return {0, 0};
}

[[noreturn]] void ill_conditioned(const std::string& what) {
  throw IllConditionedStencil(std::numeric_limits<std::size_t>::max(), {}, what);
}

}  // namespace

LocalApproximation::LocalApproximation(std::span<const Vec2> support, const Vec2& center,
                                       const BasisSpec& basis, const WeightSpec& weight_spec,
                                       double rcond, RankPolicy rank_policy)
    : basis_(basis), rank_policy_(rank_policy), center_(center) {
  const std::size_t n = support.size();
  const std::size_t m = basis.size();
  if (m == 0) throw InvalidArgument("empty basis");
  if (!(weight_spec.sigma > 0.0)) throw InvalidArgument("weight shape parameter must be positive");
  if (basis.kind == BasisSpec::Kind::kGaussian && !(basis.sigma > 0.0)) {
    throw InvalidArgument("gaussian basis shape parameter must be positive");
  }
  if (n < m) {
    ill_conditioned("support of " + std::to_string(n) + " nodes is smaller than the basis (" +
                    std::to_string(m) + ")");
  }

  scale_ = std::numeric_limits<double>::infinity();
  for (const Vec2& p : support) {
    const double d = (p - center).norm();
    if (d > 0.0) scale_ = std::min(scale_, d);
  }
  if (!std::isfinite(scale_)) ill_conditioned("support has no node apart from its center");

  if (basis.kind == BasisSpec::Kind::kGaussian) {
    for (std::size_t k = 0; k < m; ++k) gaussian_centers_.push_back((support[k] - center) / scale_);
  }

  Eigen::MatrixXd wb(n, m);
  Eigen::VectorXd w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 q = (support[j] - center) / scale_;
    // sqrt of the Gaussian weight.
    w(j) = std::exp(-0.5 * q.squaredNorm() / (weight_spec.sigma * weight_spec.sigma));
    wb.row(j) = w(j) * local_basis(Operator::kValue, q).transpose();
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(wb, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rcond * (s.size() > 0 ? s(0) : 0.0);
  rank_ = 0;
  while (rank_ < static_cast<std::size_t>(s.size()) && s(rank_) > cutoff) ++rank_;
  const auto r = static_cast<Eigen::Index>(rank_);
  pinv_ = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal() *
          svd.matrixU().leftCols(r).transpose() * w.asDiagonal();
  null_space_ = svd.matrixV().rightCols(static_cast<Eigen::Index>(m) - r);
}

Eigen::VectorXd LocalApproximation::local_basis(Operator op, const Vec2& q) const {
  const std::size_t m = basis_.size();
  Eigen::VectorXd out(m);
  const auto [dx, dy] = derivative_orders(op);
  if (basis_.kind == BasisSpec::Kind::kMonomial) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto [ex, ey] = basis_.exponents[i];
      out(i) = power_derivative(q.x(), ex, dx) * power_derivative(q.y(), ey, dy);
    }
    return out;
  }
  const double inv_s2 = 1.0 / (basis_.sigma * basis_.sigma);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 r = q - gaussian_centers_[i];
    const double g = std::exp(-r.squaredNorm() * inv_s2);
    const double gx = -2.0 * r.x() * inv_s2, gy = -2.0 * r.y() * inv_s2;
    switch (op) {
      case Operator::kValue: out(i) = g; break;
      case Operator::kDx: out(i) = gx * g; break;
      case Operator::kDy: out(i) = gy * g; break;
      case Operator::kDxx: out(i) = (gx * gx - 2.0 * inv_s2) * g; break;
      case Operator::kDxy: out(i) = gx * gy * g; break;
      case Operator::kDyy: out(i) = (gy * gy - 2.0 * inv_s2) * g; break;
    }
  }
  return out;
}

Eigen::VectorXd LocalApproximation::basis_values(Operator op, const Vec2& p) const {
  return local_basis(op, (p - center_) / scale_) / std::pow(scale_, operator_order(op));
}

Eigen::VectorXd LocalApproximation::shape(Operator op, const Vec2& p) const {
  const Eigen::VectorXd lb = local_basis(op, (p - center_) / scale_);
  if (rank_policy_ == RankPolicy::kStrict && null_space_.cols() > 0) {
    const double leak = (null_space_.transpose() * lb).lpNorm<Eigen::Infinity>();
    if (leak > 1e-8 * std::max(1.0, lb.norm())) {
      ill_conditioned("basis matrix has rank " + std::to_string(rank_) + " of " +
                      std::to_string(basis_size()) + " and leaves the " + operator_name(op) +
                      " operator undetermined");
    }
  }
  return (pinv_.transpose() * lb) / std::pow(scale_, operator_order(op));
}

ShapeRows compute_shapes(std::span<const Vec2> support, const Vec2& center, const BasisSpec& basis,
                         const WeightSpec& weight_spec, OperatorSet ops, double rcond, RankPolicy rank_policy) {
  const LocalApproximation approx(support, center, basis, weight_spec, rcond, rank_policy);
  ShapeRows out;
  out.ops = ops;
  for (Operator op : kAllOperators) {
    if (ops.has(op)) out.rows[static_cast<std::size_t>(op)] = approx.shape(op);
  }
  return out;
}

double apply_shape(const Eigen::VectorXd& row, std::span<const double> values) {
  if (static_cast<std::size_t>(row.size()) != values.size()) {
    throw InvalidArgument("stencil has " + std::to_string(row.size()) + " coefficients but " +
                          std::to_string(values.size()) + " values were given");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += row(static_cast<Eigen::Index>(j)) * values[j];
  return sum;
}

double ShapeSet::apply(std::size_t i, Operator op, std::span<const double> field) const {
  const Eigen::VectorXd& r = row(i, op);
  const Support& s = supports_[i];
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) sum += r(static_cast<Eigen::Index>(j)) * field[s.indices[j]];
  return sum;
}

ShapeSet build_shape_set(const NodeSet& nodes, std::vector<Support> supports, const BasisSpec& basis,
                         const WeightSpec& weight_spec, std::span<const OperatorSet> ops_per_node,
                         unsigned threads, double rcond, RankPolicy rank_policy) {
  const std::size_t count = nodes.size();
  if (supports.size() != count || ops_per_node.size() != count) {
    throw InvalidArgument("supports and operator lists must cover every node");
  }
  std::vector<ShapeRows> shapes(count);
  const RankPolicy local_policy =
      rank_policy == RankPolicy::kGrowSupport ? RankPolicy::kStrict : rank_policy;
  std::optional<KdTree> tree;
  std::vector<Vec2> positions;
  if (rank_policy == RankPolicy::kGrowSupport) {
    positions = nodes.positions();
    tree.emplace(positions);
  }
  parallel_for(count, threads, [&](std::size_t i) {
    if (ops_per_node[i].empty()) return;
    Support& s = supports[i];
    const std::size_t limit = std::min(count, 2 * s.size());
    for (;;) {
      std::vector<Vec2> pts;
      pts.reserve(s.size());
      for (std::size_t idx : s.indices) pts.push_back(nodes[idx].position);
      try {
        shapes[i] = compute_shapes(pts, nodes[i].position, basis, weight_spec, ops_per_node[i], rcond,
                                   local_policy);
        return;
      } catch (const IllConditionedStencil& e) {
        if (!tree || s.size() >= limit) {
          throw IllConditionedStencil(i, s.indices, "node " + std::to_string(i) + ": " + e.what());
        }
      }
      Support grown = centered_support(*tree, positions, i, s.size() + 1);
      s = std::move(grown);
    }
  });
  return ShapeSet(std::move(supports), std::move(shapes));
}

ShapeSet build_shape_set(const NodeSet& nodes, std::vector<Support> supports, const BasisSpec& basis,
                         const WeightSpec& weight_spec, OperatorSet ops, unsigned threads,
                         double rcond, RankPolicy rank_policy) {
  const std::vector<OperatorSet> per_node(nodes.size(), ops);
  return build_shape_set(nodes, std::move(supports), basis, weight_spec, per_node, threads, rcond,
                         rank_policy);
}

void write_stencils_csv(std::ostream& out, const ShapeSet& shapes) {
  const auto old = out.precision(17);
  out << "node,op,neighbours;coefficients\n";
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const ShapeRows& rows = shapes.shapes(i);
    for (Operator op : kAllOperators) {
      if (!rows.has(op)) continue;
      out << i << ',' << operator_name(op);
      for (std::size_t idx : shapes.support(i).indices) out << ',' << idx;
      out << ';';
      const Eigen::VectorXd& r = rows[op];
      for (Eigen::Index j = 0; j < r.size(); ++j) out << (j ? "," : "") << r(j);
      out << '\n';
    }
  }
  out.precision(old);
}

}  // namespace mlsm
