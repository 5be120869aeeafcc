#include "mlsm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlsm {

double Rect::diagonal() const { return std::hypot(width(), height()); }

DomainShape::DomainShape(Rect outer, std::vector<Circle> holes)
    : outer_(outer), holes_(std::move(holes)) {
  if (!(outer_.width() > 0.0) || !(outer_.height() > 0.0)) {
    throw InvalidArgument("degenerate outer rectangle");
  }
  for (std::size_t k = 0; k < holes_.size(); ++k) {
    const Circle& c = holes_[k];
    if (!(c.radius > 0.0)) throw InvalidArgument("hole radius must be positive");
    const double clearance = std::min({c.center.x() - outer_.x_lo, outer_.x_hi - c.center.x(),
                                       c.center.y() - outer_.y_lo, outer_.y_hi - c.center.y()});
    if (clearance <= c.radius) {
      throw InvalidArgument("hole " + std::to_string(k) + " touches or crosses the outer boundary");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if ((holes_[j].center - c.center).norm() <= holes_[j].radius + c.radius) {
        throw InvalidArgument("holes " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
      }
    }
  }
}

double DomainShape::signed_distance(const Vec2& p) const {
  const Vec2 center((outer_.x_lo + outer_.x_hi) / 2, (outer_.y_lo + outer_.y_hi) / 2);
  const Vec2 half(outer_.width() / 2, outer_.height() / 2);
  const Vec2 d = (p - center).cwiseAbs() - half;
  double sd = d.cwiseMax(0.0).norm() + std::min(std::max(d.x(), d.y()), 0.0);
  for (const Circle& c : holes_) sd = std::max(sd, c.radius - (p - c.center).norm());
  return sd;
}

double DomainShape::distance_to_piece(const Vec2& p, BoundaryPiece which) const {
  return (project(p, which) - p).norm();
}

Vec2 DomainShape::project(const Vec2& p, BoundaryPiece which) const {
  const double x = std::clamp(p.x(), outer_.x_lo, outer_.x_hi);
  const double y = std::clamp(p.y(), outer_.y_lo, outer_.y_hi);
  switch (which) {
    case piece::kBottom: return {x, outer_.y_lo};
    case piece::kRight: return {outer_.x_hi, y};
    case piece::kTop: return {x, outer_.y_hi};
    case piece::kLeft: return {outer_.x_lo, y};
    default: break;
  }
  const auto k = static_cast<std::size_t>(which - piece::hole(0));
  if (which < piece::hole(0) || k >= holes_.size()) throw InvalidArgument("unknown boundary piece");
  const Circle& c = holes_[k];
  Vec2 r = p - c.center;
  if (r.norm() == 0.0) r = Vec2::UnitX();
  return c.center + c.radius * r.normalized();
}

Vec2 DomainShape::piece_normal(const Vec2& p, BoundaryPiece which) const {
  switch (which) {
    case piece::kBottom: return {0.0, -1.0};
    case piece::kRight: return {1.0, 0.0};
    case piece::kTop: return {0.0, 1.0};
    case piece::kLeft: return {-1.0, 0.0};
    default: break;
  }
  const auto k = static_cast<std::size_t>(which - piece::hole(0));
  if (which < piece::hole(0) || k >= holes_.size()) throw InvalidArgument("unknown boundary piece");
  // Out of the material means into the hole.
  Vec2 r = holes_[k].center - p;
  if (r.norm() == 0.0) r = -Vec2::UnitX();
  return r.normalized();
}

std::vector<BoundaryPiece> DomainShape::pieces_near(const Vec2& p, double tol) const {
  std::vector<BoundaryPiece> found;
  const int count = 4 + static_cast<int>(holes_.size());
  for (BoundaryPiece b = 0; b < count; ++b) {
    if (distance_to_piece(p, b) <= tol) found.push_back(b);
  }
  return found;
}

Vec2 DomainShape::outward_normal(const Vec2& p, double tol) const {
  const auto pieces = pieces_near(p, tol);
  if (pieces.empty()) throw InvalidArgument("point is not on the domain boundary");
  Vec2 n = Vec2::Zero();
  for (BoundaryPiece b : pieces) n += piece_normal(p, b);
  return n.normalized();
}

}  // namespace mlsm
