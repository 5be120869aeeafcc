#pragma once

#include "mlsm/common.hpp"

#include <vector>

namespace mlsm {

struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;

  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double diagonal() const;
  /// Closed containment.
  bool covers(const Vec2& p) const {
    return p.x() >= x_lo && p.x() <= x_hi && p.y() >= y_lo && p.y() <= y_hi;
  }
};

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

/// Identifies one smooth piece of the domain boundary.
/// Pieces 0..3 are the rectangle sides (bottom, right, top, left), 4 + k is hole k.
using BoundaryPiece = int;

namespace piece {
inline constexpr BoundaryPiece kBottom = 0;
inline constexpr BoundaryPiece kRight = 1;
inline constexpr BoundaryPiece kTop = 2;
inline constexpr BoundaryPiece kLeft = 3;
inline constexpr BoundaryPiece hole(int k) { return 4 + k; }
}  // namespace piece

/// Axis-aligned rectangle with circular holes removed.
///
/// The signed distance is negative inside the material, zero on the boundary
/// and positive outside (including inside the holes).
class DomainShape {
 public:
  explicit DomainShape(Rect outer, std::vector<Circle> holes = {});

  const Rect& outer() const { return outer_; }
  const std::vector<Circle>& holes() const { return holes_; }
  double diagonal() const { return outer_.diagonal(); }

  double signed_distance(const Vec2& p) const;
  /// Strict interior test: true iff signed_distance(p) < 0.
  bool contains(const Vec2& p) const { return signed_distance(p) < 0.0; }

  /// Boundary pieces that pass within `tol` of p.
  std::vector<BoundaryPiece> pieces_near(const Vec2& p, double tol) const;
  /// Closest point of the given boundary piece.
  Vec2 project(const Vec2& p, BoundaryPiece which) const;
  /// Outward unit normal of a piece at a point on (or near) it.
  Vec2 piece_normal(const Vec2& p, BoundaryPiece which) const;
  /// Outward unit normal at a boundary point; averaged over all pieces meeting there.
  Vec2 outward_normal(const Vec2& p, double tol) const;
  double distance_to_piece(const Vec2& p, BoundaryPiece which) const;

 private:
  Rect outer_;
  std::vector<Circle> holes_;
};

}  // namespace mlsm
