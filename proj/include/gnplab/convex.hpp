#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gnplab/vec2.hpp"

namespace gnp {

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Strictly convex polygon, vertices in counterclockwise order.
struct Polytope {
  std::vector<Vec2> vertices;
};

/// Compact convex reference set. Instances are immutable and always satisfy
/// the variant invariants; construct through the named factories.
class ConvexBody {
 public:
  using Shape = std::variant<Ball, Segment, Polytope>;

  static ConvexBody ball(Vec2 center, double radius);
  static ConvexBody segment(Vec2 a, Vec2 b);
  /// Requires >= 3 vertices in strictly convex counterclockwise order.
  static ConvexBody polytope(std::vector<Vec2> vertices);
  /// Convex hull of an arbitrary point cloud, normalized to a Polytope
  /// (or a Segment when the cloud is collinear).
  static ConvexBody hull(std::span<const Vec2> points);
  /// Inscribed polygon approximation of the ellipse {center + M u : |u| <= 1}.
  static ConvexBody ellipse(Vec2 center, const Mat2& axes, int vertices);

  const Shape& shape() const { return shape_; }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  bool is_segment() const { return std::holds_alternative<Segment>(shape_); }
  bool is_polytope() const { return std::holds_alternative<Polytope>(shape_); }

  Box bounds() const;
  double diameter() const;
  double area() const;
  double perimeter() const;
  /// Signed distance: negative in the interior, zero on the boundary. Bodies
  /// with empty interior (segments, radius-0 balls) return plain distance.
  double signed_distance(Vec2 p) const;
  bool contains(Vec2 p, double tol = kDefaultTol) const { return signed_distance(p) <= tol; }
  bool interior_contains(Vec2 p, double tol = kDefaultTol) const { return signed_distance(p) < -tol; }

  /// Image under x -> M x + t. Balls stay balls under similarities and
  /// otherwise become inscribed polygons with `ellipse_vertices` vertices.
  ConvexBody transformed(const Mat2& m, Vec2 t, int ellipse_vertices = 128) const;

 private:
  explicit ConvexBody(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Nearest point of C to x.
Vec2 project(const ConvexBody& c, Vec2 x);

/// max over c in C of dir . c; `dir` must be a unit vector.
double support(const ConvexBody& c, Vec2 dir);

/// sup over c in C of (y - x) . (c - x). Closed form for balls, vertex max
/// otherwise.
double normal_cone_sup(const ConvexBody& c, Vec2 x, Vec2 y);

/// True iff y lies in the normal cone CN_x = { y : (y - x).(c - x) <= 0 for all c in C }.
bool normal_cone_contains(const ConvexBody& c, Vec2 x, Vec2 y, double tol = kDefaultTol);

/// Outward unit normal at a boundary point. Throws VertexSingularity at
/// polygon corners and segment endpoints, NotOnBoundary off the boundary.
/// Segments report the normal on the left of a -> b.
Vec2 boundary_normal(const ConvexBody& c, Vec2 point, double tol = kDefaultTol);

/// Signed clearance between the ray {origin + t dir, t >= 0} and C:
/// max over the ray of -signed_distance when the ray meets C, minus the
/// ray-to-C distance when it misses. Nonnegative iff the ray meets C.
double ray_clearance(const ConvexBody& c, Vec2 origin, Vec2 dir);

struct ConvexBoundaryPoint {
  Vec2 point;
  std::optional<Vec2> normal;  // outward; absent where undefined
  double param = 0.0;          // arc position along the boundary walk
};

/// Boundary walk with outward normals where they exist. Polygon vertices and
/// segment endpoints are skipped; segments are walked on both sides.
std::vector<ConvexBoundaryPoint> boundary_points(const ConvexBody& c, int n);

/// Uniform grid of roughly `budget` points strictly inside C. Empty for
/// bodies without interior.
std::vector<Vec2> interior_points(const ConvexBody& c, int budget, double tol = kDefaultTol);

/// Distance from p to the segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
/// Distance from p to the ray {o + t d, t >= 0}; d unit.
double point_ray_distance(Vec2 p, Vec2 o, Vec2 d);

}  // namespace gnp
