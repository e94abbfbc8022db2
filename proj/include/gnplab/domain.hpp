#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gnplab/convex.hpp"
#include "gnplab/vec2.hpp"

namespace gnp {

class ShapeDomain;
using DomainPtr = std::shared_ptr<const ShapeDomain>;

/// Real trigonometric interpolant of periodic samples on a uniform grid.
/// Harmonics below 1e-15 of the largest coefficient are dropped.
class TrigSeries {
 public:
  TrigSeries() = default;
  explicit TrigSeries(const std::vector<double>& samples);

  double value(double theta) const;
  double derivative(double theta) const;

 private:
  double mean_ = 0.0;
  std::vector<int> k_;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// { center + rho (cos t, sin t) : 0 <= rho < G(t) }, G sampled on a uniform
/// periodic grid and interpolated spectrally.
struct StarPolar {
  Vec2 center;
  std::vector<double> g;
  TrigSeries series;

  double radius(double theta) const { return series.value(theta); }
  double radius_derivative(double theta) const { return series.derivative(theta); }
};

/// { (x, y) : x_lo < x < x_hi, |y| < phi(x) }, phi piecewise linear through
/// `nodes` = (x_i, phi_i). `corners` lists node indices where the boundary
/// has a genuine kink; the interval ends are always corners.
struct Graph {
  std::vector<Vec2> nodes;
  std::vector<std::size_t> corners;

  double x_lo() const { return nodes.front().x; }
  double x_hi() const { return nodes.back().x; }
  double phi(double x) const;
  /// Length of the upper polyline.
  double upper_length() const;
};

struct BallUnion {
  std::vector<Ball> balls;
};

struct DisjointPair {
  DomainPtr first;
  DomainPtr second;
  double delta = 0.0;
};

struct Intervals1D {
  std::vector<std::pair<double, double>> intervals;
};

/// Region bounded by the involute of the circle (center, scale) and its
/// mirror image, up to their first crossing on the negative axis.
struct Involute {
  Vec2 center;
  double scale = 1.0;
};

/// { x : d(x, body) < distance }.
struct Offset {
  ConvexBody body;
  double distance = 0.0;
};

/// Image of `base` under x -> m x + t.
struct Mapped {
  DomainPtr base;
  Mat2 m;
  Vec2 t;
};

/// base intersected with the open ball B(center, radius).
struct Clipped {
  DomainPtr base;
  Vec2 center;
  double radius = 0.0;
};

/// Immutable open set in the plane (or on the line, for Intervals1D).
class ShapeDomain {
 public:
  using Shape = std::variant<StarPolar, Graph, BallUnion, DisjointPair, Intervals1D, Involute, Offset, Mapped, Clipped>;

  static ShapeDomain star_polar(Vec2 center, std::vector<double> g);
  static ShapeDomain star_polar(Vec2 center, const std::function<double(double)>& g, int n_theta);
  static ShapeDomain graph(std::vector<Vec2> nodes, std::vector<std::size_t> corners = {});
  static ShapeDomain graph(double x_lo, double x_hi, int m, const std::function<double(double)>& phi);
  static ShapeDomain ball_union(std::vector<Ball> balls);
  static ShapeDomain disjoint_pair(ShapeDomain first, ShapeDomain second, double delta);
  static ShapeDomain intervals(std::vector<std::pair<double, double>> intervals);
  static ShapeDomain involute(Vec2 center, double scale);
  static ShapeDomain offset(ConvexBody body, double distance);
  static ShapeDomain mapped(ShapeDomain base, const Mat2& m, Vec2 t);
  static ShapeDomain clipped(ShapeDomain base, Vec2 center, double radius);

  const Shape& shape() const { return shape_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&shape_);
  }

  /// 1 for Intervals1D, 2 otherwise.
  int dimension() const;
  /// Membership in the open set. For 1-D domains only p.x is read.
  bool contains(Vec2 p) const;
  Box bounds() const;
  /// Smallest geometric length scale the domain resolves.
  double feature_size() const;
  /// Length of the boundary (counting measure in 1-D).
  double perimeter() const;

 private:
  explicit ShapeDomain(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

struct BoundarySample {
  Vec2 point;
  std::optional<Vec2> inward_normal;
  bool smooth = true;
  double param = 0.0;
  int component = 0;
  double weight = 0.0;  // boundary measure represented by this sample
};

/// Boundary discretization with analytic inward normals. Cusps, corners and
/// junctions are flagged smooth = false and carry no normal.
std::vector<BoundarySample> sample_boundary(const ShapeDomain& domain, int n);

struct CharacteristicGrid {
  Box box;
  double h = 0.0;
  int dim = 2;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> mask;  // row-major, nx * ny

  Vec2 cell_center(int i, int j) const {
    return {box.lo.x + (i + 0.5) * h, dim == 1 ? 0.0 : box.lo.y + (j + 0.5) * h};
  }
  bool at(int i, int j) const { return mask[static_cast<std::size_t>(j) * nx + i] != 0; }
  std::size_t count() const;
  /// h^2 * count in 2-D, h * count in 1-D.
  double measure() const;
};

/// Rasterizes the domain at resolution h over `box` (default: its bounds).
CharacteristicGrid characteristic_grid(const ShapeDomain& domain, double h, std::optional<Box> box = std::nullopt);

/// Cell centers of a uniform grid over the bounds that fall inside the
/// domain, spaced so that roughly `budget` cells cover the bounding box.
std::vector<Vec2> interior_samples(const ShapeDomain& domain, int budget);

/// Scales all defining coordinates about `center`.
ShapeDomain dilate(const ShapeDomain& domain, double factor, Vec2 center);

struct GalleryParams {
  std::map<std::string, double> scalars;
  std::optional<ConvexBody> convex;
};

/// Named example domains: involute, cusp_chain(n_max), triangle_comb(n_max),
/// two_disk(R), star_circle(radius), offset_of_convex(C, d),
/// shrinking_pair(n), remark222_intervals(n).
ShapeDomain make_gallery(const std::string& name, const GalleryParams& params);

/// Height of the n-th comb triangle, sqrt((1 - 1/n) / (2 n (n + 1))).
double comb_height(int n);

/// Closed-form perimeter sum for the first n_max comb triangles,
/// sum_n sqrt(a_n^2 + 1 / (4 n^2 (n + 1)^2)).
double comb_partial_perimeter(int n_max);

/// First positive crossing of the involute with its mirror (tan s = s).
double involute_crossing_parameter();

}  // namespace gnp
