#include "gnplab/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnplab/error.hpp"

namespace gnp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outward unit normal and offset of edge i: n . p <= h inside.
struct HalfPlane {
  Vec2 n;
  double h;
};

HalfPlane edge_plane(const std::vector<Vec2>& v, std::size_t i) {
  const Vec2 a = v[i];
  const Vec2 b = v[(i + 1) % v.size()];
  const Vec2 n = normalized(Vec2{b.y - a.y, a.x - b.x});
  return {n, dot(n, a)};
}

double max_violation(const std::vector<Vec2>& v, Vec2 p) {
  double worst = -kInf;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const HalfPlane hp = edge_plane(v, i);
    worst = std::max(worst, dot(hp.n, p) - hp.h);
  }
  return worst;
}

bool rays_segment_intersect(Vec2 o, Vec2 d, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double den = cross(d, e);
  const Vec2 w = a - o;
  if (std::fabs(den) < 1e-300) {
    return false;  // parallel; distance fallback handles collinear overlap
  }
  const double t = cross(w, e) / den;
  const double s = cross(w, d) / den;
  return t >= 0.0 && s >= 0.0 && s <= 1.0;
}

double ray_segment_distance(Vec2 o, Vec2 d, Vec2 a, Vec2 b) {
  if (rays_segment_intersect(o, d, a, b)) return 0.0;
  return std::min({point_segment_distance(o, a, b), point_ray_distance(a, o, d),
                   point_ray_distance(b, o, d)});
}

bool is_similarity(const Mat2& m) {
  const double c0 = m.a * m.a + m.c * m.c;
  const double c1 = m.b * m.b + m.d * m.d;
  const double off = m.a * m.b + m.c * m.d;
  const double scale = std::max(c0, c1);
  return std::fabs(c0 - c1) <= 1e-12 * scale && std::fabs(off) <= 1e-12 * scale;
}

}  // namespace

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len2 = norm2(e);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return dist(p, a + e * t);
}

double point_ray_distance(Vec2 p, Vec2 o, Vec2 d) {
  const double t = std::max(0.0, dot(p - o, d));
  return dist(p, o + d * t);
}

ConvexBody ConvexBody::ball(Vec2 center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidBody, "ball radius must be finite and >= 0");
  }
  return ConvexBody(Ball{center, radius});
}

ConvexBody ConvexBody::segment(Vec2 a, Vec2 b) {
  if (a == b) throw Error(ErrorCode::InvalidBody, "segment endpoints must be distinct");
  return ConvexBody(Segment{a, b});
}

ConvexBody ConvexBody::polytope(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorCode::InvalidBody, "polytope needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (!(cross(e0, e1) > 0.0)) {
      throw Error(ErrorCode::InvalidBody,
                  "polytope vertices must be strictly convex and counterclockwise");
    }
  }
  return ConvexBody(Polytope{std::move(vertices)});
}

ConvexBody ConvexBody::hull(std::span<const Vec2> points) {
  std::vector<Vec2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 2) throw Error(ErrorCode::InvalidBody, "hull of fewer than two distinct points");
  // Andrew's monotone chain; collinear points are dropped.
  std::vector<Vec2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) return segment(p.front(), p.back());
  return polytope(std::move(h));
}

ConvexBody ConvexBody::ellipse(Vec2 center, const Mat2& axes, int vertices) {
  if (vertices < 3) throw Error(ErrorCode::InvalidBody, "ellipse needs at least 3 vertices");
  if (std::fabs(axes.det()) <= 1e-300) throw Error(ErrorCode::InvalidBody, "degenerate ellipse axes");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(vertices));
  for (int k = 0; k < vertices; ++k) {
    const double th = 2.0 * kPi * k / vertices;
    v.push_back(center + axes * Vec2{std::cos(th), std::sin(th)});
  }
  if (axes.det() < 0.0) std::reverse(v.begin(), v.end());
  return polytope(std::move(v));
}

Box ConvexBody::bounds() const {
  return std::visit(overloaded{
                        [](const Ball& b) {
                          return Box{b.center - Vec2{b.radius, b.radius}, b.center + Vec2{b.radius, b.radius}};
                        },
                        [](const Segment& s) {
                          return Box{{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)},
                                     {std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)}};
                        },
                        [](const Polytope& p) {
                          Box box{p.vertices[0], p.vertices[0]};
                          for (const Vec2& v : p.vertices) box = box.merged(Box{v, v});
                          return box;
                        },
                    },
                    shape_);
}

double ConvexBody::diameter() const {
  return std::visit(overloaded{
                        [](const Ball& b) { return 2.0 * b.radius; },
                        [](const Segment& s) { return dist(s.a, s.b); },
                        [](const Polytope& p) {
                          double d = 0.0;
                          for (std::size_t i = 0; i < p.vertices.size(); ++i)
                            for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
                              d = std::max(d, dist(p.vertices[i], p.vertices[j]));
                          return d;
                        },
                    },
                    shape_);
}

double ConvexBody::area() const {
  return std::visit(overloaded{
                        [](const Ball& b) { return kPi * b.radius * b.radius; },
                        [](const Segment&) { return 0.0; },
                        [](const Polytope& p) {
                          double a = 0.0;
                          const auto& v = p.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
                          return 0.5 * a;
                        },
                    },
                    shape_);
}

double ConvexBody::perimeter() const {
  return std::visit(overloaded{
                        [](const Ball& b) { return 2.0 * kPi * b.radius; },
                        [](const Segment& s) { return 2.0 * dist(s.a, s.b); },
                        [](const Polytope& p) {
                          double l = 0.0;
                          const auto& v = p.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i) l += dist(v[i], v[(i + 1) % v.size()]);
                          return l;
                        },
                    },
                    shape_);
}

double ConvexBody::signed_distance(Vec2 p) const {
  return std::visit(overloaded{
                        [&](const Ball& b) { return dist(p, b.center) - b.radius; },
                        [&](const Segment& s) { return point_segment_distance(p, s.a, s.b); },
                        [&](const Polytope& poly) {
                          const auto& v = poly.vertices;
                          const double viol = max_violation(v, p);
                          if (viol <= 0.0) return viol;
                          double d = kInf;
                          for (std::size_t i = 0; i < v.size(); ++i)
                            d = std::min(d, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
                          return d;
                        },
                    },
                    shape_);
}

ConvexBody ConvexBody::transformed(const Mat2& m, Vec2 t, int ellipse_vertices) const {
  if (std::fabs(m.det()) <= 1e-300) throw Error(ErrorCode::SingularMap, "singular linear map");
  return std::visit(overloaded{
                        [&](const Ball& b) {
                          if (is_similarity(m) || b.radius == 0.0) {
                            const double s = std::sqrt(std::fabs(m.det()));
                            return ConvexBody::ball(m * b.center + t, s * b.radius);
                          }
                          const Mat2 axes{m.a * b.radius, m.b * b.radius, m.c * b.radius, m.d * b.radius};
                          return ConvexBody::ellipse(m * b.center + t, axes, ellipse_vertices);
                        },
                        [&](const Segment& s) { return ConvexBody::segment(m * s.a + t, m * s.b + t); },
                        [&](const Polytope& p) {
                          std::vector<Vec2> v;
                          v.reserve(p.vertices.size());
                          for (const Vec2& q : p.vertices) v.push_back(m * q + t);
                          if (m.det() < 0.0) std::reverse(v.begin(), v.end());
                          return ConvexBody::polytope(std::move(v));
                        },
                    },
                    shape_);
}

Vec2 project(const ConvexBody& c, Vec2 x) {
  return std::visit(overloaded{
                        [&](const Ball& b) {
                          const Vec2 r = x - b.center;
                          const double n = norm(r);
                          if (n <= b.radius) return x;
                          return b.center + r * (b.radius / n);
                        },
                        [&](const Segment& s) {
                          const Vec2 e = s.b - s.a;
                          const double t = std::clamp(dot(x - s.a, e) / norm2(e), 0.0, 1.0);
                          return s.a + e * t;
                        },
                        [&](const Polytope& p) {
                          const auto& v = p.vertices;
                          if (max_violation(v, x) <= 0.0) return x;
                          Vec2 best = v[0];
                          double best_d = kInf;
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            const Vec2 a = v[i];
                            const Vec2 e = v[(i + 1) % v.size()] - a;
                            const double t = std::clamp(dot(x - a, e) / norm2(e), 0.0, 1.0);
                            const Vec2 q = a + e * t;
                            const double d = dist(x, q);
                            if (d < best_d) {
                              best_d = d;
                              best = q;
                            }
                          }
                          return best;
                        },
                    },
                    c.shape());
}

double support(const ConvexBody& c, Vec2 dir) {
  return std::visit(overloaded{
                        [&](const Ball& b) { return dot(dir, b.center) + b.radius * norm(dir); },
                        [&](const Segment& s) { return std::max(dot(dir, s.a), dot(dir, s.b)); },
                        [&](const Polytope& p) {
                          double m = -kInf;
                          for (const Vec2& v : p.vertices) m = std::max(m, dot(dir, v));
                          return m;
                        },
                    },
                    c.shape());
}

double normal_cone_sup(const ConvexBody& c, Vec2 x, Vec2 y) {
  const Vec2 w = y - x;
  // sup_c w.(c - x) = support(C, w) - w.x, support being positively homogeneous.
  return std::visit(overloaded{
                        [&](const Ball& b) { return dot(w, b.center - x) + b.radius * norm(w); },
                        [&](const Segment& s) { return std::max(dot(w, s.a - x), dot(w, s.b - x)); },
                        [&](const Polytope& p) {
                          double m = -kInf;
                          for (const Vec2& v : p.vertices) m = std::max(m, dot(w, v - x));
                          return m;
                        },
                    },
                    c.shape());
}

bool normal_cone_contains(const ConvexBody& c, Vec2 x, Vec2 y, double tol) {
  return normal_cone_sup(c, x, y) <= tol;
}

Vec2 boundary_normal(const ConvexBody& c, Vec2 point, double tol) {
  return std::visit(
      overloaded{
          [&](const Ball& b) {
            const Vec2 r = point - b.center;
            if (std::fabs(norm(r) - b.radius) > tol) throw Error(ErrorCode::NotOnBoundary, "point is off the ball");
            if (b.radius == 0.0) throw Error(ErrorCode::VertexSingularity, "degenerate point body has no normal");
            return normalized(r);
          },
          [&](const Segment& s) {
            if (point_segment_distance(point, s.a, s.b) > tol)
              throw Error(ErrorCode::NotOnBoundary, "point is off the segment");
            if (dist(point, s.a) <= tol || dist(point, s.b) <= tol)
              throw Error(ErrorCode::VertexSingularity, "segment endpoint");
            return normalized(perp(s.b - s.a));
          },
          [&](const Polytope& p) {
            const auto& v = p.vertices;
            for (const Vec2& q : v)
              if (dist(point, q) <= tol) throw Error(ErrorCode::VertexSingularity, "polytope vertex");
            std::size_t best = v.size();
            double best_d = kInf;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const double d = point_segment_distance(point, v[i], v[(i + 1) % v.size()]);
              if (d < best_d) {
                best_d = d;
                best = i;
              }
            }
            if (best_d > tol) throw Error(ErrorCode::NotOnBoundary, "point is off the polytope boundary");
            return edge_plane(v, best).n;
          },
      },
      c.shape());
}

double ray_clearance(const ConvexBody& c, Vec2 origin, Vec2 dir) {
  return std::visit(
      overloaded{
          [&](const Ball& b) { return b.radius - point_ray_distance(b.center, origin, dir); },
          [&](const Segment& s) { return -ray_segment_distance(origin, dir, s.a, s.b); },
          [&](const Polytope& p) {
            const auto& v = p.vertices;
            double t0 = 0.0;
            double t1 = kInf;
            bool hit = true;
            for (std::size_t i = 0; i < v.size() && hit; ++i) {
              const HalfPlane hp = edge_plane(v, i);
              const double s0 = dot(hp.n, origin) - hp.h;
              const double rate = dot(hp.n, dir);
              if (std::fabs(rate) < 1e-300) {
                if (s0 > 0.0) hit = false;
              } else if (rate > 0.0) {
                t1 = std::min(t1, -s0 / rate);
              } else {
                t0 = std::max(t0, -s0 / rate);
              }
              if (t0 > t1) hit = false;
            }
            if (hit) {
              // depth(t) = -max_i s_i(t) is concave along the chord.
              auto depth = [&](double t) { return -max_violation(v, origin + dir * t); };
              double lo = t0, hi = t1;
              constexpr double g = 0.6180339887498949;
              double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
              double f1 = depth(m1), f2 = depth(m2);
              for (int it = 0; it < 100; ++it) {
                if (f1 < f2) {
                  lo = m1;
                  m1 = m2;
                  f1 = f2;
                  m2 = lo + g * (hi - lo);
                  f2 = depth(m2);
                } else {
                  hi = m2;
                  m2 = m1;
                  f2 = f1;
                  m1 = hi - g * (hi - lo);
                  f1 = depth(m1);
                }
              }
              return std::max({0.0, f1, f2, depth(t0), depth(t1)});
            }
            double d = kInf;
            for (std::size_t i = 0; i < v.size(); ++i)
              d = std::min(d, ray_segment_distance(origin, dir, v[i], v[(i + 1) % v.size()]));
            return -d;
          },
      },
      c.shape());
}

std::vector<ConvexBoundaryPoint> boundary_points(const ConvexBody& c, int n) {
  std::vector<ConvexBoundaryPoint> out;
  if (n < 1) return out;
  std::visit(overloaded{
                 [&](const Ball& b) {
                   if (b.radius == 0.0) {
                     out.push_back({b.center, std::nullopt, 0.0});
                     return;
                   }
                   for (int k = 0; k < n; ++k) {
                     const double th = 2.0 * kPi * k / n;
                     const Vec2 u{std::cos(th), std::sin(th)};
                     out.push_back({b.center + u * b.radius, u, th * b.radius});
                   }
                 },
                 [&](const Segment& s) {
                   const int per_side = std::max(1, n / 2);
                   const Vec2 e = s.b - s.a;
                   const double len = norm(e);
                   const Vec2 left = normalized(perp(e));
                   for (int k = 0; k < per_side; ++k) {
                     const double f = (k + 0.5) / per_side;
                     out.push_back({s.a + e * f, left, f * len});
                   }
                   for (int k = 0; k < per_side; ++k) {
                     const double f = (k + 0.5) / per_side;
                     out.push_back({s.b - e * f, -left, len + f * len});
                   }
                 },
                 [&](const Polytope& p) {
                   const auto& v = p.vertices;
                   const double total = c.perimeter();
                   double walked = 0.0;
                   for (std::size_t i = 0; i < v.size(); ++i) {
                     const Vec2 a = v[i];
                     const Vec2 e = v[(i + 1) % v.size()] - a;
                     const double len = norm(e);
                     const int m = std::max(1, static_cast<int>(std::ceil(n * len / total)));
                     const Vec2 nrm = edge_plane(v, i).n;
                     for (int k = 0; k < m; ++k) {
                       const double f = (k + 0.5) / m;
                       out.push_back({a + e * f, nrm, walked + f * len});
                     }
                     walked += len;
                   }
                 },
             },
             c.shape());
  return out;
}

std::vector<Vec2> interior_points(const ConvexBody& c, int budget, double tol) {
  std::vector<Vec2> out;
  if (c.area() <= 0.0 || budget < 1) return out;
  const Box box = c.bounds();
  const int g = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(budget)))));
  for (int j = 0; j < g; ++j) {
    for (int i = 0; i < g; ++i) {
      const Vec2 p{box.lo.x + (i + 0.5) * box.width() / g, box.lo.y + (j + 0.5) * box.height() / g};
      if (c.interior_contains(p, tol)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace gnp
