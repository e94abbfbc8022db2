#include "gnplab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

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

DomainPtr share(ShapeDomain d) { return std::make_shared<const ShapeDomain>(std::move(d)); }

// Solves s - atan(s) = angle for s in [0, s_max]; the left side is increasing.
double involute_parameter_for_angle(double angle, double s_max) {
  double lo = 0.0, hi = s_max;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - std::atan(mid) < angle) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Vec2 involute_point(double s) { return {std::cos(s) + s * std::sin(s), std::sin(s) - s * std::cos(s)}; }

// Pieces of the boundary of an offset body, walked counterclockwise.
struct OffsetPiece {
  bool arc = false;
  Vec2 a, b, normal;         // line piece
  Vec2 center;               // arc piece
  double th0 = 0.0, th1 = 0.0;
  double length(double d) const { return arc ? d * (th1 - th0) : dist(a, b); }
};

std::vector<OffsetPiece> offset_pieces(const ConvexBody& body, double d) {
  std::vector<OffsetPiece> pieces;
  auto add_arc = [&](Vec2 c, Vec2 n0, Vec2 n1) {
    double t0 = std::atan2(n0.y, n0.x);
    double t1 = std::atan2(n1.y, n1.x);
    while (t1 <= t0) t1 += 2.0 * kPi;
    OffsetPiece p;
    p.arc = true;
    p.center = c;
    p.th0 = t0;
    p.th1 = t1;
    pieces.push_back(p);
  };
  std::visit(overloaded{
                 [&](const Ball& b) {
                   OffsetPiece p;
                   p.arc = true;
                   p.center = b.center;
                   p.th0 = 0.0;
                   p.th1 = 2.0 * kPi;
                   pieces.push_back(p);
                   (void)d;
                 },
                 [&](const Segment& s) {
                   // Right side of a -> b is walked first so the loop is counterclockwise.
                   const Vec2 n = normalized(perp(s.b - s.a));
                   pieces.push_back({false, s.a - n * d, s.b - n * d, -n, {}, 0.0, 0.0});
                   add_arc(s.b, -n, n);
                   pieces.push_back({false, s.b + n * d, s.a + n * d, n, {}, 0.0, 0.0});
                   add_arc(s.a, n, -n);
                 },
                 [&](const Polytope& poly) {
                   const auto& v = poly.vertices;
                   const std::size_t m = v.size();
                   auto normal_of = [&](std::size_t i) {
                     const Vec2 e = v[(i + 1) % m] - v[i];
                     return normalized(Vec2{e.y, -e.x});
                   };
                   for (std::size_t i = 0; i < m; ++i) {
                     const Vec2 n = normal_of(i);
                     pieces.push_back({false, v[i] + n * d, v[(i + 1) % m] + n * d, n, {}, 0.0, 0.0});
                     add_arc(v[(i + 1) % m], n, normal_of((i + 1) % m));
                   }
                 },
             },
             body.shape());
  return pieces;
}

void check_sample_count(int n) {
  if (n < 16) throw Error(ErrorCode::InvalidInput, "boundary sampling needs n >= 16");
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigSeries

TrigSeries::TrigSeries(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) return;
  mean_ = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  const int kmax = n / 2;
  std::vector<double> a(static_cast<std::size_t>(kmax + 1), 0.0), b(a.size(), 0.0);
  double scale = std::fabs(mean_);
  for (int k = 1; k <= kmax; ++k) {
    const bool nyquist = (2 * k == n);
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * static_cast<double>((static_cast<long long>(k) * j) % n) / n;
      sa += samples[static_cast<std::size_t>(j)] * std::cos(th);
      sb += samples[static_cast<std::size_t>(j)] * std::sin(th);
    }
    a[static_cast<std::size_t>(k)] = (nyquist ? 1.0 : 2.0) * sa / n;
    b[static_cast<std::size_t>(k)] = nyquist ? 0.0 : 2.0 * sb / n;
    scale = std::max({scale, std::fabs(a[static_cast<std::size_t>(k)]), std::fabs(b[static_cast<std::size_t>(k)])});
  }
  for (int k = 1; k <= kmax; ++k) {
    const double ak = a[static_cast<std::size_t>(k)], bk = b[static_cast<std::size_t>(k)];
    if (std::fabs(ak) > 1e-15 * scale || std::fabs(bk) > 1e-15 * scale) {
      k_.push_back(k);
      a_.push_back(ak);
      b_.push_back(bk);
    }
  }
}

double TrigSeries::value(double theta) const {
  double v = mean_;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    const double kt = k_[i] * theta;
    v += a_[i] * std::cos(kt) + b_[i] * std::sin(kt);
  }
  return v;
}

double TrigSeries::derivative(double theta) const {
  double v = 0.0;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    const double kt = k_[i] * theta;
    v += k_[i] * (b_[i] * std::cos(kt) - a_[i] * std::sin(kt));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Graph helpers

double Graph::phi(double x) const {
  if (x < nodes.front().x || x > nodes.back().x) return 0.0;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x, [](double v, const Vec2& n) { return v < n.x; });
  if (it == nodes.end()) return nodes.back().y;
  if (it == nodes.begin()) return nodes.front().y;
  const Vec2 b = *it;
  const Vec2 a = *(it - 1);
  const double f = (x - a.x) / (b.x - a.x);
  return a.y + f * (b.y - a.y);
}

double Graph::upper_length() const {
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) l += dist(nodes[i], nodes[i + 1]);
  return l;
}

// ---------------------------------------------------------------------------
// Constructors

ShapeDomain ShapeDomain::star_polar(Vec2 center, std::vector<double> g) {
  if (g.size() < 16) throw Error(ErrorCode::DegenerateDomain, "star-polar grid needs at least 16 samples");
  for (double v : g)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::DegenerateDomain, "star-polar radius must be > 0");
  TrigSeries series(g);
  return ShapeDomain(StarPolar{center, std::move(g), std::move(series)});
}

ShapeDomain ShapeDomain::star_polar(Vec2 center, const std::function<double(double)>& g, int n_theta) {
  std::vector<double> samples(static_cast<std::size_t>(std::max(n_theta, 0)));
  for (int k = 0; k < n_theta; ++k) samples[static_cast<std::size_t>(k)] = g(2.0 * kPi * k / n_theta);
  return star_polar(center, std::move(samples));
}

ShapeDomain ShapeDomain::graph(std::vector<Vec2> nodes, std::vector<std::size_t> corners) {
  if (nodes.size() < 2) throw Error(ErrorCode::DegenerateDomain, "graph needs at least two nodes");
  corners.push_back(0);
  corners.push_back(nodes.size() - 1);
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  if (corners.back() >= nodes.size()) throw Error(ErrorCode::DegenerateDomain, "graph corner index out of range");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i].x) || !std::isfinite(nodes[i].y) || nodes[i].y < 0.0)
      throw Error(ErrorCode::DegenerateDomain, "graph profile must be finite and >= 0");
    if (i > 0 && !(nodes[i].x > nodes[i - 1].x))
      throw Error(ErrorCode::DegenerateDomain, "graph nodes must have increasing x");
    if (nodes[i].y == 0.0 && !std::binary_search(corners.begin(), corners.end(), i))
      throw Error(ErrorCode::DegenerateDomain, "graph profile may vanish only at ends or declared corners");
  }
  return ShapeDomain(Graph{std::move(nodes), std::move(corners)});
}

ShapeDomain ShapeDomain::graph(double x_lo, double x_hi, int m, const std::function<double(double)>& phi) {
  if (m < 2 || !(x_hi > x_lo)) throw Error(ErrorCode::DegenerateDomain, "graph needs m >= 2 and x_hi > x_lo");
  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double x = i + 1 == m ? x_hi : x_lo + (x_hi - x_lo) * i / (m - 1);
    nodes.push_back({x, phi(x)});
  }
  return graph(std::move(nodes));
}

ShapeDomain ShapeDomain::ball_union(std::vector<Ball> balls) {
  if (balls.empty()) throw Error(ErrorCode::DegenerateDomain, "ball union is empty");
  for (const Ball& b : balls)
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw Error(ErrorCode::DegenerateDomain, "ball radius must be > 0");
  return ShapeDomain(BallUnion{std::move(balls)});
}

ShapeDomain ShapeDomain::disjoint_pair(ShapeDomain first, ShapeDomain second, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::DegenerateDomain, "pair separation must be >= 0");
  if (first.dimension() != 2 || second.dimension() != 2)
    throw Error(ErrorCode::DegenerateDomain, "pair components must be planar");
  const auto s1 = sample_boundary(first, 512);
  const auto s2 = sample_boundary(second, 512);
  double sep = kInf;
  for (const auto& a : s1) {
    if (second.contains(a.point)) sep = 0.0;
    for (const auto& b : s2) sep = std::min(sep, dist(a.point, b.point));
  }
  for (const auto& b : s2)
    if (first.contains(b.point)) sep = 0.0;
  if (sep < delta - kDefaultTol)
    throw Error(ErrorCode::DegenerateDomain, "pair closures are closer than the declared separation");
  return ShapeDomain(DisjointPair{share(std::move(first)), share(std::move(second)), delta});
}

ShapeDomain ShapeDomain::intervals(std::vector<std::pair<double, double>> intervals) {
  if (intervals.empty()) throw Error(ErrorCode::DegenerateDomain, "interval list is empty");
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) throw Error(ErrorCode::DegenerateDomain, "bad interval");
    if (i > 0 && a < intervals[i - 1].second) throw Error(ErrorCode::DegenerateDomain, "intervals overlap");
  }
  return ShapeDomain(Intervals1D{std::move(intervals)});
}

ShapeDomain ShapeDomain::involute(Vec2 center, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateDomain, "involute scale must be > 0");
  return ShapeDomain(Involute{center, scale});
}

ShapeDomain ShapeDomain::offset(ConvexBody body, double distance) {
  if (!(distance > 0.0)) throw Error(ErrorCode::DegenerateDomain, "offset distance must be > 0");
  return ShapeDomain(Offset{std::move(body), distance});
}

ShapeDomain ShapeDomain::mapped(ShapeDomain base, const Mat2& m, Vec2 t) {
  if (std::fabs(m.det()) <= 1e-9) throw Error(ErrorCode::SingularMap, "|det M| must exceed 1e-9");
  if (base.dimension() != 2) throw Error(ErrorCode::DegenerateDomain, "affine maps apply to planar domains");
  return ShapeDomain(Mapped{share(std::move(base)), m, t});
}

ShapeDomain ShapeDomain::clipped(ShapeDomain base, Vec2 center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::DegenerateDomain, "clip radius must be > 0");
  return ShapeDomain(Clipped{share(std::move(base)), center, radius});
}

// ---------------------------------------------------------------------------
// Queries

int ShapeDomain::dimension() const { return std::holds_alternative<Intervals1D>(shape_) ? 1 : 2; }

bool ShapeDomain::contains(Vec2 p) const {
  return std::visit(
      overloaded{
          [&](const StarPolar& s) {
            const Vec2 q = p - s.center;
            const double r = norm(q);
            if (r == 0.0) return true;
            return r < s.radius(std::atan2(q.y, q.x));
          },
          [&](const Graph& g) {
            if (!(p.x > g.x_lo() && p.x < g.x_hi())) return false;
            return std::fabs(p.y) < g.phi(p.x);
          },
          [&](const BallUnion& u) {
            for (const Ball& b : u.balls)
              if (dist(p, b.center) < b.radius) return true;
            return false;
          },
          [&](const DisjointPair& d) { return d.first->contains(p) || d.second->contains(p); },
          [&](const Intervals1D& iv) {
            for (const auto& [a, b] : iv.intervals)
              if (p.x > a && p.x < b) return true;
            return false;
          },
          [&](const Involute& inv) {
            const Vec2 q = (p - inv.center) / inv.scale;
            const double r = norm(q);
            if (r < 1.0) return true;
            const double s_max = involute_crossing_parameter();
            const double s = involute_parameter_for_angle(std::fabs(std::atan2(q.y, q.x)), s_max);
            return r < std::sqrt(1.0 + s * s);
          },
          [&](const Offset& o) { return o.body.signed_distance(p) < o.distance; },
          [&](const Mapped& m) { return m.base->contains(m.m.inverse() * (p - m.t)); },
          [&](const Clipped& c) { return dist(p, c.center) < c.radius && c.base->contains(p); },
      },
      shape_);
}

Box ShapeDomain::bounds() const {
  return std::visit(
      overloaded{
          [&](const StarPolar& s) {
            double rmax = 0.0;
            const int n = std::max<int>(4096, 8 * static_cast<int>(s.g.size()));
            for (int k = 0; k < n; ++k) rmax = std::max(rmax, s.radius(2.0 * kPi * k / n));
            rmax *= 1.0 + 1e-6;
            return Box{s.center - Vec2{rmax, rmax}, s.center + Vec2{rmax, rmax}};
          },
          [&](const Graph& g) {
            double m = 0.0;
            for (const Vec2& n : g.nodes) m = std::max(m, n.y);
            return Box{{g.x_lo(), -m}, {g.x_hi(), m}};
          },
          [&](const BallUnion& u) {
            Box box = ConvexBody::ball(u.balls[0].center, u.balls[0].radius).bounds();
            for (const Ball& b : u.balls) box = box.merged(ConvexBody::ball(b.center, b.radius).bounds());
            return box;
          },
          [&](const DisjointPair& d) { return d.first->bounds().merged(d.second->bounds()); },
          [&](const Intervals1D& iv) {
            return Box{{iv.intervals.front().first, 0.0}, {iv.intervals.back().second, 0.0}};
          },
          [&](const Involute& inv) {
            const double s = involute_crossing_parameter();
            const double xmin = involute_point(s).x;
            return Box{inv.center + Vec2{xmin, -kPi} * inv.scale, inv.center + Vec2{kPi / 2.0, kPi} * inv.scale};
          },
          [&](const Offset& o) { return o.body.bounds().inflated(o.distance); },
          [&](const Mapped& m) {
            const Box b = m.base->bounds();
            const Vec2 corners[4] = {b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}};
            Box out{m.m * corners[0] + m.t, m.m * corners[0] + m.t};
            for (const Vec2& c : corners) out = out.merged(Box{m.m * c + m.t, m.m * c + m.t});
            return out;
          },
          [&](const Clipped& c) {
            const Box a = c.base->bounds();
            const Box b{c.center - Vec2{c.radius, c.radius}, c.center + Vec2{c.radius, c.radius}};
            return Box{{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)},
                       {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
          },
      },
      shape_);
}

double ShapeDomain::feature_size() const {
  return std::visit(
      overloaded{
          [](const StarPolar& s) { return *std::min_element(s.g.begin(), s.g.end()); },
          [](const Graph& g) {
            double m = 0.0;
            for (const Vec2& n : g.nodes) m = std::max(m, n.y);
            return std::min(g.x_hi() - g.x_lo(), m);
          },
          [](const BallUnion& u) {
            double r = kInf;
            for (const Ball& b : u.balls) r = std::min(r, b.radius);
            return r;
          },
          [](const DisjointPair& d) {
            const double f = std::min(d.first->feature_size(), d.second->feature_size());
            return d.delta > 0.0 ? std::min(f, d.delta) : f;
          },
          [](const Intervals1D& iv) {
            double r = kInf;
            for (const auto& [a, b] : iv.intervals) r = std::min(r, b - a);
            return r;
          },
          [](const Involute& inv) { return inv.scale; },
          [](const Offset& o) { return o.distance; },
          [](const Mapped& m) {
            // Smallest singular value of m.
            const double p = m.m.a * m.m.a + m.m.b * m.m.b + m.m.c * m.m.c + m.m.d * m.m.d;
            const double q = std::fabs(m.m.det());
            const double smin = std::sqrt(std::max(0.0, 0.5 * (p - std::sqrt(std::max(0.0, p * p - 4.0 * q * q)))));
            return m.base->feature_size() * smin;
          },
          [](const Clipped& c) { return std::min(c.base->feature_size(), c.radius); },
      },
      shape_);
}

double ShapeDomain::perimeter() const {
  if (const auto* iv = as<Intervals1D>()) return 2.0 * static_cast<double>(iv->intervals.size());
  double total = 0.0;
  for (const auto& s : sample_boundary(*this, 4096)) total += s.weight;
  return total;
}

// ---------------------------------------------------------------------------
// Boundary sampling

std::vector<BoundarySample> sample_boundary(const ShapeDomain& domain, int n) {
  std::vector<BoundarySample> out;
  std::visit(
      overloaded{
          [&](const StarPolar& s) {
            check_sample_count(n);
            for (int k = 0; k < n; ++k) {
              const double th = 2.0 * kPi * k / n;
              const double g = s.radius(th);
              const double dg = s.radius_derivative(th);
              const double len = std::hypot(g, dg);
              const Vec2 er{std::cos(th), std::sin(th)};
              const Vec2 et = perp(er);
              // Outward normal of r = G(t) is (G e_r - G' e_t) / sqrt(G^2 + G'^2).
              const Vec2 inward = (er * (-g) + et * dg) / len;
              out.push_back({s.center + er * g, inward, true, th, 0, len * 2.0 * kPi / n});
            }
          },
          [&](const Graph& g) {
            check_sample_count(n);
            const double upper = g.upper_length();
            const double phi0 = g.nodes.front().y;
            const double phi1 = g.nodes.back().y;
            const double total = upper + phi0 + phi1;  // half the boundary length
            const int half = n / 2;
            auto count_for = [&](double len) {
              return std::max(1, static_cast<int>(std::ceil(half * len / total)));
            };
            auto is_corner = [&](std::size_t i) { return std::binary_search(g.corners.begin(), g.corners.end(), i); };
            auto emit_corner = [&](Vec2 p) { out.push_back({p, std::nullopt, false, p.x, 0, 0.0}); };
            // Upper polyline, left to right.
            for (std::size_t i = 0; i + 1 < g.nodes.size(); ++i) {
              if (is_corner(i)) emit_corner(g.nodes[i]);
              const Vec2 a = g.nodes[i], b = g.nodes[i + 1];
              const double slope = (b.y - a.y) / (b.x - a.x);
              const Vec2 inward = normalized(Vec2{slope, -1.0});
              const int m = count_for(dist(a, b));
              for (int k = 0; k < m; ++k) {
                const Vec2 p = a + (b - a) * ((k + 0.5) / m);
                out.push_back({p, inward, true, p.x, 0, dist(a, b) / m});
              }
            }
            emit_corner(g.nodes.back());
            // Right end wall, top to bottom.
            if (phi1 > 0.0) {
              const int m = count_for(2.0 * phi1);
              for (int k = 0; k < m; ++k) {
                const Vec2 p{g.x_hi(), phi1 - 2.0 * phi1 * (k + 0.5) / m};
                out.push_back({p, Vec2{-1.0, 0.0}, true, g.x_hi(), 0, 2.0 * phi1 / m});
              }
              emit_corner({g.x_hi(), -phi1});
            }
            // Lower polyline, right to left.
            for (std::size_t i = g.nodes.size() - 1; i > 0; --i) {
              const Vec2 a{g.nodes[i].x, -g.nodes[i].y}, b{g.nodes[i - 1].x, -g.nodes[i - 1].y};
              const double slope = (g.nodes[i].y - g.nodes[i - 1].y) / (g.nodes[i].x - g.nodes[i - 1].x);
              const Vec2 inward = normalized(Vec2{slope, 1.0});
              const int m = count_for(dist(a, b));
              for (int k = 0; k < m; ++k) {
                const Vec2 p = a + (b - a) * ((k + 0.5) / m);
                out.push_back({p, inward, true, p.x, 0, dist(a, b) / m});
              }
              if (i - 1 > 0 && is_corner(i - 1) && g.nodes[i - 1].y > 0.0) emit_corner(b);
            }
            // Left end wall, bottom to top.
            if (phi0 > 0.0) {
              emit_corner({g.x_lo(), -phi0});
              const int m = count_for(2.0 * phi0);
              for (int k = 0; k < m; ++k) {
                const Vec2 p{g.x_lo(), -phi0 + 2.0 * phi0 * (k + 0.5) / m};
                out.push_back({p, Vec2{1.0, 0.0}, true, g.x_lo(), 0, 2.0 * phi0 / m});
              }
            }
          },
          [&](const BallUnion& u) {
            check_sample_count(n);
            double rsum = 0.0;
            for (const Ball& b : u.balls) rsum += b.radius;
            for (std::size_t i = 0; i < u.balls.size(); ++i) {
              const Ball& b = u.balls[i];
              int ni = static_cast<int>(std::ceil(n * b.radius / rsum));
              ni = std::max(16, ni + (ni % 2));
              for (int k = 0; k < ni; ++k) {
                const double th = 2.0 * kPi * k / ni;
                const Vec2 uvec{std::cos(th), std::sin(th)};
                const Vec2 p = b.center + uvec * b.radius;
                bool dropped = false, junction = false;
                for (std::size_t j = 0; j < u.balls.size() && !dropped; ++j) {
                  if (j == i) continue;
                  const Ball& o = u.balls[j];
                  const double tol = kDefaultTol * std::max(1.0, o.radius);
                  const double d = dist(p, o.center);
                  if (d < o.radius - tol) dropped = true;
                  else if (d <= o.radius + tol) junction = true;
                }
                if (dropped) continue;
                const double w = 2.0 * kPi * b.radius / ni;
                if (junction) {
                  out.push_back({p, std::nullopt, false, th, static_cast<int>(i), w});
                } else {
                  out.push_back({p, -uvec, true, th, static_cast<int>(i), w});
                }
              }
            }
          },
          [&](const DisjointPair& d) {
            auto a = sample_boundary(*d.first, n);
            auto b = sample_boundary(*d.second, n);
            int shift = 0;
            for (const auto& s : a) shift = std::max(shift, s.component + 1);
            for (auto& s : b) s.component += shift;
            out = std::move(a);
            out.insert(out.end(), b.begin(), b.end());
          },
          [&](const Intervals1D& iv) {
            int c = 0;
            for (const auto& [a, b] : iv.intervals) {
              out.push_back({{a, 0.0}, Vec2{1.0, 0.0}, true, a, c, 1.0});
              out.push_back({{b, 0.0}, Vec2{-1.0, 0.0}, true, b, c, 1.0});
              ++c;
            }
          },
          [&](const Involute& inv) {
            check_sample_count(n);
            const double s_max = involute_crossing_parameter();
            const int m = n / 2;
            const double arc = 0.5 * s_max * s_max;  // length of one arc on the unit circle
            auto s_at = [&](int k) { return std::sqrt(2.0 * arc * k / m); };
            const double w = arc / m * inv.scale;
            // Upper arc from the cusp at (1, 0) out to the crossing.
            for (int k = 0; k <= m; ++k) {
              const double s = s_at(k);
              const Vec2 p = inv.center + involute_point(s) * inv.scale;
              if (k == 0 || k == m) {
                out.push_back({p, std::nullopt, false, s, 0, k == 0 ? 0.0 : w});
              } else {
                out.push_back({p, Vec2{-std::sin(s), std::cos(s)}, true, s, 0, w});
              }
            }
            // Mirror arc walked back toward the cusp.
            for (int k = m - 1; k >= 1; --k) {
              const double s = s_at(k);
              const Vec2 q = involute_point(s);
              const Vec2 p = inv.center + Vec2{q.x, -q.y} * inv.scale;
              out.push_back({p, Vec2{-std::sin(s), -std::cos(s)}, true, -s, 0, w});
            }
          },
          [&](const Offset& o) {
            check_sample_count(n);
            const auto pieces = offset_pieces(o.body, o.distance);
            double total = 0.0;
            for (const auto& pc : pieces) total += pc.length(o.distance);
            double walked = 0.0;
            for (const auto& pc : pieces) {
              const double len = pc.length(o.distance);
              if (len <= 0.0) continue;
              const int m = std::max(1, static_cast<int>(std::ceil(n * len / total)));
              for (int k = 0; k < m; ++k) {
                const double f = (k + 0.5) / m;
                if (pc.arc) {
                  const double th = pc.th0 + f * (pc.th1 - pc.th0);
                  const Vec2 u{std::cos(th), std::sin(th)};
                  out.push_back({pc.center + u * o.distance, -u, true, walked + f * len, 0, len / m});
                } else {
                  out.push_back({pc.a + (pc.b - pc.a) * f, -pc.normal, true, walked + f * len, 0, len / m});
                }
              }
              walked += len;
            }
          },
          [&](const Mapped& mp) {
            const Mat2 inv_t = mp.m.inverse().transpose();
            const double area_scale = std::sqrt(std::fabs(mp.m.det()));
            for (auto s : sample_boundary(*mp.base, n)) {
              if (s.inward_normal) {
                const Vec2 tangent = perp(*s.inward_normal);
                s.weight *= norm(mp.m * tangent);
                s.inward_normal = normalized(inv_t * *s.inward_normal);
              } else {
                s.weight *= area_scale;
              }
              s.point = mp.m * s.point + mp.t;
              out.push_back(s);
            }
          },
          [&](const Clipped& c) {
            check_sample_count(n);
            int shift = 0;
            const double tol = kDefaultTol * std::max(1.0, c.radius);
            for (auto s : sample_boundary(*c.base, n)) {
              const double d = dist(s.point, c.center);
              if (d > c.radius + tol) continue;
              if (d >= c.radius - tol) {
                s.smooth = false;
                s.inward_normal.reset();
              }
              shift = std::max(shift, s.component + 1);
              out.push_back(s);
            }
            const int nc = std::max(16, n / 2);
            for (int k = 0; k < nc; ++k) {
              const double th = 2.0 * kPi * k / nc;
              const Vec2 u{std::cos(th), std::sin(th)};
              const Vec2 p = c.center + u * c.radius;
              if (!c.base->contains(p)) continue;
              out.push_back({p, -u, true, th, shift, 2.0 * kPi * c.radius / nc});
            }
          },
      },
      domain.shape());
  if (out.empty()) throw Error(ErrorCode::EmptyBoundary, "domain boundary produced no samples");
  return out;
}

// ---------------------------------------------------------------------------
// Rasterization

std::size_t CharacteristicGrid::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double CharacteristicGrid::measure() const {
  return static_cast<double>(count()) * (dim == 1 ? h : h * h);
}

CharacteristicGrid characteristic_grid(const ShapeDomain& domain, double h, std::optional<Box> box) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidInput, "resolution must be > 0");
  CharacteristicGrid grid;
  grid.dim = domain.dimension();
  grid.h = h;
  const Box b = box.value_or(domain.bounds());
  grid.nx = std::max(1, static_cast<int>(std::ceil(b.width() / h - 1e-9)));
  grid.ny = grid.dim == 1 ? 1 : std::max(1, static_cast<int>(std::ceil(b.height() / h - 1e-9)));
  grid.box = Box{b.lo, {b.lo.x + grid.nx * h, grid.dim == 1 ? b.lo.y : b.lo.y + grid.ny * h}};
  grid.mask.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (domain.contains(grid.cell_center(i, j))) grid.mask[static_cast<std::size_t>(j) * grid.nx + i] = 1;
  return grid;
}

std::vector<Vec2> interior_samples(const ShapeDomain& domain, int budget) {
  const Box b = domain.bounds();
  if (domain.dimension() == 1) {
    const double h = b.width() / std::max(budget, 1);
    std::vector<Vec2> pts;
    for (int i = 0; i < budget; ++i) {
      const Vec2 p{b.lo.x + (i + 0.5) * h, 0.0};
      if (domain.contains(p)) pts.push_back(p);
    }
    return pts;
  }
  const double h = std::sqrt(b.width() * b.height() / std::max(budget, 1));
  const int nx = std::max(1, static_cast<int>(std::round(b.width() / h)));
  const int ny = std::max(1, static_cast<int>(std::round(b.height() / h)));
  const double hx = b.width() / nx, hy = b.height() / ny;
  std::vector<Vec2> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 p{b.lo.x + (i + 0.5) * hx, b.lo.y + (j + 0.5) * hy};
      if (domain.contains(p)) pts.push_back(p);
    }
  return pts;
}

// ---------------------------------------------------------------------------
// Dilation

ShapeDomain dilate(const ShapeDomain& domain, double factor, Vec2 center) {
  if (!(factor > 0.0)) throw Error(ErrorCode::NonPositiveParam, "dilation factor must be > 0");
  auto map_point = [&](Vec2 p) { return center + (p - center) * factor; };
  return std::visit(
      overloaded{
          [&](const StarPolar& s) {
            std::vector<double> g = s.g;
            for (double& v : g) v *= factor;
            return ShapeDomain::star_polar(map_point(s.center), std::move(g));
          },
          [&](const Graph& g) {
            if (center.y != 0.0) {
              return ShapeDomain::mapped(domain, Mat2{factor, 0.0, 0.0, factor}, center * (1.0 - factor));
            }
            std::vector<Vec2> nodes = g.nodes;
            for (Vec2& n : nodes) n = {center.x + (n.x - center.x) * factor, n.y * factor};
            return ShapeDomain::graph(std::move(nodes), g.corners);
          },
          [&](const BallUnion& u) {
            std::vector<Ball> balls = u.balls;
            for (Ball& b : balls) b = {map_point(b.center), b.radius * factor};
            return ShapeDomain::ball_union(std::move(balls));
          },
          [&](const DisjointPair& d) {
            return ShapeDomain::disjoint_pair(dilate(*d.first, factor, center), dilate(*d.second, factor, center),
                                              d.delta * factor);
          },
          [&](const Intervals1D& iv) {
            auto list = iv.intervals;
            for (auto& [a, b] : list) {
              a = center.x + (a - center.x) * factor;
              b = center.x + (b - center.x) * factor;
            }
            return ShapeDomain::intervals(std::move(list));
          },
          [&](const Involute& inv) { return ShapeDomain::involute(map_point(inv.center), inv.scale * factor); },
          [&](const Offset& o) {
            return ShapeDomain::offset(o.body.transformed(Mat2{factor, 0.0, 0.0, factor}, center * (1.0 - factor)),
                                       o.distance * factor);
          },
          [&](const Mapped& m) {
            return ShapeDomain::mapped(*m.base, Mat2{factor * m.m.a, factor * m.m.b, factor * m.m.c, factor * m.m.d},
                                       map_point(m.t));
          },
          [&](const Clipped& c) {
            return ShapeDomain::clipped(dilate(*c.base, factor, center), map_point(c.center), c.radius * factor);
          },
      },
      domain.shape());
}

// ---------------------------------------------------------------------------
// Gallery

double comb_height(int n) {
  const double nn = n;
  return std::sqrt((1.0 - 1.0 / nn) / (2.0 * nn * (nn + 1.0)));
}

double comb_partial_perimeter(int n_max) {
  double p = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double nn = n;
    const double a = comb_height(n);
    p += std::sqrt(a * a + 1.0 / (4.0 * nn * nn * (nn + 1.0) * (nn + 1.0)));
  }
  return p;
}

double involute_crossing_parameter() {
  // Root of tan s = s in (pi, 3 pi / 2), by Newton on f(s) = s cos s - sin s.
  static const double root = [] {
    double s = 4.49;
    for (int it = 0; it < 50; ++it) {
      const double f = s * std::cos(s) - std::sin(s);
      const double df = -s * std::sin(s);
      s -= f / df;
    }
    return s;
  }();
  return root;
}

namespace {

double scalar_param(const GalleryParams& p, const std::string& key, std::optional<double> fallback = std::nullopt) {
  auto it = p.scalars.find(key);
  if (it == p.scalars.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::NonPositiveParam, "missing parameter '" + key + "'");
  }
  if (!(it->second > 0.0) || !std::isfinite(it->second))
    throw Error(ErrorCode::NonPositiveParam, "parameter '" + key + "' must be positive");
  return it->second;
}

int integer_param(const GalleryParams& p, const std::string& key, int minimum) {
  const double v = scalar_param(p, key);
  if (v != std::floor(v) || v < minimum || v > 1e7)
    throw Error(ErrorCode::NonPositiveParam,
                "parameter '" + key + "' must be an integer >= " + std::to_string(minimum));
  return static_cast<int>(v);
}

}  // namespace

ShapeDomain make_gallery(const std::string& name, const GalleryParams& params) {
  if (name == "involute") {
    return ShapeDomain::involute({0.0, 0.0}, scalar_param(params, "scale", 1.0));
  }
  if (name == "cusp_chain") {
    const int n_max = integer_param(params, "n_max", 1);
    std::vector<Ball> balls;
    for (int n = 1; n <= n_max; ++n) {
      const double r = std::ldexp(1.0, -(n + 1));
      balls.push_back({{3.0 * r, 0.0}, r});
    }
    return ShapeDomain::ball_union(std::move(balls));
  }
  if (name == "triangle_comb") {
    // Triangle n = 1 has zero height, so the profile starts at n = 2.
    const int n_max = integer_param(params, "n_max", 2);
    std::vector<Vec2> nodes;
    std::vector<std::size_t> corners;
    for (int n = n_max; n >= 2; --n) {
      const double nn = n;
      if (nodes.empty()) nodes.push_back({1.0 / (nn + 1.0), 0.0});
      nodes.push_back({0.5 * (1.0 / nn + 1.0 / (nn + 1.0)), comb_height(n)});
      nodes.push_back({1.0 / nn, 0.0});
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) corners.push_back(i);
    return ShapeDomain::graph(std::move(nodes), std::move(corners));
  }
  if (name == "two_disk") {
    const double r = scalar_param(params, "R");
    return ShapeDomain::ball_union({{{-1.0, 0.0}, r}, {{1.0, 0.0}, r}});
  }
  if (name == "star_circle") {
    const double r = scalar_param(params, "radius", 1.0);
    return ShapeDomain::star_polar({0.0, 0.0}, std::vector<double>(64, r));
  }
  if (name == "offset_of_convex") {
    if (!params.convex) throw Error(ErrorCode::NonPositiveParam, "offset_of_convex needs a convex body");
    return ShapeDomain::offset(*params.convex, scalar_param(params, "d"));
  }
  if (name == "shrinking_pair") {
    const int n = integer_param(params, "n", 2);
    const double r = 1.0 - 1.0 / n;
    return ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{0.0, 0.0}, r}}),
                                      ShapeDomain::ball_union({{{2.0, 0.0}, r}}), 2.0 / n);
  }
  if (name == "remark222_intervals") {
    const double n = scalar_param(params, "n");
    return ShapeDomain::intervals({{-1.0 / n, 1.0 / n}, {1.0, 2.0}});
  }
  throw Error(ErrorCode::UnknownGallery, "no gallery entry named '" + name + "'");
}

}  // namespace gnp
