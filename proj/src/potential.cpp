#include "gnplab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "gnplab/error.hpp"

namespace gnp {

namespace {


struct Rule {
  std::vector<double> x;  // nodes on [0, 1]
  std::vector<double> w;
};

Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = 0.5 * (1.0 - z);
    r.x[n - 1 - i] = 0.5 * (1.0 + z);
    r.w[i] = r.w[n - 1 - i] = 0.5 * w;
  }
  return r;
}

const Rule& cached_rule(int n) {
  static thread_local std::map<int, Rule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

Vec2 interior_point(const ConvexBody& c) {
  if (const auto* b = std::get_if<Ball>(&c.shape())) return b->center;
  Vec2 s{0, 0};
  const auto pts = boundary_points(c, 64);
  for (const auto& p : pts) s = s + p.point;
  return s * (1.0 / pts.size());
}

// Parameter interval {t >= 0 : x + t d in C}, d a unit vector.
std::optional<std::pair<double, double>> chord(const ConvexBody& c, Vec2 x, Vec2 d) {
  if (const auto* b = std::get_if<Ball>(&c.shape())) {
    const Vec2 q = x - b->center;
    const double bq = dot(q, d);
    const double disc = bq * bq - (dot(q, q) - b->radius * b->radius);
    if (disc <= 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    const double t0 = std::max(0.0, -bq - s), t1 = -bq + s;
    if (t1 <= t0) return std::nullopt;
    return std::pair{t0, t1};
  }
  const Box bb = c.bounds();
  const double t_max = dist(x, 0.5 * (bb.lo + bb.hi)) + bb.diameter() + 1.0;
  auto g = [&](double t) { return c.signed_distance(x + t * d); };
  double t_in = 0.0;
  if (g(0.0) >= 0.0) {
    // signed distance is convex along the line
    double a = 0.0, b = t_max;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - r * (b - a), c2 = a + r * (b - a);
    double g1 = g(c1), g2 = g(c2);
    for (int it = 0; it < 100; ++it) {
      if (g1 < g2) {
        b = c2;
        c2 = c1;
        g2 = g1;
        c1 = b - r * (b - a);
        g1 = g(c1);
      } else {
        a = c1;
        c1 = c2;
        g1 = g2;
        c2 = a + r * (b - a);
        g2 = g(c2);
      }
    }
    t_in = 0.5 * (a + b);
    if (g(t_in) >= 0.0) return std::nullopt;
  }
  auto crossing = [&](double inside, double outside) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (g(mid) < 0.0) inside = mid;
      else outside = mid;
    }
    return 0.5 * (inside + outside);
  };
  const double t0 = t_in > 0.0 ? crossing(t_in, 0.0) : 0.0;
  const double t1 = crossing(t_in, t_max);
  return std::pair{t0, t1};
}

// Angular window [a, b] of directions from x that meet C, for x outside C.
std::pair<double, double> angular_window(const ConvexBody& c, Vec2 x) {
  const Vec2 p = interior_point(c);
  const double base = std::atan2(p.y - x.y, p.x - x.x);
  if (const auto* b = std::get_if<Ball>(&c.shape())) {
    const double half = std::asin(std::min(1.0, b->radius / dist(x, b->center)));
    return {base - half, base + half};
  }
  double lo = 0.0, hi = 0.0;
  for (const Vec2& v : std::get<Polytope>(c.shape()).vertices) {
    double a = std::atan2(v.y - x.y, v.x - x.x) - base;
    a = std::remainder(a, 2.0 * kPi);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return {base + lo, base + hi};
}

double image_norm(double radius, Vec2 x, Vec2 y) {
  const double s = dot(x, x) * dot(y, y) / (radius * radius) - 2.0 * dot(x, y) + radius * radius;
  return std::sqrt(std::max(s, 0.0));
}

}  // namespace

double fundamental_solution(int n_dim, double r) {
  if (n_dim != 2 && n_dim != 3) throw Error(ErrorCode::InvalidInput, "dimension must be 2 or 3");
  if (!(r > 1e-14)) throw Error(ErrorCode::SingularPoint, "fundamental solution at the origin");
  if (n_dim == 2) return -std::log(r) / (2.0 * kPi);
  return 1.0 / (4.0 * kPi * r);
}

double fundamental_solution(int n_dim, Vec2 x) { return fundamental_solution(n_dim, norm(x)); }

double green_disk(double radius, Vec2 x, Vec2 y, int n_dim) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonPositiveParam, "radius must be positive");
  const double lim = radius * (1.0 + 1e-12);
  if (norm(x) > lim || norm(y) > lim) throw Error(ErrorCode::InvalidInput, "points must lie in the closed ball");
  const double d = dist(x, y);
  if (!(d > 1e-14)) throw Error(ErrorCode::SingularPair, "x and y coincide");
  // symmetric in (x, y) term by term
  const double img = image_norm(radius, x, y);
  if (n_dim == 2) return (std::log(img) - std::log(d)) / (2.0 * kPi);
  if (n_dim == 3) return (1.0 / d - 1.0 / img) / (4.0 * kPi);
  throw Error(ErrorCode::InvalidInput, "dimension must be 2 or 3");
}

SourceDensity SourceDensity::make(ConvexBody support, std::function<double(Vec2)> f, int angular, int radial) {
  if (!(support.area() > 0.0)) throw Error(ErrorCode::InvalidInput, "source support needs positive area");
  if (angular < 8 || radial < 2) throw Error(ErrorCode::InvalidInput, "quadrature too small");
  SourceDensity s{support, std::move(f), {}, {}, {}};
  const Vec2 p = interior_point(support);
  const Rule& rr = cached_rule(radial);
  const double dt = 2.0 * kPi / angular;
  for (int a = 0; a < angular; ++a) {
    const double th = a * dt;
    const Vec2 d{std::cos(th), std::sin(th)};
    const auto ch = chord(support, p, d);
    if (!ch) continue;
    const double r1 = ch->second;
    for (int k = 0; k < radial; ++k) {
      const double r = r1 * rr.x[k];
      const Vec2 y = p + r * d;
      const double v = s.f(y);
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "density must be finite and nonnegative");
      s.nodes.push_back(y);
      s.weights.push_back(dt * r1 * rr.w[k] * r);
      s.values.push_back(v);
    }
  }
  return s;
}

SourceDensity SourceDensity::constant(ConvexBody support, double value, int angular, int radial) {
  return make(std::move(support), [value](Vec2) { return value; }, angular, radial);
}

double SourceDensity::total_weight() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

double SourceDensity::integral(const std::function<double(Vec2)>& g) const {
  double t = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) t += weights[i] * values[i] * g(nodes[i]);
  return t;
}

std::vector<double> solve_U_R(double radius, const SourceDensity& f, const std::vector<Vec2>& eval_points, int angular,
                              int radial) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonPositiveParam, "radius must be positive");
  for (const auto& b : boundary_points(f.support, 256))
    if (norm(b.point) > radius) throw Error(ErrorCode::SupportOutsideBall, "source support leaves B_R");
  if (angular < 8 || radial < 2) throw Error(ErrorCode::InvalidInput, "quadrature too small");
  const Rule& rr = cached_rule(radial);
  std::vector<double> out;
  out.reserve(eval_points.size());
  for (const Vec2& x : eval_points) {
    if (norm(x) > radius * (1.0 + 1e-12)) throw Error(ErrorCode::SupportOutsideBall, "evaluation point leaves B_R");
    const bool inside = f.support.signed_distance(x) < 0.0;
    double th0 = 0.0, th1 = 2.0 * kPi;
    if (!inside) std::tie(th0, th1) = angular_window(f.support, x);
    // periodic trapezoid around an interior point, Gauss-Legendre on a window
    const Rule* ar = inside ? nullptr : &cached_rule(angular);
    double total = 0.0;
    for (int a = 0; a < angular; ++a) {
      double th, wt;
      if (inside) {
        th = th0 + (th1 - th0) * a / angular;
        wt = (th1 - th0) / angular;
      } else {
        th = th0 + (th1 - th0) * ar->x[a];
        wt = (th1 - th0) * ar->w[a];
      }
      const Vec2 d{std::cos(th), std::sin(th)};
      const auto ch = chord(f.support, x, d);
      if (!ch) continue;
      const auto [t0, t1] = *ch;
      double line = 0.0;
      for (int k = 0; k < radial; ++k) {
        double r, jac;
        if (t0 == 0.0) {
          // r = t1 s^2 smooths the r log r behaviour at the pole
          const double s = rr.x[k];
          r = t1 * s * s;
          jac = 2.0 * t1 * s;
        } else {
          r = t0 + (t1 - t0) * rr.x[k];
          jac = t1 - t0;
        }
        if (r <= 0.0) continue;
        const Vec2 y = x + r * d;
        const double fy = f.f(y);
        if (fy == 0.0) continue;
        line += rr.w[k] * jac * r * fy * green_disk(radius, x, y, 2);
      }
      total += wt * line;
    }
    out.push_back(total);
  }
  return out;
}

double radial_indicator_solution(double radius, double rho, double r) {
  if (!(rho > 0.0 && rho <= radius)) throw Error(ErrorCode::InvalidInput, "need 0 < rho <= R");
  if (r <= rho) return rho * rho / 4.0 + 0.5 * rho * rho * std::log(radius / rho) - r * r / 4.0;
  return 0.5 * rho * rho * std::log(radius / r);
}

ScanResult j_bound_scan(const std::vector<double>& radii, const SourceDensity& f, double k,
                        const std::vector<double>& volumes, int n_dim, double big_f) {
  if (n_dim != 2) throw Error(ErrorCode::InvalidInput, "the scan supports planar domains only (N = 2)");
  if (radii.size() < 2 || radii.size() != volumes.size())
    throw Error(ErrorCode::InvalidInput, "need at least two radii with one volume each");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw Error(ErrorCode::NonPositiveParam, "radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorCode::InvalidInput, "radii must increase");
  }
  ScanResult res;
  const double mass = f.integral([](Vec2) { return 1.0; });
  res.min_volume_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    ScanRow row;
    row.radius = r;
    const std::vector<double> u = solve_U_R(r, f, f.nodes, 96, 16);
    for (std::size_t j = 0; j < u.size(); ++j) row.int_f_u += f.weights[j] * f.values[j] * u[j];
    row.volume = volumes[i];
    row.volume_ratio = volumes[i] / (r * r);
    row.c1 = 2.0 * r * mass;
    row.bound = -0.5 * row.int_f_u + k * k * row.volume;
    res.min_volume_ratio = std::min(res.min_volume_ratio, row.volume_ratio);
    res.rows.push_back(row);
  }
  for (auto& row : res.rows)
    row.linear_bound = big_f - 2.0 * row.c1 * row.radius + k * k * res.min_volume_ratio * row.radius * row.radius;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(res.rows.size());
  bool positive = true;
  for (const auto& row : res.rows) {
    if (!(row.bound > 0.0)) positive = false;
    const double lx = std::log(row.radius), ly = std::log(std::max(row.bound, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  if (positive) {
    res.exponent_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const auto& a = res.rows[res.rows.size() - 2];
    const auto& b = res.rows.back();
    res.exponent_last = std::log(b.bound / a.bound) / std::log(b.radius / a.radius);
  } else {
    res.exponent_fit = res.exponent_last = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace gnp
