#include "gnplab/gnp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnplab/error.hpp"

namespace gnp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AmbientBall {
  Vec2 center;
  double radius;
};

AmbientBall ambient_ball(const ShapeDomain& omega, const ConvexBody& c) {
  const Box box = omega.bounds().merged(c.bounds());
  return {box.center(), 0.55 * box.diameter() + kDefaultTol};
}

// Exit parameter of {o + t d} from the ambient ball; o is inside.
double exit_parameter(const AmbientBall& d, Vec2 o, Vec2 dir) {
  const Vec2 q = o - d.center;
  const double b = dot(q, dir);
  const double cc = norm2(q) - d.radius * d.radius;
  return -b + std::sqrt(std::max(0.0, b * b - cc));
}

void require_planar(const ShapeDomain& omega) {
  if (omega.dimension() != 2) throw Error(ErrorCode::DegenerateDomain, "class checks need a planar domain");
}

void finalize(CheckReport& r) {
  r.pass = true;
  for (const auto& [name, ok] : r.conditions) r.pass = r.pass && ok;
  if (!r.pass && !r.witness) r.witness = Witness{"unspecified", std::nullopt, {}};
}

}  // namespace

CheckReport check_c_gnp(const ShapeDomain& omega, const ConvexBody& c, int n, const GnpOptions& opt) {
  require_planar(omega);
  CheckReport r;
  const double tol = opt.tol;
  const AmbientBall d = ambient_ball(omega, c);

  // (1) int(C) inside omega.
  std::size_t c1_fail = 0;
  const auto interior = interior_points(c, opt.interior_budget, tol);
  for (const Vec2& p : interior) {
    if (!omega.contains(p)) {
      if (c1_fail == 0) r.witness = Witness{"interior_contained", std::nullopt, p};
      ++c1_fail;
    }
  }
  r.conditions["interior_contained"] = c1_fail == 0;
  r.stats["interior_points"] = static_cast<double>(interior.size());
  r.stats["interior_failures"] = static_cast<double>(c1_fail);

  // (3) outward rays from C meet omega in one run.
  std::size_t c3_fail = 0;
  std::size_t rays = 0;
  for (const auto& bp : boundary_points(c, n)) {
    if (!bp.normal) continue;
    ++rays;
    const Vec2 nu = *bp.normal;
    const double t_exit = exit_parameter(d, bp.point, nu);
    int runs = 0;
    bool inside = false;
    for (int k = 0; k < opt.march_steps; ++k) {
      const double t = t_exit * (k + 0.5) / opt.march_steps;
      const bool now = omega.contains(bp.point + nu * t);
      if (now && !inside) ++runs;
      inside = now;
    }
    if (runs > 1) {
      if (c3_fail == 0 && !r.witness) r.witness = Witness{"outward_ray_connected", std::nullopt, bp.point};
      ++c3_fail;
    }
  }
  r.conditions["outward_ray_connected"] = c3_fail == 0;
  r.stats["outward_rays"] = static_cast<double>(rays);
  r.stats["outward_ray_failures"] = static_cast<double>(c3_fail);

  // (4) inward normal rays meet C; (2) only reported.
  const auto samples = sample_boundary(omega, n);
  double margin = kInf;
  std::size_t c4_fail = 0, on_c = 0;
  std::optional<Witness> worst;
  for (const auto& s : samples) {
    if (!s.smooth || !s.inward_normal) {
      ++r.skipped_nonsmooth;
      continue;
    }
    if (c.contains(s.point, tol)) {
      ++on_c;
      continue;
    }
    ++r.samples_used;
    const double clearance = ray_clearance(c, s.point, *s.inward_normal);
    if (clearance < -tol) ++c4_fail;
    if (clearance < margin) {
      margin = clearance;
      worst = Witness{"inward_ray_meets_c", s, project(c, s.point)};
    }
  }
  r.worst_margin = margin;
  r.conditions["inward_ray_meets_c"] = c4_fail == 0;
  if (c4_fail > 0 && (!r.witness || c1_fail + c3_fail == 0)) r.witness = worst;
  r.stats["failing_samples"] = static_cast<double>(c4_fail);
  r.stats["samples_on_c"] = static_cast<double>(on_c);
  r.stats["nonsmooth_fraction"] =
      samples.empty() ? 0.0 : static_cast<double>(r.skipped_nonsmooth) / static_cast<double>(samples.size());
  finalize(r);
  return r;
}

CheckReport check_c_sp(const ShapeDomain& omega, const ConvexBody& c, int n_boundary, int n_interior, double tol) {
  require_planar(omega);
  CheckReport r;
  const auto boundary = sample_boundary(omega, n_boundary);
  auto interior = interior_samples(omega, n_interior);
  // near-boundary copies: the cone meets omega first in thin wedges at the tangent
  const double fs = omega.feature_size();
  for (const auto& s : boundary) {
    if (!s.inward_normal) continue;
    for (double t : {1e-4, 1e-3, 1e-2}) {
      const Vec2 y = s.point + *s.inward_normal * (t * fs);
      if (omega.contains(y)) interior.push_back(y);
    }
  }
  double margin = kInf;
  std::size_t failing = 0;
  for (const auto& s : boundary) {
    if (c.contains(s.point, tol)) continue;
    ++r.samples_used;
    if (!s.smooth) ++r.skipped_nonsmooth;  // kept: the cone test needs no normal
    bool bad = false;
    for (const Vec2& y : interior) {
      const double len = dist(y, s.point);
      if (len == 0.0) continue;
      const double m = normal_cone_sup(c, s.point, y) / len;
      if (m < -tol) bad = true;
      if (m < margin) {
        margin = m;
        if (m < -tol) r.witness = Witness{"cone_disjoint", s, y};
      }
    }
    if (bad) ++failing;
  }
  r.worst_margin = margin;
  r.conditions["cone_disjoint"] = failing == 0;
  r.stats["failing_samples"] = static_cast<double>(failing);
  r.stats["interior_samples"] = static_cast<double>(interior.size());
  finalize(r);
  return r;
}

CheckReport check_eps_ball_gnp(const ShapeDomain& omega, double eps, double tol) {
  const auto* sp = omega.as<StarPolar>();
  if (!sp) throw Error(ErrorCode::NotStarPolar, "eps-ball check needs a star-polar domain");
  CheckReport r;
  const int m = std::max<int>(4096, 8 * static_cast<int>(sp->g.size()));
  double worst = 0.0, worst_theta = 0.0, gmin = kInf;
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * kPi * k / m;
    const double g = sp->radius(th);
    const double dg = sp->radius_derivative(th);
    const double lhs = (g * dg) * (g * dg) / (g * g + dg * dg);
    gmin = std::min(gmin, g);
    if (lhs > worst) {
      worst = lhs;
      worst_theta = th;
    }
  }
  r.samples_used = static_cast<std::size_t>(m);
  r.worst_margin = eps * eps - worst;
  r.conditions["polar_inequality"] = r.worst_margin >= -tol;
  r.conditions["radius_exceeds_eps"] = gmin > eps;
  r.stats["max_lhs"] = worst;
  r.stats["min_radius"] = gmin;
  if (!r.conditions["polar_inequality"] || !r.conditions["radius_exceeds_eps"]) {
    const Vec2 p = sp->center + Vec2{std::cos(worst_theta), std::sin(worst_theta)} * sp->radius(worst_theta);
    r.witness = Witness{r.conditions["polar_inequality"] ? "radius_exceeds_eps" : "polar_inequality", std::nullopt, p};
  }
  finalize(r);
  return r;
}

CheckReport check_graph_gnp(const ShapeDomain& omega, double c_lo, double c_hi, FootSign sign, int n, double tol) {
  if (!omega.as<Graph>()) throw Error(ErrorCode::NotGraph, "foot check needs a graph domain");
  CheckReport r;
  double margin = kInf, foot_min = kInf, foot_max = -kInf;
  std::size_t failing = 0;
  for (const auto& s : sample_boundary(omega, n)) {
    if (!s.smooth || !s.inward_normal) {
      ++r.skipped_nonsmooth;
      continue;
    }
    const Vec2 nu = *s.inward_normal;
    // Only the upper graph: end walls have horizontal normals.
    if (s.point.y <= 0.0 || nu.y >= 0.0) continue;
    ++r.samples_used;
    const double slope = -nu.x / nu.y;
    const double pp = s.point.y * slope;
    const double foot = sign == FootSign::Geometric ? s.point.x + pp : s.point.x - pp;
    foot_min = std::min(foot_min, foot);
    foot_max = std::max(foot_max, foot);
    const double m = std::min(c_hi - foot, foot - c_lo);
    if (m < -tol) ++failing;
    if (m < margin) {
      margin = m;
      if (m < -tol) r.witness = Witness{"foot_in_segment", s, {foot, 0.0}};
    }
  }
  r.worst_margin = margin;
  r.conditions["foot_in_segment"] = failing == 0;
  r.stats["failing_samples"] = static_cast<double>(failing);
  r.stats["foot_min"] = foot_min;
  r.stats["foot_max"] = foot_max;
  finalize(r);
  return r;
}

CheckReport check_pair_class(const ShapeDomain& omega, const ConvexBody& c1, const ConvexBody& c2, PairMode mode,
                             int n, std::optional<double> delta, double tol) {
  const auto* pair = omega.as<DisjointPair>();
  if (!pair) throw Error(ErrorCode::DegenerateDomain, "pair check needs a disjoint pair");
  const double target = delta.value_or(pair->delta);
  CheckReport r;
  const CheckReport a = check_c_gnp(*pair->first, c1, n, {.tol = tol});
  const CheckReport b = check_c_gnp(*pair->second, c2, n, {.tol = tol});
  r.conditions["first_gnp"] = a.pass;
  r.conditions["second_gnp"] = b.pass;
  r.samples_used = a.samples_used + b.samples_used;
  r.skipped_nonsmooth = a.skipped_nonsmooth + b.skipped_nonsmooth;

  std::vector<Vec2> from;
  for (const auto& s : sample_boundary(*pair->first, 2 * n)) from.push_back(s.point);
  for (const Vec2& p : interior_samples(*pair->first, n)) from.push_back(p);
  std::vector<Vec2> to;
  for (const auto& s : sample_boundary(*pair->second, 2 * n)) to.push_back(s.point);

  double sep = kInf;
  Vec2 sep_point{};
  if (mode == PairMode::Distance) {
    for (const Vec2& x : from) {
      double dx = pair->second->contains(x) ? 0.0 : kInf;
      for (const Vec2& y : to) dx = std::min(dx, dist(x, y));
      if (dx < sep) {
        sep = dx;
        sep_point = x;
      }
    }
  } else {
    const ConvexBody hull = ConvexBody::hull(to);
    for (const Vec2& x : from) {
      const double dx = dist(x, project(hull, x));
      if (dx < sep) {
        sep = dx;
        sep_point = x;
      }
    }
  }
  r.stats["separation"] = sep;
  r.stats["delta"] = target;
  r.stats["first_margin"] = a.worst_margin;
  r.stats["second_margin"] = b.worst_margin;
  r.conditions["separated"] = sep >= target - tol;
  r.worst_margin = std::min({a.worst_margin, b.worst_margin, sep - target});
  if (!r.conditions["separated"]) {
    r.witness = Witness{"separated", std::nullopt, sep_point};
  } else if (!a.pass) {
    r.witness = a.witness;
  } else if (!b.pass) {
    r.witness = b.witness;
  }
  finalize(r);
  return r;
}

CheckReport check_local_class(const ShapeDomain& omega, const std::vector<Patch>& patches, LocalMode mode, int n,
                              double tol) {
  require_planar(omega);
  if (patches.empty()) throw Error(ErrorCode::BoundaryNotCovered, "no patches given");
  for (std::size_t i = 0; i < patches.size(); ++i)
    for (std::size_t j = i + 1; j < patches.size(); ++j)
      if (dist(patches[i].center, patches[j].center) <= patches[i].radius + patches[j].radius)
        throw Error(ErrorCode::PatchOverlap, "patch balls " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " intersect");
  double cover = kInf;
  for (const auto& s : sample_boundary(omega, n)) {
    double best = -kInf;
    for (const Patch& p : patches) best = std::max(best, p.radius - dist(s.point, p.center));
    cover = std::min(cover, best);
  }
  if (cover < -tol) throw Error(ErrorCode::BoundaryNotCovered, "boundary leaves the patch balls");

  CheckReport r;
  r.worst_margin = kInf;
  r.stats["coverage_margin"] = cover;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const Patch& p = patches[i];
    const ShapeDomain local = ShapeDomain::clipped(omega, p.center, p.radius);
    const ConvexBody ref = ConvexBody::ball(p.reference.center, p.reference.radius);
    const CheckReport pr = mode == LocalMode::Gnp ? check_c_gnp(local, ref, n, {.tol = tol})
                                                  : check_c_sp(local, ref, n, 2048, tol);
    const std::string key = "patch_" + std::to_string(i);
    r.conditions[key] = pr.pass;
    r.stats[key + "_margin"] = pr.worst_margin;
    r.samples_used += pr.samples_used;
    r.skipped_nonsmooth += pr.skipped_nonsmooth;
    r.worst_margin = std::min(r.worst_margin, pr.worst_margin);
    if (!pr.pass && !r.witness) r.witness = pr.witness;
  }
  finalize(r);
  return r;
}

CheckReport affine_map_check(const ShapeDomain& omega, const ConvexBody& c, const Mat2& m, Vec2 t, int n,
                             const GnpOptions& opt) {
  if (std::fabs(m.det()) <= 1e-9) throw Error(ErrorCode::SingularMap, "|det M| must exceed 1e-9");
  const CheckReport before = check_c_gnp(omega, c, n, opt);
  const ShapeDomain image = ShapeDomain::mapped(omega, m, t);
  const ConvexBody c_image = c.transformed(m, t, 128);
  CheckReport after = check_c_gnp(image, c_image, n, opt);
  after.stats["margin_before"] = before.worst_margin;
  after.stats["margin_after"] = after.worst_margin;
  after.stats["pass_before"] = before.pass ? 1.0 : 0.0;
  return after;
}

}  // namespace gnp
