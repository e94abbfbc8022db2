#include "gnplab/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnplab/error.hpp"

namespace gnp {

ThicknessStats thickness_stats(const std::vector<ThicknessSample>& samples) {
  ThicknessStats s;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    s.m = std::max(s.m, samples[i].d);
    if (n < 2) continue;
    const ThicknessSample& a = samples[i];
    const ThicknessSample& b = samples[(i + 1) % n];
    const double chord = dist(a.c, b.c);
    if (chord < 1e-14) continue;
    s.k = std::max(s.k, std::fabs(a.d - b.d) / chord);
    s.l_nu = std::max(s.l_nu, dist(a.nu, b.nu) / chord);
  }
  s.margin = 1.0 - (s.k + s.m * s.l_nu);
  return s;
}

ThicknessField compute_thickness(const ConvexBody& c, const ShapeDomain& omega, int n) {
  if (omega.dimension() != 2) throw Error(ErrorCode::DegenerateDomain, "thickness needs a planar domain");
  const double t_max = omega.bounds().merged(c.bounds()).diameter();
  constexpr int kMarch = 512;
  ThicknessField field{c, {}, {}, !c.is_ball(), 1.0};
  const auto pts = boundary_points(c, n);
  for (const auto& bp : pts) {
    if (!bp.normal) continue;
    const Vec2 nu = *bp.normal;
    auto inside = [&](double t) { return omega.contains(bp.point + nu * t); };
    if (inside(t_max)) throw Error(ErrorCode::RayNeverExits, "outward ray does not leave the domain");
    int exit_step = -1;
    for (int k = 1; k <= kMarch; ++k) {
      const bool in = inside(t_max * k / kMarch);
      if (!in && exit_step < 0) exit_step = k;
      if (in && exit_step >= 0)
        throw Error(ErrorCode::GNPViolated, "outward ray meets the domain in more than one run");
    }
    double lo = t_max * (exit_step - 1) / kMarch, hi = t_max * exit_step / kMarch;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    const double d = 0.5 * (lo + hi);
    if (!(d > 1e-10)) throw Error(ErrorCode::GNPViolated, "thickness vanishes on the boundary of C");
    field.samples.push_back({bp.point, nu, d});
  }
  if (field.samples.empty()) throw Error(ErrorCode::EmptyBoundary, "no boundary point of C carries a normal");
  field.coverage = static_cast<double>(field.samples.size()) / static_cast<double>(pts.size());
  field.stats = thickness_stats(field.samples);
  return field;
}

BilipschitzVerdict bilipschitz_margin(const ThicknessField& field) {
  const ThicknessStats& s = field.stats;
  const double lip = s.k + s.m * s.l_nu;
  return {1.0 - lip, 1.0 - lip > 0.0, 1.0 - lip, 1.0 + lip};
}

RatioBounds empirical_ratio_bounds(const ThicknessField& field) {
  RatioBounds r{std::numeric_limits<double>::infinity(), 0.0, 0};
  const auto& s = field.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec2 pi = s[i].image();
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double base = dist(s[i].c, s[j].c);
      if (base < 1e-14) continue;
      const double q = dist(pi, s[j].image()) / base;
      r.min_ratio = std::min(r.min_ratio, q);
      r.max_ratio = std::max(r.max_ratio, q);
      ++r.pairs;
    }
  }
  return r;
}

}  // namespace gnp
