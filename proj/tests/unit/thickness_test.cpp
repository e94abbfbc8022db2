#include <cmath>

#include "doctest.h"
#include "gnplab/error.hpp"
#include "gnplab/thickness.hpp"

using namespace gnp;

namespace {

ShapeDomain star(double (*g)(double)) { return ShapeDomain::star_polar({0, 0}, g, 64); }

}  // namespace

TEST_CASE("offset circle") {
  const auto disk = ConvexBody::ball({0, 0}, 1);
  const auto f = compute_thickness(disk, ShapeDomain::star_polar({0, 0}, std::vector<double>(64, 1.3)), 256);
  CHECK(f.stats.k <= 1e-6);
  CHECK(std::fabs(f.stats.m - 0.3) <= 1e-6);
  CHECK(std::fabs(f.stats.l_nu - 1.0) <= 1e-3);
  const auto v = bilipschitz_margin(f);
  CHECK(v.verdict);
  CHECK(std::fabs(v.margin - 0.7) <= 1e-3);
  const auto r = empirical_ratio_bounds(f);
  CHECK(std::fabs(r.min_ratio - 1.3) <= 1e-6);
  CHECK(std::fabs(r.max_ratio - 1.3) <= 1e-6);
}

TEST_CASE("concentric star thickness follows the polar formula") {
  const auto omega = star([](double t) { return 1.2 + 0.1 * std::cos(t); });
  const auto f = compute_thickness(ConvexBody::ball({0, 0}, 1), omega, 128);
  for (const auto& s : f.samples) {
    const double t = std::atan2(s.c.y, s.c.x);
    CHECK(std::fabs(s.d - (0.2 + 0.1 * std::cos(t))) < 1e-9);
  }
}

TEST_CASE("envelope and reconstruction on a wobbly star") {
  const auto omega = star([](double t) { return 1.2 + 0.05 * std::cos(t); });
  const auto f = compute_thickness(ConvexBody::ball({0, 0}, 1), omega, 256);
  const auto v = bilipschitz_margin(f);
  REQUIRE(v.verdict);
  const auto r = empirical_ratio_bounds(f);
  CHECK(r.min_ratio >= v.lower_ratio - 1e-6);
  CHECK(r.max_ratio <= v.upper_ratio + 1e-6);
  for (const auto& s : f.samples) {
    CHECK(omega.contains(s.image() - s.nu * 1e-8));
    CHECK_FALSE(omega.contains(s.image() + s.nu * 1e-8));
  }
}

TEST_CASE("estimates are stable under refinement") {
  const auto omega = star([](double t) { return 1.25 + 0.05 * std::cos(2 * t); });
  const auto disk = ConvexBody::ball({0, 0}, 1);
  const auto a = compute_thickness(disk, omega, 512).stats;
  const auto b = compute_thickness(disk, omega, 1024).stats;
  CHECK(std::fabs(a.k - b.k) < 0.05 * b.k);
  CHECK(std::fabs(a.l_nu - b.l_nu) < 0.05 * b.l_nu);
}

TEST_CASE("segment fields are partial") {
  const auto seg = ConvexBody::segment({-0.5, 0}, {0.5, 0});
  const auto f = compute_thickness(seg, ShapeDomain::offset(seg, 0.4), 128);
  CHECK(f.partial);
  for (const auto& s : f.samples) CHECK(std::fabs(s.d - 0.4) < 1e-9);
}

TEST_CASE("high-curvature ellipse") {
  const auto ell = ConvexBody::ellipse({0, 0}, Mat2{1, 0, 0, 0.1}, 256);
  const auto f = compute_thickness(ell, ShapeDomain::offset(ell, 0.5), 512);
  CHECK_FALSE(bilipschitz_margin(f).verdict);
  // Outward offsets never contract chords: the inverse is a metric projection.
  CHECK(empirical_ratio_bounds(f).min_ratio >= 1.0 - 1e-9);
}

TEST_CASE("malformed inputs") {
  const auto disk = ConvexBody::ball({0, 0}, 1);
  const auto two = ShapeDomain::ball_union({{{0, 0}, 1.2}, {{2.0, 0}, 0.5}});
  CHECK_THROWS_AS(compute_thickness(disk, two, 64), Error);
}
