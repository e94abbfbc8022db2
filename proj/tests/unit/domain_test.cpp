#include <cmath>

#include "doctest.h"
#include "gnplab/domain.hpp"
#include "gnplab/error.hpp"

using namespace gnp;

namespace {

GalleryParams scalars(std::map<std::string, double> m) { return GalleryParams{std::move(m), std::nullopt}; }

double polyline_length(const std::vector<BoundarySample>& s) {
  double len = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) len += dist(s[i].point, s[(i + 1) % s.size()].point);
  return len;
}

}  // namespace

TEST_CASE("gallery constructors") {
  const auto chain = make_gallery("cusp_chain", scalars({{"n_max", 3}}));
  const auto* u = chain.as<BallUnion>();
  REQUIRE(u);
  REQUIRE(u->balls.size() == 3);
  CHECK(u->balls[0].center.x == doctest::Approx(0.75));
  CHECK(u->balls[1].center.x == doctest::Approx(0.375));
  CHECK(u->balls[2].center.x == doctest::Approx(0.1875));
  CHECK(u->balls[2].radius == doctest::Approx(0.0625));

  CHECK(comb_height(2) == doctest::Approx(std::sqrt(0.5 / 12.0)));

  const auto iv = make_gallery("remark222_intervals", scalars({{"n", 5}}));
  const auto* list = iv.as<Intervals1D>();
  REQUIRE(list);
  CHECK(list->intervals[0].first == doctest::Approx(-0.2));
  CHECK(list->intervals[1].second == doctest::Approx(2.0));

  CHECK_THROWS_AS(make_gallery("nope", {}), Error);
  CHECK_THROWS_AS(make_gallery("two_disk", scalars({{"R", -1}})), Error);
}

TEST_CASE("star circle samples and normals") {
  const auto circle = make_gallery("star_circle", scalars({{"radius", 1}}));
  const auto s = sample_boundary(circle, 64);
  REQUIRE(s.size() == 64);
  for (const auto& b : s) {
    CHECK(norm(b.point) == doctest::Approx(1.0));
    REQUIRE(b.inward_normal);
    CHECK(dist(*b.inward_normal, -b.point) < 1e-12);
  }
  CHECK(polyline_length(sample_boundary(circle, 512)) == doctest::Approx(2 * kPi).epsilon(0.01));
}

TEST_CASE("cusp chain tangency is flagged") {
  const auto chain = make_gallery("cusp_chain", scalars({{"n_max", 2}}));
  bool found = false;
  for (const auto& b : sample_boundary(chain, 128)) {
    if (dist(b.point, {0.5, 0.0}) < 1e-12) {
      found = true;
      CHECK_FALSE(b.smooth);
      CHECK_FALSE(b.inward_normal);
    }
  }
  CHECK(found);
}

TEST_CASE("comb slopes and corners") {
  const auto comb = make_gallery("triangle_comb", scalars({{"n_max", 4}}));
  for (const auto& b : sample_boundary(comb, 256)) {
    if (!b.smooth || b.point.y <= 0.0) continue;
    const double slope = -b.inward_normal->x / b.inward_normal->y;
    bool matched = false;
    for (int n = 2; n <= 4; ++n) {
      const double s = 2.0 * n * (n + 1) * comb_height(n);
      if (b.point.x > 1.0 / (n + 1) && b.point.x < 1.0 / n) matched = std::fabs(std::fabs(slope) - s) < 1e-9 * s;
    }
    CHECK(matched);
  }
  CHECK(comb_partial_perimeter(100) > comb_partial_perimeter(10));
}

TEST_CASE("smooth normals agree with finite differences") {
  const auto star = ShapeDomain::star_polar({0.2, -0.1}, [](double t) { return 1.2 + 0.1 * std::cos(t); }, 64);
  const auto* sp = star.as<StarPolar>();
  for (const auto& b : sample_boundary(star, 64)) {
    const double t = b.param, h = 1e-6;
    auto pt = [&](double a) { return sp->center + Vec2{std::cos(a), std::sin(a)} * sp->radius(a); };
    const Vec2 tangent = normalized(pt(t + h) - pt(t - h));
    CHECK(std::fabs(dot(tangent, *b.inward_normal)) < 1e-6);
    CHECK(star.contains(b.point + *b.inward_normal * 1e-4));
  }
}

TEST_CASE("rasterized measures") {
  const auto circle = make_gallery("star_circle", scalars({{"radius", 1}}));
  CHECK(std::fabs(characteristic_grid(circle, 0.01).measure() - kPi) < 1e-2);
  const auto unit = ShapeDomain::intervals({{0.0, 1.0}});
  CHECK(std::fabs(characteristic_grid(unit, 0.001).measure() - 1.0) < 2e-3);
  const auto pair = ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{0, 0}, 1}}),
                                               ShapeDomain::ball_union({{{4, 0}, 1}}), 1.0);
  CHECK(std::fabs(characteristic_grid(pair, 0.02).measure() - 2 * kPi) < 2e-2);
}

TEST_CASE("dilation") {
  const auto two = make_gallery("star_circle", scalars({{"radius", 2}}));
  const auto one = dilate(two, 0.5, {0, 0});
  CHECK(one.as<StarPolar>()->radius(0.3) == doctest::Approx(1.0));
  const auto ball = ShapeDomain::ball_union({{{4, 0}, 2}});
  const auto small = dilate(ball, 0.25, {0, 0});
  CHECK(small.as<BallUnion>()->balls[0].center.x == doctest::Approx(1.0));
  CHECK(small.as<BallUnion>()->balls[0].radius == doctest::Approx(0.5));
  const auto back = dilate(small, 4.0, {0, 0});
  CHECK(std::fabs(back.as<BallUnion>()->balls[0].radius - 2.0) < 1e-12);
  const double a = characteristic_grid(ball, 0.01).measure();
  const double b = characteristic_grid(dilate(ball, 1.5, {1, 1}), 0.01).measure();
  CHECK(std::fabs(b / a - 2.25) < 0.02 * 2.25);
}

TEST_CASE("invariant violations") {
  CHECK_THROWS_AS(ShapeDomain::star_polar({0, 0}, std::vector<double>(8, 1.0)), Error);
  CHECK_THROWS_AS(ShapeDomain::graph({{0, 0}, {0.5, 0}, {1, 0.2}}), Error);
  CHECK_THROWS_AS(ShapeDomain::intervals({{0, 2}, {1, 3}}), Error);
  CHECK_THROWS_AS(ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{0, 0}, 1}}),
                                             ShapeDomain::ball_union({{{2.5, 0}, 1}}), 1.0),
                  Error);
}

TEST_CASE("involute region") {
  const auto inv = make_gallery("involute", {});
  CHECK(inv.contains({0, 0}));
  CHECK_FALSE(inv.contains({1.5, 0}));
  CHECK(inv.contains({-4.0, 0}));
  CHECK_FALSE(inv.contains({-4.7, 0}));
  for (const auto& b : sample_boundary(inv, 256)) {
    if (!b.smooth) continue;
    // The inward normal is tangent to the unit circle.
    const Vec2 n = *b.inward_normal;
    CHECK(std::fabs(std::fabs(cross(b.point, n)) - 1.0) < 1e-9);
  }
}
