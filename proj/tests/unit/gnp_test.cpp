#include <cmath>
#include <random>

#include "doctest.h"
#include "gnplab/error.hpp"
#include "gnplab/gnp.hpp"

using namespace gnp;

namespace {

GalleryParams scalars(std::map<std::string, double> m) { return GalleryParams{std::move(m), std::nullopt}; }

ShapeDomain circle(double r) { return make_gallery("star_circle", scalars({{"radius", r}})); }

}  // namespace

TEST_CASE("cusp chain against its axis segment") {
  const auto chain = make_gallery("cusp_chain", scalars({{"n_max", 6}}));
  const auto r = check_c_gnp(chain, ConvexBody::segment({0, 0}, {1, 0}), 512);
  CHECK(r.pass);
  CHECK(r.worst_margin >= -1e-9);
}

TEST_CASE("disk against a concentric ball") {
  const auto r = check_c_gnp(circle(1), ConvexBody::ball({0, 0}, 0.5), 256);
  CHECK(r.pass);
  CHECK(r.worst_margin == doctest::Approx(0.5));
  CHECK(check_c_sp(circle(1), ConvexBody::ball({0, 0}, 0.5), 128).pass);
}

TEST_CASE("far ball fails both characterizations") {
  const auto far = ShapeDomain::ball_union({{{3, 0}, 1}});
  const auto small = ConvexBody::ball({0, 0}, 0.1);
  const auto g = check_c_gnp(far, small, 256);
  CHECK_FALSE(g.pass);
  CHECK_FALSE(g.conditions.at("interior_contained"));
  CHECK_FALSE(g.conditions.at("inward_ray_meets_c"));
  REQUIRE(g.witness);
  const auto s = check_c_sp(far, small, 128);
  CHECK_FALSE(s.pass);
  REQUIRE(s.witness);
  CHECK_FALSE(s.witness->condition.empty());
}

TEST_CASE("eps-ball polar inequality") {
  const auto flat = circle(1);
  const auto r = check_eps_ball_gnp(flat, 0.01);
  CHECK(r.pass);
  CHECK(r.worst_margin == doctest::Approx(1e-4));
  const auto wobble = ShapeDomain::star_polar({0, 0}, [](double t) { return 1.0 + 0.001 * std::sin(t); }, 64);
  CHECK(check_eps_ball_gnp(wobble, 0.05).pass);

  // Dense-grid oracle for G = 1 + 0.3 cos.
  double lhs = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double t = 2 * kPi * k / 100000.0;
    const double g = 1 + 0.3 * std::cos(t), dg = -0.3 * std::sin(t);
    lhs = std::max(lhs, g * g * dg * dg / (g * g + dg * dg));
  }
  const auto egg = ShapeDomain::star_polar({0, 0}, [](double t) { return 1.0 + 0.3 * std::cos(t); }, 64);
  CHECK(check_eps_ball_gnp(egg, 0.1).pass == (0.01 - lhs >= -1e-9));
  CHECK(check_eps_ball_gnp(egg, 0.1).stats.at("max_lhs") == doctest::Approx(lhs).epsilon(1e-6));
  CHECK_THROWS_AS(check_eps_ball_gnp(ShapeDomain::ball_union({{{0, 0}, 1}}), 0.1), Error);
}

TEST_CASE("eps monotonicity and agreement with ray clearance") {
  const auto egg = ShapeDomain::star_polar({0, 0}, [](double t) { return 1.0 + 0.05 * std::cos(2 * t); }, 64);
  const double lhs = check_eps_ball_gnp(egg, 1.0).stats.at("max_lhs");
  const double eps_star = std::sqrt(lhs);
  for (double eps : {0.5 * eps_star, 0.9 * eps_star, 1.1 * eps_star, 2 * eps_star}) {
    const auto e = check_eps_ball_gnp(egg, eps);
    if (e.pass) CHECK(check_eps_ball_gnp(egg, eps * 1.5).pass);
    if (e.pass) CHECK(check_c_gnp(egg, ConvexBody::ball({0, 0}, eps), 512).conditions.at("inward_ray_meets_c"));
  }
}

TEST_CASE("graph foot") {
  const auto arc = ShapeDomain::graph(0.5, 1.5, 2001, [](double x) { return std::sqrt(1 - (x - 1) * (x - 1)); });
  const auto r = check_graph_gnp(arc, -1.0, 1.0);
  CHECK(std::fabs(r.stats.at("foot_max") - 1.0) < 1e-6);
  CHECK(std::fabs(r.stats.at("foot_min") - 1.0) < 1e-6);
  const auto slab = ShapeDomain::graph(-1.0, 1.0, 21, [](double) { return 0.5; });
  const auto s = check_graph_gnp(slab);
  CHECK(s.pass);
  CHECK(s.stats.at("foot_min") >= -1.0);
  CHECK_THROWS_AS(check_graph_gnp(circle(1)), Error);
}

TEST_CASE("pair classes") {
  auto disk = [](Vec2 c, double r) { return ShapeDomain::ball_union({{c, r}}); };
  const auto apart = ShapeDomain::disjoint_pair(disk({0, 0}, 1), disk({4, 0}, 1), 1.0);
  const auto a = check_pair_class(apart, ConvexBody::ball({0, 0}, 0.1), ConvexBody::ball({4, 0}, 0.1),
                                  PairMode::Distance);
  CHECK(a.pass);
  CHECK(a.stats.at("separation") == doctest::Approx(2.0).epsilon(1e-6));
  const auto p = check_pair_class(apart, ConvexBody::ball({0, 0}, 0.1), ConvexBody::ball({4, 0}, 0.1),
                                  PairMode::Projection);
  CHECK(p.pass);

  const auto shrink = make_gallery("shrinking_pair", scalars({{"n", 10}}));
  const ConvexBody c1 = ConvexBody::ball({0, 0}, 0.1), c2 = ConvexBody::ball({2, 0}, 0.1);
  const auto fail = check_pair_class(shrink, c1, c2, PairMode::Distance, 512, 0.5);
  CHECK_FALSE(fail.pass);
  CHECK(fail.stats.at("separation") == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(check_pair_class(shrink, c1, c2, PairMode::Distance, 512, 0.1).pass);
}

TEST_CASE("local classes") {
  const auto two = ShapeDomain::ball_union({{{0, 0}, 0.4}, {{3, 0}, 0.4}});
  const std::vector<Patch> patches{{{0, 0}, 1.0, {{0, 0}, 0.5}}, {{3, 0}, 1.0, {{3, 0}, 0.5}}};
  const auto r = check_local_class(two, patches, LocalMode::Gnp, 256);
  CHECK(r.conditions.at("patch_0") == r.conditions.at("patch_1"));
  CHECK(r.worst_margin > 0.0);

  const std::vector<Patch> tight{{{0, 0}, 0.3, {{0, 0}, 0.15}}, {{3, 0}, 0.3, {{3, 0}, 0.15}}};
  try {
    check_local_class(two, tight, LocalMode::Gnp, 256);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryNotCovered);
  }
  const std::vector<Patch> overlap{{{0, 0}, 2.0, {{0, 0}, 1.0}}, {{3, 0}, 2.0, {{3, 0}, 1.0}}};
  CHECK_THROWS_AS(check_local_class(two, overlap, LocalMode::Gnp, 256), Error);

  const std::vector<Patch> whole{{{0, 0}, 2.0, {{0, 0}, 1.0}}};
  const auto direct = check_c_gnp(circle(1), ConvexBody::ball({0, 0}, 1.0), 256);
  const auto local = check_local_class(circle(1), whole, LocalMode::Gnp, 256);
  CHECK(local.pass == direct.pass);
}

TEST_CASE("affine maps") {
  const auto omega = circle(1);
  const auto c = ConvexBody::ball({0, 0}, 0.5);
  const auto base = check_c_gnp(omega, c, 256);
  const auto id = affine_map_check(omega, c, Mat2{1, 0, 0, 1}, {0, 0}, 256);
  CHECK(id.pass == base.pass);
  CHECK(std::fabs(id.worst_margin - base.worst_margin) < 1e-12);
  const auto rot = affine_map_check(omega, c, Mat2::rotation(kPi / 6), {0.3, -0.2}, 256);
  CHECK(rot.pass);
  CHECK(std::fabs(rot.worst_margin - base.worst_margin) < 1e-9);
  const auto stretch = affine_map_check(omega, c, Mat2{2, 0, 0, 1}, {0, 0}, 256);
  CHECK(stretch.stats.count("margin_after") == 1);
  CHECK_THROWS_AS(affine_map_check(omega, c, Mat2{1, 2, 2, 4}, {0, 0}, 64), Error);
}

TEST_CASE("isometry invariance on random disks") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec2 center{u(rng), u(rng)};
    const auto omega = ShapeDomain::ball_union({{center, 1.0}});
    const auto c = ConvexBody::ball({u(rng) * 0.5, u(rng) * 0.5}, 0.2);
    const auto base = check_c_gnp(omega, c, 128);
    const auto moved = affine_map_check(omega, c, Mat2::rotation(u(rng) * kPi), {u(rng), u(rng)}, 128);
    CHECK(base.pass == moved.pass);
    CHECK(std::fabs(base.worst_margin - moved.worst_margin) < 1e-9);
  }
}

TEST_CASE("balls centered on C pass") {
  const auto c = ConvexBody::segment({-0.3, 0}, {0.3, 0.1});
  for (double t : {0.0, 0.25, 0.8}) {
    const Vec2 center = Vec2{-0.3, 0} + (Vec2{0.6, 0.1}) * t;
    CHECK(check_c_gnp(ShapeDomain::ball_union({{center, 1.0}}), c, 256).pass);
  }
}

TEST_CASE("near-miss rays agree across both checks") {
  // ray misses by a few hundredths; the cone only meets omega close to the boundary
  const auto star = ShapeDomain::star_polar({0, 0}, [](double t) { return 1 + 0.05 * std::cos(2 * t); }, 64);
  for (double r : {0.05, 0.08, 0.12, 0.2}) {
    const auto c = ConvexBody::ball({0, 0}, r);
    const auto g = check_c_gnp(star, c, 512);
    const auto s = check_c_sp(star, c, 512);
    CAPTURE(r);
    CHECK(g.conditions.at("inward_ray_meets_c") == s.conditions.at("cone_disjoint"));
  }
}
