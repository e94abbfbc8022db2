#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gnplab/error.hpp"
#include "gnplab/potential.hpp"

using namespace gnp;

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

Vec2 random_in_disk(std::mt19937_64& rng, double r) {
  const double t = 2.0 * std::numbers::pi * uniform(rng);
  const double s = r * std::sqrt(uniform(rng));
  return {s * std::cos(t), s * std::sin(t)};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("fundamental solutions") {
  CHECK(fundamental_solution(2, 1.0) == 0.0);
  CHECK(fundamental_solution(2, std::exp(1.0)) == doctest::Approx(-1.0 / (2 * std::numbers::pi)));
  CHECK(fundamental_solution(3, 1.0) == doctest::Approx(1.0 / (4 * std::numbers::pi)));
  CHECK(code_of([] { fundamental_solution(2, Vec2{0, 0}); }) == ErrorCode::SingularPoint);
  CHECK_THROWS_AS(fundamental_solution(4, 1.0), Error);

  // unit flux through spheres and harmonic away from the pole
  const double h = 1e-4;
  for (double r : {0.5, 1.0, 2.0}) {
    const double d2 = (fundamental_solution(2, r + h) - fundamental_solution(2, r - h)) / (2 * h);
    CHECK(-d2 * 2 * std::numbers::pi * r == doctest::Approx(1.0).epsilon(1e-6));
    const double d3 = (fundamental_solution(3, r + h) - fundamental_solution(3, r - h)) / (2 * h);
    CHECK(-d3 * 4 * std::numbers::pi * r * r == doctest::Approx(1.0).epsilon(1e-6));
  }
  const double hh = 1e-3;
  const double x = 0.7, y = 0.4, z = 0.3;
  auto e3 = [](double a, double b, double c) { return fundamental_solution(3, std::sqrt(a * a + b * b + c * c)); };
  const double lap = (e3(x + hh, y, z) + e3(x - hh, y, z) + e3(x, y + hh, z) + e3(x, y - hh, z) + e3(x, y, z + hh) +
                      e3(x, y, z - hh) - 6 * e3(x, y, z)) /
                     (hh * hh);
  CHECK(std::fabs(lap) < 1e-4);
}

TEST_CASE("green function on the disk") {
  const double g = green_disk(1.0, {0.5, 0}, {-0.5, 0});
  CHECK(g > 0.0);
  CHECK(g == doctest::Approx(std::log(1.25) / (2 * std::numbers::pi)));
  // y = 0 reduces to ln(R/|x|) / 2 pi
  CHECK(green_disk(2.0, {0.5, 0}, {0, 0}) == doctest::Approx(std::log(4.0) / (2 * std::numbers::pi)));
  CHECK(code_of([] { green_disk(1.0, {0.1, 0.1}, {0.1, 0.1}); }) == ErrorCode::SingularPair);

  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double r = 0.5 + 3 * uniform(rng);
    const Vec2 x = random_in_disk(rng, r), y = random_in_disk(rng, r);
    for (int n : {2, 3}) {
      const double a = green_disk(r, x, y, n), b = green_disk(r, y, x, n);
      worst = std::max(worst, std::fabs(a - b));
      CHECK(a > 0.0);
    }
    // boundary vanishing along the ray through x
    const Vec2 xb = (r / norm(x)) * x;
    if (dist(xb, y) > 1e-3) CHECK(std::fabs(green_disk(r, xb, y)) < 1e-10);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("quadrature weights") {
  const auto ball = SourceDensity::constant(ConvexBody::ball({0.1, -0.2}, 0.3));
  CHECK(ball.total_weight() == doctest::Approx(std::numbers::pi * 0.09).epsilon(1e-10));
  const auto tri = SourceDensity::constant(ConvexBody::polytope({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(tri.total_weight() == doctest::Approx(0.5).epsilon(0.01));
  CHECK_THROWS_AS(SourceDensity::constant(ConvexBody::segment({0, 0}, {1, 0})), Error);
  CHECK_THROWS_AS(SourceDensity::make(ConvexBody::ball({0, 0}, 1), [](Vec2) { return -1.0; }), Error);
}

TEST_CASE("radial indicator source") {
  const double R = 1.0, rho = 0.4;
  const auto f = SourceDensity::constant(ConvexBody::ball({0, 0}, rho));
  const std::vector<Vec2> pts{{0, 0}, {0.2, 0.1}, {0, 0.39}, {0.5, 0}, {-0.6, 0.6}};
  const auto u = solve_U_R(R, f, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double exact = radial_indicator_solution(R, rho, norm(pts[i]));
    CHECK(std::fabs(u[i] - exact) <= 0.01 * exact);
  }
  const auto edge = solve_U_R(R, f, {{0.999, 0}, {0, -0.999}});
  for (double v : edge) CHECK(std::fabs(v) <= 0.01 * u[0]);
}

TEST_CASE("off-center polygon source") {
  const double R = 2.0;
  const auto f = SourceDensity::constant(ConvexBody::polytope({{0.2, 0.1}, {0.9, 0.2}, {0.5, 0.8}}));
  const double h = 0.02;
  const std::vector<Vec2> centers{{0.5, 0.35}, {-0.8, -0.5}};
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const Vec2 p = centers[c];
    const auto u = solve_U_R(R, f, {p, p + Vec2{h, 0}, p - Vec2{h, 0}, p + Vec2{0, h}, p - Vec2{0, h}});
    const double lap = (u[1] + u[2] + u[3] + u[4] - 4 * u[0]) / (h * h);
    CHECK(lap == doctest::Approx(c == 0 ? -1.0 : 0.0).epsilon(0.02).scale(1.0));
  }
  const auto edge = solve_U_R(R, f, {{0, 1.998}, {-1.998, 0}, {1.4128, 1.4128}});
  const double top = solve_U_R(R, f, {{0.5, 0.35}})[0];
  for (double v : edge) CHECK(std::fabs(v) <= 0.01 * top);
}

TEST_CASE("monotone in R") {
  const auto f = SourceDensity::constant(ConvexBody::ball({0.2, 0}, 0.3));
  const std::vector<Vec2> pts{{0, 0}, {0.3, 0.1}, {-0.7, 0.2}};
  std::vector<double> last(pts.size(), 0.0);
  for (double R : {1.0, 1.5, 3.0, 8.0}) {
    const auto u = solve_U_R(R, f, pts);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(u[i] >= last[i]);
      last[i] = u[i];
    }
  }
}

TEST_CASE("support outside ball") {
  const auto f = SourceDensity::constant(ConvexBody::ball({0.8, 0}, 0.3));
  CHECK(code_of([&] { solve_U_R(1.0, f, {{0, 0}}); }) == ErrorCode::SupportOutsideBall);
  const auto g = SourceDensity::constant(ConvexBody::ball({0, 0}, 0.3));
  CHECK(code_of([&] { solve_U_R(1.0, g, {{2, 0}}); }) == ErrorCode::SupportOutsideBall);
}

TEST_CASE("growth scan") {
  const auto f = SourceDensity::constant(ConvexBody::ball({0, 0}, 0.2), 1.0, 64, 16);
  const std::vector<double> radii{10, 20, 40, 80};
  std::vector<double> vol;
  for (double r : radii) vol.push_back(std::numbers::pi * r * r);
  const ScanResult s = j_bound_scan(radii, f, 1.0, vol);
  CHECK(s.min_volume_ratio == doctest::Approx(std::numbers::pi));
  CHECK(std::fabs(s.exponent_fit - 2.0) < 0.1);
  CHECK(std::fabs(s.exponent_last - 2.0) < 0.1);
  for (const auto& row : s.rows) {
    CHECK(row.int_f_u > 0.0);
    // int f U_R for the disk source, closed form
    const double rho = 0.2;
    const double top = rho * rho / 4 + rho * rho / 2 * std::log(row.radius / rho);
    const double exact = std::numbers::pi * rho * rho * top - std::numbers::pi * std::pow(rho, 4) / 8;
    CHECK(row.int_f_u == doctest::Approx(exact).epsilon(0.01));
  }
  CHECK_THROWS_AS(j_bound_scan({20, 10}, f, 1.0, {1, 1}), Error);
}
