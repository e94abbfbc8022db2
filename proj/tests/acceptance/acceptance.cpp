// One PASS/FAIL line per acceptance criterion.
// usage: acceptance [path-to-gnp-lab]
// With the CLI path, criterion 11 compares two separate processes; without
// it, two in-process runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "gnplab/error.hpp"
#include "gnplab/gnp.hpp"
#include "gnplab/metric.hpp"
#include "gnplab/potential.hpp"
#include "gnplab/suite.hpp"
#include "gnplab/thickness.hpp"
#include "gnplab/varopt.hpp"

using namespace gnp;

namespace {

constexpr double kPiD = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

GalleryParams scalars(std::map<std::string, double> s) { return GalleryParams{std::move(s), std::nullopt}; }
ShapeDomain circle(double r) { return make_gallery("star_circle", scalars({{"radius", r}})); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

Outcome c1() {
  const auto chain = check_c_gnp(make_gallery("cusp_chain", scalars({{"n_max", 6}})),
                                 ConvexBody::segment({0, 0}, {1, 0}), 512);
  const auto inv = make_gallery("involute", {});
  const auto ball = ConvexBody::ball({0, 0}, 1);
  const auto sp = check_c_sp(inv, ball, 1024);
  const auto g = check_c_gnp(inv, ball, 1024);
  const double fails = g.stats.at("failing_samples");
  return {chain.pass && chain.worst_margin >= -1e-9 && sp.samples_used > 0 && fails == 0.0,
          "cusp margin " + num(chain.worst_margin) + ", involute sp pass " + std::to_string(sp.pass) +
              ", condition-4 failures " + num(fails)};
}

Outcome c2() {
  int disagreements = 0, decisive = 0;
  for (const auto& p : equivalence_pairs(kDefaultSeed)) {
    const auto g = check_c_gnp(p.omega, p.c, 512);
    const auto s = check_c_sp(p.omega, p.c, 512);
    if (std::fabs(g.worst_margin) <= 10 * kDefaultTol || std::fabs(s.worst_margin) <= 10 * kDefaultTol) continue;
    ++decisive;
    if (g.conditions.at("inward_ray_meets_c") != s.conditions.at("cone_disjoint")) ++disagreements;
  }
  return {disagreements == 0 && decisive > 0,
          std::to_string(decisive) + " decisive pairs of 12, " + std::to_string(disagreements) + " disagreements"};
}

Outcome c3() {
  std::vector<double> xs, ys;
  for (int n : {100, 1000, 10000}) {
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(comb_partial_perimeter(n));
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double c = sxy / sxx;
  double mean = 0, ss_res = 0, ss_tot = 0;
  for (double y : ys) mean += y / 3;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ss_res += std::pow(ys[i] - c * xs[i], 2);
    ss_tot += std::pow(ys[i] - mean, 2);
  }
  const double r2 = 1 - ss_res / ss_tot;
  const auto foot = check_graph_gnp(make_gallery("triangle_comb", scalars({{"n_max", 100}})), 0.0, 1.0,
                                    FootSign::Geometric, 4096, 1e-9);
  return {r2 > 0.99 && foot.pass, "R^2 " + num(r2) + ", foot range [" + num(foot.stats.at("foot_min")) + ", " +
                                      num(foot.stats.at("foot_max")) + "], failing samples " +
                                      num(foot.stats.at("failing_samples"))};
}

Outcome c4() {
  const double h = 1.0 / 256;
  const Box box{{-1.25, -1.25}, {1.25, 1.25}};
  std::vector<ShapeDomain> seq;
  double worst = 0;
  bool within = true;
  for (int n = 2; n <= 32; ++n) {
    seq.push_back(circle(1 - 1.0 / n));
    const auto d = open_set_distance(seq.back(), circle(1), box, h);
    worst = std::max(worst, std::fabs(d.value - 1.0 / n));
    within = within && std::fabs(d.value - 1.0 / n) <= d.error_bound;
  }
  const auto conc = convergence_report(seq, circle(1), box, h);
  std::vector<ShapeDomain> pairs;
  for (int n = 2; n <= 16; ++n) {
    const double r = 1 - 1.0 / n;
    pairs.push_back(ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{-1.5, 0}, r}}),
                                               ShapeDomain::ball_union({{{1.5, 0}, r}}), 1.0));
  }
  const auto lim = ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{-1.5, 0}, 1}}),
                                              ShapeDomain::ball_union({{{1.5, 0}, 1}}), 1.0);
  const auto sep = convergence_report(pairs, lim, Box{{-2.75, -1.25}, {2.75, 1.25}}, 1.0 / 128);
  const bool ok = within && conc.modes_agree && conc.agree_every_index && sep.modes_agree && sep.agree_every_index;
  return {ok, "max |d - 1/n| " + num(worst) + " vs h sqrt2 " + num(h * std::sqrt(2.0)) + ", concentric agree " +
                  std::to_string(conc.agree_every_index) + ", pairs agree " + std::to_string(sep.agree_every_index)};
}

Outcome c5() {
  std::vector<ShapeDomain> seq;
  for (int n : {10, 50, 100}) seq.push_back(make_gallery("remark222_intervals", scalars({{"n", n}})));
  const auto r = convergence_report(seq, ShapeDomain::intervals({{1.0, 2.0}}), Box{{-1, 0}, {3, 0}}, 1.0 / 512);
  const double gap = r.boundary_distances.back();
  bool exact = true;
  const auto c1b = ConvexBody::ball({0, 0}, 0.1), c2b = ConvexBody::ball({2, 0}, 0.1);
  for (int n = 2; n <= 10; ++n) {
    const auto rep = check_pair_class(make_gallery("shrinking_pair", scalars({{"n", n}})), c1b, c2b,
                                      PairMode::Distance, 512);
    exact = exact && std::fabs(rep.stats.at("separation") - 2.0 / n) < 1e-6;
  }
  const auto at10 =
      check_pair_class(make_gallery("shrinking_pair", scalars({{"n", 10}})), c1b, c2b, PairMode::Distance, 512, 0.5);
  return {!r.boundary_limit_matches && gap >= 0.9 && exact && !at10.pass,
          "boundary gap " + num(gap) + ", separation 2/n " + std::to_string(exact) + ", delta 0.5 at n=10 fails " +
              std::to_string(!at10.pass)};
}

Outcome c6() {
  const double eps = 0.02;
  int attempts = 0;
  const auto stars = sample_eps_stars(kDefaultSeed, 100, eps, &attempts);
  const auto rows = verify_G_bound(stars, std::vector<double>(stars.size(), eps), std::vector<bool>(stars.size(), true));
  int ok = 0;
  double worst = 1e300;
  for (const auto& row : rows) {
    if (row.min_g >= 1 - 4 * eps - 1e-9) ++ok;
    worst = std::min(worst, row.min_g);
  }
  return {ok == 100 && rows.size() == 100,
          std::to_string(ok) + "/100 satisfy, min G " + num(worst) + " (bound " + num(1 - 4 * eps) + "), " +
              std::to_string(attempts) + " draws"};
}

Outcome c7() {
  const auto f = compute_thickness(ConvexBody::ball({0, 0}, 1), circle(1.3), 256);
  const auto v = bilipschitz_margin(f);
  const auto rb = empirical_ratio_bounds(f);
  const bool circle_ok = f.stats.k <= 1e-6 && std::fabs(f.stats.m - 0.3) <= 1e-6 && std::fabs(f.stats.l_nu - 1) <= 1e-3 &&
                         std::fabs(v.margin - 0.7) <= 1e-3 && std::fabs(rb.min_ratio - 1.3) <= 1e-6 &&
                         std::fabs(rb.max_ratio - 1.3) <= 1e-6;
  const auto ell = ConvexBody::ellipse({0, 0}, Mat2{1, 0, 0, 0.1}, 256);
  const auto fe = compute_thickness(ell, ShapeDomain::offset(ell, 0.5), 512);
  const auto ve = bilipschitz_margin(fe);
  const auto re = empirical_ratio_bounds(fe);
  return {circle_ok && !ve.verdict && re.min_ratio < 0.5,
          "circle (K, M, L) = (" + num(f.stats.k) + ", " + num(f.stats.m) + ", " + num(f.stats.l_nu) + ") margin " +
              num(v.margin) + " ratios [" + num(rb.min_ratio) + ", " + num(rb.max_ratio) + "]; ellipse verdict " +
              std::to_string(ve.verdict) + " min_ratio " + num(re.min_ratio)};
}

Outcome c8() {
  Rng rng(kDefaultSeed);
  auto body = [&] {
    std::vector<Vec2> pts;
    const int k = rng.integer(1, 6);
    for (int i = 0; i < k; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    if (k == 1) return ConvexBody::ball(pts[0], 0.3 * rng.uniform());
    return ConvexBody::hull(pts);
  };
  int violations = 0;
  double worst = -1e300;
  for (int t = 0; t < 10000; ++t) {
    const ConvexBody k = body(), l = body();
    const Vec2 x{rng.uniform(), rng.uniform()}, y{rng.uniform(), rng.uniform()};
    const Box b = k.bounds().merged(l.bounds()).merged(Box{x, x}).merged(Box{y, y});
    const double slack = dist(project(k, x), project(l, y)) - (4 * b.diameter() + dist(x, y));
    worst = std::max(worst, slack);
    if (slack > 1e-12) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 10^4 draws, worst slack " + num(worst)};
}

Outcome c9() {
  const int m = 101;
  const auto box = DerivativeBox::for_segment(-1, 1, m);
  bool ok = true;
  std::string detail;
  for (double lambda : {0.0, 1.0, 2.0}) {
    OptimizeOptions opt;
    opt.lambda = lambda;
    const auto r = minimize_perimeter(box, 0, 0, m, opt);
    const auto d = dp_oracle(box, 0, 0, m, 201, lambda);
    const double gap = std::fabs(r.objective - d.objective) / std::fabs(d.objective);
    ok = ok && gap <= 0.02;
    if (lambda == 0.0) {
      bool zero = true;
      for (double v : r.u.u) zero = zero && v == 0.0;
      ok = ok && zero && r.perimeter == 2.0;
    }
    detail += "lambda " + num(lambda) + " gap " + num(gap) + "; ";
  }
  double foot = 1.0;
  for (const auto& row : evaluate_saturating_candidates())
    if (row.family == "circle_1_0" && row.convention == "geometric") foot = row.max_deviation;
  const int big = 2001;
  GridFunction semi = GridFunction::zeros(-1, 1, big);
  for (int i = 0; i < big; ++i) semi.u[i] = std::max(0.0, 1 - semi.x(i) * semi.x(i));
  const double p = perimeter_u(semi);
  ok = ok && foot <= 1e-12 && std::fabs(p - kPiD) <= 1e-4;
  return {ok, detail + "foot deviation " + num(foot) + ", semicircle P1 - pi " + num(p - kPiD)};
}

Outcome c10() {
  Rng rng(kDefaultSeed);
  double sym = 0;
  for (int t = 0; t < 1000; ++t) {
    const double r = rng.uniform(0.5, 3.5);
    auto draw = [&] {
      const double a = rng.uniform(0, 2 * kPiD), s = r * std::sqrt(rng.uniform());
      return Vec2{s * std::cos(a), s * std::sin(a)};
    };
    const Vec2 x = draw(), y = draw();
    sym = std::max(sym, std::fabs(green_disk(r, x, y) - green_disk(r, y, x)));
  }
  const double rho = 0.4;
  const auto f = SourceDensity::constant(ConvexBody::ball({0, 0}, rho));
  const std::vector<Vec2> pts{{0, 0}, {0.15, 0}, {0, 0.3}, {-0.55, 0}, {0.6, 0.6}};
  const auto u = solve_U_R(1.0, f, pts);
  double rel = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = radial_indicator_solution(1.0, rho, norm(pts[i]));
    rel = std::max(rel, std::fabs(u[i] - e) / e);
  }
  const auto fs = SourceDensity::constant(ConvexBody::ball({0, 0}, 0.2), 1.0, 64, 16);
  const std::vector<double> radii{10, 20, 40, 80};
  std::vector<double> vol;
  for (double r : radii) vol.push_back(sampled_area(circle(r)));
  const auto s = j_bound_scan(radii, fs, 1.0, vol);
  const bool ok = sym <= 1e-12 && rel <= 0.01 && std::fabs(s.exponent_fit - 2) <= 0.1 &&
                  std::fabs(s.exponent_last - 2) <= 0.1;
  return {ok, "symmetry " + num(sym) + ", radial rel err " + num(rel) + ", exponent fit " + num(s.exponent_fit) +
                  " last " + num(s.exponent_last)};
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c11(const std::string& cli) {
  if (!cli.empty()) {
    const std::string a = "acceptance_full_a.json", b = "acceptance_full_b.json";
    const std::string cmd = "'" + cli + "' suite full --seed 7 --json ";
    const int ra = std::system((cmd + a + " 2>/dev/null").c_str());
    const int rb = std::system((cmd + b + " 2>/dev/null").c_str());
    const std::string ja = slurp(a), jb = slurp(b);
    std::remove(a.c_str());
    std::remove(b.c_str());
    const bool same = !ja.empty() && ja == jb;
    return {same && ra == rb, "two processes, " + std::to_string(ja.size()) + " bytes, identical " + std::to_string(same)};
  }
  const std::string a = suite_report("full", 7, run_suite("full", 7)).dump(2);
  const std::string b = suite_report("full", 7, run_suite("full", 7)).dump(2);
  return {a == b, "in process, " + std::to_string(a.size()) + " bytes, identical " + std::to_string(a == b)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, 5, c1},   {2, 30, c2},   {3, 10, c3},  {4, 60, c4},  {5, 10, c5},
      {6, 60, c6},  {7, 20, c7},   {8, 10, c8},  {9, 120, c9}, {10, 60, c10},
      {11, 300, [&] { return c11(cli); }},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget;
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s (%.1f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, o.detail.c_str(), secs,
                c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, all.size());
  return failed == 0 ? 0 : 1;
}
