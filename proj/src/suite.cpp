#include "gnplab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "gnplab/error.hpp"
#include "gnplab/gnp.hpp"
#include "gnplab/metric.hpp"
#include "gnplab/potential.hpp"
#include "gnplab/thickness.hpp"
#include "gnplab/varopt.hpp"

namespace gnp {

namespace {

GalleryParams scalars(std::map<std::string, double> s) { return GalleryParams{std::move(s), std::nullopt}; }

ShapeDomain circle(double r) { return make_gallery("star_circle", scalars({{"radius", r}})); }

ConvexBody triangle() { return ConvexBody::polytope({{-0.4, -0.3}, {0.5, -0.2}, {0.0, 0.45}}); }

Json list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

using Runner = std::function<void(SuiteItem&)>;

struct Task {
  std::string name;
  std::string expectation;
  Runner run;
};

SuiteItem execute(const Task& t) {
  SuiteItem item;
  item.name = t.name;
  item.expectation = t.expectation;
  try {
    t.run(item);
  } catch (const Error& e) {
    item.pass = false;
    item.metrics["error"] = e.what();
  }
  return item;
}

// ---- gallery -------------------------------------------------------------

void gallery_tasks(std::vector<Task>& out) {
  out.push_back({"gallery/cusp_chain", "", [](SuiteItem& it) {
                   const auto r = check_c_gnp(make_gallery("cusp_chain", scalars({{"n_max", 6}})),
                                              ConvexBody::segment({0, 0}, {1, 0}), 512);
                   it.metrics["report"] = to_json(r);
                   it.pass = r.pass && r.worst_margin >= -1e-9;
                 }});
  out.push_back({"gallery/involute", "", [](SuiteItem& it) {
                   const auto omega = make_gallery("involute", {});
                   const auto c = ConvexBody::ball({0, 0}, 1);
                   const auto sp = check_c_sp(omega, c, 1024);
                   const auto g = check_c_gnp(omega, c, 1024);
                   it.metrics["sp"] = to_json(sp);
                   it.metrics["gnp"] = to_json(g);
                   it.metrics["condition4_failures"] = g.stats.at("failing_samples");
                   it.pass = g.stats.at("failing_samples") == 0.0;
                 }});
  out.push_back({"gallery/star_circle", "", [](SuiteItem& it) {
                   const auto r = check_c_gnp(circle(1), ConvexBody::ball({0, 0}, 0.5), 512);
                   it.metrics["report"] = to_json(r);
                   it.pass = r.pass;
                 }});
  out.push_back({"gallery/two_disk", "", [](SuiteItem& it) {
                   const auto r = check_c_gnp(make_gallery("two_disk", scalars({{"R", 1.5}})),
                                              ConvexBody::segment({-1, 0}, {1, 0}), 512);
                   it.metrics["report"] = to_json(r);
                   it.pass = r.pass;
                 }});
  out.push_back({"gallery/offset_of_convex", "", [](SuiteItem& it) {
                   GalleryParams p = scalars({{"d", 0.3}});
                   p.convex = triangle();
                   const auto r = check_c_gnp(make_gallery("offset_of_convex", p), triangle(), 512);
                   it.metrics["report"] = to_json(r);
                   it.pass = r.pass;
                 }});
  out.push_back({"gallery/triangle_comb", "", [](SuiteItem& it) {
                   // partial perimeters against c ln(n_max)
                   std::vector<double> xs, ys;
                   for (int n : {100, 1000, 10000}) {
                     xs.push_back(std::log(static_cast<double>(n)));
                     ys.push_back(comb_partial_perimeter(n));
                   }
                   double sxx = 0, sxy = 0, syy = 0;
                   for (std::size_t i = 0; i < xs.size(); ++i) {
                     sxx += xs[i] * xs[i];
                     sxy += xs[i] * ys[i];
                     syy += ys[i] * ys[i];
                   }
                   const double c = sxy / sxx;
                   double ss_res = 0, mean = 0, ss_tot = 0;
                   for (double y : ys) mean += y / ys.size();
                   for (std::size_t i = 0; i < xs.size(); ++i) {
                     ss_res += (ys[i] - c * xs[i]) * (ys[i] - c * xs[i]);
                     ss_tot += (ys[i] - mean) * (ys[i] - mean);
                   }
                   const double r2 = 1.0 - ss_res / ss_tot;
                   const auto comb = make_gallery("triangle_comb", scalars({{"n_max", 100}}));
                   const auto foot = check_graph_gnp(comb, 0.0, 1.0, FootSign::Geometric, 4096, 1e-9);
                   it.metrics["partial_perimeters"] = list(ys);
                   it.metrics["log_fit_c"] = c;
                   it.metrics["log_fit_r2"] = r2;
                   it.metrics["foot"] = to_json(foot);
                   it.pass = r2 > 0.99 && foot.pass;
                 }});
}

// ---- equivalence ---------------------------------------------------------

void equivalence_tasks(std::vector<Task>& out, std::uint64_t seed) {
  auto pairs = std::make_shared<std::vector<NamedPair>>(equivalence_pairs(seed));
  auto disagreements = std::make_shared<int>(0);
  auto decisive = std::make_shared<int>(0);
  for (std::size_t i = 0; i < pairs->size(); ++i) {
    out.push_back({"equivalence/" + std::to_string(i / 10) + std::to_string(i % 10) + "_" + (*pairs)[i].name, "",
                   [pairs, i, disagreements, decisive](SuiteItem& it) {
                     const auto& p = (*pairs)[i];
                     const auto g = check_c_gnp(p.omega, p.c, 512);
                     const auto s = check_c_sp(p.omega, p.c, 512);
                     const double tol = 10 * kDefaultTol;
                     const bool dec = std::fabs(g.worst_margin) > tol && std::fabs(s.worst_margin) > tol;
                     const bool v4 = g.conditions.at("inward_ray_meets_c");
                     const bool vs = s.conditions.at("cone_disjoint");
                     it.metrics["gnp_margin"] = number(g.worst_margin);
                     it.metrics["sp_margin"] = number(s.worst_margin);
                     it.metrics["gnp_condition4"] = v4;
                     it.metrics["sp_verdict"] = vs;
                     it.metrics["decisive"] = dec;
                     it.pass = !dec || v4 == vs;
                     if (dec) ++*decisive;
                     if (!it.pass) ++*disagreements;
                   }});
  }
  out.push_back({"equivalence/zz_summary", "", [pairs, disagreements, decisive](SuiteItem& it) {
                   it.metrics["pairs"] = pairs->size();
                   it.metrics["decisive"] = *decisive;
                   it.metrics["disagreements"] = *disagreements;
                   it.pass = *disagreements == 0;
                 }});
}

// ---- counterexamples -----------------------------------------------------

void counterexample_tasks(std::vector<Task>& out) {
  out.push_back({"counterexamples/interval_boundary_limit", "boundary limit differs from the limit's boundary",
                 [](SuiteItem& it) {
                   std::vector<ShapeDomain> seq;
                   for (int n : {10, 50, 100}) seq.push_back(make_gallery("remark222_intervals", scalars({{"n", n}})));
                   const auto limit = ShapeDomain::intervals({{1.0, 2.0}});
                   const auto r = convergence_report(seq, limit, Box{{-1, 0}, {3, 0}}, 1.0 / 512);
                   it.metrics["report"] = to_json(r);
                   it.metrics["boundary_gap"] = r.boundary_distances.back();
                   it.pass = !r.boundary_limit_matches && r.boundary_distances.back() >= 0.9;
                 }});
  out.push_back({"counterexamples/shrinking_pair", "separation tends to zero; delta = 0.5 pair class fails at n = 10",
                 [](SuiteItem& it) {
                   std::vector<double> seps;
                   bool exact = true;
                   for (int n = 2; n <= 10; ++n) {
                     const auto d = make_gallery("shrinking_pair", scalars({{"n", n}}));
                     const auto r = check_pair_class(d, ConvexBody::ball({0, 0}, 0.1), ConvexBody::ball({2, 0}, 0.1),
                                                     PairMode::Distance, 512);
                     seps.push_back(r.stats.at("separation"));
                     exact = exact && std::fabs(seps.back() - 2.0 / n) < 1e-6;
                   }
                   const auto at10 =
                       check_pair_class(make_gallery("shrinking_pair", scalars({{"n", 10}})),
                                        ConvexBody::ball({0, 0}, 0.1), ConvexBody::ball({2, 0}, 0.1),
                                        PairMode::Distance, 512, 0.5);
                   it.metrics["separations"] = list(seps);
                   it.metrics["pair_class_delta_0_5"] = to_json(at10);
                   const bool decreasing = std::is_sorted(seps.rbegin(), seps.rend());
                   it.pass = exact && decreasing && !at10.pass;
                 }});
  out.push_back({"counterexamples/far_ball", "both characterizations fail with a witness", [](SuiteItem& it) {
                   const auto c = ConvexBody::ball({0.7, 0}, 0.1);
                   const auto g = check_c_gnp(circle(1), c, 256);
                   const auto s = check_c_sp(circle(1), c, 256);
                   it.metrics["gnp"] = to_json(g);
                   it.metrics["sp"] = to_json(s);
                   it.pass = !g.pass && !s.pass && s.witness.has_value();
                 }});
  out.push_back({"counterexamples/ellipse_blowup", "bilipschitz verdict false and min ratio below 0.5",
                 [](SuiteItem& it) {
                   const auto ell = ConvexBody::ellipse({0, 0}, Mat2{1, 0, 0, 0.1}, 256);
                   const auto f = compute_thickness(ell, ShapeDomain::offset(ell, 0.5), 512);
                   const auto v = bilipschitz_margin(f);
                   const auto rb = empirical_ratio_bounds(f);
                   it.metrics["margin"] = v.margin;
                   it.metrics["verdict"] = v.verdict;
                   it.metrics["min_ratio"] = rb.min_ratio;
                   it.metrics["max_ratio"] = rb.max_ratio;
                   it.pass = !v.verdict && rb.min_ratio < 0.5;
                 }});
}

// ---- remaining full-suite items -------------------------------------------

void full_tasks(std::vector<Task>& out, std::uint64_t seed) {
  out.push_back({"thickness/offset_circle", "", [](SuiteItem& it) {
                   const auto disk = ConvexBody::ball({0, 0}, 1);
                   const auto f = compute_thickness(disk, circle(1.3), 256);
                   const auto v = bilipschitz_margin(f);
                   const auto rb = empirical_ratio_bounds(f);
                   it.metrics["K"] = f.stats.k;
                   it.metrics["M"] = f.stats.m;
                   it.metrics["L_nu"] = f.stats.l_nu;
                   it.metrics["margin"] = v.margin;
                   it.metrics["min_ratio"] = rb.min_ratio;
                   it.metrics["max_ratio"] = rb.max_ratio;
                   it.pass = f.stats.k <= 1e-6 && std::fabs(f.stats.m - 0.3) <= 1e-6 &&
                             std::fabs(f.stats.l_nu - 1) <= 1e-3 && std::fabs(v.margin - 0.7) <= 1e-3 &&
                             std::fabs(rb.min_ratio - 1.3) <= 1e-6 && std::fabs(rb.max_ratio - 1.3) <= 1e-6;
                 }});
  out.push_back({"convergence/concentric", "", [](SuiteItem& it) {
                   const double h = 1.0 / 256;
                   const Box box{{-1.25, -1.25}, {1.25, 1.25}};
                   std::vector<ShapeDomain> seq;
                   std::vector<double> errs;
                   bool within = true;
                   for (int n = 2; n <= 32; ++n) {
                     seq.push_back(circle(1 - 1.0 / n));
                     const auto d = open_set_distance(seq.back(), circle(1), box, h);
                     errs.push_back(d.value - 1.0 / n);
                     within = within && std::fabs(d.value - 1.0 / n) <= d.error_bound;
                   }
                   const auto r = convergence_report(seq, circle(1), box, h);
                   it.metrics["open_set_errors"] = list(errs);
                   it.metrics["report"] = to_json(r);
                   it.pass = within && r.modes_agree && r.agree_every_index;
                 }});
  out.push_back({"convergence/separated_pairs", "", [](SuiteItem& it) {
                   const double h = 1.0 / 128;
                   const Box box{{-2.75, -1.25}, {2.75, 1.25}};
                   std::vector<ShapeDomain> seq;
                   for (int n = 2; n <= 16; ++n) {
                     const double r = 1 - 1.0 / n;
                     seq.push_back(ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{-1.5, 0}, r}}),
                                                              ShapeDomain::ball_union({{{1.5, 0}, r}}), 1.0));
                   }
                   const auto limit = ShapeDomain::disjoint_pair(ShapeDomain::ball_union({{{-1.5, 0}, 1}}),
                                                                 ShapeDomain::ball_union({{{1.5, 0}, 1}}), 1.0);
                   const auto r = convergence_report(seq, limit, box, h);
                   it.metrics["report"] = to_json(r);
                   it.pass = r.modes_agree && r.agree_every_index;
                 }});
  out.push_back({"metric/g_bound", "", [seed](SuiteItem& it) {
                   int attempts = 0;
                   const double eps = 0.02;
                   const auto stars = sample_eps_stars(seed, 100, eps, &attempts);
                   const auto rows = verify_G_bound(stars, std::vector<double>(stars.size(), eps),
                                                    std::vector<bool>(stars.size(), true));
                   double worst = 1e300;
                   int ok = 0;
                   for (const auto& row : rows) {
                     worst = std::min(worst, row.min_g - (1 - 4 * eps));
                     if (row.min_g >= 1 - 4 * eps - 1e-9) ++ok;
                   }
                   it.metrics["trials"] = rows.size();
                   it.metrics["attempts"] = attempts;
                   it.metrics["satisfied"] = ok;
                   it.metrics["worst_slack"] = worst;
                   it.pass = ok == static_cast<int>(rows.size()) && rows.size() == 100;
                 }});
  out.push_back({"convex/projection_bound", "", [seed](SuiteItem& it) {
                   Rng rng(seed ^ 0x4a5bULL);
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
                     Box b = k.bounds().merged(l.bounds());
                     b = b.merged(Box{x, x}).merged(Box{y, y});
                     const double a = b.diameter();
                     const double lhs = dist(project(k, x), project(l, y));
                     const double slack = lhs - (4 * a + dist(x, y));
                     worst = std::max(worst, slack);
                     if (slack > 1e-12) ++violations;
                   }
                   it.metrics["draws"] = 10000;
                   it.metrics["violations"] = violations;
                   it.metrics["worst_slack"] = worst;
                   it.pass = violations == 0;
                 }});
  out.push_back({"varopt/oracle", "", [](SuiteItem& it) {
                   const int m = 51;
                   const auto box = DerivativeBox::for_segment(-1, 1, m);
                   Json rows = Json::array();
                   bool ok = true;
                   for (double lambda : {0.0, 1.0, 2.0}) {
                     OptimizeOptions opt;
                     opt.lambda = lambda;
                     const auto r = minimize_perimeter(box, 0, 0, m, opt);
                     const auto d = dp_oracle(box, 0, 0, m, 201, lambda);
                     const double gap = std::fabs(r.objective - d.objective) / std::fabs(d.objective);
                     ok = ok && gap <= 0.02;
                     rows.push_back({{"lambda", lambda}, {"descent", r.objective}, {"dp", d.objective},
                                     {"relative_gap", gap}, {"area", r.area}, {"perimeter", r.perimeter}});
                   }
                   it.metrics["m"] = m;
                   it.metrics["rows"] = rows;
                   it.pass = ok;
                 }});
  out.push_back({"varopt/saturating_candidates", "", [](SuiteItem& it) {
                   Json rows = Json::array();
                   bool ok = false;
                   for (const auto& c : evaluate_saturating_candidates()) {
                     rows.push_back({{"family", c.family}, {"parameter", c.parameter}, {"convention", c.convention},
                                     {"target", c.target}, {"max_deviation", number(c.max_deviation)}});
                     if (c.family == "circle_1_0" && c.convention == "geometric") ok = c.max_deviation <= 1e-12;
                   }
                   it.metrics["rows"] = rows;
                   it.pass = ok;
                 }});
  out.push_back({"potential/green_and_radial", "", [seed](SuiteItem& it) {
                   Rng rng(seed ^ 0x9e37ULL);
                   double worst = 0;
                   for (int t = 0; t < 1000; ++t) {
                     const double r = rng.uniform(0.5, 3.5);
                     auto draw = [&] {
                       const double a = rng.uniform(0, 2 * kPi), s = r * std::sqrt(rng.uniform());
                       return Vec2{s * std::cos(a), s * std::sin(a)};
                     };
                     const Vec2 x = draw(), y = draw();
                     worst = std::max(worst, std::fabs(green_disk(r, x, y) - green_disk(r, y, x)));
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
                   it.metrics["symmetry_max"] = worst;
                   it.metrics["radial_max_relative_error"] = rel;
                   it.pass = worst <= 1e-12 && rel <= 0.01;
                 }});
  out.push_back({"potential/scan", "", [](SuiteItem& it) {
                   const auto f = SourceDensity::constant(ConvexBody::ball({0, 0}, 0.2), 1.0, 64, 16);
                   const std::vector<double> radii{10, 20, 40, 80};
                   std::vector<double> vol;
                   for (double r : radii) vol.push_back(sampled_area(circle(r)));
                   const auto s = j_bound_scan(radii, f, 1.0, vol);
                   Json rows = Json::array();
                   for (const auto& r : s.rows)
                     rows.push_back({{"R", r.radius}, {"int_f_u", r.int_f_u}, {"volume", r.volume},
                                     {"volume_ratio", r.volume_ratio}, {"bound", r.bound}});
                   it.metrics["rows"] = rows;
                   it.metrics["exponent_fit"] = number(s.exponent_fit);
                   it.metrics["exponent_last"] = number(s.exponent_last);
                   it.pass = std::fabs(s.exponent_fit - 2) <= 0.1 && std::fabs(s.exponent_last - 2) <= 0.1;
                 }});
}

}  // namespace

std::vector<NamedPair> equivalence_pairs(std::uint64_t seed) {
  std::vector<NamedPair> p;
  p.push_back({"cusp_chain_segment", make_gallery("cusp_chain", scalars({{"n_max", 6}})),
               ConvexBody::segment({0, 0}, {1, 0})});
  p.push_back({"involute_ball", make_gallery("involute", {}), ConvexBody::ball({0, 0}, 1)});
  p.push_back({"circle_inner_ball", circle(1), ConvexBody::ball({0, 0}, 0.5)});
  p.push_back({"circle_far_ball", circle(1), ConvexBody::ball({0.7, 0}, 0.1)});
  p.push_back({"two_disk_segment", make_gallery("two_disk", scalars({{"R", 1.5}})), ConvexBody::segment({-1, 0}, {1, 0})});
  GalleryParams op = scalars({{"d", 0.3}});
  op.convex = triangle();
  p.push_back({"offset_triangle", make_gallery("offset_of_convex", op), triangle()});
  Rng rng(seed);
  for (int i = 0; i < 6; ++i) {
    const double a = rng.uniform(0.02, 0.12);
    const int k = rng.integer(2, 3);
    const double ph = rng.uniform(0, 2 * kPi);
    const auto omega = ShapeDomain::star_polar({0, 0}, [=](double t) { return 1 + a * std::cos(k * t + ph); }, 64);
    const double cr = rng.uniform(0, 0.1), ca = rng.uniform(0, 2 * kPi);
    const double r = rng.uniform(0.05, 0.5);
    p.push_back({"random_star_" + std::to_string(i), omega,
                 ConvexBody::ball({cr * std::cos(ca), cr * std::sin(ca)}, r)});
  }
  return p;
}

std::vector<ShapeDomain> sample_eps_stars(std::uint64_t seed, int count, double eps, int* attempts) {
  Rng rng(seed);
  std::vector<ShapeDomain> out;
  int tries = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++tries > 1000 * count) throw Error(ErrorCode::PreconditionFailed, "rejection sampler made no progress");
    double a[4], b[4];
    for (int k = 1; k <= 3; ++k) {
      const double amp = 2.0 * eps / (k * k);
      a[k] = rng.uniform(-amp, amp);
      b[k] = rng.uniform(-amp, amp);
    }
    std::vector<double> g(64);
    for (int i = 0; i < 64; ++i) {
      const double t = 2 * kPi * i / 64;
      g[i] = 1.0;
      for (int k = 1; k <= 3; ++k) g[i] += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    }
    // contact: normalize the continuous maximum to 1
    const auto raw = ShapeDomain::star_polar({0, 0}, g);
    double gmax = 0;
    const auto* sp = raw.as<StarPolar>();
    for (int i = 0; i < 8192; ++i) gmax = std::max(gmax, sp->radius(2 * kPi * i / 8192));
    for (double& v : g) v /= gmax;
    auto cand = ShapeDomain::star_polar({0, 0}, g);
    if (!check_eps_ball_gnp(cand, eps).pass) continue;
    out.push_back(std::move(cand));
  }
  if (attempts) *attempts = tries;
  return out;
}

std::vector<SuiteItem> run_suite(const std::string& name, std::uint64_t seed) {
  std::vector<Task> tasks;
  if (name == "gallery" || name == "full") gallery_tasks(tasks);
  if (name == "equivalence" || name == "full") equivalence_tasks(tasks, seed);
  if (name == "counterexamples" || name == "full") counterexample_tasks(tasks);
  if (name == "full") full_tasks(tasks, seed);
  if (tasks.empty()) throw Error(ErrorCode::InvalidInput, "unknown suite '" + name + "'");
  std::vector<SuiteItem> items;
  for (const auto& t : tasks) items.push_back(execute(t));
  std::sort(items.begin(), items.end(), [](const SuiteItem& a, const SuiteItem& b) { return a.name < b.name; });
  return items;
}

Json suite_report(const std::string& name, std::uint64_t seed, const std::vector<SuiteItem>& items) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = "suite";
  j["suite"] = name;
  j["seed"] = seed;
  Json arr = Json::array();
  int passed = 0;
  for (const auto& it : items) {
    Json e;
    e["name"] = it.name;
    e["pass"] = it.pass;
    e["expectation"] = it.expectation.empty() ? Json(nullptr) : Json(it.expectation);
    e["metrics"] = it.metrics;
    arr.push_back(e);
    if (it.pass) ++passed;
  }
  j["items"] = arr;
  j["summary"] = {{"passed", passed}, {"failed", static_cast<int>(items.size()) - passed}};
  j["pass"] = passed == static_cast<int>(items.size());
  return j;
}

}  // namespace gnp
