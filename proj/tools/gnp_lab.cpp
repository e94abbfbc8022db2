// gnp-lab: command-line front end for the gnplab library.
//
// Exit status: 0 when every requested check passes, 1 when a check fails
// (the report is still written), 2 on configuration or input errors.

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gnplab/error.hpp"
#include "gnplab/gnp.hpp"
#include "gnplab/io.hpp"
#include "gnplab/metric.hpp"
#include "gnplab/potential.hpp"
#include "gnplab/suite.hpp"
#include "gnplab/thickness.hpp"
#include "gnplab/varopt.hpp"

using namespace gnp;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string json_out, csv_out, svg_out;
  double tol = kDefaultTol;
  std::uint64_t seed = kDefaultSeed;
};

void emit(const Json& report, const std::string& file) {
  const std::string text = report.dump(2) + "\n";
  if (file.empty() || file == "-") std::cout << text;
  else write_text_file(file, text);
}

Json header(const std::string& command, bool pass) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["pass"] = pass;
  return j;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, flag + ": empty list");
  return out;
}

// a:b:s, inclusive of b up to rounding
std::vector<double> parse_range(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ':')) v.push_back(parse_list(item, "--lambda-sweep")[0]);
  if (v.size() != 3 || v[2] <= 0 || v[1] < v[0])
    throw Error(ErrorCode::InvalidInput, "--lambda-sweep: expected a:b:s with a <= b and s > 0");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(v[0] + i * v[2]);
  return out;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  const fs::path p(pattern);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  const std::string leaf = p.filename().string();
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (!e.is_regular_file()) continue;
    if (fnmatch(leaf.c_str(), e.path().filename().c_str(), 0) == 0) out.push_back(e.path().string());
  }
  if (ec) throw Error(ErrorCode::InvalidInput, "--seq: cannot list '" + dir.string() + "'");
  if (out.empty()) throw Error(ErrorCode::InvalidInput, "--seq: no files match '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

ConvexBody load_convex(const std::string& file) { return convex_from_json(read_json_file(file), "convex"); }
ShapeDomain load_domain(const std::string& file) { return domain_from_json(read_json_file(file), "domain"); }

void draw_domain(Svg& svg, const ShapeDomain& d, const std::string& color) {
  for (const auto& part : outline(d)) svg.polyline(part, color, d.dimension() == 2);
}

// ---- gallery ----

int run_gallery(const std::string& name, const std::vector<std::string>& kv, const std::string& convex_file,
                const std::string& out, const std::string& svg_out) {
  GalleryParams params;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, "--param: expected k=v, got '" + s + "'");
    params.scalars[s.substr(0, eq)] = parse_list(s.substr(eq + 1), "--param " + s.substr(0, eq))[0];
  }
  if (!convex_file.empty()) params.convex = load_convex(convex_file);
  const ShapeDomain d = make_gallery(name, params);
  emit(to_json(d), out);
  if (!svg_out.empty()) {
    Svg svg;
    draw_domain(svg, d, "black");
    if (params.convex) svg.polyline(outline(*params.convex), "red", true);
    write_text_file(svg_out, svg.render());
  }
  return 0;
}

// ---- check ----

struct CheckArgs {
  std::string domain, convex, convex2, mode = "gnp", patches;
  int samples = 512;
  double eps = 0.0, c_lo = -1, c_hi = 1;
  std::optional<double> delta;
  bool paper_sign = false, projection = false, normal_cone = false;
};

int run_check(const CheckArgs& a, const Common& c) {
  const ShapeDomain omega = load_domain(a.domain);
  CheckReport r;
  if (a.mode == "gnp") {
    GnpOptions opt;
    opt.tol = c.tol;
    r = check_c_gnp(omega, load_convex(a.convex), a.samples, opt);
  } else if (a.mode == "sp") {
    r = check_c_sp(omega, load_convex(a.convex), a.samples, 2048, c.tol);
  } else if (a.mode == "eps") {
    r = check_eps_ball_gnp(omega, a.eps, c.tol);
  } else if (a.mode == "graph") {
    r = check_graph_gnp(omega, a.c_lo, a.c_hi, a.paper_sign ? FootSign::Paper : FootSign::Geometric,
                        std::max(a.samples, 2), c.tol);
  } else if (a.mode == "pair") {
    if (a.convex.empty() || a.convex2.empty())
      throw Error(ErrorCode::InvalidInput, "--mode pair needs --convex and --convex2");
    r = check_pair_class(omega, load_convex(a.convex), load_convex(a.convex2),
                         a.projection ? PairMode::Projection : PairMode::Distance, a.samples, a.delta, c.tol);
  } else if (a.mode == "local") {
    const Json pj = read_json_file(a.patches);
    if (!pj.is_array()) throw Error(ErrorCode::InvalidInput, "field 'patches': expected an array");
    std::vector<Patch> patches;
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const std::string path = "patches[" + std::to_string(i) + "]";
      if (!pj[i].is_object() || !pj[i].contains("center") || !pj[i].contains("radius") ||
          !pj[i].contains("reference"))
        throw Error(ErrorCode::InvalidInput, "field '" + path + "': expected center, radius and reference");
      const Json& cj = pj[i]["center"];
      if (!cj.is_array() || cj.size() != 2 || !cj[0].is_number() || !cj[1].is_number() || !pj[i]["radius"].is_number())
        throw Error(ErrorCode::InvalidInput, "field '" + path + "': bad center or radius");
      const ConvexBody ref = convex_from_json(pj[i]["reference"], path + ".reference");
      const Ball* b = std::get_if<Ball>(&ref.shape());
      if (!b) throw Error(ErrorCode::InvalidInput, "field '" + path + ".reference': expected a ball");
      patches.push_back({{cj[0].get<double>(), cj[1].get<double>()}, pj[i]["radius"].get<double>(), *b});
    }
    r = check_local_class(omega, patches, a.normal_cone ? LocalMode::NormalCone : LocalMode::Gnp, a.samples, c.tol);
  } else {
    throw Error(ErrorCode::InvalidInput, "--mode: unknown mode '" + a.mode + "'");
  }
  Json j = header("check", r.pass);
  j["mode"] = a.mode;
  j["report"] = to_json(r);
  emit(j, c.json_out);
  if (!c.svg_out.empty()) {
    Svg svg;
    draw_domain(svg, omega, "black");
    if (!a.convex.empty()) svg.polyline(outline(load_convex(a.convex)), "red", true);
    if (r.witness) svg.circle(r.witness->point, 0.02, "blue");
    write_text_file(c.svg_out, svg.render());
  }
  return r.pass ? 0 : 1;
}

// ---- converge ----

int run_converge(const std::string& seq_glob, const std::string& limit_file, double h, const Common& c) {
  std::vector<ShapeDomain> seq;
  const auto files = expand_glob(seq_glob);
  for (const auto& f : files) seq.push_back(load_domain(f));
  const ShapeDomain limit = load_domain(limit_file);
  Box box = limit.bounds();
  for (const auto& d : seq) box = box.merged(d.bounds());
  box = box.inflated(0.25 * std::max(box.width(), box.height()) + 4 * h);
  const ConvergenceReport r = convergence_report(seq, limit, box, h);
  Json j = header("converge", r.modes_agree);
  j["files"] = files;
  j["report"] = to_json(r);
  emit(j, c.json_out);
  if (!c.csv_out.empty()) {
    std::ostringstream s;
    s << "index,h_distance,l1_distance,closure_distance,boundary_distance\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
      s << i << "," << fmt(r.h_distances[i]) << "," << fmt(r.l1_distances[i]) << "," << fmt(r.closure_distances[i])
        << "," << fmt(r.boundary_distances[i]) << "\n";
    write_text_file(c.csv_out, s.str());
  }
  if (!c.svg_out.empty()) {
    Svg svg;
    auto curve = [&](const std::vector<double>& v, const std::string& color) {
      std::vector<Vec2> pts;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::isfinite(v[i])) pts.push_back({static_cast<double>(i), v[i]});
      svg.polyline(pts, color);
    };
    curve(r.h_distances, "black");
    curve(r.l1_distances, "red");
    curve(r.boundary_distances, "blue");
    write_text_file(c.svg_out, svg.render());
  }
  return r.modes_agree ? 0 : 1;
}

// ---- thickness ----

int run_thickness(const std::string& domain, const std::string& convex, int n, const Common& c) {
  const ConvexBody body = load_convex(convex);
  const ThicknessField f = compute_thickness(body, load_domain(domain), n);
  const BilipschitzVerdict v = bilipschitz_margin(f);
  const RatioBounds rb = empirical_ratio_bounds(f);
  Json j = header("thickness", true);
  j["field"] = to_json(f);
  j["bilipschitz"] = {{"margin", number(v.margin)},
                      {"verdict", v.verdict},
                      {"lower_ratio", number(v.lower_ratio)},
                      {"upper_ratio", number(v.upper_ratio)}};
  j["ratios"] = {{"min_ratio", number(rb.min_ratio)}, {"max_ratio", number(rb.max_ratio)}, {"pairs", rb.pairs}};
  emit(j, c.json_out);
  if (!c.csv_out.empty()) {
    std::ostringstream s;
    s << "cx,cy,nx,ny,d\n";
    for (const auto& t : f.samples)
      s << fmt(t.c.x) << "," << fmt(t.c.y) << "," << fmt(t.nu.x) << "," << fmt(t.nu.y) << "," << fmt(t.d) << "\n";
    write_text_file(c.csv_out, s.str());
  }
  if (!c.svg_out.empty()) {
    Svg svg;
    svg.polyline(outline(body), "red", true);
    std::vector<Vec2> img;
    for (const auto& t : f.samples) img.push_back(t.image());
    svg.polyline(img, "black", !f.partial);
    write_text_file(c.svg_out, svg.render());
  }
  return 0;
}

// ---- optimize ----

struct OptimizeArgs {
  int m = 201;
  std::optional<double> area;
  std::string sweep = "0:5:0.25";
  double lambda = 0;
  bool paper_sign = false;
  double c_lo = -1, c_hi = 1;
};

int run_optimize(const OptimizeArgs& a, const Common& c) {
  const DerivativeBox box = DerivativeBox::for_segment(-1, 1, a.m, a.c_lo, a.c_hi, a.paper_sign);
  std::vector<OptimizeResult> front;
  std::size_t chosen = 0;
  if (a.area) {
    const SweepResult s = minimize_with_area(box, 0, 0, a.m, *a.area, parse_range(a.sweep));
    front = s.front;
    chosen = s.chosen;
  } else {
    OptimizeOptions opt;
    opt.lambda = a.lambda;
    front.push_back(minimize_perimeter(box, 0, 0, a.m, opt));
  }
  Json rows = Json::array();
  for (const auto& r : front)
    rows.push_back({{"lambda", r.lambda},
                    {"perimeter", number(r.perimeter)},
                    {"area", number(r.area)},
                    {"objective", number(r.objective)},
                    {"iterations", r.iterations}});
  const auto& best = front[chosen];
  Json j = header("optimize", true);
  j["m"] = a.m;
  j["convention"] = a.paper_sign ? "paper" : "geometric";
  j["area_target"] = a.area ? Json(*a.area) : Json(nullptr);
  j["front"] = rows;
  j["chosen"] = chosen;
  j["u"] = best.u.u;
  emit(j, c.json_out);
  if (!c.csv_out.empty()) {
    std::ostringstream s;
    s << "lambda,P1,area\n";
    for (const auto& r : front) s << fmt(r.lambda) << "," << fmt(r.perimeter) << "," << fmt(r.area) << "\n";
    write_text_file(c.csv_out, s.str());
  }
  if (!c.svg_out.empty()) {
    Svg svg;
    std::vector<Vec2> up, down;
    for (int i = 0; i < best.u.m(); ++i) {
      const double y = std::sqrt(std::max(best.u.u[i], 0.0));
      up.push_back({best.u.x(i), y});
      down.push_back({best.u.x(i), -y});
    }
    svg.polyline(up, "black");
    svg.polyline(down, "black");
    svg.polyline({{a.c_lo, 0}, {a.c_hi, 0}}, "red");
    write_text_file(c.svg_out, svg.render());
  }
  return 0;
}

// ---- potential ----

SourceDensity parse_density(const ConvexBody& support, const std::string& spec) {
  if (spec.rfind("const:", 0) != 0) throw Error(ErrorCode::InvalidInput, "--f: expected const:<value>");
  const double v = parse_list(spec.substr(6), "--f")[0];
  if (!(v >= 0)) throw Error(ErrorCode::InvalidInput, "--f: density must be nonnegative");
  return SourceDensity::constant(support, v);
}

int run_potential(double radius, const std::string& support_file, const std::string& f_spec,
                  const std::string& eval, const Common& c) {
  if (eval.rfind("grid:", 0) != 0) throw Error(ErrorCode::InvalidInput, "--eval: expected grid:<N>");
  const int n = static_cast<int>(parse_list(eval.substr(5), "--eval")[0]);
  if (n < 2 || n > 1024) throw Error(ErrorCode::InvalidInput, "--eval: N must lie in [2, 1024]");
  const ConvexBody support = load_convex(support_file);
  const SourceDensity f = parse_density(support, f_spec);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Vec2 p{-radius + 2 * radius * (i + 0.5) / n, -radius + 2 * radius * (k + 0.5) / n};
      if (norm(p) < radius) pts.push_back(p);
    }
  const auto u = solve_U_R(radius, f, pts);
  double umax = 0;
  for (double v : u) umax = std::max(umax, v);
  Json j = header("potential", true);
  j["R"] = radius;
  j["support"] = to_json(support);
  j["points"] = pts.size();
  j["max_u"] = number(umax);
  j["source_mass"] = number(f.total_weight());
  emit(j, c.json_out);
  if (!c.csv_out.empty()) {
    std::ostringstream s;
    s << "x,y,u\n";
    for (std::size_t i = 0; i < pts.size(); ++i) s << fmt(pts[i].x) << "," << fmt(pts[i].y) << "," << fmt(u[i]) << "\n";
    write_text_file(c.csv_out, s.str());
  }
  return 0;
}

int run_scan(const std::string& radii_s, double support_radius, double k, const Common& c) {
  const auto radii = parse_list(radii_s, "--R");
  const auto f = SourceDensity::constant(ConvexBody::ball({0, 0}, support_radius), 1.0, 64, 16);
  std::vector<double> vol;
  for (double r : radii) {
    if (!(r > 0)) throw Error(ErrorCode::InvalidInput, "--R: radii must be positive");
    vol.push_back(sampled_area(make_gallery("star_circle", GalleryParams{{{"radius", r}}, std::nullopt})));
  }
  const ScanResult s = j_bound_scan(radii, f, k, vol);
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"R", r.radius},
                    {"int_f_u", number(r.int_f_u)},
                    {"volume", number(r.volume)},
                    {"volume_ratio", number(r.volume_ratio)},
                    {"c1", number(r.c1)},
                    {"bound", number(r.bound)},
                    {"linear_bound", number(r.linear_bound)}});
  Json j = header("potential_scan", true);
  j["rows"] = rows;
  j["exponent_fit"] = number(s.exponent_fit);
  j["exponent_last"] = number(s.exponent_last);
  j["min_volume_ratio"] = number(s.min_volume_ratio);
  emit(j, c.json_out);
  if (!c.csv_out.empty()) {
    std::ostringstream o;
    o << "R,int_f_u,volume,volume_ratio,bound\n";
    for (const auto& r : s.rows)
      o << fmt(r.radius) << "," << fmt(r.int_f_u) << "," << fmt(r.volume) << "," << fmt(r.volume_ratio) << ","
        << fmt(r.bound) << "\n";
    write_text_file(c.csv_out, o.str());
  }
  return 0;
}

// ---- suite ----

int run_suite_cmd(const std::string& name, const Common& c) {
  const auto items = run_suite(name, c.seed);
  const Json j = suite_report(name, c.seed, items);
  emit(j, c.json_out);
  for (const auto& it : items)
    std::cerr << (it.pass ? "pass " : "FAIL ") << it.name << (it.expectation.empty() ? "" : "  [" + it.expectation + "]")
              << "\n";
  return j["pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gnp-lab: geometric normal property laboratory"};
  app.require_subcommand(1);
  Common common;
  if (const char* env = std::getenv("GNP_LAB_TOL")) {
    try {
      common.tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: GNP_LAB_TOL is not a number\n";
      return 2;
    }
  }
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--json", common.json_out, "report path (default stdout)");
    sub->add_option("--csv", common.csv_out, "CSV table path");
    sub->add_option("--svg", common.svg_out, "SVG figure path");
    sub->add_option("--tol", common.tol, "tolerance");
    sub->add_option("--seed", common.seed, "random seed");
  };

  std::string g_name, g_out, g_convex;
  std::vector<std::string> g_params;
  auto* gallery = app.add_subcommand("gallery", "write a gallery domain as JSON");
  gallery->add_option("name", g_name)->required();
  gallery->add_option("--param", g_params, "k=v");
  gallery->add_option("--convex", g_convex, "convex body JSON for offset_of_convex");
  gallery->add_option("--out", g_out, "domain JSON path (default stdout)");
  add_common(gallery);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "class-membership check");
  check->add_option("--domain", ca.domain)->required();
  check->add_option("--convex", ca.convex);
  check->add_option("--convex2", ca.convex2);
  check->add_option("--mode", ca.mode)->check(CLI::IsMember({"gnp", "sp", "eps", "graph", "pair", "local"}));
  check->add_option("--samples", ca.samples)->check(CLI::PositiveNumber);
  check->add_option("--eps", ca.eps);
  check->add_option("--c-lo", ca.c_lo);
  check->add_option("--c-hi", ca.c_hi);
  check->add_option("--delta", ca.delta);
  check->add_option("--patches", ca.patches);
  check->add_flag("--paper-sign", ca.paper_sign);
  check->add_flag("--projection", ca.projection);
  check->add_flag("--normal-cone", ca.normal_cone);
  add_common(check);

  std::string cv_seq, cv_limit;
  double cv_h = 1.0 / 256;
  auto* converge = app.add_subcommand("converge", "convergence diagnostics of a domain sequence");
  converge->add_option("--seq", cv_seq, "file glob, sorted by name")->required();
  converge->add_option("--limit", cv_limit)->required();
  converge->set_help_flag("--help", "Print this help message and exit");
  converge->add_option("--h", cv_h)->check(CLI::PositiveNumber);
  add_common(converge);

  std::string th_domain, th_convex;
  int th_n = 512;
  auto* thickness = app.add_subcommand("thickness", "thickness field and bilipschitz verdict");
  thickness->add_option("--domain", th_domain)->required();
  thickness->add_option("--convex", th_convex)->required();
  thickness->add_option("--n", th_n)->check(CLI::PositiveNumber);
  add_common(thickness);

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "graph perimeter minimization");
  optimize->add_option("--m", oa.m);
  optimize->add_option("--area", oa.area);
  optimize->add_option("--lambda-sweep", oa.sweep, "a:b:s");
  optimize->add_option("--lambda", oa.lambda);
  optimize->add_option("--c-lo", oa.c_lo);
  optimize->add_option("--c-hi", oa.c_hi);
  optimize->add_flag("--paper-sign", oa.paper_sign);
  add_common(optimize);

  double p_radius = 1.0, p_support_radius = 0.2, p_k = 1.0;
  std::string p_support, p_f = "const:1", p_eval = "grid:64", p_radii = "10,20,40,80";
  auto* potential = app.add_subcommand("potential", "Dirichlet potential of a source on a disk");
  potential->add_option("--R", p_radius);
  potential->add_option("--support", p_support);
  potential->add_option("--f", p_f);
  potential->add_option("--eval", p_eval);
  add_common(potential);
  auto* scan = potential->add_subcommand("scan", "growth scan over radii");
  scan->add_option("--R", p_radii, "comma-separated radii");
  scan->add_option("--support-radius", p_support_radius);
  scan->add_option("--k", p_k);
  add_common(scan);

  std::string s_name;
  auto* suite = app.add_subcommand("suite", "run an acceptance bundle");
  suite->add_option("name", s_name)->required()->check(CLI::IsMember({"gallery", "equivalence", "counterexamples", "full"}));
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gallery) return run_gallery(g_name, g_params, g_convex, g_out, common.svg_out);
    if (*check) return run_check(ca, common);
    if (*converge) return run_converge(cv_seq, cv_limit, cv_h, common);
    if (*thickness) return run_thickness(th_domain, th_convex, th_n, common);
    if (*optimize) return run_optimize(oa, common);
    if (*scan) return run_scan(p_radii, p_support_radius, p_k, common);
    if (*potential) {
      if (p_support.empty()) throw Error(ErrorCode::InvalidInput, "--support is required");
      return run_potential(p_radius, p_support, p_f, p_eval, common);
    }
    if (*suite) return run_suite_cmd(s_name, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
