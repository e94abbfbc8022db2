#include "gnplab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "gnplab/error.hpp"

namespace gnp {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InvalidInput, "field '" + path + "': " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

double num(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "must be finite");
  return v;
}

double num_field(const Json& j, const std::string& key, const std::string& path) {
  return num(field(j, key, path), path + "." + key);
}

Vec2 point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [x, y]");
  return {num(j[0], path + "[0]"), num(j[1], path + "[1]")};
}

std::vector<Vec2> points(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of points");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string kind_of(const Json& j, const std::string& path) {
  const Json& k = field(j, "kind", path);
  if (!k.is_string()) bad(path + ".kind", "expected a string");
  return k.get<std::string>();
}

// Rewrites the message of nested errors so that it carries the field path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.find("field '") != std::string::npos) throw;
    throw Error(e.code(), "field '" + path + "': " + msg);
  }
}

Json mat_json(const Mat2& m) { return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})}); }

Mat2 mat_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [[a, b], [c, d]]");
  const Vec2 r0 = point(j[0], path + "[0]"), r1 = point(j[1], path + "[1]");
  return {r0.x, r0.y, r1.x, r1.y};
}

}  // namespace

ConvexBody convex_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  return at_path(path, [&] {
    if (kind == "ball") return ConvexBody::ball(point(field(j, "center", path), path + ".center"),
                                                num_field(j, "radius", path));
    if (kind == "segment")
      return ConvexBody::segment(point(field(j, "a", path), path + ".a"), point(field(j, "b", path), path + ".b"));
    if (kind == "polytope") return ConvexBody::polytope(points(field(j, "vertices", path), path + ".vertices"));
    if (kind == "hull") {
      const auto pts = points(field(j, "points", path), path + ".points");
      return ConvexBody::hull(pts);
    }
    bad(path + ".kind", "unknown convex kind '" + kind + "'");
  });
}

Json to_json(const ConvexBody& c) {
  if (const auto* b = std::get_if<Ball>(&c.shape())) return {{"kind", "ball"}, {"center", to_json(b->center)}, {"radius", b->radius}};
  if (const auto* s = std::get_if<Segment>(&c.shape())) return {{"kind", "segment"}, {"a", to_json(s->a)}, {"b", to_json(s->b)}};
  Json v = Json::array();
  for (const Vec2& p : std::get<Polytope>(c.shape()).vertices) v.push_back(to_json(p));
  return {{"kind", "polytope"}, {"vertices", v}};
}

ShapeDomain domain_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  return at_path(path, [&] {
    if (kind == "star_polar") {
      const Json& g = field(j, "g", path);
      if (!g.is_array()) bad(path + ".g", "expected an array of radii");
      std::vector<double> radii;
      for (std::size_t i = 0; i < g.size(); ++i) radii.push_back(num(g[i], path + ".g[" + std::to_string(i) + "]"));
      const Vec2 c = j.contains("center") ? point(j["center"], path + ".center") : Vec2{0, 0};
      return ShapeDomain::star_polar(c, std::move(radii));
    }
    if (kind == "graph") {
      std::vector<std::size_t> corners;
      if (j.contains("corners")) {
        const Json& cj = j["corners"];
        if (!cj.is_array()) bad(path + ".corners", "expected an array of indices");
        for (std::size_t i = 0; i < cj.size(); ++i) {
          if (!cj[i].is_number_unsigned()) bad(path + ".corners[" + std::to_string(i) + "]", "expected an index");
          corners.push_back(cj[i].get<std::size_t>());
        }
      }
      return ShapeDomain::graph(points(field(j, "nodes", path), path + ".nodes"), std::move(corners));
    }
    if (kind == "ball_union") {
      const Json& bj = field(j, "balls", path);
      if (!bj.is_array()) bad(path + ".balls", "expected an array");
      std::vector<Ball> balls;
      for (std::size_t i = 0; i < bj.size(); ++i) {
        const std::string p = path + ".balls[" + std::to_string(i) + "]";
        balls.push_back({point(field(bj[i], "center", p), p + ".center"), num_field(bj[i], "radius", p)});
      }
      return ShapeDomain::ball_union(std::move(balls));
    }
    if (kind == "disjoint_pair")
      return ShapeDomain::disjoint_pair(domain_from_json(field(j, "first", path), path + ".first"),
                                        domain_from_json(field(j, "second", path), path + ".second"),
                                        num_field(j, "delta", path));
    if (kind == "intervals") {
      const Json& ij = field(j, "intervals", path);
      std::vector<std::pair<double, double>> iv;
      for (const Vec2& p : points(ij, path + ".intervals")) iv.push_back({p.x, p.y});
      return ShapeDomain::intervals(std::move(iv));
    }
    if (kind == "involute") {
      const Vec2 c = j.contains("center") ? point(j["center"], path + ".center") : Vec2{0, 0};
      return ShapeDomain::involute(c, j.contains("scale") ? num(j["scale"], path + ".scale") : 1.0);
    }
    if (kind == "offset")
      return ShapeDomain::offset(convex_from_json(field(j, "body", path), path + ".body"),
                                 num_field(j, "distance", path));
    if (kind == "mapped")
      return ShapeDomain::mapped(domain_from_json(field(j, "base", path), path + ".base"),
                                 mat_from(field(j, "m", path), path + ".m"), point(field(j, "t", path), path + ".t"));
    if (kind == "clipped")
      return ShapeDomain::clipped(domain_from_json(field(j, "base", path), path + ".base"),
                                  point(field(j, "center", path), path + ".center"), num_field(j, "radius", path));
    if (kind == "gallery") {
      const Json& nj = field(j, "name", path);
      if (!nj.is_string()) bad(path + ".name", "expected a string");
      GalleryParams params;
      if (j.contains("params")) {
        const Json& pj = j["params"];
        if (!pj.is_object()) bad(path + ".params", "expected an object");
        for (auto it = pj.begin(); it != pj.end(); ++it) {
          if (it.key() == "convex") params.convex = convex_from_json(it.value(), path + ".params.convex");
          else params.scalars[it.key()] = num(it.value(), path + ".params." + it.key());
        }
      }
      return make_gallery(nj.get<std::string>(), params);
    }
    bad(path + ".kind", "unknown domain kind '" + kind + "'");
  });
}

Json to_json(const ShapeDomain& d) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StarPolar>) {
          return {{"kind", "star_polar"}, {"center", to_json(s.center)}, {"g", s.g}};
        } else if constexpr (std::is_same_v<T, Graph>) {
          Json nodes = Json::array();
          for (const Vec2& p : s.nodes) nodes.push_back(to_json(p));
          return {{"kind", "graph"}, {"nodes", nodes}, {"corners", s.corners}};
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          Json balls = Json::array();
          for (const Ball& b : s.balls) balls.push_back({{"center", to_json(b.center)}, {"radius", b.radius}});
          return {{"kind", "ball_union"}, {"balls", balls}};
        } else if constexpr (std::is_same_v<T, DisjointPair>) {
          return {{"kind", "disjoint_pair"}, {"first", to_json(*s.first)}, {"second", to_json(*s.second)}, {"delta", s.delta}};
        } else if constexpr (std::is_same_v<T, Intervals1D>) {
          Json iv = Json::array();
          for (const auto& [a, b] : s.intervals) iv.push_back(Json::array({a, b}));
          return {{"kind", "intervals"}, {"intervals", iv}};
        } else if constexpr (std::is_same_v<T, Involute>) {
          return {{"kind", "involute"}, {"center", to_json(s.center)}, {"scale", s.scale}};
        } else if constexpr (std::is_same_v<T, Offset>) {
          return {{"kind", "offset"}, {"body", to_json(s.body)}, {"distance", s.distance}};
        } else if constexpr (std::is_same_v<T, Mapped>) {
          return {{"kind", "mapped"}, {"base", to_json(*s.base)}, {"m", mat_json(s.m)}, {"t", to_json(s.t)}};
        } else {
          return {{"kind", "clipped"}, {"base", to_json(*s.base)}, {"center", to_json(s.center)}, {"radius", s.radius}};
        }
      },
      d.shape());
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + file + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "'" + file + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + file + "'");
  out << text;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(Vec2 p) { return Json::array({number(p.x), number(p.y)}); }

Json to_json(const CheckReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["worst_margin"] = number(r.worst_margin);
  j["conditions"] = r.conditions;
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = number(v);
  j["stats"] = stats;
  j["samples_used"] = r.samples_used;
  j["skipped_nonsmooth"] = r.skipped_nonsmooth;
  if (r.witness) {
    Json w;
    w["condition"] = r.witness->condition;
    w["point"] = to_json(r.witness->point);
    if (r.witness->sample) {
      w["boundary_point"] = to_json(r.witness->sample->point);
      w["inward_normal"] = r.witness->sample->inward_normal ? to_json(*r.witness->sample->inward_normal) : Json(nullptr);
    }
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const ConvergenceReport& r) {
  auto list = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
  };
  auto idx = [](const std::optional<std::size_t>& i) { return i ? Json(*i) : Json(nullptr); };
  Json j;
  j["h"] = r.h;
  j["h_distances"] = list(r.h_distances);
  j["l1_distances"] = list(r.l1_distances);
  j["closure_distances"] = list(r.closure_distances);
  j["boundary_distances"] = list(r.boundary_distances);
  j["probe_radii"] = list(r.probe_radii);
  Json k = Json::array();
  for (const auto& row : r.k_verdicts) k.push_back(Json(std::vector<bool>(row.begin(), row.end())));
  j["k_verdicts"] = k;
  j["separations"] = list(r.separations);
  j["thresholds"] = {{"h", r.threshold_h}, {"l", r.threshold_l}, {"boundary", r.threshold_boundary}};
  j["crossing"] = {{"h", idx(r.h_crossing)}, {"k", idx(r.k_crossing)}, {"l", idx(r.l_crossing)}};
  j["agree_every_index"] = r.agree_every_index;
  j["modes_agree"] = r.modes_agree;
  j["closure_limit_matches"] = r.closure_limit_matches;
  j["boundary_limit_matches"] = r.boundary_limit_matches;
  return j;
}

Json to_json(const ThicknessField& f) {
  Json s = Json::array();
  for (const auto& t : f.samples) s.push_back({{"c", to_json(t.c)}, {"nu", to_json(t.nu)}, {"d", number(t.d)}});
  return {{"base", to_json(f.base)},
          {"samples", s},
          {"stats", {{"K", number(f.stats.k)}, {"M", number(f.stats.m)}, {"L_nu", number(f.stats.l_nu)}, {"margin", number(f.stats.margin)}}},
          {"partial", f.partial},
          {"coverage", f.coverage}};
}

void Svg::polyline(const std::vector<Vec2>& pts, const std::string& color, bool closed) {
  items_.push_back({0, pts, 0.0, color, closed});
}

void Svg::circle(Vec2 c, double r, const std::string& color) { items_.push_back({1, {c}, r, color, false}); }

void Svg::text(Vec2 at, const std::string& label) { items_.push_back({2, {at}, 0.0, label, false}); }

std::string Svg::render(int width, int height) const {
  Box box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
          {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  auto grow = [&](Vec2 p, double r) {
    box.lo.x = std::min(box.lo.x, p.x - r);
    box.lo.y = std::min(box.lo.y, p.y - r);
    box.hi.x = std::max(box.hi.x, p.x + r);
    box.hi.y = std::max(box.hi.y, p.y + r);
  };
  for (const auto& it : items_)
    for (const Vec2& p : it.pts)
      if (std::isfinite(p.x) && std::isfinite(p.y)) grow(p, it.r);
  if (!(box.hi.x > box.lo.x)) box = {{-1, -1}, {1, 1}};
  const double pad = 0.05 * std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y) + 1e-9;
  const double w = box.hi.x - box.lo.x + 2 * pad, h = std::max(box.hi.y - box.lo.y, 1e-9) + 2 * pad;
  const double s = std::min(width / w, height / h);
  auto X = [&](double x) { return (x - box.lo.x + pad) * s; };
  auto Y = [&](double y) { return height - (y - box.lo.y + pad) * s; };
  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  for (const auto& it : items_) {
    if (it.kind == 0) {
      o << "<" << (it.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << it.s << "\" points=\"";
      for (const Vec2& p : it.pts)
        if (std::isfinite(p.x) && std::isfinite(p.y)) o << X(p.x) << "," << Y(p.y) << " ";
      o << "\"/>\n";
    } else if (it.kind == 1) {
      o << "<circle fill=\"none\" stroke=\"" << it.s << "\" cx=\"" << X(it.pts[0].x) << "\" cy=\"" << Y(it.pts[0].y)
        << "\" r=\"" << it.r * s << "\"/>\n";
    } else {
      o << "<text font-size=\"12\" x=\"" << X(it.pts[0].x) << "\" y=\"" << Y(it.pts[0].y) << "\">" << it.s << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::vector<Vec2>> outline(const ShapeDomain& d, int n) {
  std::map<int, std::vector<Vec2>> loops;
  for (const auto& s : sample_boundary(d, n)) loops[s.component].push_back(s.point);
  std::vector<std::vector<Vec2>> out;
  for (auto& [k, v] : loops) out.push_back(std::move(v));
  return out;
}

std::vector<Vec2> outline(const ConvexBody& c, int n) {
  std::vector<Vec2> out;
  for (const auto& b : boundary_points(c, n)) out.push_back(b.point);
  return out;
}

}  // namespace gnp
