#include "gnplab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gnplab/error.hpp"
#include "gnplab/gnp.hpp"

namespace gnp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double directed(std::span<const Vec2> a, std::span<const Vec2> b) {
  double worst = 0.0;
  for (const Vec2& p : a) {
    double best = kInf;
    for (const Vec2& q : b) best = std::min(best, dist(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

struct BucketGrid {
  Box box;
  double cell = 1.0;
  int nx = 1, ny = 1;
  std::vector<std::vector<std::size_t>> buckets;
  std::span<const Vec2> pts;

  explicit BucketGrid(std::span<const Vec2> p) : pts(p) {
    box = Box{p[0], p[0]};
    for (const Vec2& q : p) box = box.merged(Box{q, q});
    const double extent = std::max({box.width(), box.height(), 1e-12});
    const int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(p.size()))));
    cell = extent / side;
    nx = std::max(1, static_cast<int>(box.width() / cell) + 1);
    ny = std::max(1, static_cast<int>(box.height() / cell) + 1);
    buckets.resize(static_cast<std::size_t>(nx) * ny);
    for (std::size_t i = 0; i < p.size(); ++i) buckets[index(cell_of(p[i]))].push_back(i);
  }

  std::pair<int, int> cell_of(Vec2 q) const {
    const int i = std::clamp(static_cast<int>(std::floor((q.x - box.lo.x) / cell)), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((q.y - box.lo.y) / cell)), 0, ny - 1);
    return {i, j};
  }
  std::size_t index(std::pair<int, int> c) const { return static_cast<std::size_t>(c.second) * nx + c.first; }

  double nearest(Vec2 q) const {
    const auto [ci, cj] = cell_of(q);
    double best = kInf;
    const int max_ring = std::max(nx, ny);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int j = cj - ring; j <= cj + ring; ++j) {
        if (j < 0 || j >= ny) continue;
        for (int i = ci - ring; i <= ci + ring; ++i) {
          if (i < 0 || i >= nx) continue;
          if (std::abs(i - ci) != ring && std::abs(j - cj) != ring) continue;
          for (std::size_t k : buckets[index({i, j})]) best = std::min(best, dist(q, pts[k]));
        }
      }
      // Cells beyond this ring are at least ring * cell away.
      if (best <= ring * cell) break;
    }
    return best;
  }
};

double directed_indexed(std::span<const Vec2> a, const BucketGrid& grid) {
  double worst = 0.0;
  for (const Vec2& p : a) worst = std::max(worst, grid.nearest(p));
  return worst;
}

void edt_1d(const double* f, double* d, int n, int stride, std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  int first = -1;
  for (int q = 0; q < n; ++q)
    if (f[q * stride] < kInf) {
      first = q;
      break;
    }
  if (first < 0) {
    for (int q = 0; q < n; ++q) d[q * stride] = kInf;
    return;
  }
  v[0] = first;
  for (int q = first + 1; q < n; ++q) {
    if (f[q * stride] == kInf) continue;
    double s;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[q * stride] + double(q) * q) - (f[p * stride] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[q * stride] = double(q - p) * (q - p) + f[p * stride];
  }
}

// Directed distance (in cell units) from the cells of `from` to the cells
// whose squared-distance field is `to_edt`.
double directed_cells(const std::vector<std::uint8_t>& from, const std::vector<double>& to_edt) {
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (from[i]) worst = std::max(worst, to_edt[i]);
  return std::sqrt(worst);
}

std::vector<std::uint8_t> complement(const std::vector<std::uint8_t>& m) {
  std::vector<std::uint8_t> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) c[i] = m[i] ? 0 : 1;
  return c;
}

bool any(const std::vector<std::uint8_t>& m) { return std::find(m.begin(), m.end(), 1) != m.end(); }

double raster_hausdorff(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, int nx, int ny,
                        double h) {
  const bool ea = any(a), eb = any(b);
  if (!ea && !eb) return 0.0;
  if (!ea || !eb) throw Error(ErrorCode::EmptySet, "one rasterized set is empty");
  const auto da = distance_transform(a, nx, ny);
  const auto db = distance_transform(b, nx, ny);
  return h * std::max(directed_cells(a, db), directed_cells(b, da));
}

void check_resolution(const ShapeDomain& d, double h) {
  if (h > d.feature_size())
    throw Error(ErrorCode::ResolutionTooCoarse,
                "resolution " + std::to_string(h) + " exceeds feature size " + std::to_string(d.feature_size()));
}

// Closure raster: interior cells plus cells hit by boundary samples.
std::vector<std::uint8_t> boundary_cells(const ShapeDomain& d, const CharacteristicGrid& g) {
  std::vector<std::uint8_t> m(g.mask.size(), 0);
  const int n = std::max(64, 4 * (g.nx + g.ny));
  for (const auto& s : sample_boundary(d, n)) {
    const int i = static_cast<int>(std::floor((s.point.x - g.box.lo.x) / g.h));
    const int j = g.dim == 1 ? 0 : static_cast<int>(std::floor((s.point.y - g.box.lo.y) / g.h));
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) continue;
    m[static_cast<std::size_t>(j) * g.nx + i] = 1;
  }
  return m;
}

double pair_separation(const DisjointPair& p) {
  const auto a = sample_boundary(*p.first, 512);
  const auto b = sample_boundary(*p.second, 512);
  double sep = kInf;
  for (const auto& x : a)
    for (const auto& y : b) sep = std::min(sep, dist(x.point, y.point));
  return sep;
}

std::optional<std::size_t> crossing(const std::vector<bool>& ok) {
  std::optional<std::size_t> idx;
  for (std::size_t i = ok.size(); i-- > 0;) {
    if (!ok[i]) break;
    idx = i;
  }
  return idx;
}

}  // namespace

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_distance_indexed(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  const BucketGrid ga(a), gb(b);
  return std::max(directed_indexed(a, gb), directed_indexed(b, ga));
}

std::vector<double> distance_transform(const std::vector<std::uint8_t>& target, int nx, int ny) {
  std::vector<double> f(target.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = target[i] ? 0.0 : kInf;
  std::vector<double> g(f.size());
  const int n = std::max(nx, ny);
  std::vector<int> v(static_cast<std::size_t>(n) + 1);
  std::vector<double> z(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i < nx; ++i) edt_1d(f.data() + i, g.data() + i, ny, nx, v, z);
  for (int j = 0; j < ny; ++j) edt_1d(g.data() + static_cast<std::size_t>(j) * nx, f.data() + static_cast<std::size_t>(j) * nx, nx, 1, v, z);
  return f;
}

RasterDistance open_set_distance(const ShapeDomain& a, const ShapeDomain& b, const Box& d, double h) {
  check_resolution(a, h);
  check_resolution(b, h);
  const auto ga = characteristic_grid(a, h, d);
  const auto gb = characteristic_grid(b, h, d);
  return {raster_hausdorff(complement(ga.mask), complement(gb.mask), ga.nx, ga.ny, h), h * std::sqrt(2.0)};
}

ConvergenceReport convergence_report(const std::vector<ShapeDomain>& seq, const ShapeDomain& limit, const Box& d,
                                     double h, std::vector<double> probe_radii) {
  if (seq.size() < 3) throw Error(ErrorCode::InvalidInput, "convergence report needs at least 3 members");
  if (probe_radii.empty()) probe_radii = {2 * h, 4 * h, 8 * h};
  for (const auto& s : seq) check_resolution(s, h);
  check_resolution(limit, h);

  ConvergenceReport r;
  r.h = h;
  r.probe_radii = probe_radii;
  const auto gl = characteristic_grid(limit, h, d);
  const int nx = gl.nx, ny = gl.ny;
  const double cell_measure = gl.dim == 1 ? h : h * h;
  const auto limit_out = complement(gl.mask);
  const auto dist_to_out = distance_transform(limit_out, nx, ny);
  const auto dist_to_in = distance_transform(gl.mask, nx, ny);
  auto limit_closure = gl.mask;
  const auto limit_boundary = boundary_cells(limit, gl);
  for (std::size_t i = 0; i < limit_closure.size(); ++i) limit_closure[i] |= limit_boundary[i];

  r.threshold_h = 2 * h;
  r.threshold_l = 4 * h * limit.perimeter();
  r.threshold_boundary = 2 * h;

  for (const auto& member : seq) {
    const auto g = characteristic_grid(member, h, d);
    r.h_distances.push_back(raster_hausdorff(complement(g.mask), limit_out, nx, ny, h));
    std::size_t diff = 0;
    for (std::size_t i = 0; i < g.mask.size(); ++i) diff += g.mask[i] != gl.mask[i];
    r.l1_distances.push_back(static_cast<double>(diff) * cell_measure);

    std::vector<bool> probes;
    for (double rad : probe_radii) {
      const double r2 = (rad / h) * (rad / h);
      bool ok = true;
      for (std::size_t i = 0; i < g.mask.size() && ok; ++i) {
        if (gl.mask[i] && dist_to_out[i] >= r2 && !g.mask[i]) ok = false;
        if (!gl.mask[i] && dist_to_in[i] >= r2 && g.mask[i]) ok = false;
      }
      probes.push_back(ok);
    }
    r.k_verdicts.push_back(probes);

    const auto bnd = boundary_cells(member, g);
    auto closure = g.mask;
    for (std::size_t i = 0; i < closure.size(); ++i) closure[i] |= bnd[i];
    r.closure_distances.push_back(raster_hausdorff(closure, limit_closure, nx, ny, h));
    r.boundary_distances.push_back(raster_hausdorff(bnd, limit_boundary, nx, ny, h));
    if (const auto* p = member.as<DisjointPair>()) r.separations.push_back(pair_separation(*p));
  }

  for (std::size_t i = 0; i < seq.size(); ++i) {
    r.h_converged.push_back(r.h_distances[i] <= r.threshold_h);
    r.l_converged.push_back(r.l1_distances[i] <= r.threshold_l);
    r.k_converged.push_back(std::all_of(r.k_verdicts[i].begin(), r.k_verdicts[i].end(), [](bool b) { return b; }));
  }
  r.h_crossing = crossing(r.h_converged);
  r.k_crossing = crossing(r.k_converged);
  r.l_crossing = crossing(r.l_converged);
  r.agree_every_index = true;
  for (std::size_t i = 0; i < seq.size(); ++i)
    r.agree_every_index = r.agree_every_index && r.h_converged[i] == r.k_converged[i] &&
                          r.h_converged[i] == r.l_converged[i];
  const std::size_t last = seq.size() - 1;
  r.modes_agree = r.h_converged[last] == r.k_converged[last] && r.h_converged[last] == r.l_converged[last];
  r.closure_limit_matches = r.closure_distances[last] <= r.h_distances[last] + r.threshold_boundary;
  r.boundary_limit_matches = r.boundary_distances[last] <= r.h_distances[last] + r.threshold_boundary;
  return r;
}

std::vector<GBoundRow> verify_G_bound(const std::vector<ShapeDomain>& seq, const std::vector<double>& eps,
                                      const std::vector<bool>& contact, double tol) {
  if (seq.size() != eps.size() || seq.size() != contact.size())
    throw Error(ErrorCode::InvalidInput, "sequence, eps and contact lists differ in length");
  std::vector<GBoundRow> rows;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto* sp = seq[i].as<StarPolar>();
    if (!sp) throw Error(ErrorCode::NotStarPolar, "G bound needs star-polar members");
    const CheckReport e = check_eps_ball_gnp(seq[i], eps[i], tol);
    if (!e.pass) throw Error(ErrorCode::PreconditionFailed, "member " + std::to_string(i) + " fails the eps-ball check");
    if (contact[i]) {
      double gmax = 0.0;
      const int m = std::max<int>(4096, 8 * static_cast<int>(sp->g.size()));
      for (int k = 0; k < m; ++k) gmax = std::max(gmax, sp->radius(2 * kPi * k / m));
      if (std::fabs(gmax - 1.0) > 1e-6)
        throw Error(ErrorCode::PreconditionFailed, "member " + std::to_string(i) + " is not normalized to max G = 1");
    }
    const double min_g = e.stats.at("min_radius");
    const double bound = 1.0 - 4.0 * eps[i];
    rows.push_back({min_g, bound, min_g >= bound - tol});
  }
  return rows;
}

Ball enclosing_ball(const ConvexBody& c) {
  return std::visit(
      [](const auto& s) -> Ball {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return s;
        } else if constexpr (std::is_same_v<T, Segment>) {
          return {(s.a + s.b) * 0.5, 0.5 * dist(s.a, s.b)};
        } else {
          const auto& v = s.vertices;
          auto inside = [](const Ball& b, Vec2 p) { return dist(b.center, p) <= b.radius * (1 + 1e-12) + 1e-15; };
          auto circum = [](Vec2 a, Vec2 b, Vec2 c) -> Ball {
            const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
            const double a2 = norm2(a), b2 = norm2(b), c2 = norm2(c);
            const Vec2 o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                         (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
            return {o, dist(o, a)};
          };
          Ball b{v[0], 0.0};
          for (std::size_t i = 1; i < v.size(); ++i) {
            if (inside(b, v[i])) continue;
            b = {v[i], 0.0};
            for (std::size_t j = 0; j < i; ++j) {
              if (inside(b, v[j])) continue;
              b = {(v[i] + v[j]) * 0.5, 0.5 * dist(v[i], v[j])};
              for (std::size_t k = 0; k < j; ++k)
                if (!inside(b, v[k])) b = circum(v[i], v[j], v[k]);
            }
          }
          return b;
        }
      },
      c.shape());
}

double sampled_area(const ShapeDomain& domain, int n) {
  const auto s = sample_boundary(domain, n);
  std::map<int, std::vector<Vec2>> loops;
  for (const auto& b : s) loops[b.component].push_back(b.point);
  double total = 0.0;
  for (const auto& [comp, pts] : loops) {
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) a += cross(pts[i], pts[(i + 1) % pts.size()]);
    total += 0.5 * std::fabs(a);
  }
  return total;
}

std::vector<DilationRow> dilation_limit_experiment(const std::vector<ShapeDomain>& seq, const ConvexBody& c, int n) {
  const Ball bc = enclosing_ball(c);
  const ConvexBody ref = ConvexBody::ball(bc.center, bc.radius);
  std::vector<DilationRow> rows;
  double last_area = -kInf;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!check_c_gnp(seq[i], ref, n).pass)
      throw Error(ErrorCode::PreconditionFailed, "member " + std::to_string(i) + " fails the enclosing-ball GNP");
    const double area = sampled_area(seq[i]);
    if (area < last_area)
      throw Error(ErrorCode::PreconditionFailed, "member volumes must be nondecreasing");
    last_area = area;
    double rmin = kInf, rmax = 0.0;
    for (const auto& s : sample_boundary(seq[i], n)) {
      rmin = std::min(rmin, norm(s.point));
      rmax = std::max(rmax, norm(s.point));
    }
    const double scale = 1.0 / rmax;
    rows.push_back({scale, rmin * scale, 1.0, 1.0 - rmin / rmax});
  }
  return rows;
}

}  // namespace gnp
