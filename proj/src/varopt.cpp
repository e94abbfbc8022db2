#include "gnplab/varopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnplab/error.hpp"

namespace gnp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(double x_lo, double x_hi, int m) {
  if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
    throw Error(ErrorCode::InvalidInput, "interval must satisfy x_lo < x_hi");
  if (m < 21) throw Error(ErrorCode::InvalidInput, "grid needs m >= 21");
}

void check_box(const DerivativeBox& box, int m) {
  if (static_cast<int>(box.lo.size()) != m - 1 || static_cast<int>(box.hi.size()) != m - 1)
    throw Error(ErrorCode::InvalidInput, "derivative box does not match grid");
  for (int i = 0; i + 1 < m; ++i)
    if (!(box.lo[i] <= box.hi[i])) throw Error(ErrorCode::InvalidInput, "derivative box has lo > hi");
}

double phi_of(double u) { return std::sqrt(std::max(u, 0.0)); }

// hypot(dx, dp) - dx without cancellation.
double excess(double dx, double dp) {
  if (dp == 0.0) return 0.0;
  return dp * dp / (std::hypot(dx, dp) + dx);
}

double objective(const GridFunction& u, double lambda) { return perimeter_u(u) - lambda * area_u(u); }

struct Gradient {
  std::vector<double> du;         // dF/du
  std::vector<double> direction;  // descent direction in u
};

// Exact gradient of the discrete P - lambda A. The direction is steepest
// descent in the phi chart with the grid L2 metric, pulled back to u.
Gradient gradient(const GridFunction& g, double lambda) {
  const int m = g.m();
  const double dx = g.dx();
  std::vector<double> phi(m);
  Gradient r{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (int i = 0; i < m; ++i) phi[i] = phi_of(g.u[i]);
  for (int i = 1; i + 1 < m; ++i) {
    const double dl = phi[i] - phi[i - 1];
    const double dr = phi[i + 1] - phi[i];
    const double dp = dl / std::hypot(dx, dl) - dr / std::hypot(dx, dr) - lambda * dx;
    r.du[i] = dp / (2.0 * std::max(phi[i], 1e-6));
    r.direction[i] = -2.0 * std::max(phi[i], 1e-2) * dp / dx;
  }
  return r;
}

// Shift mu with sum clip(s + mu, lo, hi) * dx = target. Piecewise linear, exact.
double find_shift(const std::vector<double>& s, const DerivativeBox& box, double dx, double target) {
  const std::size_t n = s.size();
  auto total = [&](double mu) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += std::clamp(s[i] + mu, box.lo[i], box.hi[i]);
    return t * dx;
  };
  const double f0 = total(0.0);
  if (std::fabs(f0 - target) <= 1e-14 * (1.0 + std::fabs(target))) return 0.0;
  std::vector<double> bp;
  bp.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    bp.push_back(box.lo[i] - s[i]);
    bp.push_back(box.hi[i] - s[i]);
  }
  std::sort(bp.begin(), bp.end());
  double a = bp.front(), b = bp.back();
  double fa = total(a), fb = total(b);
  if (target < fa - 1e-12 || target > fb + 1e-12) throw Error(ErrorCode::InfeasibleBC, "slope box cannot meet the end values");
  // bisection over breakpoints, then linear interpolation inside the bracket
  std::size_t lo = 0, hi = bp.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (total(bp[mid]) < target) lo = mid;
    else hi = mid;
  }
  a = bp[lo];
  b = bp[hi];
  fa = total(a);
  fb = total(b);
  if (fb - fa <= 0.0) return a;
  return a + (target - fa) * (b - a) / (fb - fa);
}

GridFunction with_values(const GridFunction& shape, std::vector<double> u) {
  GridFunction g = shape;
  g.u = std::move(u);
  return g;
}

}  // namespace

GridFunction GridFunction::zeros(double x_lo, double x_hi, int m, double bc_lo, double bc_hi) {
  check_grid(x_lo, x_hi, m);
  GridFunction g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.u.assign(m, 0.0);
  g.u.front() = bc_lo;
  g.u.back() = bc_hi;
  g.bc_lo = bc_lo;
  g.bc_hi = bc_hi;
  return g;
}

void GridFunction::validate() const {
  check_grid(x_lo, x_hi, m());
  for (double v : u)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "u must be finite and nonnegative");
  if (u.front() != bc_lo || u.back() != bc_hi) throw Error(ErrorCode::InvalidInput, "u does not match its end values");
}

DerivativeBox DerivativeBox::for_segment(double x_lo, double x_hi, int m, double c_lo, double c_hi, bool paper_sign) {
  check_grid(x_lo, x_hi, m);
  if (!(c_lo <= c_hi)) throw Error(ErrorCode::InvalidInput, "segment must satisfy c_lo <= c_hi");
  DerivativeBox box;
  const double dx = (x_hi - x_lo) / (m - 1);
  for (int i = 0; i + 1 < m; ++i) {
    const double xm = x_lo + (i + 0.5) * dx;
    if (paper_sign) {
      box.lo.push_back(2.0 * (xm - c_hi));
      box.hi.push_back(2.0 * (xm - c_lo));
    } else {
      box.lo.push_back(2.0 * (c_lo - xm));
      box.hi.push_back(2.0 * (c_hi - xm));
    }
  }
  return box;
}

double perimeter_u(const GridFunction& g) {
  const int m = g.m();
  const double dx = g.dx();
  double extra = 0.0;
  for (int i = 0; i + 1 < m; ++i) extra += excess(dx, phi_of(g.u[i + 1]) - phi_of(g.u[i]));
  return (g.x_hi - g.x_lo) + extra;
}

double area_u(const GridFunction& g) {
  const int m = g.m();
  double s = 0.0;
  for (int i = 0; i + 1 < m; ++i) s += phi_of(g.u[i]) + phi_of(g.u[i + 1]);
  return 0.5 * g.dx() * s;
}

GridFunction least_feasible(const GridFunction& shape, const DerivativeBox& box) {
  const int m = shape.m();
  check_box(box, m);
  const double dx = shape.dx();
  std::vector<double> l(m, 0.0);
  l.front() = std::max(0.0, shape.bc_lo);
  l.back() = std::max(0.0, shape.bc_hi);
  for (int i = 0; i + 1 < m; ++i) l[i + 1] = std::max(l[i + 1], l[i] + box.lo[i] * dx);
  for (int i = m - 2; i >= 0; --i) l[i] = std::max(l[i], l[i + 1] - box.hi[i] * dx);
  const double tol = 1e-10 * (1.0 + std::fabs(shape.bc_lo) + std::fabs(shape.bc_hi));
  if (shape.bc_lo < 0.0 || shape.bc_hi < 0.0 || l.front() > shape.bc_lo + tol || l.back() > shape.bc_hi + tol)
    throw Error(ErrorCode::InfeasibleBC, "no nonnegative function meets the slope box and end values");
  l.front() = shape.bc_lo;
  l.back() = shape.bc_hi;
  return with_values(shape, std::move(l));
}

GridFunction greatest_feasible(const GridFunction& shape, const DerivativeBox& box) {
  const GridFunction low = least_feasible(shape, box);
  const int m = shape.m();
  const double dx = shape.dx();
  std::vector<double> g(m, kInf);
  g.front() = shape.bc_lo;
  g.back() = shape.bc_hi;
  for (int i = 0; i + 1 < m; ++i) g[i + 1] = std::min(g[i + 1], g[i] + box.hi[i] * dx);
  for (int i = m - 2; i >= 0; --i) g[i] = std::min(g[i], g[i + 1] - box.lo[i] * dx);
  for (int i = 0; i < m; ++i) g[i] = std::max(g[i], low.u[i]);
  g.front() = shape.bc_lo;
  g.back() = shape.bc_hi;
  return with_values(shape, std::move(g));
}

GridFunction project_feasible(const GridFunction& in, const DerivativeBox& box) {
  const int m = in.m();
  check_grid(in.x_lo, in.x_hi, m);
  check_box(box, m);
  const GridFunction low = least_feasible(in, box);
  const double dx = in.dx();
  std::vector<double> s(m - 1);
  for (int i = 0; i + 1 < m; ++i) s[i] = (in.u[i + 1] - in.u[i]) / dx;
  const double mu = find_shift(s, box, dx, in.bc_hi - in.bc_lo);
  std::vector<double> u(m);
  u[0] = in.bc_lo;
  for (int i = 0; i + 1 < m; ++i) u[i + 1] = u[i] + std::clamp(s[i] + mu, box.lo[i], box.hi[i]) * dx;
  u.back() = in.bc_hi;
  for (int i = 0; i < m; ++i) u[i] = std::max(u[i], low.u[i]);
  return with_values(in, std::move(u));
}

namespace {

OptimizeResult descend(GridFunction u, const DerivativeBox& box, const OptimizeOptions& opt) {
  OptimizeResult r;
  r.lambda = opt.lambda;
  u = project_feasible(u, box);
  double f = objective(u, opt.lambda);
  r.history.push_back(f);
  const int m = u.m();
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Gradient g = gradient(u, opt.lambda);
    GridFunction probe = u;
    for (int i = 1; i + 1 < m; ++i) probe.u[i] += g.direction[i];
    probe = project_feasible(probe, box);
    double pg = 0.0;
    for (int i = 0; i < m; ++i) pg += (probe.u[i] - u.u[i]) * (probe.u[i] - u.u[i]);
    if (std::sqrt(pg) < opt.gradient_tol) break;
    bool accepted = false;
    for (double step = 1.0; step > 1e-20; step *= 0.5) {
      GridFunction trial = u;
      for (int i = 1; i + 1 < m; ++i) trial.u[i] += step * g.direction[i];
      trial = project_feasible(trial, box);
      double decrease = 0.0;
      for (int i = 0; i < m; ++i) decrease += g.du[i] * (trial.u[i] - u.u[i]);
      const double ft = objective(trial, opt.lambda);
      if (ft <= f + 1e-4 * decrease && ft <= f) {
        double moved = 0.0;
        for (int i = 0; i < m; ++i) moved = std::max(moved, std::fabs(trial.u[i] - u.u[i]));
        accepted = moved > 0.0;
        u = std::move(trial);
        f = ft;
        break;
      }
    }
    r.iterations = it + 1;
    if (!accepted) break;
    r.history.push_back(f);
  }
  r.u = std::move(u);
  r.perimeter = perimeter_u(r.u);
  r.area = area_u(r.u);
  r.objective = r.perimeter - opt.lambda * r.area;
  return r;
}

}  // namespace

OptimizeResult minimize_perimeter(const DerivativeBox& box, double bc_lo, double bc_hi, int m,
                                  const OptimizeOptions& opt, double x_lo, double x_hi) {
  const GridFunction shape = GridFunction::zeros(x_lo, x_hi, m, bc_lo, bc_hi);
  check_box(box, m);
  OptimizeResult best = descend(least_feasible(shape, box), box, opt);
  OptimizeResult other = descend(greatest_feasible(shape, box), box, opt);
  if (other.objective < best.objective) {
    other.iterations += best.iterations;
    return other;
  }
  best.iterations += other.iterations;
  return best;
}

SweepResult minimize_with_area(const DerivativeBox& box, double bc_lo, double bc_hi, int m, double area_target,
                               const std::vector<double>& lambdas, double x_lo, double x_hi) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidInput, "multiplier sweep is empty");
  SweepResult s;
  double best_gap = kInf;
  for (double lambda : lambdas) {
    OptimizeOptions opt;
    opt.lambda = lambda;
    s.front.push_back(minimize_perimeter(box, bc_lo, bc_hi, m, opt, x_lo, x_hi));
    const double gap = std::fabs(s.front.back().area - area_target);
    if (gap < best_gap) {
      best_gap = gap;
      s.chosen = s.front.size() - 1;
    }
  }
  return s;
}

DpResult dp_oracle(const DerivativeBox& box, double bc_lo, double bc_hi, int m, int u_levels, double lambda,
                   double x_lo, double x_hi) {
  if (m > 101 || u_levels > 401 || u_levels < 2) throw Error(ErrorCode::InvalidInput, "dp state space out of range");
  const GridFunction shape = GridFunction::zeros(x_lo, x_hi, m, bc_lo, bc_hi);
  check_box(box, m);
  const GridFunction low = least_feasible(shape, box);
  const GridFunction top = greatest_feasible(shape, box);
  const double dx = shape.dx();
  // column i holds low + t_k (top - low); t_k = (k / (L-1))^2 is uniform in
  // sqrt u where low = 0, and the constant-k path is always feasible
  std::vector<double> t(u_levels);
  for (int k = 0; k < u_levels; ++k) {
    const double s = static_cast<double>(k) / (u_levels - 1);
    t[k] = s * s;
  }
  auto level = [&](int i, int k) { return low.u[i] + t[k] * (top.u[i] - low.u[i]); };
  const int k0 = 0;
  const int k1 = 0;
  const double stol = 1e-12;
  std::vector<double> cost(u_levels, kInf), next(u_levels), pa(u_levels), pb(u_levels);
  std::vector<std::vector<int>> parent(m, std::vector<int>(u_levels, -1));
  cost[k0] = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    std::fill(next.begin(), next.end(), kInf);
    for (int k = 0; k < u_levels; ++k) {
      pa[k] = phi_of(level(i, k));
      pb[k] = phi_of(level(i + 1, k));
    }
    for (int a = 0; a < u_levels; ++a) {
      if (cost[a] == kInf) continue;
      for (int b = 0; b < u_levels; ++b) {
        const double slope = (level(i + 1, b) - level(i, a)) / dx;
        if (slope < box.lo[i] - stol || slope > box.hi[i] + stol) continue;
        const double c = cost[a] + dx + excess(dx, pb[b] - pa[a]) - lambda * 0.5 * dx * (pa[a] + pb[b]);
        if (c < next[b]) {
          next[b] = c;
          parent[i + 1][b] = a;
        }
      }
    }
    cost.swap(next);
  }
  if (cost[k1] == kInf) throw Error(ErrorCode::InfeasibleBC, "no lattice path meets the end values");
  DpResult r;
  r.u = shape;
  int k = k1;
  for (int i = m - 1; i >= 0; --i) {
    r.u.u[i] = std::max(level(i, k), 0.0);
    if (i > 0) k = parent[i][k];
  }
  r.u.u.front() = bc_lo;
  r.u.u.back() = bc_hi;
  r.perimeter = perimeter_u(r.u);
  r.area = area_u(r.u);
  r.objective = r.perimeter - lambda * r.area;
  return r;
}

std::vector<CandidateRow> evaluate_saturating_candidates(const std::vector<double>& radii, int samples) {
  if (samples < 3) throw Error(ErrorCode::InvalidInput, "need at least three samples");
  std::vector<CandidateRow> rows;
  auto scan = [&](const std::string& family, double param, double a, double b, double target, auto&& phi_phid) {
    CandidateRow geo{family, param, "geometric", target, 0.0, 0};
    CandidateRow pap{family, param, "paper", target, 0.0, 0};
    for (int k = 1; k + 1 < samples; ++k) {
      const double x = a + (b - a) * k / (samples - 1);
      const double pp = phi_phid(x);
      geo.max_deviation = std::max(geo.max_deviation, std::fabs(x + pp - target));
      pap.max_deviation = std::max(pap.max_deviation, std::fabs(x - pp - target));
      ++geo.samples;
      ++pap.samples;
    }
    rows.push_back(geo);
    rows.push_back(pap);
  };
  // phi = sqrt(1 - (x-1)^2): phi phi' = -(x - 1)
  scan("circle_1_0", 1.0, 0.0, 2.0, 1.0, [](double x) { return -(x - 1.0); });
  for (double r : radii) {
    // phi = R + sqrt(R^2 - (x-1)^2)
    scan("circle_1_R", r, 1.0 - r, 1.0 + r, 1.0, [r](double x) {
      const double s = std::sqrt(std::max(r * r - (x - 1.0) * (x - 1.0), 0.0));
      if (s == 0.0) return 0.0;
      return (r + s) * (-(x - 1.0) / s);
    });
  }
  // u = (x-1)^2 on [-1,1]: phi = 1 - x, phi phi' = x - 1
  scan("line_right", 0.0, -1.0, 1.0, 1.0, [](double x) { return x - 1.0; });
  // u = (x+1)^2: phi = 1 + x, phi phi' = x + 1
  scan("line_left", 0.0, -1.0, 1.0, -1.0, [](double x) { return x + 1.0; });
  return rows;
}

}  // namespace gnp
