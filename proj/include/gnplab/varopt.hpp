#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gnp {

/// u = phi^2 sampled on a uniform grid of [x_lo, x_hi] with fixed end values.
struct GridFunction {
  double x_lo = -1.0;
  double x_hi = 1.0;
  std::vector<double> u;
  double bc_lo = 0.0;
  double bc_hi = 0.0;

  static GridFunction zeros(double x_lo, double x_hi, int m, double bc_lo = 0.0, double bc_hi = 0.0);
  int m() const { return static_cast<int>(u.size()); }
  double dx() const { return (x_hi - x_lo) / (m() - 1); }
  double x(int i) const { return i + 1 == m() ? x_hi : x_lo + i * dx(); }
  /// Throws InvalidInput unless m >= 21, u >= 0 and the ends match bc.
  void validate() const;
};

/// Bounds on the slope of u over each grid interval (evaluated at the
/// interval midpoint, exact for the affine bounds used here).
struct DerivativeBox {
  std::vector<double> lo;
  std::vector<double> hi;

  /// Foot of the inward normal confined to [c_lo, c_hi]. The geometric
  /// foot x + u'/2 gives u' in [2(c_lo - x), 2(c_hi - x)]; the paper-sign
  /// foot x - u'/2 gives u' in [2(x - c_hi), 2(x - c_lo)].
  static DerivativeBox for_segment(double x_lo, double x_hi, int m, double c_lo = -1.0, double c_hi = 1.0,
                                   bool paper_sign = false);
};

/// Polyline length of {(x_i, sqrt(u_i))}.
double perimeter_u(const GridFunction& u);
/// Trapezoid integral of sqrt(u).
double area_u(const GridFunction& u);

/// Least nonnegative function meeting the box and both end values.
/// Throws InfeasibleBC when none exists.
GridFunction least_feasible(const GridFunction& shape, const DerivativeBox& box);
/// Greatest feasible function.
GridFunction greatest_feasible(const GridFunction& shape, const DerivativeBox& box);

/// Slopes projected onto the box subject to the end values, re-integrated,
/// then lifted onto the least feasible nonnegative function.
GridFunction project_feasible(const GridFunction& u, const DerivativeBox& box);

struct OptimizeResult {
  GridFunction u;
  double lambda = 0.0;
  double perimeter = 0.0;
  double area = 0.0;
  double objective = 0.0;  // perimeter - lambda * area
  int iterations = 0;
  std::vector<double> history;  // objective per accepted step
};

struct OptimizeOptions {
  double lambda = 0.0;
  int max_iterations = 100000;
  double gradient_tol = 1e-8;
};

/// Projected gradient descent on P(u) - lambda * A(u) with Armijo
/// backtracking, started from the least and the greatest feasible function.
OptimizeResult minimize_perimeter(const DerivativeBox& box, double bc_lo, double bc_hi, int m,
                                  const OptimizeOptions& opt = {}, double x_lo = -1.0, double x_hi = 1.0);

struct SweepResult {
  std::vector<OptimizeResult> front;
  std::size_t chosen = 0;  // member whose area is closest to the target
};

SweepResult minimize_with_area(const DerivativeBox& box, double bc_lo, double bc_hi, int m, double area_target,
                               const std::vector<double>& lambdas, double x_lo = -1.0, double x_hi = 1.0);

struct DpResult {
  GridFunction u;
  double objective = 0.0;
  double perimeter = 0.0;
  double area = 0.0;
};

/// Exact dynamic program over grid nodes x u-levels (uniform in sqrt u).
DpResult dp_oracle(const DerivativeBox& box, double bc_lo, double bc_hi, int m, int u_levels, double lambda,
                   double x_lo = -1.0, double x_hi = 1.0);

struct CandidateRow {
  std::string family;
  double parameter = 0.0;
  std::string convention;  // "geometric" (x + phi phi') or "paper" (x - phi phi')
  double target = 0.0;
  double max_deviation = 0.0;  // max |foot - target| on the sample grid
  std::size_t samples = 0;
};

std::vector<CandidateRow> evaluate_saturating_candidates(const std::vector<double>& radii = {0.5, 1.0, 2.0, 4.0},
                                                         int samples = 10001);

}  // namespace gnp
