#pragma once

#include <functional>
#include <vector>

#include "gnplab/convex.hpp"

namespace gnp {

/// -ln|x| / (2 pi) for N = 2, 1 / (4 pi |x|) for N = 3. Throws SingularPoint
/// for |x| <= 1e-14.
double fundamental_solution(int n_dim, double r);
double fundamental_solution(int n_dim, Vec2 x);

/// Green function of -Laplace on the ball B_R with zero boundary values.
/// Planar points are taken in the plane z = 0 when N = 3. The image term uses
/// ||y| x / R - R y / |y||^2 = |x|^2 |y|^2 / R^2 - 2 x.y + R^2, which stays
/// finite at y = 0. Throws SingularPair when x = y.
double green_disk(double radius, Vec2 x, Vec2 y, int n_dim = 2);

/// f >= 0 on a convex support, with a quadrature rule over the support.
struct SourceDensity {
  ConvexBody support;
  std::function<double(Vec2)> f;
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  std::vector<double> values;  // f at nodes

  /// Polar Gauss-Legendre rule about an interior point of the support.
  static SourceDensity make(ConvexBody support, std::function<double(Vec2)> f, int angular = 256, int radial = 32);
  static SourceDensity constant(ConvexBody support, double value = 1.0, int angular = 256, int radial = 32);

  double total_weight() const;
  double integral(const std::function<double(Vec2)>& g) const;  // sum w f g
};

/// U_R(x) = int_C G_R(x, y) f(y) dy for N = 2. Each evaluation uses a polar
/// rule centered at x, so the log singularity is absorbed by the Jacobian.
/// Throws SupportOutsideBall unless C and every eval point lie in B_R.
std::vector<double> solve_U_R(double radius, const SourceDensity& f, const std::vector<Vec2>& eval_points,
                              int angular = 256, int radial = 24);

/// Closed form of U_R for f = 1 on B(O, rho), N = 2.
double radial_indicator_solution(double radius, double rho, double r);

struct ScanRow {
  double radius = 0.0;
  double int_f_u = 0.0;        // int_C f U_R
  double volume = 0.0;         // measured area of the member touching S(O, R)
  double volume_ratio = 0.0;   // volume / R^N
  double c1 = 0.0;             // 2 R int_C f
  double bound = 0.0;          // -1/2 int f U_R + k^2 volume
  double linear_bound = 0.0;   // F - 2 c1 R + k^2 c_N R^N, c_N = min volume ratio
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double exponent_fit = 0.0;   // least-squares slope of log bound vs log R
  double exponent_last = 0.0;  // slope between the two largest radii
  double min_volume_ratio = 0.0;
};

/// Growth scan. volumes[i] is the measured area of a domain circumscribed by
/// S(O, radii[i]). Throws InvalidInput unless radii increase and N = 2.
ScanResult j_bound_scan(const std::vector<double>& radii, const SourceDensity& f, double k,
                        const std::vector<double>& volumes, int n_dim = 2, double big_f = 0.0);

}  // namespace gnp
