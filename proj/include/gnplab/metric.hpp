#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gnplab/convex.hpp"
#include "gnplab/domain.hpp"

namespace gnp {

/// max of the two directed sup-inf distances between finite point sets.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Same value as hausdorff_distance, computed with a uniform bucket grid.
double hausdorff_distance_indexed(std::span<const Vec2> a, std::span<const Vec2> b);

/// Squared Euclidean distance (in cell units) from every cell to the nearest
/// cell where `target` is set. Cells are unreachable (+inf) if none is set.
std::vector<double> distance_transform(const std::vector<std::uint8_t>& target, int nx, int ny);

struct RasterDistance {
  double value = 0.0;
  double error_bound = 0.0;  // h * sqrt(2)
};

/// Hausdorff distance between the complements of two domains inside the box
/// d, both rasterized at resolution h.
RasterDistance open_set_distance(const ShapeDomain& a, const ShapeDomain& b, const Box& d, double h);

struct ConvergenceReport {
  double h = 0.0;
  std::vector<double> h_distances;
  std::vector<double> l1_distances;
  std::vector<double> closure_distances;
  std::vector<double> boundary_distances;
  std::vector<double> probe_radii;
  // k_verdicts[i][p]: probe p (interior erosion and complement dilation at
  // probe_radii[p]) respected by member i.
  std::vector<std::vector<bool>> k_verdicts;
  std::vector<double> separations;  // only for disjoint-pair members
  double threshold_h = 0.0;
  double threshold_l = 0.0;
  double threshold_boundary = 0.0;
  std::vector<bool> h_converged;
  std::vector<bool> k_converged;
  std::vector<bool> l_converged;
  std::optional<std::size_t> h_crossing;
  std::optional<std::size_t> k_crossing;
  std::optional<std::size_t> l_crossing;
  bool agree_every_index = false;
  bool modes_agree = false;
  bool closure_limit_matches = false;
  bool boundary_limit_matches = false;
};

/// Three-mode convergence diagnostics of seq toward limit on one shared
/// raster of d. Empty probe_radii selects {2h, 4h, 8h}.
ConvergenceReport convergence_report(const std::vector<ShapeDomain>& seq, const ShapeDomain& limit, const Box& d,
                                     double h, std::vector<double> probe_radii = {});

struct GBoundRow {
  double min_g = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

std::vector<GBoundRow> verify_G_bound(const std::vector<ShapeDomain>& seq, const std::vector<double>& eps,
                                      const std::vector<bool>& contact, double tol = kDefaultTol);

struct DilationRow {
  double scale = 0.0;
  double min_radius = 0.0;  // polar radii after rescaling
  double max_radius = 0.0;
  double eps = 0.0;
};

std::vector<DilationRow> dilation_limit_experiment(const std::vector<ShapeDomain>& seq, const ConvexBody& c,
                                                   int n = 512);

/// Smallest closed ball containing C.
Ball enclosing_ball(const ConvexBody& c);

/// Shoelace area of the sampled boundary; exact for polygons.
double sampled_area(const ShapeDomain& domain, int n = 4096);

}  // namespace gnp
