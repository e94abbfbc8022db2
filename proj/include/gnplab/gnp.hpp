#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnplab/convex.hpp"
#include "gnplab/domain.hpp"

namespace gnp {

struct Witness {
  std::string condition;
  std::optional<BoundarySample> sample;
  Vec2 point;
};

/// Verdict of a class-membership check. Margins are positive when the
/// condition holds with slack.
struct CheckReport {
  bool pass = true;
  double worst_margin = 0.0;
  std::optional<Witness> witness;
  std::map<std::string, bool> conditions;
  std::map<std::string, double> stats;
  std::size_t samples_used = 0;
  std::size_t skipped_nonsmooth = 0;
};

struct GnpOptions {
  int interior_budget = 256;
  int march_steps = 512;
  double tol = kDefaultTol;
};

/// The four-condition C-GNP check. Condition (2) is informational only.
CheckReport check_c_gnp(const ShapeDomain& omega, const ConvexBody& c, int n, const GnpOptions& opt = {});

/// Normal-cone emptiness: no interior sample of omega lies in CN_x for any
/// boundary sample x. Margin = min over pairs of sup_c (y - x).(c - x) / |y - x|.
CheckReport check_c_sp(const ShapeDomain& omega, const ConvexBody& c, int n_boundary, int n_interior = 2048,
                       double tol = kDefaultTol);

/// eps^2 - max over theta of (G G')^2 / (G^2 + G'^2) on a dense grid.
CheckReport check_eps_ball_gnp(const ShapeDomain& omega, double eps, double tol = kDefaultTol);

enum class FootSign { Geometric, Paper };

/// Foot x + phi phi' (or x - phi phi') of the inward normal on the axis,
/// required to lie in [c_lo, c_hi].
CheckReport check_graph_gnp(const ShapeDomain& omega, double c_lo = -1.0, double c_hi = 1.0,
                            FootSign sign = FootSign::Geometric, int n = 4096, double tol = kDefaultTol);

enum class PairMode { Distance, Projection };

CheckReport check_pair_class(const ShapeDomain& omega, const ConvexBody& c1, const ConvexBody& c2, PairMode mode,
                             int n = 512, std::optional<double> delta = std::nullopt, double tol = kDefaultTol);

struct Patch {
  Vec2 center;
  double radius = 0.0;
  Ball reference;
};

enum class LocalMode { Gnp, NormalCone };

CheckReport check_local_class(const ShapeDomain& omega, const std::vector<Patch>& patches, LocalMode mode,
                              int n = 512, double tol = kDefaultTol);

/// Re-runs check_c_gnp on the image of (omega, c) under x -> m x + t. Stats
/// carry the margin before and after the map.
CheckReport affine_map_check(const ShapeDomain& omega, const ConvexBody& c, const Mat2& m, Vec2 t, int n,
                             const GnpOptions& opt = {});

}  // namespace gnp
