#pragma once

#include <vector>

#include "gnplab/convex.hpp"
#include "gnplab/domain.hpp"

namespace gnp {

struct ThicknessSample {
  Vec2 c;
  Vec2 nu;  // outward unit normal of C at c
  double d = 0.0;
  Vec2 image() const { return c + nu * d; }
};

struct ThicknessStats {
  double k = 0.0;     // Lipschitz estimate of d
  double m = 0.0;     // max d
  double l_nu = 0.0;  // Lipschitz estimate of the normal
  double margin = 0.0;
};

/// Thickness d(c) on the sampled boundary of C, with chord-quotient
/// estimates over consecutive samples. `partial` marks bodies whose normal
/// is undefined at vertices or endpoints.
struct ThicknessField {
  ConvexBody base;
  std::vector<ThicknessSample> samples;
  ThicknessStats stats;
  bool partial = false;
  double coverage = 1.0;
};

ThicknessStats thickness_stats(const std::vector<ThicknessSample>& samples);

ThicknessField compute_thickness(const ConvexBody& c, const ShapeDomain& omega, int n);

struct BilipschitzVerdict {
  double margin = 0.0;
  bool verdict = false;
  double lower_ratio = 0.0;  // guaranteed when verdict holds
  double upper_ratio = 0.0;
};

BilipschitzVerdict bilipschitz_margin(const ThicknessField& field);

struct RatioBounds {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Exhaustive pair scan of |Phi(c_i) - Phi(c_j)| / |c_i - c_j|.
RatioBounds empirical_ratio_bounds(const ThicknessField& field);

}  // namespace gnp
