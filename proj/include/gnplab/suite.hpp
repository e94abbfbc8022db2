#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gnplab/convex.hpp"
#include "gnplab/domain.hpp"
#include "gnplab/io.hpp"

namespace gnp {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// mt19937_64 with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

struct NamedPair {
  std::string name;
  ShapeDomain omega;
  ConvexBody c;
};

/// Six gallery pairs followed by six seeded random star/ball pairs.
std::vector<NamedPair> equivalence_pairs(std::uint64_t seed);

/// Star domains G = normalized (1 + sum a_k cos k t + b_k sin k t) with
/// max G = 1, kept when they pass check_eps_ball_gnp at eps.
std::vector<ShapeDomain> sample_eps_stars(std::uint64_t seed, int count, double eps, int* attempts = nullptr);

struct SuiteItem {
  std::string name;
  bool pass = false;
  std::string expectation;  // empty, or the documented behaviour the item reproduces
  Json metrics = Json::object();
};

/// Runs gallery, equivalence, counterexamples or full. Items are ordered by name.
std::vector<SuiteItem> run_suite(const std::string& name, std::uint64_t seed);

Json suite_report(const std::string& name, std::uint64_t seed, const std::vector<SuiteItem>& items);

}  // namespace gnp
