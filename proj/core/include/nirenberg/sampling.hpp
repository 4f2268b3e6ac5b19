#pragma once

#include <cstdint>
#include <vector>

#include "nirenberg/geometry.hpp"

namespace nirenberg {

/// Deterministic quasi-uniform point set on S^n: Halton points in the unit
/// cube mapped through inverse Gaussians and normalized. `seed` offsets the
/// sequence start, so a fixed seed always yields the identical set.
std::vector<Vec> quasi_uniform_points(int n, int count, std::uint64_t seed = 0);

/// Inverse of the standard normal CDF (Acklam's rational approximation,
/// ~1e-9 absolute accuracy; used only to place sample points).
double inverse_normal_cdf(double p);

/// Small deterministic RNG with a fully specified output stream, so results
/// do not depend on standard-library distribution internals.
class DeterministicRng {
public:
  explicit DeterministicRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double next_double();
  /// Standard normal via Box-Muller on the uniform stream.
  double next_normal();
  /// Uniformly random point on S^n.
  SpherePoint next_sphere_point(int n);
  /// Random point at most `radius` geodesic from `center`, with density
  /// proportional to the cap area element in the radial variable.
  SpherePoint next_point_in_cap(const SpherePoint& center, double radius);

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nirenberg
