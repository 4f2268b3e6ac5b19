#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "nirenberg/errors.hpp"

namespace nirenberg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Global problem context: sphere dimension n >= 3 and fractional order
/// gamma in (0,1), with the exponents derived from them.
struct ProblemParams {
  int n = 4;
  double gamma = 0.5;

  ProblemParams() = default;
  ProblemParams(int n_, double gamma_) : n(n_), gamma(gamma_) { validate(); }

  void validate() const {
    if (n < 3) throw DomainError("dimension n must be >= 3");
    if (!(gamma > 0.0 && gamma < 1.0))
      throw DomainError("fractional order gamma must lie in (0,1)");
  }

  double nm2g() const { return n - 2.0 * gamma; }
  /// 2n/(n-2*gamma), the critical Sobolev exponent.
  double critical_exponent() const { return 2.0 * n / nm2g(); }
  /// (n-2*gamma)/2, the decay exponent of the standard bubble.
  double bubble_exponent() const { return nm2g() / 2.0; }
  /// (n+2*gamma)/(n-2*gamma), the nonlinearity exponent.
  double gradient_exponent() const { return (n + 2.0 * gamma) / nm2g(); }
  /// Ambient dimension n+1.
  int ambient_dim() const { return n + 1; }
};

/// A point on the unit sphere S^n, stored in ambient coordinates.
class SpherePoint {
public:
  static constexpr double kNormTol = 1e-12;

  explicit SpherePoint(Vec coords) : x_(std::move(coords)) {
    const double err = std::abs(x_.norm() - 1.0);
    if (!(err <= kNormTol))
      throw DomainError("SpherePoint: coordinates not unit length");
  }

  /// Builds a point by normalizing an arbitrary nonzero ambient vector.
  static SpherePoint normalized(const Vec& v) {
    const double nrm = v.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw DomainError("SpherePoint: cannot normalize zero/non-finite vector");
    return SpherePoint(Vec(v / nrm));
  }

  const Vec& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }
  int ambient_dim() const { return static_cast<int>(x_.size()); }

private:
  Vec x_;
};

/// e_{n+1}, the north pole of S^n.
SpherePoint north_pole(int n);
/// -e_{n+1}.
SpherePoint south_pole(int n);
/// The i-th ambient coordinate axis (0-based) as a sphere point.
SpherePoint axis_point(int n, int i, bool negative = false);
SpherePoint antipode(const SpherePoint& a);

/// Geodesic distance on S^n in radians, in [0, pi]. The inner product is
/// clamped to [-1,1] so roundoff cannot escape acos' domain.
double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// Surface area of S^n as a subset of R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_area(int n);
/// omega_n = |S^{n-1}|, the area of the unit sphere in R^n. This is the
/// constant appearing in the radial factorization of integrals over R^n.
double omega(int n);

/// Deterministic orthonormal basis of the tangent space at a, returned as the
/// columns of an (n+1) x n matrix. The ambient axis most aligned with a is
/// dropped and the remaining axes are Gram-Schmidt orthonormalized in index
/// order, so the frame varies smoothly near any point without coordinate ties.
Mat tangent_basis(const SpherePoint& a);

/// Stereographic chart. Projection is from `pole`; the antipode of the pole
/// maps to the origin and the equator maps to the unit sphere of R^n.
/// Coordinates are taken against tangent_basis(pole).
Vec stereographic_project(const SpherePoint& x, const SpherePoint& pole);
SpherePoint stereographic_inverse(const Vec& y, const SpherePoint& pole);

/// exp_a(t e): walk a geodesic from a with unit tangent direction e.
SpherePoint geodesic_step(const SpherePoint& a, const Vec& direction, double t);

}  // namespace nirenberg
