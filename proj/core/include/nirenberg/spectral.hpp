#pragma once

#include <functional>
#include <vector>

#include "nirenberg/geometry.hpp"

namespace nirenberg {

/// Eigenvalue of the order-2gamma intertwining operator on degree-k spherical
/// harmonics: Gamma(k + n/2 + gamma) / Gamma(k + n/2 - gamma). Evaluated via
/// log-gamma differences so large k does not overflow.
double pgamma_eigenvalue(long k, const ProblemParams& params);

/// Expansion of a zonal field about `center` in normalized Gegenbauer
/// polynomials of cos(theta) (the zonal spherical harmonics on S^n).
struct ZonalExpansion {
  SpherePoint center;
  std::vector<double> coeffs;  // against the orthonormal basis
  double tail_estimate = 0.0;  // magnitude of the last coefficients
  double tolerance = 0.0;      // requested reconstruction tolerance
  bool truncation_ok = true;   // tail_estimate <= tolerance

  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Values of the orthonormal zonal basis functions at t = cos(theta), in the
/// L^2 inner product with weight sin^{n-1}(theta) d(theta).
std::vector<double> zonal_basis_values(int n, int L, double t);

/// Expands g(theta) about `center` with truncation L. The tail estimate is
/// reported in the result; exceeding the tolerance flags truncation_ok=false
/// rather than throwing.
ZonalExpansion zonal_expand(const std::function<double(double)>& g,
                            const SpherePoint& center, int L,
                            const ProblemParams& params,
                            double tolerance = 1e-8, int quad_points = 0);

/// Multiplies coefficient k by the degree-k eigenvalue. Center unchanged.
ZonalExpansion apply_pgamma(const ZonalExpansion& e, const ProblemParams& params);

/// Reconstructs the represented field at polar angle theta from the center.
double reconstruct(const ZonalExpansion& e, double theta, const ProblemParams& params);
double reconstruct_at(const ZonalExpansion& e, const SpherePoint& x,
                      const ProblemParams& params);

/// <u, v> = int v P_gamma u dvol for two expansions about the same center:
/// |S^{n-1}| * sum_k Lambda_k c_k(u) c_k(v).
double hgamma_inner(const ZonalExpansion& u, const ZonalExpansion& v,
                    const ProblemParams& params);

/// Plain L^2(S^n) pairing of two expansions about the same center.
double l2_inner(const ZonalExpansion& u, const ZonalExpansion& v,
                const ProblemParams& params);

}  // namespace nirenberg
