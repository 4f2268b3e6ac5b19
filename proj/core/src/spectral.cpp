#include "nirenberg/spectral.hpp"

#include <cmath>

#include "nirenberg/quadrature.hpp"

namespace nirenberg {

double pgamma_eigenvalue(long k, const ProblemParams& params) {
  if (k < 0) throw DomainError("pgamma_eigenvalue: k must be nonnegative");
  const double half_n = 0.5 * params.n;
  if (!(half_n > params.gamma))
    throw DomainError("pgamma_eigenvalue: requires n/2 > gamma");
  return std::exp(std::lgamma(k + half_n + params.gamma) -
                  std::lgamma(k + half_n - params.gamma));
}

namespace {

// Gegenbauer C_k^{nu}(t) with nu = (n-1)/2, normalized to unit L^2 norm
// against the weight (1-t^2)^{nu - 1/2}. log h_k is the squared-norm of the
// raw polynomial: pi 2^{1-2nu} Gamma(k+2nu) / (k! (k+nu) Gamma(nu)^2).
double log_norm_sq(int k, double nu) {
  return std::log(M_PI) + (1.0 - 2.0 * nu) * std::log(2.0) +
         std::lgamma(k + 2.0 * nu) - std::lgamma(k + 1.0) -
         std::log(k + nu) - 2.0 * std::lgamma(nu);
}

}  // namespace

std::vector<double> zonal_basis_values(int n, int L, double t) {
  const double nu = 0.5 * (n - 1.0);
  std::vector<double> vals(L + 1);
  double c_prev = 1.0;           // C_0
  double c_curr = 2.0 * nu * t;  // C_1
  for (int k = 0; k <= L; ++k) {
    double raw;
    if (k == 0)
      raw = c_prev;
    else if (k == 1)
      raw = c_curr;
    else {
      const double c_next =
          (2.0 * t * (k - 1.0 + nu) * c_curr - (k - 2.0 + 2.0 * nu) * c_prev) / k;
      c_prev = c_curr;
      c_curr = c_next;
      raw = c_curr;
    }
    vals[k] = raw * std::exp(-0.5 * log_norm_sq(k, nu));
  }
  return vals;
}

ZonalExpansion zonal_expand(const std::function<double(double)>& g,
                            const SpherePoint& center, int L,
                            const ProblemParams& params, double tolerance,
                            int quad_points) {
  if (L < 0) throw DomainError("zonal_expand: negative truncation");
  const int m = quad_points > 0 ? quad_points : std::max(2 * L + 64, 512);
  const Rule1D gl = gauss_legendre(m, 0.0, M_PI);

  std::vector<KahanAccumulator> acc(L + 1);
  for (int i = 0; i < m; ++i) {
    const double theta = gl.nodes[i];
    const double v = g(theta);
    if (!std::isfinite(v))
      throw NonFiniteSample("zonal_expand: non-finite field sample");
    const double w =
        gl.weights[i] * std::pow(std::sin(theta), params.n - 1) * v;
    const std::vector<double> basis =
        zonal_basis_values(params.n, L, std::cos(theta));
    for (int k = 0; k <= L; ++k) acc[k].add(w * basis[k]);
  }

  ZonalExpansion e{center, {}, 0.0, tolerance, true};
  e.coeffs.resize(L + 1);
  for (int k = 0; k <= L; ++k) e.coeffs[k] = acc[k].value();

  // Tail estimate from the trailing coefficients, relative to the field size.
  double tail = 0.0;
  for (int k = std::max(0, L - 4); k <= L; ++k)
    tail = std::max(tail, std::abs(e.coeffs[k]));
  double scale = 0.0;
  for (double c : e.coeffs) scale = std::max(scale, std::abs(c));
  e.tail_estimate = scale > 0.0 ? tail / scale : 0.0;
  e.truncation_ok = e.tail_estimate <= tolerance;
  return e;
}

ZonalExpansion apply_pgamma(const ZonalExpansion& e, const ProblemParams& params) {
  ZonalExpansion out = e;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] *= pgamma_eigenvalue(static_cast<long>(k), params);
  return out;
}

double reconstruct(const ZonalExpansion& e, double theta,
                   const ProblemParams& params) {
  const std::vector<double> basis =
      zonal_basis_values(params.n, e.truncation(), std::cos(theta));
  KahanAccumulator acc;
  for (std::size_t k = 0; k < e.coeffs.size(); ++k)
    acc.add(e.coeffs[k] * basis[k]);
  return acc.value();
}

double reconstruct_at(const ZonalExpansion& e, const SpherePoint& x,
                      const ProblemParams& params) {
  return reconstruct(e, geodesic_distance(e.center, x), params);
}

namespace {

void require_same_center(const ZonalExpansion& u, const ZonalExpansion& v) {
  if (geodesic_distance(u.center, v.center) > 1e-12)
    throw DomainError("zonal inner product: expansions have different centers");
}

}  // namespace

double hgamma_inner(const ZonalExpansion& u, const ZonalExpansion& v,
                    const ProblemParams& params) {
  require_same_center(u, v);
  const std::size_t L = std::min(u.coeffs.size(), v.coeffs.size());
  KahanAccumulator acc;
  for (std::size_t k = 0; k < L; ++k)
    acc.add(pgamma_eigenvalue(static_cast<long>(k), params) * u.coeffs[k] *
            v.coeffs[k]);
  return omega(params.n) * acc.value();
}

double l2_inner(const ZonalExpansion& u, const ZonalExpansion& v,
                const ProblemParams& params) {
  require_same_center(u, v);
  const std::size_t L = std::min(u.coeffs.size(), v.coeffs.size());
  KahanAccumulator acc;
  for (std::size_t k = 0; k < L; ++k) acc.add(u.coeffs[k] * v.coeffs[k]);
  return omega(params.n) * acc.value();
}

}  // namespace nirenberg
