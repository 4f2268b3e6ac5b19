#include "nirenberg/bubbles.hpp"

#include <cmath>
#include <limits>

#include "nirenberg/spectral.hpp"

namespace nirenberg {

void BubbleConfiguration::validate() const {
  if (bubbles.empty()) throw DomainError("BubbleConfiguration: p must be >= 1");
  if (alpha.size() != bubbles.size())
    throw DomainError("BubbleConfiguration: alpha/bubble count mismatch");
  for (double a : alpha)
    if (!(a > 0.0) || !std::isfinite(a))
      throw DomainError("BubbleConfiguration: coefficients must be positive");
  for (std::size_t i = 0; i < bubbles.size(); ++i)
    for (std::size_t j = i + 1; j < bubbles.size(); ++j)
      if (geodesic_distance(bubbles[i].center, bubbles[j].center) < 1e-10)
        throw DomainError("BubbleConfiguration: centers must be pairwise distinct");
}

double normalization_constant(const ProblemParams& params) {
  const double lam0 = std::exp(std::lgamma(0.5 * params.n + params.gamma) -
                               std::lgamma(0.5 * params.n - params.gamma));
  return std::pow(lam0, params.nm2g() / (4.0 * params.gamma));
}

double bubble_value_theta(const ProblemParams& params, double lambda,
                          double theta) {
  const double den =
      1.0 + 0.5 * (lambda * lambda - 1.0) * (1.0 - std::cos(theta));
  return normalization_constant(params) *
         std::pow(lambda / den, params.bubble_exponent());
}

double bubble_value(const ProblemParams& params, const BubbleParams& b,
                    const SpherePoint& x) {
  return bubble_value_theta(params, b.lambda, geodesic_distance(b.center, x));
}

double flat_bubble_value(const ProblemParams& params, const Vec& g,
                         double lambda, const Vec& y) {
  const double r2 = (y - g).squaredNorm();
  return normalization_constant(params) *
         std::pow(lambda / (1.0 + lambda * lambda * r2),
                  params.bubble_exponent());
}

double bubble_dlambda_scaled(const ProblemParams& params, const BubbleParams& b,
                             const SpherePoint& x) {
  const double lambda = b.lambda;
  const double t = 1.0 - std::cos(geodesic_distance(b.center, x));
  const double den = 1.0 + 0.5 * (lambda * lambda - 1.0) * t;
  const double delta = bubble_value(params, b, x);
  // lambda d/d(lambda) log(lambda/den) = 1 - lambda^2 t / den
  return params.bubble_exponent() * delta *
         (1.0 - 0.5 * (lambda * lambda + 1.0) * t) / den;
}

double bubble_dcenter_scaled(const ProblemParams& params, const BubbleParams& b,
                             const SpherePoint& x, const Vec& direction) {
  const double lambda = b.lambda;
  const double t = 1.0 - std::cos(geodesic_distance(b.center, x));
  const double den = 1.0 + 0.5 * (lambda * lambda - 1.0) * t;
  const double delta = bubble_value(params, b, x);
  const double xe = x.coords().dot(direction);
  return params.bubble_exponent() * delta * (lambda * lambda - 1.0) * xe /
         (2.0 * lambda * den);
}

namespace {

double epsilon_argument(const ProblemParams&, const BubbleParams& bi,
                        const BubbleParams& bj) {
  const double d = geodesic_distance(bi.center, bj.center);
  return bi.lambda / bj.lambda + bj.lambda / bi.lambda +
         bi.lambda * bj.lambda * d * d;
}

}  // namespace

double epsilon_ij(const ProblemParams& params, const BubbleParams& bi,
                  const BubbleParams& bj) {
  return std::pow(epsilon_argument(params, bi, bj), -params.bubble_exponent());
}

double epsilon_dlambda(const ProblemParams& params, const BubbleParams& bi,
                       const BubbleParams& bj) {
  const double g = epsilon_argument(params, bi, bj);
  const double d = geodesic_distance(bi.center, bj.center);
  const double dg = bi.lambda / bj.lambda - bj.lambda / bi.lambda +
                    bi.lambda * bj.lambda * d * d;
  return -params.bubble_exponent() * epsilon_ij(params, bi, bj) * dg / g;
}

double epsilon_dcenter(const ProblemParams& params, const BubbleParams& bi,
                       const BubbleParams& bj, const Vec& direction) {
  const double g = epsilon_argument(params, bi, bj);
  const double d = geodesic_distance(bi.center, bj.center);
  if (d < 1e-14) return 0.0;
  const double sin_d = std::sin(d);
  if (std::abs(sin_d) < 1e-14) return 0.0;  // antipodal: d is stationary
  // d(d)/d(a_j)[e] = -(a_i . e)/sin(d)
  const double dd = -bi.center.coords().dot(direction) / sin_d;
  const double dg = 2.0 * bi.lambda * bj.lambda * d * dd;
  return -params.bubble_exponent() * epsilon_ij(params, bi, bj) * dg /
         (g * bj.lambda);
}

double interaction_integral(const ProblemParams& params, const BubbleParams& bi,
                            const BubbleParams& bj,
                            const InteractionOptions& opts) {
  const double qm1 = params.gradient_exponent();
  const auto integrand = [&](const Vec& x) {
    SpherePoint p(x);
    return std::pow(bubble_value(params, bj, p), qm1) *
           bubble_value(params, bi, p);
  };

  const double d = geodesic_distance(bi.center, bj.center);
  auto integrate = [&](const AdaptedRuleOptions& ro) {
    if (d < 1e-9) {
      // coincident centers: the product is zonal about the common center
      return zonal_integral_adapted(
          [&](double theta) {
            return std::pow(bubble_value_theta(params, bj.lambda, theta), qm1) *
                   bubble_value_theta(params, bi.lambda, theta);
          },
          params, std::max(bi.lambda, bj.lambda), ro.gl_per_panel);
    }
    const SphereRule rule = adapted_rule(
        params, {bi.center, bj.center}, {bi.lambda, bj.lambda}, ro);
    return sphere_integral(integrand, rule);
  };

  const double value = integrate(opts.rule);
  if (opts.estimate_error) {
    AdaptedRuleOptions refined = opts.rule;
    refined.gl_per_panel += 6;
    refined.angular_points += 4;
    refined.core_scale *= 0.5;
    const double check = integrate(refined);
    const double err = std::abs(check - value);
    if (err > opts.max_relative_error * std::abs(check))
      throw QuadratureUnderResolved(
          "interaction_integral: estimated error " + std::to_string(err) +
          " exceeds tolerance on value " + std::to_string(check));
    return check;
  }
  return value;
}

std::string ConstantsTable::resolution_summary() const {
  return "zonal:" + std::to_string(zonal_points) +
         ",radial:" + std::to_string(radial_points);
}

namespace {

// int_0^inf r^{n-1} (1+r^2)^{-(n+2gamma)/2} dr, split at r=1; the tail is
// mapped by r -> 1/u and the u^{2gamma-1} endpoint factor is absorbed by the
// substitution u = v^{1/(2gamma)}.
double radial_c1(const ProblemParams& params, int m) {
  const double expo = 0.5 * (params.n + 2.0 * params.gamma);
  const Rule1D gl = gauss_legendre(m, 0.0, 1.0);
  KahanAccumulator acc;
  for (int i = 0; i < m; ++i) {
    const double r = gl.nodes[i];
    acc.add(gl.weights[i] * std::pow(r, params.n - 1) *
            std::pow(1.0 + r * r, -expo));
  }
  // tail: int_0^1 u^{2g-1} (1+u^2)^{-(n+2g)/2} u^{... } du  with u = v^{1/(2g)}
  const double tg = 2.0 * params.gamma;
  for (int i = 0; i < m; ++i) {
    const double v = gl.nodes[i];
    const double u = std::pow(v, 1.0 / tg);
    acc.add(gl.weights[i] / tg * std::pow(1.0 + u * u, -expo));
  }
  return acc.value();
}

// int_0^inf r^{n+1} (1+r^2)^{-n} dr, same split; tail integrand u^{n-3}(1+u^2)^{-n}.
double radial_moment2(const ProblemParams& params, int m) {
  const Rule1D gl = gauss_legendre(m, 0.0, 1.0);
  KahanAccumulator acc;
  for (int i = 0; i < m; ++i) {
    const double r = gl.nodes[i];
    acc.add(gl.weights[i] * std::pow(r, params.n + 1) *
            std::pow(1.0 + r * r, -static_cast<double>(params.n)));
  }
  for (int i = 0; i < m; ++i) {
    const double u = gl.nodes[i];
    acc.add(gl.weights[i] * std::pow(u, params.n - 3) *
            std::pow(1.0 + u * u, -static_cast<double>(params.n)));
  }
  return acc.value();
}

ConstantsTable compute_constants(const ProblemParams& params, int zonal_points,
                                 int radial_points) {
  ConstantsTable t;
  t.zonal_points = zonal_points;
  t.radial_points = radial_points;
  t.c_n = normalization_constant(params);
  const double q = params.critical_exponent();

  // S = int delta^{2n/(n-2gamma)} dvol, independent of (a, lambda); computed
  // at lambda = 2 as a nontrivial zonal integral.
  t.S = zonal_integral(
      [&](double theta) {
        return std::pow(bubble_value_theta(params, 2.0, theta), q);
      },
      params, zonal_points);

  t.c1 = radial_c1(params, radial_points);

  // c2: coefficient of Laplacian(K)(a)/lambda^2 in int K delta^q dvol,
  // assembled from the flat-side second moment with the chart factors of the
  // standard stereographic normalization: (2^{n+1}/n) c_n^q omega_n M2.
  t.c2 = std::pow(2.0, params.n + 1) / params.n * std::pow(t.c_n, q) *
         omega(params.n) * radial_moment2(params, radial_points);
  return t;
}

}  // namespace

ConstantsTable constants_table(const ProblemParams& params,
                               const ConstantsOptions& opts) {
  const ConstantsTable coarse =
      compute_constants(params, opts.zonal_points, opts.radial_points);
  const ConstantsTable fine =
      compute_constants(params, 2 * opts.zonal_points, 2 * opts.radial_points);
  const auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
  };
  if (rel(coarse.S, fine.S) > opts.convergence_tol ||
      rel(coarse.c1, fine.c1) > opts.convergence_tol ||
      rel(coarse.c2, fine.c2) > opts.convergence_tol)
    throw ConvergenceFailure(
        "constants_table: doubling the resolution moved a constant by more "
        "than the tolerance");
  ConstantsTable out = fine;
  out.zonal_points = opts.zonal_points;
  out.radial_points = opts.radial_points;
  return out;
}

SolutionPropertyCheck verify_solution_property(const ProblemParams& params,
                                               double lambda, int L,
                                               int grid_points) {
  const SpherePoint center = north_pole(params.n);
  const ZonalExpansion e = zonal_expand(
      [&](double theta) { return bubble_value_theta(params, lambda, theta); },
      center, L, params);
  const ZonalExpansion pe = apply_pgamma(e, params);

  SolutionPropertyCheck check;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -ratio_min;
  const double qm1 = params.gradient_exponent();
  for (int i = 0; i < grid_points; ++i) {
    const double theta = M_PI * (i + 0.5) / grid_points;
    const double lhs = reconstruct(pe, theta, params);
    const double rhs = std::pow(bubble_value_theta(params, lambda, theta), qm1);
    const double err = std::abs(lhs - rhs) / std::abs(rhs);
    check.max_relative_error = std::max(check.max_relative_error, err);
    const double ratio = lhs / rhs;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  check.ratio_spread = ratio_max - ratio_min;
  return check;
}

}  // namespace nirenberg
