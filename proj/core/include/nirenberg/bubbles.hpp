#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nirenberg/geometry.hpp"
#include "nirenberg/quadrature.hpp"

namespace nirenberg {

/// One standard bubble: center on S^n and concentration lambda > 0.
struct BubbleParams {
  SpherePoint center;
  double lambda;

  BubbleParams(SpherePoint c, double l) : center(std::move(c)), lambda(l) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw DomainError("BubbleParams: lambda must be positive and finite");
  }
};

/// A weighted sum of p bubbles with positive coefficients.
struct BubbleConfiguration {
  std::vector<double> alpha;
  std::vector<BubbleParams> bubbles;

  std::size_t p() const { return bubbles.size(); }
  void validate() const;
};

/// Normalization constant c_n: the unique constant making the bubble family
/// solve P_gamma u = u^{(n+2g)/(n-2g)}. Fixed by the constant-function case:
/// c_n = (Gamma(n/2+gamma)/Gamma(n/2-gamma))^{(n-2gamma)/(4gamma)}.
double normalization_constant(const ProblemParams& params);

/// delta_{a,lambda}(x) = c_n (lambda / (1 + (lambda^2-1)/2 (1-cos d(x,a))))^{(n-2g)/2}.
double bubble_value(const ProblemParams& params, const BubbleParams& b,
                    const SpherePoint& x);
/// Same profile as a function of the polar angle from the center.
double bubble_value_theta(const ProblemParams& params, double lambda, double theta);

/// Flat-side bubble w_{g,lambda}(y) = c_n (lambda/(1+lambda^2 |y-g|^2))^{(n-2g)/2}.
double flat_bubble_value(const ProblemParams& params, const Vec& g, double lambda,
                         const Vec& y);

/// Scaled parameter derivatives (the natural channels):
/// lambda d(delta)/d(lambda) and (1/lambda) d(delta)/d(a)[direction].
double bubble_dlambda_scaled(const ProblemParams& params, const BubbleParams& b,
                             const SpherePoint& x);
double bubble_dcenter_scaled(const ProblemParams& params, const BubbleParams& b,
                             const SpherePoint& x, const Vec& direction);

/// Interaction quantity
/// eps_ij = (l_i/l_j + l_j/l_i + l_i l_j d(a_i,a_j)^2)^{-(n-2g)/2}.
double epsilon_ij(const ProblemParams& params, const BubbleParams& bi,
                  const BubbleParams& bj);
/// lambda_i d(eps_ij)/d(lambda_i).
double epsilon_dlambda(const ProblemParams& params, const BubbleParams& bi,
                       const BubbleParams& bj);
/// (1/lambda_j) d(eps_ij)/d(a_j)[direction], direction tangent at a_j.
double epsilon_dcenter(const ProblemParams& params, const BubbleParams& bi,
                       const BubbleParams& bj, const Vec& direction);

struct InteractionOptions {
  AdaptedRuleOptions rule;
  bool estimate_error = true;
  double max_relative_error = 0.01;
};

/// <delta_i, P_gamma delta_j> computed through the solution property as the
/// single quadrature int delta_j^{(n+2g)/(n-2g)} delta_i dvol.
double interaction_integral(const ProblemParams& params, const BubbleParams& bi,
                            const BubbleParams& bj,
                            const InteractionOptions& opts = {});

/// The constants every expansion uses. c_2 is the coefficient of
/// Laplacian(K)(a)/lambda^2 in the two-term expansion of int K delta^{2n/(n-2g)},
/// i.e. the value that makes the energy expansion match quadrature.
struct ConstantsTable {
  double c_n = 0.0;
  double S = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  int zonal_points = 0;
  int radial_points = 0;

  std::string resolution_summary() const;
};

struct ConstantsOptions {
  int zonal_points = 480;
  int radial_points = 240;
  double convergence_tol = 1e-5;
};

ConstantsTable constants_table(const ProblemParams& params,
                               const ConstantsOptions& opts = {});

/// Max relative residual of the pointwise identity
/// (P_gamma delta) = delta^{(n+2g)/(n-2g)} on a theta grid, via the zonal
/// spectral route. Also reports the spread of the ratio field.
struct SolutionPropertyCheck {
  double max_relative_error = 0.0;
  double ratio_spread = 0.0;
};
SolutionPropertyCheck verify_solution_property(const ProblemParams& params,
                                               double lambda, int L,
                                               int grid_points = 50);

}  // namespace nirenberg
