#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nirenberg/geometry.hpp"

namespace nirenberg {

/// Nodes/weights of a 1D quadrature rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with m points on [a, b].
Rule1D gauss_legendre(int m, double a = -1.0, double b = 1.0);

enum class RuleKind { Zonal1D, TensorProduct, QuasiMonteCarlo, CenterAdapted };

/// Precomputed quadrature rule on S^n. Weights are positive and sum to the
/// surface area of S^n. Node order is fixed, and sphere_integral reduces in
/// that order with compensated summation, so results are reproducible.
struct SphereRule {
  RuleKind kind = RuleKind::TensorProduct;
  int n = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::string resolution;

  std::size_t size() const { return nodes.size(); }
};

/// Full tensor-product rule on S^n (n <= 5 recommended): Gauss-Legendre in
/// each polar angle, uniform in the final angle.
SphereRule tensor_rule(const ProblemParams& params, int points_per_angle = 20);

/// Low-discrepancy fallback for n > 5: equal-weight nodes from a scrambled
/// Halton sequence mapped through inverse Gaussians.
SphereRule qmc_rule(const ProblemParams& params, int count, std::uint64_t seed = 0);

struct AdaptedRuleOptions {
  int gl_per_panel = 16;       // Gauss-Legendre points per polar panel
  int angular_points = 12;     // GL points per angle of the azimuthal sphere
  double core_scale = 0.25;    // innermost panel edge ~ core_scale / lambda
  double min_panel = M_PI / 16384.0;
};

/// Composite rule adapted to integrands peaked at the given centers with
/// concentration scales lambda: polar panels about each center are refined
/// geometrically toward it, and a smooth partition of unity splits the sphere
/// between the centers. Exact partition: weights still sum to |S^n|.
SphereRule adapted_rule(const ProblemParams& params,
                        const std::vector<SpherePoint>& centers,
                        const std::vector<double>& lambdas,
                        const AdaptedRuleOptions& opts = {});

/// Integrates f over S^n with the given rule. Fixed summation order with
/// Neumaier compensation; throws NonFiniteSample if f is not finite at a node.
double sphere_integral(const std::function<double(const Vec&)>& f,
                       const SphereRule& rule);

/// 1D reduction of a zonal integral: |S^{n-1}| * int_0^pi g(theta) sin^{n-1}(theta) dtheta,
/// with Gauss-Legendre in theta.
double zonal_integral(const std::function<double(double)>& g,
                      const ProblemParams& params, int points = 480);

/// Zonal reduction with polar panels refined toward theta = 0, for integrands
/// concentrated at the center on scale 1/lambda.
double zonal_integral_adapted(const std::function<double(double)>& g,
                              const ProblemParams& params, double lambda,
                              int gl_per_panel = 24);

/// Fixed-order compensated (Neumaier) summation.
double neumaier_sum(const std::vector<double>& terms);

class KahanAccumulator {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace nirenberg
