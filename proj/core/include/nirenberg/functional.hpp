#pragma once

#include <optional>

#include "nirenberg/bubbles.hpp"
#include "nirenberg/curvature.hpp"

namespace nirenberg {

struct JEvaluatorOptions {
  AdaptedRuleOptions denominator_rule;
  AdaptedRuleOptions pair_rule;
};

/// Evaluates J on bubble configurations with quadrature rules frozen at
/// construction, so J varies smoothly along one-parameter families of the
/// base configuration (finite differences then see the true derivative).
///
/// Numerator: sum alpha_i^2 S + sum_{i != j} alpha_i alpha_j <delta_i, delta_j>
/// with the cross inner products as single quadratures through the solution
/// property. Denominator: sphere quadrature of K u^{2n/(n-2gamma)}.
class JEvaluator {
public:
  JEvaluator(const ProblemParams& params, const BubbleConfiguration& base,
             const CurvatureField& K, double sharp_constant,
             const JEvaluatorOptions& opts = {});

  double operator()(const BubbleConfiguration& config) const;
  double numerator(const BubbleConfiguration& config) const;
  double denominator(const BubbleConfiguration& config) const;

  const ProblemParams& params() const { return params_; }

private:
  ProblemParams params_;
  const CurvatureField* K_;
  double S_;
  SphereRule den_rule_;
  std::vector<std::vector<SphereRule>> pair_rules_;  // upper triangle
};

/// One-shot J evaluation (builds the rules for this configuration).
double J_numeric(const ProblemParams& params, const BubbleConfiguration& config,
                 const CurvatureField& K, double sharp_constant,
                 const JEvaluatorOptions& opts = {});

/// Term-by-term two-term expansion of J on a bubble configuration, with the
/// reported remainder scales and the residual against the quadrature value.
struct ExpansionReport {
  double leading = 0.0;          // Gamma_2 / Gamma_1^{(n-2g)/n}
  double laplacian_term = 0.0;   // the Laplacian(K)/lambda^2 correction
  double interaction_term = 0.0; // the eps_ij bracket
  double eps_sum = 0.0;          // sum of pairwise eps (ordered pairs)
  double f_norm_scale = 0.0;     // linear-form remainder channel magnitude
  double vbar_bound = 0.0;       // correction-field norm bound (c = 1)
  bool in_regime = false;        // all eps <= 0.1 and all lambda >= 10
  double J_num = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;

  double total() const { return leading + laplacian_term + interaction_term; }
};

/// The expansion terms alone (no quadrature); cheap enough to evaluate along
/// flow trajectories.
ExpansionReport expansion_terms(const ProblemParams& params,
                                const BubbleConfiguration& config,
                                const CurvatureField& K,
                                const ConstantsTable& constants);

/// Full report including the quadrature value of J and the residual.
ExpansionReport expansion_report(const ProblemParams& params,
                                 const BubbleConfiguration& config,
                                 const CurvatureField& K,
                                 const ConstantsTable& constants,
                                 const JEvaluator& evaluator);

/// Leading term of -J'(u)(lambda_j d(delta_j)/d(lambda_j)): the
/// Laplacian(K)/lambda^2 channel plus the bubble-interaction channel.
double grad_lambda_expansion(const ProblemParams& params,
                             const BubbleConfiguration& config,
                             const CurvatureField& K,
                             const ConstantsTable& constants, std::size_t j);

/// Leading term of -J'(u)((1/lambda_j) d(delta_j)/d(a_j)) as an ambient
/// tangent vector at a_j.
Vec grad_center_expansion(const ProblemParams& params,
                          const BubbleConfiguration& config,
                          const CurvatureField& K,
                          const ConstantsTable& constants, std::size_t j);

enum class FlowDirection { Dilation, Translation };

struct StencilOptions {
  double step = 1e-3;           // dilation: log-lambda step; translation: radians
  double consistency = 0.10;    // allowed 3- vs 5-point relative disagreement
  double noise_floor = 1e-8;    // absolute scale below which both are noise
};

/// Central finite difference of J along a one-parameter family of bubble j:
/// dilation lambda_j -> lambda_j e^h, or geodesic translation of a_j along
/// `direction`. Uses matched 3- and 5-point stencils; throws StepTooLarge
/// when they disagree beyond the consistency tolerance.
double directional_derivative_numeric(const ProblemParams& params,
                                      const BubbleConfiguration& config,
                                      std::size_t j, FlowDirection direction,
                                      const Vec& tangent,
                                      const JEvaluator& evaluator,
                                      const StencilOptions& opts = {});

/// Norm bound (with constant 1) for the minimizing correction field:
/// sum over pairs eps^{(n+2g)/(2n)} (log 1/eps)^{(n-2g)/n}
/// + sum_i (|grad K(a_i)|/lambda_i + 1/lambda_i^2).
double vbar_norm_bound(const ProblemParams& params,
                       const BubbleConfiguration& config,
                       const CurvatureField& K);

/// In-regime predicate for the expansions: all eps_ij <= 0.1, all lambda >= 10.
bool expansion_in_regime(const ProblemParams& params,
                         const BubbleConfiguration& config);

}  // namespace nirenberg
