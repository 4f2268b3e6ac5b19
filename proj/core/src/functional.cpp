#include "nirenberg/functional.hpp"

#include <cmath>

namespace nirenberg {

namespace {

double gamma1(const ProblemParams& params, const BubbleConfiguration& c,
              const CurvatureField& K, double S) {
  const double q = params.critical_exponent();
  KahanAccumulator acc;
  for (std::size_t i = 0; i < c.p(); ++i)
    acc.add(std::pow(c.alpha[i], q) * K.value(c.bubbles[i].center.coords()) * S);
  return acc.value();
}

double gamma2(const BubbleConfiguration& c, double S) {
  KahanAccumulator acc;
  for (double a : c.alpha) acc.add(a * a * S);
  return acc.value();
}

/// c_n^{2n/(n-2g)} c_1 omega_n, the interaction-model prefactor.
double interaction_prefactor(const ProblemParams& params,
                             const ConstantsTable& t) {
  return std::pow(t.c_n, params.critical_exponent()) * t.c1 * omega(params.n);
}

}  // namespace

JEvaluator::JEvaluator(const ProblemParams& params,
                       const BubbleConfiguration& base, const CurvatureField& K,
                       double sharp_constant, const JEvaluatorOptions& opts)
    : params_(params), K_(&K), S_(sharp_constant) {
  base.validate();
  std::vector<SpherePoint> centers;
  std::vector<double> lambdas;
  for (const BubbleParams& b : base.bubbles) {
    centers.push_back(b.center);
    lambdas.push_back(b.lambda);
  }
  den_rule_ = adapted_rule(params_, centers, lambdas, opts.denominator_rule);

  const std::size_t p = base.p();
  pair_rules_.resize(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      pair_rules_[i].push_back(adapted_rule(
          params_, {centers[i], centers[j]}, {lambdas[i], lambdas[j]},
          opts.pair_rule));
}

double JEvaluator::numerator(const BubbleConfiguration& config) const {
  const std::size_t p = config.p();
  const double qm1 = params_.gradient_exponent();
  KahanAccumulator acc;
  for (std::size_t i = 0; i < p; ++i)
    acc.add(config.alpha[i] * config.alpha[i] * S_);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const BubbleParams& bi = config.bubbles[i];
      const BubbleParams& bj = config.bubbles[j];
      const double inter = sphere_integral(
          [&](const Vec& x) {
            SpherePoint pt(x);
            return std::pow(bubble_value(params_, bj, pt), qm1) *
                   bubble_value(params_, bi, pt);
          },
          pair_rules_[i][j - i - 1]);
      acc.add(2.0 * config.alpha[i] * config.alpha[j] * inter);
    }
  }
  return acc.value();
}

double JEvaluator::denominator(const BubbleConfiguration& config) const {
  const double q = params_.critical_exponent();
  return sphere_integral(
      [&](const Vec& x) {
        SpherePoint pt(x);
        KahanAccumulator u;
        for (std::size_t i = 0; i < config.p(); ++i)
          u.add(config.alpha[i] * bubble_value(params_, config.bubbles[i], pt));
        return K_->value(x) * std::pow(u.value(), q);
      },
      den_rule_);
}

double JEvaluator::operator()(const BubbleConfiguration& config) const {
  const double num = numerator(config);
  const double den = denominator(config);
  if (!(den > 0.0))
    throw NonFiniteSample("J evaluation: nonpositive denominator integral");
  return num / std::pow(den, params_.nm2g() / params_.n);
}

double J_numeric(const ProblemParams& params, const BubbleConfiguration& config,
                 const CurvatureField& K, double sharp_constant,
                 const JEvaluatorOptions& opts) {
  return JEvaluator(params, config, K, sharp_constant, opts)(config);
}

bool expansion_in_regime(const ProblemParams& params,
                         const BubbleConfiguration& config) {
  for (const BubbleParams& b : config.bubbles)
    if (b.lambda < 10.0) return false;
  for (std::size_t i = 0; i < config.p(); ++i)
    for (std::size_t j = i + 1; j < config.p(); ++j)
      if (epsilon_ij(params, config.bubbles[i], config.bubbles[j]) > 0.1)
        return false;
  return true;
}

ExpansionReport expansion_terms(const ProblemParams& params,
                                const BubbleConfiguration& config,
                                const CurvatureField& K,
                                const ConstantsTable& constants) {
  config.validate();
  const std::size_t p = config.p();
  const double q = params.critical_exponent();
  const double qm1 = params.gradient_exponent();
  const double g1 = gamma1(params, config, K, constants.S);
  const double g2 = gamma2(config, constants.S);
  const double leading = g2 / std::pow(g1, params.nm2g() / params.n);
  const double E = interaction_prefactor(params, constants);

  ExpansionReport rep;
  rep.leading = leading;

  KahanAccumulator lap;
  for (std::size_t i = 0; i < p; ++i) {
    const BubbleParams& b = config.bubbles[i];
    lap.add(std::pow(config.alpha[i], q) * laplace_beltrami(K, b.center) /
            (b.lambda * b.lambda));
  }
  rep.laplacian_term =
      -leading * (params.nm2g() / params.n) * constants.c2 * lap.value() / g1;

  KahanAccumulator inter;
  KahanAccumulator eps_total;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      const double eps = epsilon_ij(params, config.bubbles[i], config.bubbles[j]);
      eps_total.add(eps);
      const double bracket =
          config.alpha[i] * config.alpha[j] / g2 -
          2.0 * std::pow(config.alpha[i], qm1) * config.alpha[j] *
              K.value(config.bubbles[i].center.coords()) / g1;
      inter.add(E * eps * bracket);
    }
  }
  rep.interaction_term = leading * inter.value();
  rep.eps_sum = eps_total.value();
  rep.vbar_bound = vbar_norm_bound(params, config, K);
  rep.f_norm_scale = rep.vbar_bound;  // same channel structure, constant 1
  rep.in_regime = expansion_in_regime(params, config);
  return rep;
}

ExpansionReport expansion_report(const ProblemParams& params,
                                 const BubbleConfiguration& config,
                                 const CurvatureField& K,
                                 const ConstantsTable& constants,
                                 const JEvaluator& evaluator) {
  ExpansionReport rep = expansion_terms(params, config, K, constants);
  rep.J_num = evaluator(config);
  rep.abs_residual = std::abs(rep.J_num - rep.total());
  rep.rel_residual = rep.abs_residual / std::abs(rep.J_num);
  return rep;
}

namespace {

struct ModelContext {
  double g1, g2, lambda_hat, E;
};

ModelContext model_context(const ProblemParams& params,
                           const BubbleConfiguration& config,
                           const CurvatureField& K,
                           const ConstantsTable& constants) {
  ModelContext ctx;
  ctx.g1 = gamma1(params, config, K, constants.S);
  ctx.g2 = gamma2(config, constants.S);
  ctx.lambda_hat = std::pow(ctx.g1, -params.nm2g() / params.n);
  ctx.E = interaction_prefactor(params, constants);
  return ctx;
}

}  // namespace

double grad_lambda_expansion(const ProblemParams& params,
                             const BubbleConfiguration& config,
                             const CurvatureField& K,
                             const ConstantsTable& constants, std::size_t j) {
  config.validate();
  const std::size_t p = config.p();
  const double q = params.critical_exponent();
  const double qm1 = params.gradient_exponent();
  const ModelContext ctx = model_context(params, config, K, constants);
  const BubbleParams& bj = config.bubbles[j];
  const double Kj = K.value(bj.center.coords());

  // int K u^{q-1} (lambda_j d delta_j / d lambda_j), model.
  double volume_part = -std::pow(config.alpha[j], qm1) *
                       (params.nm2g() / params.n) * constants.c2 *
                       laplace_beltrami(K, bj.center) / (bj.lambda * bj.lambda);
  // <u, lambda_j d delta_j / d lambda_j>, model.
  double inner_part = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    if (i == j) continue;
    const BubbleParams& bi = config.bubbles[i];
    const double deps = epsilon_dlambda(params, bj, bi);  // lambda_j d/d lambda_j
    const double Ki = K.value(bi.center.coords());
    volume_part += (std::pow(config.alpha[i], qm1) * Ki +
                    config.alpha[i] * std::pow(config.alpha[j], q - 2.0) * Kj) *
                   ctx.E * deps;
    inner_part += config.alpha[i] * ctx.E * deps;
  }
  return 2.0 * ctx.lambda_hat *
         ((ctx.g2 / ctx.g1) * volume_part - inner_part);
}

Vec grad_center_expansion(const ProblemParams& params,
                          const BubbleConfiguration& config,
                          const CurvatureField& K,
                          const ConstantsTable& constants, std::size_t j) {
  config.validate();
  const std::size_t p = config.p();
  const double q = params.critical_exponent();
  const double qm1 = params.gradient_exponent();
  const ModelContext ctx = model_context(params, config, K, constants);
  const BubbleParams& bj = config.bubbles[j];
  const double Kj = K.value(bj.center.coords());
  const Mat frame = tangent_basis(bj.center);
  const int n = params.n;

  Vec out = Vec::Zero(params.ambient_dim());
  for (int e = 0; e < n; ++e) {
    const Vec dir = frame.col(e);
    // int K u^{q-1} ((1/lambda_j) d delta_j / d a_j)[dir]: the K-gradient
    // channel is (S/q) grad K . dir / lambda_j, by differentiating the
    // volume expansion of int K delta^q.
    double volume_part = std::pow(config.alpha[j], qm1) * (constants.S / q) *
                         grad_sphere(K, bj.center).dot(dir) / bj.lambda;
    double inner_part = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      if (i == j) continue;
      const BubbleParams& bi = config.bubbles[i];
      const double deps = epsilon_dcenter(params, bi, bj, dir);
      const double Ki = K.value(bi.center.coords());
      volume_part += (std::pow(config.alpha[i], qm1) * Ki +
                      config.alpha[i] * std::pow(config.alpha[j], q - 2.0) * Kj) *
                     ctx.E * deps;
      inner_part += config.alpha[i] * ctx.E * deps;
    }
    const double channel =
        2.0 * ctx.lambda_hat * ((ctx.g2 / ctx.g1) * volume_part - inner_part);
    out += channel * dir;
  }
  return out;
}

double directional_derivative_numeric(const ProblemParams& params,
                                      const BubbleConfiguration& config,
                                      std::size_t j, FlowDirection direction,
                                      const Vec& tangent,
                                      const JEvaluator& evaluator,
                                      const StencilOptions& opts) {
  config.validate();
  if (j >= config.p()) throw DomainError("directional derivative: bad index");

  const auto displaced = [&](double h) {
    BubbleConfiguration c = config;
    if (direction == FlowDirection::Dilation) {
      c.bubbles[j] = BubbleParams(c.bubbles[j].center,
                                  c.bubbles[j].lambda * std::exp(h));
    } else {
      c.bubbles[j] =
          BubbleParams(geodesic_step(c.bubbles[j].center, tangent, h),
                       c.bubbles[j].lambda);
    }
    return evaluator(c);
  };

  double h = opts.step;
  if (direction == FlowDirection::Translation)
    h = std::min(h, 0.1 / config.bubbles[j].lambda);

  const double fp1 = displaced(h), fm1 = displaced(-h);
  const double fp2 = displaced(2.0 * h), fm2 = displaced(-2.0 * h);
  const double d3 = (fp1 - fm1) / (2.0 * h);
  const double d5 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  const double scale = std::max(std::abs(d5), std::abs(d3));
  if (scale > opts.noise_floor &&
      std::abs(d5 - d3) > opts.consistency * scale)
    throw StepTooLarge("directional derivative: stencils disagree by " +
                       std::to_string(std::abs(d5 - d3) / scale));
  return d5;
}

double vbar_norm_bound(const ProblemParams& params,
                       const BubbleConfiguration& config,
                       const CurvatureField& K) {
  const double p_exp = (params.n + 2.0 * params.gamma) / (2.0 * params.n);
  const double log_exp = params.nm2g() / params.n;
  KahanAccumulator acc;
  for (std::size_t i = 0; i < config.p(); ++i)
    for (std::size_t j = i + 1; j < config.p(); ++j) {
      const double eps =
          epsilon_ij(params, config.bubbles[i], config.bubbles[j]);
      acc.add(std::pow(eps, p_exp) *
              std::pow(std::log(1.0 / eps), log_exp));
    }
  for (const BubbleParams& b : config.bubbles) {
    acc.add(grad_sphere(K, b.center).norm() / b.lambda);
    acc.add(1.0 / (b.lambda * b.lambda));
  }
  return acc.value();
}

}  // namespace nirenberg
