#include "nirenberg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nirenberg {

std::vector<double> alpha_equilibrium(const ProblemParams& params,
                                      const std::vector<SpherePoint>& centers,
                                      const CurvatureField& K,
                                      double sharp_constant) {
  if (centers.empty()) throw DomainError("alpha_equilibrium: no centers");
  const double expo = params.nm2g() / (4.0 * params.gamma);
  std::vector<double> alpha(centers.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double Ki = K.value(centers[i].coords());
    if (!(Ki > 0.0))
      throw DomainError("alpha_equilibrium: K must be positive at centers");
    alpha[i] = std::pow(Ki, -expo);
    norm2 += alpha[i] * alpha[i] * sharp_constant;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& a : alpha) a *= scale;
  return alpha;
}

ReducedVelocity reduced_velocity(const ProblemParams& params,
                                 const BubbleConfiguration& config,
                                 const CurvatureField& K,
                                 const ConstantsTable& constants) {
  ReducedVelocity vel;
  const std::size_t p = config.p();
  vel.center_dot.reserve(p);
  vel.loglambda_dot.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    vel.center_dot.push_back(
        grad_center_expansion(params, config, K, constants, j));
    vel.loglambda_dot.push_back(
        grad_lambda_expansion(params, config, K, constants, j));
  }
  return vel;
}

RegimeInfo pseudogradient_regimes(const ProblemParams& params,
                                  const BubbleConfiguration& config,
                                  const CurvatureField& K,
                                  const std::vector<CriticalPointRecord>& crits,
                                  const RegimeOptions& opts) {
  const std::size_t p = config.p();
  RegimeInfo info;
  info.center_weight.assign(p, 0.0);
  info.lambda_weight.assign(p, 0.0);

  std::vector<double> grad_scale(p);
  std::vector<int> nearest(p, -1);
  bool all_near_critical = !crits.empty();
  for (std::size_t i = 0; i < p; ++i) {
    const BubbleParams& b = config.bubbles[i];
    grad_scale[i] = b.lambda * grad_sphere(K, b.center).norm();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < crits.size(); ++c) {
      const double d = geodesic_distance(b.center, crits[c].location);
      if (d < best) {
        best = d;
        nearest[i] = static_cast<int>(c);
      }
    }
    if (!(best <= opts.near_critical_radius)) all_near_critical = false;
  }

  // Interaction test: the largest concentration with
  // sum_{j != i} eps_ij > C / lambda_i^2 gets its lambda channel decreased.
  int offender = -1;
  double offender_lambda = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    double eps_sum = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (j != i)
        eps_sum += epsilon_ij(params, config.bubbles[i], config.bubbles[j]);
    const double li = config.bubbles[i].lambda;
    if (eps_sum > opts.C / (li * li) && li > offender_lambda) {
      offender = static_cast<int>(i);
      offender_lambda = li;
    }
  }

  for (std::size_t i = 0; i < p; ++i) {
    if (grad_scale[i] >= opts.grad_threshold) info.center_weight[i] = 1.0;
    if (nearest[i] >= 0 &&
        geodesic_distance(config.bubbles[i].center,
                          crits[nearest[i]].location) <=
            opts.near_critical_radius) {
      // lambda grows where -Laplacian(K) > 0, shrinks where it is < 0
      info.lambda_weight[i] = crits[nearest[i]].in_I_plus ? 1.0 : -1.0;
    }
  }
  if (offender >= 0) {
    info.lambda_weight[offender] = -1.0;
    info.tag = Regime::Interior;
  } else if (all_near_critical) {
    bool concentrating = true;
    for (std::size_t i = 0; i < p; ++i) {
      if (!(nearest[i] >= 0 && crits[nearest[i]].in_I_plus &&
            config.bubbles[i].lambda >= opts.concentration_lambda))
        concentrating = false;
    }
    info.tag = concentrating ? Regime::Concentrating : Regime::NearCritical;
  } else {
    info.tag = Regime::Interior;
  }
  return info;
}

namespace {

// Dormand-Prince 5(4) embedded pair.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 5179.0 / 57600.0, kE3 = 7571.0 / 16695.0,
                 kE4 = 393.0 / 640.0, kE5 = -92097.0 / 339200.0,
                 kE6 = 187.0 / 2100.0, kE7 = 1.0 / 40.0;

struct PackedState {
  Vec y;  // p*(n+1) center coordinates followed by p log-lambdas
};

BubbleConfiguration unpack(const ProblemParams& params, const Vec& y,
                           std::size_t p, const CurvatureField& K,
                           double sharp_constant) {
  const int m = params.ambient_dim();
  std::vector<SpherePoint> centers;
  centers.reserve(p);
  for (std::size_t i = 0; i < p; ++i)
    centers.push_back(SpherePoint::normalized(y.segment(i * m, m)));
  BubbleConfiguration config;
  config.alpha = alpha_equilibrium(params, centers, K, sharp_constant);
  for (std::size_t i = 0; i < p; ++i)
    config.bubbles.emplace_back(centers[i],
                                std::exp(y[p * m + static_cast<long>(i)]));
  return config;
}

}  // namespace

FlowResult integrate_flow(const ProblemParams& params, const FlowState& initial,
                          const CurvatureField& K,
                          const ConstantsTable& constants,
                          const std::vector<CriticalPointRecord>& Iplus,
                          const std::vector<InfinityPoint>& catalog,
                          const FlowOptions& opts) {
  initial.config.validate();
  const std::size_t p = initial.config.p();
  const int m = params.ambient_dim();
  const long dim = static_cast<long>(p) * m + static_cast<long>(p);

  Vec y(dim);
  for (std::size_t i = 0; i < p; ++i) {
    y.segment(i * m, m) = initial.config.bubbles[i].center.coords();
    y[p * m + static_cast<long>(i)] = std::log(initial.config.bubbles[i].lambda);
  }

  FlowResult result;
  double max_rate = 0.0;
  const auto rhs = [&](const Vec& state) {
    const BubbleConfiguration config =
        unpack(params, state, p, K, constants.S);
    const ReducedVelocity vel = reduced_velocity(params, config, K, constants);
    Vec dy(dim);
    for (std::size_t i = 0; i < p; ++i) {
      dy.segment(i * m, m) = vel.center_dot[i];
      dy[p * m + static_cast<long>(i)] = vel.loglambda_dot[i];
      max_rate = std::max(max_rate, std::abs(vel.loglambda_dot[i]));
    }
    return dy;
  };

  const auto sample_state = [&](double s, const Vec& state) {
    const BubbleConfiguration config =
        unpack(params, state, p, K, constants.S);
    TrajectorySample sample;
    sample.s = s;
    sample.config = config;
    sample.tag =
        pseudogradient_regimes(params, config, K, Iplus, opts.regime).tag;
    sample.reduced_energy =
        expansion_terms(params, config, K, constants).total();
    return sample;
  };

  double s = initial.s;
  double h = opts.initial_step;
  double next_sample = s;
  result.samples.push_back(sample_state(s, y));
  next_sample += opts.sample_ds;

  FlowEvent event;
  event.kind = FlowEventKind::TimeLimit;

  const auto finish = [&](FlowEventKind kind, const Vec& state, double s_now) {
    const BubbleConfiguration config =
        unpack(params, state, p, K, constants.S);
    event.kind = kind;
    event.s = s_now;
    double lmin = config.bubbles[0].lambda, lmax = lmin;
    for (const BubbleParams& b : config.bubbles) {
      lmin = std::min(lmin, b.lambda);
      lmax = std::max(lmax, b.lambda);
    }
    event.lambda_comparability = lmax / lmin;
    event.center_errors.clear();
    for (const BubbleParams& b : config.bubbles) {
      double best = std::numeric_limits<double>::infinity();
      for (const CriticalPointRecord& r : Iplus)
        best = std::min(best, geodesic_distance(b.center, r.location));
      event.center_errors.push_back(best);
    }
    if (kind == FlowEventKind::Concentration) {
      event.target =
          classify_limit(params, config, Iplus, catalog, opts.match_radius);
      if (!event.target) event.kind = FlowEventKind::TimeLimit;
    }
    result.samples.push_back(sample_state(s_now, state));
    result.event = event;
    result.max_loglambda_rate = max_rate;
  };

  while (true) {
    if (s >= opts.s_max) {
      finish(FlowEventKind::TimeLimit, y, s);
      return result;
    }
    h = std::min(h, opts.s_max - s);

    const Vec k1 = rhs(y);
    const Vec k2 = rhs(y + h * (kA21 * k1));
    const Vec k3 = rhs(y + h * (kA31 * k1 + kA32 * k2));
    const Vec k4 = rhs(y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    const Vec k5 = rhs(y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const Vec k6 = rhs(y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 +
                                kA65 * k5));
    const Vec y5 =
        y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const Vec k7 = rhs(y5);
    const Vec y4 = y + h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 +
                            kE6 * k6 + kE7 * k7);

    double err = 0.0;
    for (long i = 0; i < dim; ++i) {
      const double sc =
          opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      s += h;
      y = y5;
      // renormalize centers
      for (std::size_t i = 0; i < p; ++i) {
        const double nrm = y.segment(i * m, m).norm();
        y.segment(i * m, m) /= nrm;
      }

      while (s >= next_sample) {
        result.samples.push_back(sample_state(next_sample, y));
        next_sample += opts.sample_ds;
      }

      const BubbleConfiguration config =
          unpack(params, y, p, K, constants.S);
      double lmin = config.bubbles[0].lambda;
      for (const BubbleParams& b : config.bubbles)
        lmin = std::min(lmin, b.lambda);
      bool collided = false;
      for (std::size_t i = 0; i < p && !collided; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
          if (geodesic_distance(config.bubbles[i].center,
                                config.bubbles[j].center) <
              opts.collision_distance) {
            collided = true;
            break;
          }
      if (collided) {
        finish(FlowEventKind::CenterCollision, y, s);
        return result;
      }
      if (lmin >= opts.lambda_max) {
        finish(FlowEventKind::Concentration, y, s);
        return result;
      }
      bool below_guard = false;
      for (const BubbleParams& b : config.bubbles)
        if (b.lambda < opts.lambda_min) below_guard = true;
      const Vec speed = rhs(y);
      if (below_guard || speed.lpNorm<Eigen::Infinity>() < opts.stall_speed) {
        finish(FlowEventKind::StallNearInterior, y, s);
        return result;
      }
    }

    const double factor =
        err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-12) {
      finish(FlowEventKind::StepFailure, y, s);
      return result;
    }
  }
}

std::optional<InfinityPoint> classify_limit(
    const ProblemParams& params, const BubbleConfiguration& final_config,
    const std::vector<CriticalPointRecord>& Iplus,
    const std::vector<InfinityPoint>& catalog, double match_radius) {
  (void)params;
  std::vector<int> matched;
  for (const BubbleParams& b : final_config.bubbles) {
    int best = -1, second = -1;
    double best_d = std::numeric_limits<double>::infinity(), second_d = best_d;
    for (std::size_t c = 0; c < Iplus.size(); ++c) {
      const double d = geodesic_distance(b.center, Iplus[c].location);
      if (d < best_d) {
        second = best;
        second_d = best_d;
        best = static_cast<int>(c);
        best_d = d;
      } else if (d < second_d) {
        second = static_cast<int>(c);
        second_d = d;
      }
    }
    if (best < 0 || best_d > match_radius) return std::nullopt;
    if (second >= 0 && second_d <= 2.0 * match_radius)
      throw AmbiguousMatch(
          "classify_limit: two I^+ points within twice the match radius of a "
          "final center");
    matched.push_back(best);
  }
  std::sort(matched.begin(), matched.end());
  if (std::adjacent_find(matched.begin(), matched.end()) != matched.end())
    return std::nullopt;  // two bubbles matched the same point
  for (const InfinityPoint& pt : catalog) {
    std::vector<int> members = pt.members;
    std::sort(members.begin(), members.end());
    if (members == matched) return pt;
  }
  return std::nullopt;
}

}  // namespace nirenberg
