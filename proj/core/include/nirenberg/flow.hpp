#pragma once

#include <optional>

#include "nirenberg/functional.hpp"
#include "nirenberg/infinity.hpp"

namespace nirenberg {

enum class Regime { Interior, NearCritical, Concentrating };

/// Reduced flow state: time s and the (alpha, a, lambda) variables, with the
/// current regime tag. Centers are renormalized to the sphere each step.
struct FlowState {
  double s = 0.0;
  BubbleConfiguration config;
  Regime tag = Regime::Interior;
};

/// Coefficients maximizing the leading energy factor at fixed centers:
/// alpha_i proportional to K(a_i)^{-(n-2g)/(4g)}, normalized so
/// sum alpha_i^2 S = 1.
std::vector<double> alpha_equilibrium(const ProblemParams& params,
                                      const std::vector<SpherePoint>& centers,
                                      const CurvatureField& K,
                                      double sharp_constant);

/// Reduced velocities: center motion and logarithmic concentration rates,
/// built from the leading terms of the energy gradient. The lambda channel
/// is driven by -Laplacian(K)/(K lambda^2) plus the bubble-interaction term;
/// the center channel follows +grad K /(K lambda).
struct ReducedVelocity {
  std::vector<Vec> center_dot;        // ambient tangent vectors
  std::vector<double> loglambda_dot;  // d(log lambda_i)/ds
};

ReducedVelocity reduced_velocity(const ProblemParams& params,
                                 const BubbleConfiguration& config,
                                 const CurvatureField& K,
                                 const ConstantsTable& constants);

/// Regime classification with the per-bubble channel selection of the
/// descent construction: center channels switch on where lambda |grad K| is
/// large, lambda channels at centers near critical points (sign from the
/// Laplacian) or at the largest concentration violating the interaction
/// bound sum_j eps_ij <= C / lambda_i^2 (decreased, per the construction).
struct RegimeInfo {
  Regime tag = Regime::Interior;
  std::vector<double> center_weight;  // 0 or 1
  std::vector<double> lambda_weight;  // sign of the lambda channel, or 0
};

struct RegimeOptions {
  double C = 10.0;                  // interaction-bound constant
  double grad_threshold = 2.0;      // center channel on when lambda|gradK| >= this
  double near_critical_radius = 0.1;
  double concentration_lambda = 100.0;
};

RegimeInfo pseudogradient_regimes(const ProblemParams& params,
                                  const BubbleConfiguration& config,
                                  const CurvatureField& K,
                                  const std::vector<CriticalPointRecord>& crits,
                                  const RegimeOptions& opts = {});

enum class FlowEventKind {
  Concentration,
  StallNearInterior,
  CenterCollision,
  TimeLimit,
  StepFailure
};

struct FlowEvent {
  FlowEventKind kind = FlowEventKind::TimeLimit;
  std::optional<InfinityPoint> target;
  double lambda_comparability = 1.0;       // max lambda / min lambda at detection
  std::vector<double> center_errors;       // geodesic distances to matched I^+ points
  double s = 0.0;
};

struct TrajectorySample {
  double s = 0.0;
  BubbleConfiguration config;
  Regime tag = Regime::Interior;
  double reduced_energy = 0.0;  // expansion total at the sample
};

struct FlowResult {
  std::vector<TrajectorySample> samples;
  FlowEvent event;
  double max_loglambda_rate = 0.0;  // growth-contract diagnostic
};

struct FlowOptions {
  double lambda_max = 1e3;
  double lambda_min = 1.0;
  double s_max = 1e4;
  double match_radius = 5e-2;
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 1e-2;
  double sample_ds = 1.0;
  double stall_speed = 1e-10;
  double collision_distance = 1e-3;
  RegimeOptions regime;
};

/// Integrates the reduced descent dynamics with an embedded 4(5) adaptive
/// Runge-Kutta pair on (a, log lambda); alpha is projected to its
/// equilibrium after every accepted step. Events follow the FlowEvent
/// contract: Concentration requires min lambda >= lambda_max with every
/// center matched to a distinct I^+ point within match_radius.
FlowResult integrate_flow(const ProblemParams& params, const FlowState& initial,
                          const CurvatureField& K, const ConstantsTable& constants,
                          const std::vector<CriticalPointRecord>& Iplus,
                          const std::vector<InfinityPoint>& catalog,
                          const FlowOptions& opts = {});

/// Matches final centers against the catalog: the unique InfinityPoint whose
/// members lie within match_radius of the centers (distinct matches), or
/// nullopt (escape). Throws AmbiguousMatch when two I^+ points fall within
/// twice the match radius of one center.
std::optional<InfinityPoint> classify_limit(
    const ProblemParams& params, const BubbleConfiguration& final_config,
    const std::vector<CriticalPointRecord>& Iplus,
    const std::vector<InfinityPoint>& catalog, double match_radius);

}  // namespace nirenberg
