#include "nirenberg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nirenberg/sampling.hpp"

namespace nirenberg {

Rule1D gauss_legendre(int m, double a, double b) {
  if (m < 1) throw DomainError("gauss_legendre: need at least one node");
  Rule1D rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  // Newton iteration on P_m, symmetric pairs from the Chebyshev-like guess.
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (m == 1) {
        p1 = x;
      }
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_m(x), p0 = P_{m-1}(x)
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[m - 1 - i] = x;
    rule.weights[m - 1 - i] = w;
  }
  // affine map [-1,1] -> [a,b]
  const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = mid + halfw * rule.nodes[i];
    rule.weights[i] *= halfw;
  }
  return rule;
}

namespace {

// Recursive tensor rule on S^m embedded in R^{m+1}:
//   x = (cos t, sin t * w),  dvol = sin^{m-1} t dt dvol_{S^{m-1}}.
void sphere_nodes_rec(int m, int points_per_angle, std::vector<Vec>& nodes,
                      std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (m == 1) {
    const int mp = 2 * points_per_angle;
    for (int i = 0; i < mp; ++i) {
      const double phi = 2.0 * M_PI * (i + 0.5) / mp;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      nodes.push_back(v);
      weights.push_back(2.0 * M_PI / mp);
    }
    return;
  }
  std::vector<Vec> sub_nodes;
  std::vector<double> sub_weights;
  sphere_nodes_rec(m - 1, points_per_angle, sub_nodes, sub_weights);
  const Rule1D gl = gauss_legendre(points_per_angle, 0.0, M_PI);
  for (int i = 0; i < points_per_angle; ++i) {
    const double t = gl.nodes[i];
    const double wt = gl.weights[i] * std::pow(std::sin(t), m - 1);
    for (std::size_t j = 0; j < sub_nodes.size(); ++j) {
      Vec v(m + 1);
      v[0] = std::cos(t);
      v.tail(m) = std::sin(t) * sub_nodes[j];
      nodes.push_back(std::move(v));
      weights.push_back(wt * sub_weights[j]);
    }
  }
}

// Geometrically graded panel boundaries on [0, pi], descending.
std::vector<double> graded_panels(double core_edge, double min_panel) {
  std::vector<double> edges{M_PI};
  double e = M_PI / 2.0;
  const double target = std::max(core_edge, min_panel);
  while (e > target) {
    edges.push_back(e);
    e /= 2.0;
  }
  edges.push_back(target);
  edges.push_back(0.0);
  return edges;
}

}  // namespace

SphereRule tensor_rule(const ProblemParams& params, int points_per_angle) {
  SphereRule rule;
  rule.kind = RuleKind::TensorProduct;
  rule.n = params.n;
  sphere_nodes_rec(params.n, points_per_angle, rule.nodes, rule.weights);
  rule.resolution = "tensor:" + std::to_string(points_per_angle);
  return rule;
}

SphereRule qmc_rule(const ProblemParams& params, int count, std::uint64_t seed) {
  SphereRule rule;
  rule.kind = RuleKind::QuasiMonteCarlo;
  rule.n = params.n;
  rule.nodes = quasi_uniform_points(params.n, count, seed);
  const double w = sphere_area(params.n) / count;
  rule.weights.assign(count, w);
  rule.resolution = "qmc:" + std::to_string(count);
  std::vector<Vec> coords;
  coords.reserve(rule.nodes.size());
  return rule;
}

SphereRule adapted_rule(const ProblemParams& params,
                        const std::vector<SpherePoint>& centers,
                        const std::vector<double>& lambdas,
                        const AdaptedRuleOptions& opts) {
  if (centers.empty() || centers.size() != lambdas.size())
    throw DomainError("adapted_rule: need matching centers and lambdas");
  const int n = params.n;
  const std::size_t p = centers.size();

  // Smooth partition of unity: chi_i = G_i / sum_j G_j with
  // G_i = exp(-kappa (1 - x.a_i)). kappa is chosen so G at the nearest other
  // center is below 1e-14, which keeps each piece's mass away from the
  // other centers' peaks.
  double kappa = 0.0;
  if (p > 1) {
    double min_gap = 2.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        min_gap = std::min(min_gap,
                           1.0 - centers[i].coords().dot(centers[j].coords()));
    if (min_gap < 1e-8)
      throw DomainError("adapted_rule: centers not pairwise distinct");
    kappa = 32.0 / min_gap;
  }
  auto chi = [&](const Vec& x, std::size_t i) {
    if (p == 1) return 1.0;
    double den = 0.0, num = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double g = std::exp(-kappa * (1.0 - x.dot(centers[j].coords())));
      den += g;
      if (j == i) num = g;
    }
    return num / den;
  };

  std::vector<Vec> az_nodes;
  std::vector<double> az_weights;
  sphere_nodes_rec(n - 1, opts.angular_points, az_nodes, az_weights);

  SphereRule rule;
  rule.kind = RuleKind::CenterAdapted;
  rule.n = n;
  for (std::size_t i = 0; i < p; ++i) {
    const Mat frame = tangent_basis(centers[i]);
    const Vec& c = centers[i].coords();
    const double core = opts.core_scale / std::max(lambdas[i], 1.0);
    const std::vector<double> edges = graded_panels(core, opts.min_panel);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const Rule1D gl = gauss_legendre(opts.gl_per_panel, edges[e + 1], edges[e]);
      for (int q = 0; q < opts.gl_per_panel; ++q) {
        const double theta = gl.nodes[q];
        const double wt = gl.weights[q] * std::pow(std::sin(theta), n - 1);
        for (std::size_t j = 0; j < az_nodes.size(); ++j) {
          Vec x = std::cos(theta) * c + std::sin(theta) * (frame * az_nodes[j]);
          const double w = wt * az_weights[j] * chi(x, i);
          rule.nodes.push_back(std::move(x));
          rule.weights.push_back(w);
        }
      }
    }
  }
  rule.resolution = "adapted:p" + std::to_string(p) + ":gl" +
                    std::to_string(opts.gl_per_panel) + ":az" +
                    std::to_string(opts.angular_points);
  return rule;
}

double sphere_integral(const std::function<double(const Vec&)>& f,
                       const SphereRule& rule) {
  KahanAccumulator acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v))
      throw NonFiniteSample("sphere_integral: non-finite sample at node " +
                            std::to_string(i));
    acc.add(rule.weights[i] * v);
  }
  return acc.value();
}

double zonal_integral(const std::function<double(double)>& g,
                      const ProblemParams& params, int points) {
  const Rule1D gl = gauss_legendre(points, 0.0, M_PI);
  KahanAccumulator acc;
  for (int i = 0; i < points; ++i) {
    const double v = g(gl.nodes[i]);
    if (!std::isfinite(v))
      throw NonFiniteSample("zonal_integral: non-finite sample");
    acc.add(gl.weights[i] * std::pow(std::sin(gl.nodes[i]), params.n - 1) * v);
  }
  return omega(params.n) * acc.value();
}

double zonal_integral_adapted(const std::function<double(double)>& g,
                              const ProblemParams& params, double lambda,
                              int gl_per_panel) {
  const std::vector<double> edges =
      graded_panels(0.25 / std::max(lambda, 1.0), M_PI / 16384.0);
  KahanAccumulator acc;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const Rule1D gl = gauss_legendre(gl_per_panel, edges[e + 1], edges[e]);
    for (int i = 0; i < gl_per_panel; ++i) {
      const double v = g(gl.nodes[i]);
      if (!std::isfinite(v))
        throw NonFiniteSample("zonal_integral_adapted: non-finite sample");
      acc.add(gl.weights[i] * std::pow(std::sin(gl.nodes[i]), params.n - 1) * v);
    }
  }
  return omega(params.n) * acc.value();
}

double neumaier_sum(const std::vector<double>& terms) {
  KahanAccumulator acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

}  // namespace nirenberg
