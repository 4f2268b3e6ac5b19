#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nirenberg/geometry.hpp"

namespace nirenberg {

namespace detail {
struct ExprNode;
}

/// A prescribed curvature function K on S^n, given by an expression in the
/// ambient coordinates x1..x{n+1} with +, -, *, /, ^ (constant exponent),
/// exp, and real literals. Evaluators return ambient value/gradient/Hessian.
class CurvatureField {
public:
  CurvatureField() = default;

  double value(const Vec& x) const;
  Vec ambient_gradient(const Vec& x) const;
  Mat ambient_hessian(const Vec& x) const;

  const std::string& expression() const { return text_; }
  int ambient_dim() const { return dim_; }

private:
  friend CurvatureField parse_curvature(const std::string&, const ProblemParams&);
  std::shared_ptr<const detail::ExprNode> root_;
  std::string text_;
  int dim_ = 0;
};

/// Parses and validates an expression; probes positivity on a 10^4-point
/// quasi-uniform sample. Throws SyntaxError (with position), ArityError, or
/// PositivityViolation (with a witness point).
CurvatureField parse_curvature(const std::string& text, const ProblemParams& params);

/// Sphere-intrinsic calculus at a: tangential gradient, tangential second
/// covariant derivative in the tangent_basis(a) frame, and its trace.
Vec grad_sphere(const CurvatureField& K, const SpherePoint& a);
Mat hess_sphere(const CurvatureField& K, const SpherePoint& a);
double laplace_beltrami(const CurvatureField& K, const SpherePoint& a);

/// A non-degenerate critical point of K.
struct CriticalPointRecord {
  SpherePoint location;
  int morse_index = 0;
  double laplacian = 0.0;
  bool in_I_plus = false;
  double residual = 0.0;
  double K_value = 0.0;
};

struct CriticalPointOptions {
  int multistart = 512;
  std::uint64_t seed = 0;
  int max_iterations = 80;
  double gradient_tol = 1e-12;
  double merge_radius = 1e-6;
  double degeneracy_factor = 1e-8;  // relative to the Hessian entry scale
};

struct CriticalPointResult {
  std::vector<CriticalPointRecord> records;  // sorted by descending K value
  int failed_starts = 0;
  long euler_checksum = 0;  // sum of (-1)^index over the records
};

/// Multistart Riemannian Newton search for all critical points of K. Throws
/// DegenerateCritical / LaplacianDegenerate when the non-degeneracy
/// assumptions fail at a found point; non-converged starts are only counted.
CriticalPointResult find_critical_points(const ProblemParams& params,
                                         const CurvatureField& K,
                                         const CriticalPointOptions& opts = {});

/// The subset with -Laplacian(K) > 0, sorted by descending K value.
std::vector<CriticalPointRecord> classify_Iplus(
    const std::vector<CriticalPointRecord>& records);

}  // namespace nirenberg
