#include "nirenberg/curvature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

#include "nirenberg/sampling.hpp"

namespace nirenberg {

namespace detail {

// Value with ambient gradient and Hessian, propagated through the tree.
struct Jet {
  double v;
  Vec g;
  Mat H;
};

struct ExprNode {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Neg };
  Kind kind;
  double constant = 0.0;  // Const value or Pow exponent
  int var_index = -1;
  std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

Jet evaluate(const ExprNode& node, const Vec& x) {
  const int m = static_cast<int>(x.size());
  switch (node.kind) {
    case ExprNode::Kind::Const:
      return {node.constant, Vec::Zero(m), Mat::Zero(m, m)};
    case ExprNode::Kind::Var: {
      Jet j{x[node.var_index], Vec::Zero(m), Mat::Zero(m, m)};
      j.g[node.var_index] = 1.0;
      return j;
    }
    case ExprNode::Kind::Add: {
      Jet a = evaluate(*node.lhs, x), b = evaluate(*node.rhs, x);
      return {a.v + b.v, a.g + b.g, a.H + b.H};
    }
    case ExprNode::Kind::Sub: {
      Jet a = evaluate(*node.lhs, x), b = evaluate(*node.rhs, x);
      return {a.v - b.v, a.g - b.g, a.H - b.H};
    }
    case ExprNode::Kind::Mul: {
      Jet a = evaluate(*node.lhs, x), b = evaluate(*node.rhs, x);
      Mat H = a.v * b.H + b.v * a.H + a.g * b.g.transpose() +
              b.g * a.g.transpose();
      return {a.v * b.v, a.v * b.g + b.v * a.g, std::move(H)};
    }
    case ExprNode::Kind::Div: {
      Jet a = evaluate(*node.lhs, x), b = evaluate(*node.rhs, x);
      const double v = a.v / b.v;
      Vec g = (a.g - v * b.g) / b.v;
      Mat H = (a.H - v * b.H - g * b.g.transpose() - b.g * g.transpose()) / b.v;
      return {v, std::move(g), std::move(H)};
    }
    case ExprNode::Kind::Pow: {
      Jet a = evaluate(*node.lhs, x);
      const double c = node.constant;
      const double v = std::pow(a.v, c);
      const double d1 = c * std::pow(a.v, c - 1.0);
      const double d2 = c * (c - 1.0) * std::pow(a.v, c - 2.0);
      Mat H = d1 * a.H + d2 * a.g * a.g.transpose();
      return {v, d1 * a.g, std::move(H)};
    }
    case ExprNode::Kind::Exp: {
      Jet a = evaluate(*node.lhs, x);
      const double v = std::exp(a.v);
      Mat H = v * (a.H + a.g * a.g.transpose());
      return {v, v * a.g, std::move(H)};
    }
    case ExprNode::Kind::Neg: {
      Jet a = evaluate(*node.lhs, x);
      return {-a.v, -a.g, -a.H};
    }
  }
  throw Error("unreachable expression node");
}

double evaluate_value(const ExprNode& node, const Vec& x) {
  switch (node.kind) {
    case ExprNode::Kind::Const:
      return node.constant;
    case ExprNode::Kind::Var:
      return x[node.var_index];
    case ExprNode::Kind::Add:
      return evaluate_value(*node.lhs, x) + evaluate_value(*node.rhs, x);
    case ExprNode::Kind::Sub:
      return evaluate_value(*node.lhs, x) - evaluate_value(*node.rhs, x);
    case ExprNode::Kind::Mul:
      return evaluate_value(*node.lhs, x) * evaluate_value(*node.rhs, x);
    case ExprNode::Kind::Div:
      return evaluate_value(*node.lhs, x) / evaluate_value(*node.rhs, x);
    case ExprNode::Kind::Pow:
      return std::pow(evaluate_value(*node.lhs, x), node.constant);
    case ExprNode::Kind::Exp:
      return std::exp(evaluate_value(*node.lhs, x));
    case ExprNode::Kind::Neg:
      return -evaluate_value(*node.lhs, x);
  }
  throw Error("unreachable expression node");
}

// Recursive-descent parser over the fixed operator set.
class Parser {
public:
  Parser(const std::string& text, int ambient_dim)
      : text_(text), dim_(ambient_dim) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

private:
  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (match('+'))
        lhs = binary(ExprNode::Kind::Add, lhs, term());
      else if (match('-'))
        lhs = binary(ExprNode::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (match('*'))
        lhs = binary(ExprNode::Kind::Mul, lhs, factor());
      else if (match('/'))
        lhs = binary(ExprNode::Kind::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    skip_ws();
    if (match('^')) {
      skip_ws();
      const std::size_t at = pos_;
      NodePtr expo = unary();  // right-associative, must fold to a constant
      const std::optional<double> c = fold_constant(expo);
      if (!c)
        throw SyntaxError("exponent must be a real constant", at);
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Pow;
      node->constant = *c;
      node->lhs = base;
      return node;
    }
    return base;
  }

  NodePtr unary() {
    skip_ws();
    if (match('-')) {
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Neg;
      node->lhs = unary();
      return node;
    }
    if (match('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      skip_ws();
      if (!match(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw SyntaxError("malformed number", start);
    }
    pos_ = start + consumed;
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Const;
    node->constant = v;
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "exp") {
      skip_ws();
      if (!match('(')) throw ArityError("exp expects exactly one argument");
      NodePtr arg = expression();
      skip_ws();
      if (match(',')) throw ArityError("exp expects exactly one argument");
      if (!match(')')) throw SyntaxError("expected ')'", pos_);
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Exp;
      node->lhs = arg;
      return node;
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int idx = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
          throw SyntaxError("unknown identifier '" + name + "'", start);
        idx = idx * 10 + (name[i] - '0');
      }
      if (idx < 1 || idx > dim_)
        throw SyntaxError("coordinate '" + name + "' out of range (have x1..x" +
                              std::to_string(dim_) + ")",
                          start);
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Var;
      node->var_index = idx - 1;
      return node;
    }
    throw SyntaxError("unknown identifier '" + name + "'", start);
  }

  static NodePtr binary(ExprNode::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<ExprNode>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  static std::optional<double> fold_constant(const NodePtr& node) {
    switch (node->kind) {
      case ExprNode::Kind::Const:
        return node->constant;
      case ExprNode::Kind::Neg: {
        auto inner = fold_constant(node->lhs);
        return inner ? std::optional<double>(-*inner) : std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

double CurvatureField::value(const Vec& x) const {
  return detail::evaluate_value(*root_, x);
}

Vec CurvatureField::ambient_gradient(const Vec& x) const {
  return detail::evaluate(*root_, x).g;
}

Mat CurvatureField::ambient_hessian(const Vec& x) const {
  return detail::evaluate(*root_, x).H;
}

CurvatureField parse_curvature(const std::string& text,
                               const ProblemParams& params) {
  if (text.empty()) throw SyntaxError("empty expression", 0);
  detail::Parser parser(text, params.ambient_dim());
  CurvatureField field;
  field.root_ = parser.parse();
  field.text_ = text;
  field.dim_ = params.ambient_dim();

  const std::vector<Vec> probe = quasi_uniform_points(params.n, 10000);
  for (const Vec& x : probe) {
    const double v = detail::evaluate_value(*field.root_, x);
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::vector<double> witness(x.data(), x.data() + x.size());
      throw PositivityViolation(
          "curvature expression is not strictly positive on S^n (value " +
              std::to_string(v) + " at a probe point)",
          std::move(witness));
    }
  }
  return field;
}

Vec grad_sphere(const CurvatureField& K, const SpherePoint& a) {
  const Vec g = K.ambient_gradient(a.coords());
  return g - a.coords().dot(g) * a.coords();
}

Mat hess_sphere(const CurvatureField& K, const SpherePoint& a) {
  const Mat frame = tangent_basis(a);
  const Mat H = K.ambient_hessian(a.coords());
  const double radial = a.coords().dot(K.ambient_gradient(a.coords()));
  Mat out = frame.transpose() * H * frame;
  out -= radial * Mat::Identity(out.rows(), out.cols());
  return out;
}

double laplace_beltrami(const CurvatureField& K, const SpherePoint& a) {
  const Mat H = K.ambient_hessian(a.coords());
  const Vec g = K.ambient_gradient(a.coords());
  const Vec& x = a.coords();
  const int n = a.ambient_dim() - 1;
  return H.trace() - x.dot(H * x) - n * x.dot(g);
}

namespace {

struct NewtonOutcome {
  SpherePoint location;
  double residual;
  bool converged;
};

NewtonOutcome newton_polish(const CurvatureField& K, SpherePoint a,
                            const CriticalPointOptions& opts) {
  double gnorm = grad_sphere(K, a).norm();
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const Mat frame = tangent_basis(a);
    const Vec g_amb = grad_sphere(K, a);
    const Vec g = frame.transpose() * g_amb;
    gnorm = g.norm();
    if (gnorm <= opts.gradient_tol) return {a, gnorm, true};

    const Mat H = hess_sphere(K, a);
    Vec step;
    double mu = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Mat Hm = H;
      if (mu > 0.0) Hm += mu * Mat::Identity(H.rows(), H.cols());
      step = Hm.fullPivLu().solve(-g);
      if (step.allFinite() && step.norm() < 1.0) break;
      mu = (mu == 0.0) ? 1e-6 * std::max(1.0, H.cwiseAbs().maxCoeff()) : 10.0 * mu;
    }
    if (!step.allFinite()) return {a, gnorm, false};
    if (step.norm() > 0.5) step *= 0.5 / step.norm();

    // backtrack on the gradient norm
    double scale = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 25; ++bt) {
      const SpherePoint cand =
          SpherePoint::normalized(a.coords() + frame * (scale * step));
      if (grad_sphere(K, cand).norm() <= gnorm * (1.0 - 1e-4 * scale) ||
          grad_sphere(K, cand).norm() < opts.gradient_tol) {
        a = cand;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) return {a, gnorm, false};
  }
  gnorm = grad_sphere(K, a).norm();
  return {a, gnorm, gnorm <= opts.gradient_tol};
}

}  // namespace

CriticalPointResult find_critical_points(const ProblemParams& params,
                                         const CurvatureField& K,
                                         const CriticalPointOptions& opts) {
  CriticalPointResult result;
  std::vector<SpherePoint> found;

  const std::vector<Vec> starts =
      quasi_uniform_points(params.n, opts.multistart, opts.seed);
  for (const Vec& s : starts) {
    const NewtonOutcome out = newton_polish(K, SpherePoint(s), opts);
    if (!out.converged) {
      ++result.failed_starts;
      continue;
    }
    bool duplicate = false;
    for (const SpherePoint& y : found)
      if (geodesic_distance(y, out.location) < opts.merge_radius) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    found.push_back(out.location);

    const Mat H = hess_sphere(K, out.location);
    const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::SelfAdjointEigenSolver<Mat> eig(H);
    const Vec ev = eig.eigenvalues();
    if (ev.cwiseAbs().minCoeff() <= opts.degeneracy_factor * scale)
      throw DegenerateCritical(
          "critical point with a near-zero Hessian eigenvalue found (the "
          "non-degeneracy assumption fails)");
    const double lap = laplace_beltrami(K, out.location);
    if (std::abs(lap) <= opts.degeneracy_factor * scale)
      throw LaplacianDegenerate(
          "critical point with vanishing Laplacian found (the Laplacian "
          "non-degeneracy assumption fails)");

    CriticalPointRecord rec{out.location, 0, lap, -lap > 0.0, out.residual,
                            K.value(out.location.coords())};
    for (int i = 0; i < ev.size(); ++i)
      if (ev[i] < 0.0) ++rec.morse_index;
    result.records.push_back(std::move(rec));
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              if (a.K_value != b.K_value) return a.K_value > b.K_value;
              const Vec &xa = a.location.coords(), &xb = b.location.coords();
              for (int i = 0; i < xa.size(); ++i)
                if (xa[i] != xb[i]) return xa[i] < xb[i];
              return false;
            });
  for (const CriticalPointRecord& r : result.records)
    result.euler_checksum += (r.morse_index % 2 == 0) ? 1 : -1;
  return result;
}

std::vector<CriticalPointRecord> classify_Iplus(
    const std::vector<CriticalPointRecord>& records) {
  std::vector<CriticalPointRecord> out;
  for (const CriticalPointRecord& r : records)
    if (r.in_I_plus) out.push_back(r);
  std::sort(out.begin(), out.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              if (a.K_value != b.K_value) return a.K_value > b.K_value;
              const Vec &xa = a.location.coords(), &xb = b.location.coords();
              for (int i = 0; i < xa.size(); ++i)
                if (xa[i] != xb[i]) return xa[i] < xb[i];
              return false;
            });
  return out;
}

}  // namespace nirenberg
