#include "nirenberg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nirenberg {

SpherePoint north_pole(int n) {
  Vec v = Vec::Zero(n + 1);
  v[n] = 1.0;
  return SpherePoint(v);
}

SpherePoint south_pole(int n) {
  Vec v = Vec::Zero(n + 1);
  v[n] = -1.0;
  return SpherePoint(v);
}

SpherePoint axis_point(int n, int i, bool negative) {
  if (i < 0 || i > n) throw DomainError("axis_point: index out of range");
  Vec v = Vec::Zero(n + 1);
  v[i] = negative ? -1.0 : 1.0;
  return SpherePoint(v);
}

SpherePoint antipode(const SpherePoint& a) { return SpherePoint(Vec(-a.coords())); }

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  const double c = std::clamp(a.coords().dot(b.coords()), -1.0, 1.0);
  return std::acos(c);
}

double sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double omega(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

Mat tangent_basis(const SpherePoint& a) {
  const Vec& x = a.coords();
  const int m = a.ambient_dim();
  int drop = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(x[i]) > std::abs(x[drop])) drop = i;

  Mat basis(m, m - 1);
  int col = 0;
  for (int i = 0; i < m; ++i) {
    if (i == drop) continue;
    Vec v = Vec::Zero(m);
    v[i] = 1.0;
    v -= x.dot(v) * x;
    for (int j = 0; j < col; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    // second orthogonalization pass for 1e-12 level orthonormality
    v -= x.dot(v) * x;
    for (int j = 0; j < col; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(col++) = v / v.norm();
  }
  return basis;
}

Vec stereographic_project(const SpherePoint& x, const SpherePoint& pole) {
  if (geodesic_distance(x, pole) < 1e-9)
    throw PoleSingularity("stereographic_project: point coincides with pole");
  const Mat frame = tangent_basis(pole);
  const double t = x.coords().dot(pole.coords());
  const Vec u = frame.transpose() * x.coords();
  return u / (1.0 - t);
}

SpherePoint stereographic_inverse(const Vec& y, const SpherePoint& pole) {
  const Mat frame = tangent_basis(pole);
  const double rho2 = y.squaredNorm();
  Vec x = frame * (2.0 * y);
  x += (rho2 - 1.0) * pole.coords();
  x /= (1.0 + rho2);
  return SpherePoint::normalized(x);
}

SpherePoint geodesic_step(const SpherePoint& a, const Vec& direction, double t) {
  Vec e = direction - a.coords().dot(direction) * a.coords();
  const double nrm = e.norm();
  if (nrm == 0.0) return a;
  e /= nrm;
  return SpherePoint::normalized(std::cos(t) * a.coords() + std::sin(t) * e);
}

}  // namespace nirenberg
