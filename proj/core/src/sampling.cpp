#include "nirenberg/sampling.hpp"

#include <cmath>

namespace nirenberg {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace

double inverse_normal_cdf(double p) {
  // Acklam's rational approximation with one Halley refinement step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

std::vector<Vec> quasi_uniform_points(int n, int count, std::uint64_t seed) {
  std::vector<Vec> points;
  points.reserve(count);
  const std::uint64_t start = 1000 + 131 * seed;
  for (int i = 0; i < count; ++i) {
    Vec v(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double u = halton(start + i, kPrimes[j % 10]);
      v[j] = inverse_normal_cdf(std::min(std::max(u, 1e-12), 1.0 - 1e-12));
    }
    const double nrm = v.norm();
    if (nrm < 1e-12) {
      v.setZero();
      v[0] = 1.0;
      points.emplace_back(v);
    } else {
      points.emplace_back(v / nrm);
    }
  }
  return points;
}

std::uint64_t DeterministicRng::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double DeterministicRng::next_double() {
  return (next_u64() >> 11) * 0x1.0p-53;
}

double DeterministicRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  double u2 = next_double();
  if (u1 < 1e-300) u1 = 1e-300;
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

SpherePoint DeterministicRng::next_sphere_point(int n) {
  Vec v(n + 1);
  double nrm = 0.0;
  do {
    for (int i = 0; i <= n; ++i) v[i] = next_normal();
    nrm = v.norm();
  } while (nrm < 1e-12);
  return SpherePoint::normalized(v);
}

SpherePoint DeterministicRng::next_point_in_cap(const SpherePoint& center,
                                                double radius) {
  const int n = center.ambient_dim() - 1;
  const Mat frame = tangent_basis(center);
  Vec dir(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) dir[i] = next_normal();
    nrm = dir.norm();
  } while (nrm < 1e-12);
  dir /= nrm;
  const double theta = radius * std::pow(next_double(), 1.0 / n);
  return geodesic_step(center, frame * dir, theta);
}

}  // namespace nirenberg
