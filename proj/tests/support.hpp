#pragma once

#include <random>

#include "adslab/quadric.hpp"

// Seeded sampling helpers: points, causal tangents, and form-preserving
// matrices built from exact elementary rotations and boosts.

namespace adslab::testing {

using Rng = std::mt19937_64;

inline AdSPoint random_point(Rng& rng, int n, Scalar max_rho = 2.0) {
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  Vec dir(n);
  for (int i = 0; i < n; ++i) dir(i) = uni(rng);
  if (dir.norm() < 1e-3) dir(0) = 1.0;
  dir.normalize();
  std::uniform_real_distribution<Scalar> urho(0.0, max_rho);
  std::uniform_real_distribution<Scalar> ut(-kPi * 0.9, kPi * 0.9);
  const Scalar rho = urho(rng), t = ut(rng);
  Vec x(n + 2);
  x.head(n) = std::sinh(rho) * dir;
  x(n) = std::cosh(rho) * std::sin(t);
  x(n + 1) = std::cosh(rho) * std::cos(t);
  return AdSPoint(x);
}

inline AdSTangent random_tangent(Rng& rng, const AdSPoint& x, CausalClass cls,
                                 bool future = true) {
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  const Index m = x.ambient_dim();
  const Vec tau = future_reference(x.v);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vec w(m);
    for (Index i = 0; i < m; ++i) w(i) = uni(rng);
    w = tangent_project(x, w);
    Vec s = w + lorentz_dot(w, tau) * tau;  // spacelike part
    const Scalar sn = std::sqrt(std::max(0.0, lorentz_norm2(s)));
    if (sn < 1e-6) continue;
    s /= sn;
    Vec dir;
    switch (cls) {
      case CausalClass::Timelike: {
        std::uniform_real_distribution<Scalar> ub(0.0, 1.2);
        const Scalar b = ub(rng);
        dir = std::cosh(b) * tau + std::sinh(b) * s;
        break;
      }
      case CausalClass::Spacelike: {
        std::uniform_real_distribution<Scalar> ub(0.0, 1.2);
        const Scalar b = ub(rng);
        dir = std::cosh(b) * s + std::sinh(b) * tau;
        break;
      }
      case CausalClass::Lightlike:
        dir = tau + s;
        break;
    }
    if (!future && cls != CausalClass::Spacelike) dir = -dir;
    if (cls == CausalClass::Spacelike && uni(rng) < 0) dir = -dir;
    return AdSTangent(x, dir, 1e-7);
  }
  throw std::runtime_error("random_tangent: sampling failed");
}

/// Product of exact elementary rotations/boosts: orthogonal for the form
/// to machine precision.
inline Mat random_form_isometry(Rng& rng, int n, int factors = 12) {
  const int m = n + 2;
  std::uniform_real_distribution<Scalar> uang(-0.8, 0.8);
  std::uniform_int_distribution<int> upick(0, m - 1);
  Mat A = Mat::Identity(m, m);
  auto sign_of = [&](int i) { return i < n ? 1.0 : -1.0; };
  for (int f = 0; f < factors; ++f) {
    int i = upick(rng), j = upick(rng);
    while (j == i) j = upick(rng);
    Mat G = Mat::Identity(m, m);
    const Scalar a = uang(rng);
    if (sign_of(i) == sign_of(j)) {
      G(i, i) = std::cos(a);
      G(j, j) = std::cos(a);
      G(i, j) = -std::sin(a);
      G(j, i) = std::sin(a);
    } else {
      G(i, i) = std::cosh(a);
      G(j, j) = std::cosh(a);
      G(i, j) = std::sinh(a);
      G(j, i) = std::sinh(a);
    }
    A = G * A;
  }
  return A;
}

}  // namespace adslab::testing
