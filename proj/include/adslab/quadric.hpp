#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "adslab/types.hpp"

// Quadric model of the Lorentzian space form of curvature -1 and signature
// (n,1), realized as the unit-negative vectors of a bilinear form of
// signature (n,2) on R^{n+2}. The two negative coordinates are the last two.

namespace adslab {

/// Ambient bilinear form: sum of the first n products minus the last two.
template <class A, class B>
Scalar lorentz_dot(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("lorentz_dot: dimension mismatch");
  const Index m = x.size();
  return x.head(m - 2).dot(y.head(m - 2)) - x(m - 2) * y(m - 2) - x(m - 1) * y(m - 1);
}

template <class A>
Scalar lorentz_norm2(const Eigen::MatrixBase<A>& x) {
  return lorentz_dot(x, x);
}

enum class CausalClass { Timelike, Lightlike, Spacelike };

inline CausalClass classify_vector(const Vec& v, Scalar eps = kQuadricEps) {
  const Scalar q = lorentz_norm2(v);
  if (q < -eps) return CausalClass::Timelike;
  if (q > eps) return CausalClass::Spacelike;
  return CausalClass::Lightlike;
}

/// Point on the quadric {q(x,x) = -1}. Construction renormalizes, so drift
/// stays below kQuadricEps over long chains of operations.
struct AdSPoint {
  Vec v;

  AdSPoint() = default;
  explicit AdSPoint(Vec coords) : v(std::move(coords)) {
    const Scalar q = lorentz_norm2(v);
    if (!(q < 0))
      throw std::invalid_argument("AdSPoint: vector is not timelike, q = " + std::to_string(q));
    v /= std::sqrt(-q);
  }

  Index ambient_dim() const { return v.size(); }
  Index n() const { return v.size() - 2; }

  /// |q(v,v) + 1| relative to the squared coordinate scale (the absolute
  /// defect is not representable for far-out points in double precision).
  Scalar quadric_residual() const {
    return std::abs(lorentz_norm2(v) + 1.0) / (1.0 + v.squaredNorm());
  }
};

/// The canonical future-directed timelike tangent at x: rotation direction of
/// the negative 2-plane. Fixes the global time orientation (future at the
/// base point e_{n+2} is +e_{n+1}, propagated by continuity).
inline Vec future_reference(const Vec& x) {
  const Index m = x.size();
  Vec u = Vec::Zero(m);
  u(m - 2) = x(m - 1);
  u(m - 1) = -x(m - 2);
  return u / std::sqrt(x(m - 2) * x(m - 2) + x(m - 1) * x(m - 1));
}

inline bool is_future_directed(const AdSPoint& base, const Vec& dir) {
  return lorentz_dot(dir, future_reference(base.v)) < 0;
}

/// Tangent vector at a base point, tagged with its causal class.
struct AdSTangent {
  AdSPoint base;
  Vec dir;
  CausalClass causal_class;

  AdSTangent(AdSPoint base_, Vec dir_, Scalar eps = 1e-9)
      : base(std::move(base_)), dir(std::move(dir_)) {
    if (std::abs(lorentz_dot(base.v, dir)) > eps)
      throw std::invalid_argument("AdSTangent: vector is not tangent at base");
    causal_class = classify_vector(dir, eps);
  }
};

/// Projects w onto the tangent space of the quadric at x.
inline Vec tangent_project(const AdSPoint& x, const Vec& w) {
  return w + lorentz_dot(w, x.v) * x.v;
}

/// Normalizes a tangent vector to q(v,v) in {-1, 0, +1}; lightlike vectors
/// are returned with unit Euclidean norm.
inline Vec tangent_normalize(const Vec& dir, Scalar eps = 1e-9) {
  const Scalar q = lorentz_norm2(dir);
  if (q < -eps) return dir / std::sqrt(-q);
  if (q > eps) return dir / std::sqrt(q);
  return dir / dir.norm();
}

/// Geodesic through x with initial velocity v, evaluated at parameter t.
/// Closed forms: trig for timelike, affine for lightlike, hyperbolic for
/// spacelike directions. Requires v normalized (q(v,v) in {-1,0,+1}).
inline AdSPoint exp_map(const AdSPoint& x, const AdSTangent& v, Scalar t, Scalar eps = 1e-9) {
  if (std::abs(lorentz_dot(x.v, v.dir)) > eps)
    throw std::invalid_argument("exp_map: velocity is not tangent at x");
  const Scalar q = lorentz_norm2(v.dir);
  Vec out;
  switch (v.causal_class) {
    case CausalClass::Timelike:
      if (std::abs(q + 1.0) > eps) throw std::invalid_argument("exp_map: timelike velocity not unit");
      out = std::cos(t) * x.v + std::sin(t) * v.dir;
      break;
    case CausalClass::Lightlike:
      out = x.v + t * v.dir;
      break;
    case CausalClass::Spacelike:
      if (std::abs(q - 1.0) > eps) throw std::invalid_argument("exp_map: spacelike velocity not unit");
      out = std::cosh(t) * x.v + std::sinh(t) * v.dir;
      break;
  }
  return AdSPoint(std::move(out));
}

/// Timelike distance, when realized by a geodesic: q(p,q) = -cos(dist) for
/// time-related pairs strictly between the duals of p. Returns 0 for p = q,
/// pi at the antipode, and nullopt outside the realization regime (the
/// regime boundary itself is left undefined).
inline std::optional<Scalar> lorentz_distance(const AdSPoint& p, const AdSPoint& q,
                                              Scalar eps = 1e-9) {
  if ((p.v - q.v).lpNorm<Eigen::Infinity>() < eps) return 0.0;
  if ((p.v + q.v).lpNorm<Eigen::Infinity>() < eps) return kPi;
  const Scalar c = lorentz_dot(p.v, q.v);
  if (c <= -1.0 + eps || c >= 1.0 - eps) return std::nullopt;
  return std::acos(-c);
}

enum class CausalRelation { TimeRelated, LightRelated, SpaceRelated, Equal };

/// Classification of a pair by the value of the form, thresholds at -1 and
/// +1 (meaningful inside the invisible-domain regime, where it matches
/// geodesic reachability).
inline CausalRelation causal_relation(const AdSPoint& p, const AdSPoint& q, Scalar eps = 1e-9) {
  if ((p.v - q.v).lpNorm<Eigen::Infinity>() < eps) return CausalRelation::Equal;
  const Scalar c = lorentz_dot(p.v, q.v);
  if (c < -1.0 - eps) return CausalRelation::SpaceRelated;
  if (c <= -1.0 + eps) return CausalRelation::LightRelated;
  return CausalRelation::TimeRelated;
}

/// Dual data of a point: both time-antipodes coincide with -p in this model,
/// and the dual totally geodesic pair is the zero set of x -> q(x, p).
struct DualData {
  AdSPoint p_plus;
  AdSPoint p_minus;
  Vec plane;  // functional x -> lorentz_dot(x, plane)

  Scalar eval(const Vec& x) const { return lorentz_dot(x, plane); }
};

inline DualData dual_data(const AdSPoint& p) {
  return DualData{AdSPoint(-p.v), AdSPoint(-p.v), p.v};
}

/// A splitting: base point p plus future unit timelike normal N of the
/// totally geodesic hypersurface through p. Identifies the space with
/// H^n x R by rotating the (p, N) plane.
struct Splitting {
  AdSPoint p;
  Vec normal;

  Splitting(AdSPoint base, Vec n_, Scalar eps = 1e-9) : p(std::move(base)), normal(std::move(n_)) {
    if (std::abs(lorentz_dot(p.v, normal)) > eps)
      throw std::invalid_argument("Splitting: normal not tangent at p");
    if (std::abs(lorentz_norm2(normal) + 1.0) > eps)
      throw std::invalid_argument("Splitting: normal not unit timelike");
    if (!is_future_directed(p, normal))
      throw std::invalid_argument("Splitting: normal not future-directed");
  }

  Index ambient_dim() const { return p.ambient_dim(); }
};

/// Splitting with p = e_{n+2}, N = e_{n+1}.
inline Splitting standard_splitting(int n) {
  Vec p = Vec::Zero(n + 2);
  p(n + 1) = 1.0;
  Vec nrm = Vec::Zero(n + 2);
  nrm(n) = 1.0;
  return Splitting(AdSPoint(p), nrm);
}

struct SplitCoords {
  Vec base;  // point of the spacelike slice through p, as an ambient vector
  Scalar t;  // fiber angle in (-pi, pi]
};

/// Coordinates (y, t) of x in the splitting s. Throws on the cut locus
/// t = pi (boundary of the fundamental domain).
inline SplitCoords splitting_project(const Splitting& s, const AdSPoint& x,
                                     Scalar cut_guard = 1e-9) {
  const Scalar a = -lorentz_dot(x.v, s.p.v);
  const Scalar b = -lorentz_dot(x.v, s.normal);
  Vec w = x.v - a * s.p.v - b * s.normal;
  const Scalar r = std::sqrt(a * a + b * b);
  const Scalar t = std::atan2(b, a);
  if (kPi - std::abs(t) < cut_guard)
    throw std::domain_error("splitting_project: point on the cut hypersurface");
  return SplitCoords{r * s.p.v + w, t};
}

/// Inverse of splitting_project: rotates y by angle t in the (p, N) plane.
inline AdSPoint splitting_embed(const Splitting& s, const Vec& y, Scalar t) {
  const Scalar a = -lorentz_dot(y, s.p.v);
  Vec w = y - a * s.p.v;  // y is orthogonal to N already
  return AdSPoint(a * (std::cos(t) * s.p.v + std::sin(t) * s.normal) + w);
}

/// cosh of the slice distance from the splitting base to y.
inline Scalar slice_cosh_distance(const Splitting& s, const Vec& y) {
  return -lorentz_dot(y, s.p.v);
}

}  // namespace adslab
