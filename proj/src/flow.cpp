#include "adslab/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace adslab {

namespace {

Scalar core_sup_lambda1(const DiscMesh& mesh, const SurfaceGeometry& geo) {
  Scalar s = -std::numeric_limits<Scalar>::infinity();
  for (Index v = 0; v < geo.lambda.rows(); ++v)
    if (mesh.core[v]) s = std::max(s, geo.lambda(v, 0));
  return s;
}

Scalar core_inf_lambdan(const DiscMesh& mesh, const SurfaceGeometry& geo) {
  const int n = static_cast<int>(geo.lambda.cols());
  Scalar s = std::numeric_limits<Scalar>::infinity();
  for (Index v = 0; v < geo.lambda.rows(); ++v)
    if (mesh.core[v]) s = std::min(s, geo.lambda(v, n - 1));
  return s;
}

}  // namespace

FlowWindow flow_window(const CmcMesh& c) {
  FlowWindow w;
  const Scalar l1 = core_sup_lambda1(*c.mesh, c.geo);
  const Scalar ln = core_inf_lambdan(*c.mesh, c.geo);
  w.T_plus = std::atan(l1);
  w.T_minus = std::atan(ln);
  w.A_plus = std::atan(ln) + kPi / 2;
  w.A_minus = std::atan(l1) - kPi / 2;
  return w;
}

FlowState flow(const CmcMesh& c, Scalar t) {
  FlowState st;
  st.base = &c;
  st.t = t;
  const Index V = c.geo.X.rows();
  st.X.resize(V, c.geo.X.cols());
  for (Index v = 0; v < V; ++v) {
    Vec x = std::cos(t) * c.geo.X.row(v).transpose() + std::sin(t) * c.geo.normal.row(v).transpose();
    st.X.row(v) = (x / std::sqrt(-lorentz_norm2(x))).transpose();
  }
  return st;
}

SurfaceGeometry flow_geometry(const CmcMesh& c, Scalar t, Scalar guard) {
  const FlowWindow w = flow_window(c);
  if (t <= w.A_minus + guard || t >= w.A_plus - guard)
    throw std::domain_error("flow_geometry: time outside the spacelike window (" +
                            std::to_string(w.A_minus) + ", " + std::to_string(w.A_plus) + ")");
  FlowState st = flow(c, t);
  return geometry_from_positions(*c.mesh, st.X);
}

CurvatureEvolution curvature_evolution(const CmcMesh& c, Scalar t, Scalar guard) {
  CurvatureEvolution ev;
  const int n = c.mesh->n;
  const Index V = c.geo.lambda.rows();
  ev.analytic.resize(V, n);
  for (Index v = 0; v < V; ++v)
    for (int k = 0; k < n; ++k)
      ev.analytic(v, k) = std::tan(std::atan(c.geo.lambda(v, k)) - t);
  SurfaceGeometry flowed = flow_geometry(c, t, guard);
  ev.numeric = flowed.lambda;
  ev.max_deviation = 0;
  for (Index v = 0; v < V; ++v) {
    if (!c.mesh->core[v]) continue;
    for (int k = 0; k < n; ++k)
      ev.max_deviation = std::max(ev.max_deviation, std::abs(ev.analytic(v, k) - ev.numeric(v, k)));
  }
  return ev;
}

WidthUpperBound width_upper_bound(const CmcMesh& c, Scalar H) {
  WidthUpperBound out;
  const int n = c.mesh->n;
  Scalar l1 = -std::numeric_limits<Scalar>::infinity();
  Scalar ln = std::numeric_limits<Scalar>::infinity();
  Scalar b0 = 0;
  for (Index v = 0; v < c.geo.lambda.rows(); ++v) {
    if (c.mesh->on_boundary[v]) continue;
    l1 = std::max(l1, c.geo.lambda(v, 0));
    ln = std::min(ln, c.geo.lambda(v, n - 1));
    for (int k = 0; k < n; ++k) b0 = std::max(b0, std::abs(c.geo.lambda(v, k) - H / n));
  }
  out.bound = std::atan(l1) - std::atan(ln);
  const Scalar cap = 1.0 + (H / n) * (H / n);
  out.refinement_applies = b0 * b0 <= cap;
  if (out.refinement_applies && cap - b0 * b0 > 1e-12)
    out.refined_tan_bound = 2.0 * b0 / (cap - b0 * b0);
  return out;
}

Scalar convexity_time(const CmcMesh& c, Scalar H, ConvexSide side, Scalar t_tol) {
  const FlowWindow w = flow_window(c);
  // refits are meaningless next to the degenerate leaves, so bracket the
  // monotone switch around its analytic location instead of the window ends
  const Scalar guard = std::min(0.08, 0.1 * (w.A_plus - w.A_minus));
  const Scalar dH = std::atan(H / c.mesh->n);
  const Scalar t_star = (side == ConvexSide::Past ? w.T_plus : w.T_minus) - dH;
  Scalar lo = std::max(w.A_minus + guard, t_star - 0.35);
  Scalar hi = std::min(w.A_plus - guard, t_star + 0.35);
  auto convex_at = [&](Scalar t) {
    SurfaceGeometry g = flow_geometry(c, t, guard / 2);
    return is_H_convex(*c.mesh, g, H, side, 1e-9).convex;
  };
  if (side == ConvexSide::Past) {
    // past-H-convex for t >= T_plus - delta_H
    if (convex_at(lo)) return lo;
    if (!convex_at(hi)) return hi;
    while (hi - lo > t_tol) {
      const Scalar mid = 0.5 * (lo + hi);
      (convex_at(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
  // future-H-convex for t <= T_minus - delta_H
  if (convex_at(hi)) return hi;
  if (!convex_at(lo)) return lo;
  while (hi - lo > t_tol) {
    const Scalar mid = 0.5 * (lo + hi);
    (convex_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace adslab
