#include "adslab/vdiag.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adslab {

VDiagnostics v_diagnostics(const CmcMesh& c, const UmbilicalHypersurface& P, bool window_clip) {
  const DiscMesh& mesh = *c.mesh;
  const int n = mesh.n;
  const Scalar delta = P.delta;
  if (std::abs(delta - c.delta_H()) > 1e-9)
    throw std::invalid_argument("v_diagnostics: delta of P must match delta_H of the surface");

  VDiagnostics d;
  d.P = P;
  const Index V = mesh.num_vertices();
  d.u.resize(V);
  d.v.resize(V);
  d.out_of_range.assign(V, 0);
  for (Index i = 0; i < V; ++i) {
    const Scalar u = lorentz_dot(c.geo.X.row(i).transpose(), P.e.v);
    if (std::abs(u) >= 1.0 - 1e-12) {
      if (!window_clip)
        throw std::domain_error("v_diagnostics: |u| >= 1 at vertex " + std::to_string(i));
      d.out_of_range[i] = 1;
      d.u(i) = std::clamp(u, -1.0, 1.0);
      d.v(i) = std::cos(delta) * d.u(i);
      continue;
    }
    d.u(i) = u;
    d.v(i) = std::cos(delta) * u + std::sin(delta) * std::sqrt(1.0 - u * u);
  }

  ScalarDerivatives der = fit_scalar_derivatives(mesh, c.geo, d.v);
  d.grad_norm = der.grad_norm;
  d.laplace = der.laplace;

  d.forcing.resize(V);
  d.pde_residual.resize(V);
  d.denom_flag.assign(V, 0);
  const Scalar td = std::tan(delta);
  d.max_interior_residual = 0;
  for (Index i = 0; i < V; ++i) {
    const Scalar v = d.v(i);
    const Scalar g2 = der.grad_norm(i) * der.grad_norm(i);
    const Scalar root = std::sqrt(std::max(0.0, 1.0 - v * v));
    const Scalar denom = root + v * td;
    if (std::abs(denom) < 0.25) d.denom_flag[i] = 1;
    // trace of the Hessian identity for v on an H-hypersurface
    d.forcing(i) = -td * (g2 / (std::max(1e-300, (1.0 - v * v)) * denom) -
                          n * std::sqrt(std::max(0.0, 1.0 - v * v + g2)) + n / denom);
    if (mesh.on_boundary[i] || d.out_of_range[i]) {
      d.pde_residual(i) = std::numeric_limits<Scalar>::quiet_NaN();
    } else {
      d.pde_residual(i) = d.laplace(i) - n * v - d.forcing(i);
      d.max_interior_residual = std::max(d.max_interior_residual, std::abs(d.pde_residual(i)));
    }
  }
  return d;
}

GradientRatioReport gradient_ratio_report(const CmcMesh& c, const VDiagnostics& d) {
  GradientRatioReport rep;
  const Scalar delta = d.P.delta;
  const Scalar window = kPi / 4 - std::abs(delta) / 2;
  const Scalar vmax = d.v.cwiseAbs().maxCoeff();
  if (vmax < 1e-12) {
    rep.skipped = true;
    return rep;
  }
  // near the contact set v sits below the discretization noise of the
  // fitted gradient and the pointwise quotient is meaningless; the
  // estimator floors |v| at a fixed fraction of its window maximum
  const Scalar floor = 0.05 * vmax;
  const DiscMesh& mesh = *c.mesh;
  for (Index i = 0; i < d.v.size(); ++i) {
    if (mesh.on_boundary[i] || d.out_of_range[i]) continue;
    bool stencil_clipped = false;
    for (int j : mesh.ring2[i]) stencil_clipped |= d.out_of_range[j];
    if (stencil_clipped) continue;
    if (std::abs(std::asin(std::clamp(d.v(i), -1.0, 1.0))) > window) continue;
    if (d.denom_flag[i]) {
      ++rep.flagged;
      continue;
    }
    if (std::abs(d.v(i)) < floor) continue;
    ++rep.probed;
    rep.max_ratio = std::max(rep.max_ratio, d.grad_norm(i) / std::abs(d.v(i)));
  }
  if (rep.probed == 0) throw std::domain_error("gradient_ratio_report: empty probe window");
  return rep;
}

}  // namespace adslab
