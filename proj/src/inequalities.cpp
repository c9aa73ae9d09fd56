#include "adslab/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace adslab {

InequalityChecks inequality_checks(const CmcMesh& c, const WidthReport& wr_H, const WidthReport& wr_K,
                             Scalar tol) {
  if (std::abs(wr_H.H - c.H_target) > 1e-12)
    throw std::invalid_argument("inequality_checks: width report H does not match the surface");
  const int n = c.mesh->n;
  InequalityChecks t;
  t.H = c.H_target;
  t.omega_H = wr_H.omega;
  t.omega_K = wr_K.omega;
  t.K_ref = wr_K.H;

  Scalar l1 = -std::numeric_limits<Scalar>::infinity();
  Scalar ln = std::numeric_limits<Scalar>::infinity();
  Scalar b0 = 0;
  // base fits are clean up to the ring, so the extrema include the whole
  // interior (the action of the boundary data concentrates outward)
  for (Index v = 0; v < c.geo.lambda.rows(); ++v) {
    if (c.mesh->on_boundary[v]) continue;
    l1 = std::max(l1, c.geo.lambda(v, 0));
    ln = std::min(ln, c.geo.lambda(v, n - 1));
    for (int k = 0; k < n; ++k) b0 = std::max(b0, std::abs(c.geo.lambda(v, k) - t.H / n));
  }
  t.sup_lambda1 = l1;
  t.inf_lambdan = ln;
  t.B0_norm = b0;

  const SectionalReport sec = sectional_curvature(*c.mesh, c.geo, t.H);
  t.max_K_sigma = sec.sup_K;

  t.check_i_lhs = t.omega_H;
  t.check_i_rhs = std::atan(l1) - std::atan(ln);
  t.check_i_pass = t.check_i_lhs <= t.check_i_rhs + tol;

  const Scalar cap = 1.0 + (t.H / n) * (t.H / n);
  t.check_ii_applicable = b0 * b0 <= cap;
  if (t.check_ii_applicable) {
    t.check_ii_lhs = std::tan(t.omega_H);
    t.check_ii_rhs = cap - b0 * b0 > 1e-12 ? 2.0 * b0 / (cap - b0 * b0)
                                           : std::numeric_limits<Scalar>::infinity();
    t.check_ii_pass = t.check_ii_lhs <= t.check_ii_rhs + tol;
  }

  t.ratio_iii = std::sin(t.omega_K) > 1e-9 ? b0 / std::sin(t.omega_K) : 0.0;
  t.ratio_iv = std::sin(t.omega_H) > 1e-9
                   ? (t.max_K_sigma + 1.0 + (t.H / n) * (t.H / n)) / std::sin(t.omega_H)
                   : 0.0;

  if (n == 2 && t.max_K_sigma < 0) {
    t.check_v_applicable = true;
    t.check_v_lhs = std::tan(t.omega_H);
    t.check_v_rhs = -2.0 * b0 / t.max_K_sigma;
    t.check_v_pass = t.check_v_lhs <= t.check_v_rhs + tol;
  }
  return t;
}

}  // namespace adslab
