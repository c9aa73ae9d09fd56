#pragma once

#include "adslab/flow.hpp"
#include "adslab/hull.hpp"
#include "adslab/surface.hpp"

// The width/extrinsic-curvature inequality battery evaluated on a solved
// surface and the width reports of its boundary. Hard checks carry pass
// flags; the two constant ratios are trends only (their constants are
// non-constructive) and never gate.

namespace adslab {

struct InequalityChecks {
  Scalar H = 0;
  Scalar omega_H = 0;
  Scalar omega_K = 0;
  Scalar K_ref = 0;  // the K of the ratio check
  Scalar sup_lambda1 = 0;
  Scalar inf_lambdan = 0;
  Scalar B0_norm = 0;
  Scalar max_K_sigma = 0;

  // (i) omega_H <= arctan(sup l1) - arctan(inf ln)
  Scalar check_i_lhs = 0, check_i_rhs = 0;
  bool check_i_pass = false;
  // (ii) tan(omega_H) <= 2|B0| / (1 + (H/n)^2 - |B0|^2) when |B0|^2 <= 1 + (H/n)^2
  bool check_ii_applicable = false;
  Scalar check_ii_lhs = 0, check_ii_rhs = 0;
  bool check_ii_pass = false;
  // (iii) |B0| / sin(omega_K)  [trend]
  Scalar ratio_iii = 0;
  // (iv) (max K + 1 + (H/n)^2) / sin(omega_H)  [trend]
  Scalar ratio_iv = 0;
  // (v) n = 2: tan(omega_H) <= -2|B0| / sup K when sup K < 0
  bool check_v_applicable = false;
  Scalar check_v_lhs = 0, check_v_rhs = 0;
  bool check_v_pass = false;

  bool hard_checks_pass(Scalar tol) const {
    return check_i_lhs <= check_i_rhs + tol &&
           (!check_ii_applicable || check_ii_lhs <= check_ii_rhs + tol) &&
           (!check_v_applicable || check_v_lhs <= check_v_rhs + tol);
  }
};

/// wr_H must belong to the same boundary and the surface's H; wr_K supplies
/// the reference width for the trend ratio (may equal wr_H).
InequalityChecks inequality_checks(const CmcMesh& c, const WidthReport& wr_H, const WidthReport& wr_K,
                             Scalar tol = 0.02);

}  // namespace adslab
