#pragma once

#include "adslab/surface.hpp"

// Normal flow of spacelike surfaces: x -> cos(t) x + sin(t) N(x).
// Principal curvatures evolve as tan(arctan(lambda) - t); leaves stay
// spacelike strictly inside the window (A_minus, A_plus).

namespace adslab {

struct FlowWindow {
  Scalar A_plus = 0;   // arctan(inf lambda_n) + pi/2
  Scalar A_minus = 0;  // arctan(sup lambda_1) - pi/2
  Scalar T_plus = 0;   // arctan(sup lambda_1)
  Scalar T_minus = 0;  // arctan(inf lambda_n)
};

FlowWindow flow_window(const CmcMesh& c);

struct FlowState {
  const CmcMesh* base = nullptr;
  Scalar t = 0;
  Mat X;  // flowed positions
};

/// Flows every vertex along its unit normal; the result is on the quadric
/// for any t (renormalized against drift).
FlowState flow(const CmcMesh& c, Scalar t);

/// Recomputed geometry of a flowed leaf. Refuses t outside the guarded
/// window, where the leaf may degenerate.
SurfaceGeometry flow_geometry(const CmcMesh& c, Scalar t, Scalar guard = 1e-3);

struct CurvatureEvolution {
  Mat analytic;   // V x n, tan(arctan(lambda_i) - t)
  Mat numeric;    // V x n from the refitted leaf
  Scalar max_deviation = 0;  // over interior vertices
};

CurvatureEvolution curvature_evolution(const CmcMesh& c, Scalar t, Scalar guard = 1e-3);

/// T_plus - T_minus: the width bound carried by the flow.
struct WidthUpperBound {
  Scalar bound = 0;
  bool refinement_applies = false;  // |B0|^2 <= 1 + (H/n)^2
  Scalar refined_tan_bound = 0;     // 2|B0| / (1 + (H/n)^2 - |B0|^2) when applicable
};

WidthUpperBound width_upper_bound(const CmcMesh& c, Scalar H);

/// Bisection time at which the flowed leaf becomes past- (or future-)
/// H-convex; analytically T_plus - delta_H (resp. T_minus - delta_H).
Scalar convexity_time(const CmcMesh& c, Scalar H, ConvexSide side, Scalar t_tol = 1e-4);

}  // namespace adslab
