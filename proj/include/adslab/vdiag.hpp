#pragma once

#include "adslab/hull.hpp"
#include "adslab/surface.hpp"

// The distance-to-umbilical diagnostics on a spacelike surface: the ambient
// pairing u with the dual point, the tilted combination v (sine of the
// signed distance to the umbilical within its validity window), their
// discrete derivatives, and the residual of the elliptic identity that v
// satisfies on CMC surfaces.

namespace adslab {

struct VDiagnostics {
  UmbilicalHypersurface P;
  Vec u;            // q(x, e) per vertex
  Vec v;            // cos(d) u + sin(d) sqrt(1 - u^2)
  Vec grad_norm;    // |grad v|
  Vec laplace;      // discrete Laplace-Beltrami of v
  Vec forcing;      // right-hand side of the elliptic identity
  Vec pde_residual; // laplace - n v - forcing (interior vertices, NaN on ring)
  std::vector<char> denom_flag;   // denominator below the 1/4 guard
  std::vector<char> out_of_range; // |u| >= 1 (only with window clipping)
  Scalar max_interior_residual = 0;
};

/// Requires delta of P equal to the surface's delta_H. Throws if |u| >= 1
/// anywhere (vertex outside the quarter-turn window of the dual point);
/// with window_clip such vertices are masked out instead, for tilted
/// support references whose window does not cover the whole truncation.
VDiagnostics v_diagnostics(const CmcMesh& c, const UmbilicalHypersurface& P,
                           bool window_clip = false);

struct GradientRatioReport {
  Scalar max_ratio = 0;    // max |grad v| / |v| over the probe window
  int probed = 0;
  int flagged = 0;         // vertices excluded by the denominator guard
  bool skipped = false;    // v vanishes identically (umbilical input)
};

/// max |grad v| / |v| over vertices with |dist to P| <= pi/4 - |delta|/2.
GradientRatioReport gradient_ratio_report(const CmcMesh& c, const VDiagnostics& d);

}  // namespace adslab
