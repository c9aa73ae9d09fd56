#pragma once

#include <vector>

#include "adslab/boundary.hpp"
#include "adslab/quadric.hpp"

// Totally umbilical hypersurfaces, the H-shifted convex hull of an
// admissible boundary, and its width (timelike diameter).

namespace adslab {

/// Umbilical hypersurface P_delta: membership set {q(x, e) = -sin(delta)}
/// for e the past dual point of the core totally geodesic hypersurface.
/// Mean curvature n tan(delta).
struct UmbilicalHypersurface {
  AdSPoint e;
  Scalar delta = 0;

  Scalar membership_residual(const Vec& x) const {
    return lorentz_dot(x, e.v) + std::sin(delta);
  }
  Scalar mean_curvature(int n) const { return n * std::tan(delta); }
};

/// Umbilical through the standard base point, tangent there to the zero
/// slice of the standard splitting.
UmbilicalHypersurface standard_umbilical(int n, Scalar delta);

/// Umbilical whose core plane sits at the mean fiber height of the
/// boundary data: the natural distance reference for graphs asymptotic
/// to b (keeps the pairing with the dual point inside the quarter window).
UmbilicalHypersurface reference_umbilical(const AdmissibleBoundary& b, Scalar delta);

/// Graph height of the umbilical tangent to the zero slice at the center,
/// in the tangency splitting, as a function of geodesic radius.
Scalar umbilical_graph_height(Scalar delta, Scalar rho);

inline Scalar delta_of(Scalar H, int n) { return std::atan(H / n); }

struct HullQuery {
  const AdmissibleBoundary* boundary = nullptr;
  const ExtremalExtensions* ext = nullptr;
  Scalar H = 0;
  Scalar delta_H = 0;
  Scalar tol = 2e-3;  // slack on the time-function level sets

  HullQuery(const AdmissibleBoundary& b, const ExtremalExtensions& e, Scalar H_, int n,
            Scalar tol_ = 2e-3)
      : boundary(&b), ext(&e), H(H_), delta_H(delta_of(H_, n)), tol(tol_) {}
};

/// Membership in the H-shifted hull via the time-function characterization:
/// inside the invisible domain, tau_past <= pi/2 - delta_H and
/// tau_fut >= pi/2 + delta_H, within tol.
bool hull_contains(const HullQuery& qr, const AdSPoint& p);

struct WidthGrid {
  int Nx = 240;       // slice sample points (subsampled from the extension grid)
  int Nt = 16;        // fiber samples per accepted window
  Scalar rho_cap = -1;  // fiber base radius cap; < 0 means grid radius - 0.8
};

struct WidthReport {
  Scalar H = 0;
  Scalar delta_H = 0;
  Scalar omega = 0;
  Scalar upper_bound = 0;   // pi/2 - |delta_H|
  bool upper_bound_ok = true;
  int chain_len = 0;
  int grid_Nx = 0;
  int grid_Nt = 0;
  int accepted_nodes = 0;
  std::vector<Vec> witness_chain;
};

/// Width of the H-shifted hull: longest weighted chain of time-related
/// sample pairs inside the hull. Converges to the width from below under
/// grid refinement; ties broken lexicographically on sample indices.
WidthReport width(const HullQuery& qr, const WidthGrid& grid = {});

/// Width as a function of H over a grid.
std::vector<WidthReport> width_profile(const AdmissibleBoundary& b, const ExtremalExtensions& ext,
                                       const std::vector<Scalar>& H_grid,
                                       const WidthGrid& grid = {});

struct SupportSearchResult {
  UmbilicalHypersurface P;
  Scalar sin_dist = 0;     // |sin dist(x, P)| at the query point
  Scalar boundary_slack = 0;  // min over samples of the boundary-side margin
  bool past_side = true;   // hull lies in the future of P
  bool certified = false;
};

/// Searches for a support umbilical of the hull through (near) x: coarse
/// grid over dual points inside the invisible domain, then local refinement.
SupportSearchResult find_support_umbilical(const AdmissibleBoundary& b,
                                           const ExtremalExtensions& ext, Scalar H,
                                           const AdSPoint& x, Scalar target_sin_dist,
                                           Scalar tol = 1e-3);

}  // namespace adslab
