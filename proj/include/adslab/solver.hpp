#pragma once

#include "adslab/boundary.hpp"
#include "adslab/surface.hpp"

// Damped Newton solver for the prescribed-mean-curvature graph problem
// over a truncated geodesic disc, with Dirichlet data on the boundary ring.
// Iterates are kept strictly spacelike by clamping against the causal slope.

namespace adslab {

struct SolveOptions {
  Scalar tol = 1e-10;        // max interior |H_mean - H|
  int max_iter = 40;
  Scalar fd_eps = 1e-7;
  Scalar slope_limit = 0.995;  // causal slope clamp (< 1)
  int max_linesearch = 12;
  int max_relax = 400;       // pseudo-time fallback steps
  bool verbose = false;
};

struct SolveStats {
  int newton_iters = 0;
  int relax_steps = 0;
  Scalar residual = 0;
  bool converged = false;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solves for mean curvature H with explicit Dirichlet values on the ring.
CmcMesh solve_cmc(std::shared_ptr<const DiscMesh> mesh, const Vec& ring_values, Scalar H,
                  const SolveOptions& opts = {}, SolveStats* stats = nullptr);

/// Ring data from the boundary: the Fourier generator when present, else
/// the extremal-extension midpoint at the ring vertices.
Vec ring_data_from_boundary(const AdmissibleBoundary& b, const DiscMesh& mesh);

CmcMesh solve_cmc(const AdmissibleBoundary& b, Scalar H, std::shared_ptr<const DiscMesh> mesh,
                  const SolveOptions& opts = {}, SolveStats* stats = nullptr);

}  // namespace adslab
