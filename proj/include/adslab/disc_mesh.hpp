#pragma once

#include <vector>

#include "adslab/types.hpp"

// Simplicial meshes of a geodesic disc in the hyperbolic slice H^n,
// stored in hyperboloid coordinates (n spatial components, cosh last).

namespace adslab {

/// Minkowski product on R^{n,1} (hyperboloid ambient of the slice).
template <class A, class B>
Scalar hyp_dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const Index m = a.size();
  return a.head(m - 1).dot(b.head(m - 1)) - a(m - 1) * b(m - 1);
}

inline Scalar hyp_distance(const Vec& a, const Vec& b) {
  return std::acosh(std::max(1.0, -hyp_dot(a, b)));
}

struct DiscMesh {
  int n = 2;           // intrinsic dimension
  Mat vertices;        // V x (n+1) hyperboloid coordinates
  MatXi cells;         // C x (n+1) vertex indices per simplex
  std::vector<int> boundary_ring;  // indices of the outer ring, angularly ordered (n = 2)
  std::vector<char> on_boundary;   // per-vertex flag
  std::vector<char> core;          // interior vertices whose fit stencil avoids the ring
  Scalar radius = 0;   // geodesic truncation radius
  Scalar h_max = 0;    // max hyperbolic edge length
  Scalar min_angle = 0;  // min cell angle (n = 2)

  std::vector<std::vector<int>> nbrs;   // 1-ring adjacency
  std::vector<std::vector<int>> ring2;  // vertices within graph distance 2 (excl. self)

  Index num_vertices() const { return vertices.rows(); }
  Index num_cells() const { return cells.rows(); }

  /// Klein coordinates of vertex i (spatial over cosh).
  Vec klein(Index i) const {
    return vertices.row(i).head(n).transpose() / vertices(i, n);
  }

  /// Geodesic radius of vertex i.
  Scalar rho(Index i) const { return std::acosh(std::max(1.0, vertices(i, n))); }
};

/// Structured polar mesh of a geodesic disc in H^2. Ring spacing R/rings;
/// angular counts double dyadically to keep edges near-uniform.
DiscMesh make_polar_disc(Scalar R, int rings);

/// Lattice tetrahedral ball in H^3 (Klein-uniform grid, Kuhn split).
/// Boundary is a staircase shell; intended for interior geometry checks.
DiscMesh make_lattice_ball(Scalar R, int divisions);

/// Per-cell edge Gram matrix of the induced hyperbolic metric (edges from
/// the first cell vertex, projected to the tangent space at the barycenter).
Mat cell_gram(const DiscMesh& mesh, Index c);

/// Squared norm of the P1 gradient of u on cell c.
Scalar cell_grad_norm2(const DiscMesh& mesh, Index c, const Vec& u);

/// cosh(rho) at the cell barycenter.
Scalar cell_cosh_rho(const DiscMesh& mesh, Index c);

/// Solves the P1 Laplace problem on the disc with Dirichlet data on the
/// boundary ring. Used for solver initial guesses.
Vec harmonic_extension(const DiscMesh& mesh, const Vec& dirichlet_on_ring);

}  // namespace adslab
