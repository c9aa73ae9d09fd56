#pragma once

#include <memory>
#include <vector>

#include "adslab/disc_mesh.hpp"
#include "adslab/quadric.hpp"

// Discrete geometry of spacelike graph hypersurfaces: quadric embedding,
// per-vertex normals and shape operators from local polynomial fits over
// 2-ring stencils, curvatures and convexity margins.

namespace adslab {

/// Embeds the graph (y, f(y)) into the quadric through the standard
/// splitting. Throws if some cell violates the causal slope bound.
Mat embed_graph(const DiscMesh& mesh, const Vec& f, bool check_spacelike = true);

/// max over cells of cosh(rho) * |grad f| (graphs are spacelike iff < 1).
Scalar graph_slope(const DiscMesh& mesh, const Vec& f);

struct VertexFit {
  Vec normal;   // future unit timelike
  Mat frame;    // (n+2) x n orthonormal spacelike tangent frame
  Mat shape;    // n x n symmetric shape operator in the frame
};

/// Normal + shape operator at vertex i from positions X, via a cubic
/// least-squares height fit over the 2-ring in tangent coordinates.
VertexFit fit_vertex(const DiscMesh& mesh, const Mat& X, Index i);

/// trace(B) at vertex i; the discrete mean-curvature operator. The mean
/// curvature convention is the trace (sum of principal curvatures), so the
/// umbilical threshold is H/n per direction.
Scalar vertex_mean_curvature(const DiscMesh& mesh, const Mat& X, Index i);

struct SurfaceGeometry {
  Mat X;                  // V x (n+2)
  Mat normal;             // V x (n+2)
  std::vector<Mat> B;     // per-vertex shape operator (orthonormal frame)
  std::vector<Mat> frame;
  Mat lambda;             // V x n principal curvatures, descending
  Vec mean;               // trace(B)

  Scalar sup_lambda_max() const { return lambda.col(0).maxCoeff(); }
  Scalar inf_lambda_min() const { return lambda.rightCols(1).minCoeff(); }

  /// sup over vertices of max |eig(B - (H/n) Id)|.
  Scalar traceless_norm(Scalar H) const;
};

SurfaceGeometry geometry_from_positions(const DiscMesh& mesh, const Mat& X);

/// Gradient / Laplacian of a sampled scalar via the same stencil fits.
struct ScalarDerivatives {
  Mat grad;       // V x n in the per-vertex frame
  Vec grad_norm;  // |grad|
  Vec laplace;    // trace of the fitted Hessian
};

ScalarDerivatives fit_scalar_derivatives(const DiscMesh& mesh, const SurfaceGeometry& geo,
                                         const Vec& values);

/// Spacelike graph surface with its geometry cache.
struct CmcMesh {
  std::shared_ptr<const DiscMesh> mesh;
  Vec f;
  Scalar H_target = 0;
  SurfaceGeometry geo;

  int n() const { return mesh->n; }
  Scalar delta_H() const { return std::atan(H_target / mesh->n); }
};

CmcMesh make_graph_surface(std::shared_ptr<const DiscMesh> mesh, Vec f, Scalar H_target);

enum class ConvexSide { Future, Past };

struct ConvexityResult {
  bool convex = false;
  Scalar margin = 0;  // extremal eigenvalue of B - (H/n) Id over vertices
};

/// Future side: min eig(B - (H/n)Id) >= -tol; past side: max <= tol.
/// Boundary-ring vertices are excluded (their fits are one-sided).
ConvexityResult is_H_convex(const DiscMesh& mesh, const SurfaceGeometry& geo, Scalar H,
                            ConvexSide side, Scalar tol = 1e-8);

struct SectionalReport {
  Vec K_max;        // per-vertex max sectional curvature over 2-planes
  Vec bound;        // -1 - (H/n)^2 + |B0|^2 + 2(|H|/n)|B0| per vertex
  Scalar sup_K = 0;
  bool bound_ok = true;
};

/// n = 2: K = -1 - det B; n >= 3: max over principal 2-planes, checked
/// against the traceless-norm bound.
SectionalReport sectional_curvature(const DiscMesh& mesh, const SurfaceGeometry& geo, Scalar H);

/// Intrinsic curvature from angle defects (independent of the shape
/// operator); interior vertices only, NaN elsewhere.
Vec angle_defect_curvature(const DiscMesh& mesh, const Mat& X);

}  // namespace adslab
