#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "adslab/boundary.hpp"
#include "adslab/surface.hpp"

// n = 2 layer: the 2x2 matrix model of the quadric, lightlike rulings and
// the induced circle maps, cross-ratio norms, curvature/dilatation
// invariants of the induced disc maps, and the Gauss map.

namespace adslab {

using Complex = std::complex<Scalar>;

/// Linear identification of R^{2,2} with 2x2 matrices, q(x,x) = -det M(x).
Mat2 ads_matrix(const Vec& x);

/// Dominant rank-1 factor u v^T of a (numerically) null representative.
/// defect = sigma_2 / sigma_1 must stay below tol.
struct Rank1Factor {
  Vec2 u, v;
  Scalar defect = 0;
};
Rank1Factor rank1_factor(const Mat2& M, Scalar tol = 1e-9);

/// Cross-ratio of four projective points given homogeneously; safe at
/// infinity. Throws on coincident points.
Scalar cross_ratio(const Vec2& z1, const Vec2& z2, const Vec2& z3, const Vec2& z4);

/// Cross-ratio of four circle points given as angles (angle halving chart).
Scalar cross_ratio_angles(Scalar a1, Scalar a2, Scalar a3, Scalar a4);

inline Vec2 circle_point(Scalar angle) {
  return Vec2(std::cos(angle / 2), std::sin(angle / 2));
}

/// Real Moebius transformation acting on the circle (projective line).
struct Mobius {
  Mat2 m = Mat2::Identity();

  Scalar apply_angle(Scalar a) const {
    Vec2 h = m * circle_point(a);
    Scalar out = 2.0 * std::atan2(h(1), h(0));
    out = std::fmod(out, 2.0 * kPi);
    return out < 0 ? out + 2.0 * kPi : out;
  }
  Complex apply_halfplane(Complex z) const {
    return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1));
  }
  Mobius inverse() const {
    Mat2 inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return Mobius{inv};
  }
};

/// Moebius sending the source triple to the target triple (all as angles).
Mobius mobius_from_triples(const std::array<Scalar, 3>& src, const std::array<Scalar, 3>& dst);

/// Sampled orientation-preserving circle homeomorphism. Angles live on
/// [0, 2pi); images are stored lifted (strictly increasing, total 2pi).
struct CircleMap {
  Vec src;         // sorted ascending
  Vec img_lifted;  // strictly increasing, img_lifted(i) lifts img(i)
  std::function<Scalar(Scalar)> exact;  // optional analytic evaluator

  Index size() const { return src.size(); }

  /// Image angle in [0, 2pi); cyclic linear interpolation unless an exact
  /// evaluator is attached.
  Scalar eval(Scalar angle) const;

  CircleMap inverse() const;

  Scalar min_spacing() const;
};

CircleMap make_circle_map(Vec src_angles, Vec img_angles);
CircleMap make_identity_circle_map(int samples);
CircleMap make_mobius_circle_map(const Mobius& M, int samples);

struct CrNormOptions {
  int rotations = 32;
  int widths = 8;
  int perpendiculars = 64;
};

struct CrNormResult {
  Scalar norm = 0;
  Scalar worst_quadruple[4] = {0, 0, 0, 0};
  bool resolution_warning = false;
};

/// sup |ln |cr of the image|| over a deterministic family of quadruples
/// with cross-ratio -1 (orthogonal chord pairs). A lower bound of the true
/// norm, non-decreasing in sampler density.
CrNormResult cross_ratio_norm(const CircleMap& map, const CrNormOptions& opts = {});

/// Left/right ruling projections of an acausal boundary: each null sample
/// factors as u v^T, and the map [u] -> [v] is the induced circle
/// homeomorphism. Optionally pinned by a Moebius fixing three samples.
CircleMap boundary_to_circle_map(const AdmissibleBoundary& b, bool normalize = false,
                                 Scalar rank_tol = 1e-9);

/// Landslide angle of the disc map induced by an H-surface.
Scalar theta_of_H(Scalar H);

/// Printed closed forms for the equidistant constant-curvature duality,
/// next to an independent evaluation through the flow law; the two disagree
/// and both are reported.
struct HkDuality {
  Scalar d_plus = 0, d_minus = 0;
  Scalar K_plus_printed = 0, K_minus_printed = 0;
  Scalar K_plus_flow = 0, K_minus_flow = 0;
};
HkDuality hk_duality(Scalar H);

/// Inverse direction closed forms.
Scalar hk_distance_of_K(Scalar K);
Scalar hk_H_of_K(Scalar K);

/// Flow-law curvature of the equidistant leaf at distance t from a surface
/// with det B = D and trace 2 * (H/2).
Scalar equidistant_curvature(Scalar H, Scalar D, Scalar t);

struct LandslideReport {
  Scalar H = 0;
  Scalar theta = 0;
  Scalar mu_norm = 0;    // sup |complex dilatation|
  Scalar K_maxdil = 1;   // (1 + mu)/(1 - mu)
  Scalar K_dil1 = 1;     // (1 + mu^2)/(1 - mu^2)
  Scalar cr_norm = 0;    // filled by the pipeline
  Scalar omega_0 = 0;
  Scalar omega_H = 0;
  Scalar identity_error = 0;  // max | |mu|^2 - a^2/(1+(H/2)^2) |
};

struct ComplexDilatation {
  Eigen::VectorXcd mu;  // per vertex
  LandslideReport report;
};

/// Complex dilatation of the induced disc map from the traceless shape
/// operator eigenvalue; throws if sup |mu| >= 1 (impossible for a converged
/// surface and reported as a solver failure).
ComplexDilatation complex_dilatation(const CmcMesh& c);

struct GaussMapResult {
  Eigen::VectorXcd left, right;  // upper half-plane points per vertex
  std::vector<char> degenerate;
};

/// Pair of hyperbolic-plane points attached to the timelike normal geodesic
/// of each vertex, extracted from fixed points in the matrix model.
GaussMapResult gauss_map(const CmcMesh& c);
GaussMapResult gauss_map_positions(const Mat& X, const Mat& N);

struct TrendRow {
  Scalar theta = 0;
  Scalar cr_norm = 0;
  Scalar lnK = 0;
  Scalar ratio = 0;  // lnK / cr_norm
};

struct TrendTable {
  Scalar band_lo = 0, band_hi = 0;
  std::vector<TrendRow> rows;
  Scalar empirical_Q = 0;
  bool bounded = true;
};

/// ln(K)/cr tabulation over a theta band; reports the empirical constant.
TrendTable dilatation_trend_table(const std::vector<LandslideReport>& reports, Scalar band_lo,
                           Scalar band_hi);

}  // namespace adslab
