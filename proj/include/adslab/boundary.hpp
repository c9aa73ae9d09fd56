#pragma once

#include <optional>
#include <vector>

#include "adslab/disc_mesh.hpp"
#include "adslab/quadric.hpp"
#include "adslab/types.hpp"

// Admissible boundaries at infinity: sampled 1-Lipschitz graphs over the
// ideal sphere, their extremal Lipschitz extensions, the invisible domain,
// and the time functions measured from its two boundary sheets.

namespace adslab {

/// Fourier generator f(theta) = a0 + sum a_k cos(k theta) + b_k sin(k theta).
struct FourierSeries {
  Vec cos_coeffs;  // index k >= 0
  Vec sin_coeffs;  // index k-1 for sin(k theta)

  Scalar eval(Scalar theta) const;
  Scalar deriv(Scalar theta) const;
  Scalar max_abs_deriv(int probe = 8192) const;
};

struct AdmissibleBoundary {
  int n = 2;    // slice dimension; the ideal sphere is S^{n-1}
  Mat dirs;     // N x n unit directions
  Vec values;   // fiber angles f(theta_i)
  Scalar margin = 1e-3;  // required strict antipodal margin
  std::optional<FourierSeries> generator;  // n = 2 only
  Vec angles;   // n = 2: sample angles, ascending in [0, 2pi)

  Index num_samples() const { return values.size(); }

  /// Null representative of boundary sample i: (theta; sin f; cos f).
  Vec null_rep(Index i) const;

  /// Generator value (Fourier if present, else cyclic linear interpolation).
  Scalar value_at(Scalar theta) const;  // n = 2 only
};

Vec null_rep_of(const Vec& dir, Scalar value);

/// Equispaced circle boundary from a Fourier generator (n = 2).
AdmissibleBoundary make_boundary_fourier(int num_samples, FourierSeries gen,
                                         Scalar margin = 1e-3);

/// Circle boundary from raw samples (n = 2); angles need not be uniform.
AdmissibleBoundary make_boundary_samples(Vec angles, Vec values, Scalar margin = 1e-3);

/// Constant boundary on a quasi-uniform grid of S^{n-1} (any n >= 2).
AdmissibleBoundary make_boundary_constant(int n, int num_samples, Scalar value,
                                          Scalar margin = 1e-3);

struct BoundaryCertificate {
  bool pass = false;
  Scalar lipschitz_constant = 0;  // measured over sampled pairs
  Scalar antipodal_margin = 0;    // pi - max |f(theta) - f(-theta)|
  std::vector<std::pair<int, int>> violations;
};

/// Checks the discrete 1-Lipschitz property (spherical metric) and the
/// strict no-antipodal-pair condition.
BoundaryCertificate validate(const AdmissibleBoundary& b);

/// Extremal 1-Lipschitz extensions sampled over a geodesic disc, with their
/// graphs embedded in the quadric. u_minus <= u_plus pointwise.
struct ExtremalExtensions {
  const DiscMesh* mesh = nullptr;
  Vec u_plus, u_minus;
  Mat graph_plus, graph_minus;  // V x (n+2) embedded graph points
  Vec t_plus, t_minus;          // fiber angles (same as u values)
};

ExtremalExtensions extremal_extensions(const AdmissibleBoundary& b, const DiscMesh& mesh);

/// Extension values at a single slice point given in Klein coordinates.
/// Works at ideal points too (|k| = 1).
std::pair<Scalar, Scalar> extension_bounds_at(const AdmissibleBoundary& b, const Vec& klein);

/// True iff q(p, z) < 0 for every sampled null representative z.
bool invisible_domain_contains(const AdmissibleBoundary& b, const AdSPoint& p);

struct CosmologicalTimes {
  Scalar tau_past = 0;
  Scalar tau_fut = 0;
  int witness_past = -1;  // extension-grid index realizing tau_past
  int witness_fut = -1;
};

/// Lorentzian distances from p to the sampled past / future sheets of the
/// invisible domain. Throws if p is outside the domain.
CosmologicalTimes cosmological_times(const AdmissibleBoundary& b, const AdSPoint& p,
                                     const ExtremalExtensions& ext);

/// Same, with warm-start slice coordinates for the sheet maximizers;
/// in-out seeds speed up tightly spaced queries (bisection along a fiber).
CosmologicalTimes cosmological_times_seeded(const AdmissibleBoundary& b, const AdSPoint& p,
                                            const ExtremalExtensions& ext, Vec* k_past_io,
                                            Vec* k_fut_io);

}  // namespace adslab
