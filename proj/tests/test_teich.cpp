#include "adslab/teich.hpp"

#include "adslab/flow.hpp"
#include "adslab/hull.hpp"
#include "adslab/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adslab;
using namespace adslab::testing;

namespace {

AdmissibleBoundary sine_boundary(Scalar eps, int N = 512) {
  FourierSeries g;
  g.cos_coeffs = Vec::Zero(1);
  g.sin_coeffs = Vec::Constant(1, eps);
  return make_boundary_fourier(N, g, 1e-3);
}

CmcMesh solved_sine(Scalar eps, Scalar H, int rings = 8) {
  auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.5, rings));
  return solve_cmc(sine_boundary(eps), H, mesh);
}

Scalar dhyp(Complex a, Complex b) {
  return std::acosh(1.0 + std::norm(a - b) / (2.0 * a.imag() * b.imag()));
}

Mobius random_mobius(Rng& rng) {
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  Mobius M;
  do {
    M.m << 1.0 + 0.3 * uni(rng), 0.4 * uni(rng), 0.4 * uni(rng), 1.0 + 0.3 * uni(rng);
  } while (M.m.determinant() < 0.1);
  return M;
}

}  // namespace

TEST_CASE("matrix model determinant identity") {
  Rng rng(5);
  std::uniform_real_distribution<Scalar> uni(-2, 2);
  for (int i = 0; i < 4; ++i) {
    Vec e = Vec::Zero(4);
    e(i) = 1.0;
    CHECK(ads_matrix(e).determinant() == doctest::Approx(-lorentz_norm2(e)));
  }
  for (int rep = 0; rep < 200; ++rep) {
    Vec x(4);
    for (int i = 0; i < 4; ++i) x(i) = uni(rng);
    CHECK(ads_matrix(x).determinant() == doctest::Approx(-lorentz_norm2(x)).epsilon(1e-12));
  }
}

TEST_CASE("cross ratio evaluation") {
  SUBCASE("frozen affine quadruple") {
    CHECK(cross_ratio(Vec2(0, 1), Vec2(1, 1), Vec2(1, 0), Vec2(-1, 1)) == doctest::Approx(-1.0));
  }
  SUBCASE("orthogonal diameters on the circle") {
    CHECK(cross_ratio_angles(0, kPi / 2, kPi, 3 * kPi / 2) == doctest::Approx(-1.0));
  }
  SUBCASE("projective invariance under random maps") {
    Rng rng(17);
    std::uniform_real_distribution<Scalar> uni(0, 2 * kPi);
    for (int rep = 0; rep < 1000; ++rep) {
      const Mobius M = random_mobius(rng);
      Scalar a[4];
      for (auto& v : a) v = uni(rng);
      if (std::abs(std::sin((a[0] - a[1]) / 2)) < 1e-3 ||
          std::abs(std::sin((a[2] - a[3]) / 2)) < 1e-3)
        continue;
      const Scalar c0 = cross_ratio_angles(a[0], a[1], a[2], a[3]);
      const Scalar c1 = cross_ratio_angles(M.apply_angle(a[0]), M.apply_angle(a[1]),
                                           M.apply_angle(a[2]), M.apply_angle(a[3]));
      CHECK(c1 == doctest::Approx(c0).epsilon(1e-10));
    }
  }
  SUBCASE("coincident points throw") {
    CHECK_THROWS_AS(cross_ratio(Vec2(1, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("cross-ratio norm") {
  SUBCASE("identity and Moebius maps have zero norm") {
    CHECK(cross_ratio_norm(make_identity_circle_map(64)).norm <= 1e-10);
    Rng rng(23);
    for (int rep = 0; rep < 5; ++rep) {
      const Mobius M = random_mobius(rng);
      CHECK(cross_ratio_norm(make_mobius_circle_map(M, 64)).norm <= 1e-10);
    }
  }

  SUBCASE("the sampler generates exact harmonic quadruples") {
    CrNormOptions opts;
    opts.rotations = 4;
    opts.widths = 3;
    opts.perpendiculars = 5;
    for (int ir = 0; ir < opts.rotations; ++ir)
      for (int iw = 0; iw < opts.widths; ++iw)
        for (int ip = 0; ip < opts.perpendiculars; ++ip) {
          const Scalar theta0 = 2.0 * kPi * ir / opts.rotations;
          const Scalar c = 0.2 + (kPi / 2 - 0.2) * (iw + 0.5) / opts.widths;
          const Scalar u = -c + 2.0 * c * (ip + 0.5) / opts.perpendiculars;
          const Scalar t = std::atan2(std::cos(u) - std::cos(c), std::sin(u));
          CHECK(cross_ratio_angles(theta0 - c, theta0 + u, theta0 + c, theta0 + u + 2 * t) ==
                doctest::Approx(-1.0).epsilon(1e-12));
        }
  }

  SUBCASE("norm grows along the sine family") {
    Scalar prev = -1;
    for (Scalar eps : {0.05, 0.1, 0.2}) {
      const CircleMap phi = boundary_to_circle_map(sine_boundary(eps));
      const Scalar nrm = cross_ratio_norm(phi).norm;
      CHECK(nrm > prev);
      prev = nrm;
    }
  }

  SUBCASE("inverse map has the same norm at sampler tolerance") {
    const CircleMap phi = boundary_to_circle_map(sine_boundary(0.2));
    const Scalar a = cross_ratio_norm(phi).norm;
    const Scalar b = cross_ratio_norm(phi.inverse()).norm;
    CHECK(a == doctest::Approx(b).epsilon(0.08));
  }
}

TEST_CASE("boundary to circle map") {
  SUBCASE("flat boundary normalizes to the identity") {
    const CircleMap phi = boundary_to_circle_map(sine_boundary(0.0), true);
    for (Index i = 0; i < phi.size(); i += 7) {
      Scalar d = std::abs(phi.eval(phi.src(i)) - phi.src(i));
      d = std::min(d, 2 * kPi - d);
      CHECK(d < 1e-9);
    }
  }

  SUBCASE("time translation acts as a rotation") {
    const Scalar c = 0.37;
    FourierSeries g;
    g.cos_coeffs = Vec::Constant(1, c);
    const AdmissibleBoundary b = make_boundary_fourier(256, g, 1e-3);
    const CircleMap phi = boundary_to_circle_map(b);
    // constant angular displacement
    Scalar lo = 1e300, hi = -1e300;
    for (Index i = 0; i < phi.size(); ++i) {
      Scalar d = phi.img_lifted(i) - phi.src(i);
      d = std::fmod(d, 2 * kPi);
      if (d < 0) d += 2 * kPi;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(hi - lo < 1e-9);
    CHECK(cross_ratio_norm(phi).norm < 1e-9);
  }

  SUBCASE("sine family gives monotone degree-one maps") {
    const CircleMap phi = boundary_to_circle_map(sine_boundary(0.2));
    for (Index i = 0; i + 1 < phi.size(); ++i) CHECK(phi.img_lifted(i + 1) > phi.img_lifted(i));
  }

  SUBCASE("norm is invariant under form isometries of the boundary") {
    Rng rng(31);
    const AdmissibleBoundary b = sine_boundary(0.15, 256);
    const Scalar base_norm = cross_ratio_norm(boundary_to_circle_map(b)).norm;
    for (int rep = 0; rep < 3; ++rep) {
      const Mat A = random_form_isometry(rng, 2, 8);
      // transform the null samples and rebuild the boundary data
      Vec ang(b.num_samples()), val(b.num_samples());
      bool ok = true;
      for (Index i = 0; i < b.num_samples(); ++i) {
        Vec z = A * b.null_rep(i);
        const Scalar sp = z.head(2).norm();
        if (sp < 1e-9) {
          ok = false;
          break;
        }
        ang(i) = std::atan2(z(1) / sp, z(0) / sp);
        val(i) = std::atan2(z(2) / sp, z(3) / sp);
      }
      if (!ok) continue;
      const AdmissibleBoundary tb = make_boundary_samples(ang, val, 1e-4);
      const Scalar tnorm = cross_ratio_norm(boundary_to_circle_map(tb)).norm;
      CHECK(tnorm == doctest::Approx(base_norm).epsilon(0.15));
    }
  }
}

TEST_CASE("landslide angle of the mean curvature") {
  CHECK(theta_of_H(0.0) == doctest::Approx(kPi / 2).epsilon(1e-13));
  CHECK(theta_of_H(1000.0) < 0.01);
  CHECK(theta_of_H(-1.0) == doctest::Approx(kPi - theta_of_H(1.0)).epsilon(1e-13));
  // strictly decreasing
  Scalar prev = kPi;
  for (Scalar H : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const Scalar th = theta_of_H(H);
    CHECK(th < prev);
    prev = th;
  }
}

TEST_CASE("equidistant duality: printed formulas vs the flow route") {
  const HkDuality hk = hk_duality(0.0);
  CHECK(hk.K_plus_printed == doctest::Approx(-5.0));
  CHECK(hk.K_minus_printed == doctest::Approx(-5.0));
  CHECK(hk.K_plus_flow == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(hk.K_minus_flow == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(hk.d_plus == doctest::Approx(kPi / 4));

  // the inverse-direction closed forms
  CHECK(hk_distance_of_K(-2.0) == doctest::Approx(std::atan(1.0)));
  CHECK(hk_H_of_K(-2.0) == doctest::Approx(4.0));

  // at the special distances the leaf curvature forgets the traceless part
  for (Scalar H : {0.0, 1.0, 2.5}) {
    const HkDuality h = hk_duality(H);
    for (Scalar D : {H * H / 4, H * H / 4 - 0.5, H * H / 4 - 0.9}) {
      CHECK(equidistant_curvature(H, D, h.d_plus) == doctest::Approx(h.K_plus_flow).epsilon(1e-11));
      CHECK(equidistant_curvature(H, D, h.d_minus) ==
            doctest::Approx(h.K_minus_flow).epsilon(1e-11));
    }
  }
}

TEST_CASE("complex dilatation") {
  SUBCASE("umbilical surfaces are conformal") {
    const Scalar H = 1.0;
    const Scalar delta = std::atan(H / 2);
    auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.0, 8));
    Vec f(mesh->num_vertices());
    for (Index v = 0; v < mesh->num_vertices(); ++v)
      f(v) = umbilical_graph_height(delta, mesh->rho(v));
    const ComplexDilatation cd = complex_dilatation(make_graph_surface(mesh, f, H));
    CHECK(cd.report.mu_norm < 5e-3);
    CHECK(cd.report.K_maxdil == doctest::Approx(1.0).epsilon(2e-2));
  }

  SUBCASE("maximal case: purely imaginary dilatation, exact modulus identity") {
    const CmcMesh c = solved_sine(0.2, 0.0);
    const ComplexDilatation cd = complex_dilatation(c);
    CHECK(cd.report.identity_error < 1e-12);
    CHECK(cd.report.mu_norm > 1e-4);
    CHECK(cd.report.mu_norm < 1.0);
    for (Index v = 0; v < cd.mu.size(); v += 13) CHECK(std::abs(cd.mu(v).real()) < 1e-12);
    CHECK(cd.report.theta == doctest::Approx(kPi / 2));
  }
}

TEST_CASE("gauss map") {
  SUBCASE("totally geodesic slice maps to the diagonal") {
    auto mesh = std::make_shared<DiscMesh>(make_polar_disc(1.5, 6));
    const CmcMesh flat = make_graph_surface(mesh, Vec::Zero(mesh->num_vertices()), 0.0);
    const GaussMapResult gm = gauss_map(flat);
    for (Index v = 0; v < gm.left.size(); ++v) {
      if (gm.degenerate[v]) continue;
      CHECK(dhyp(gm.left(v), gm.right(v)) < 1e-7);
      CHECK(gm.right(v).imag() > 0);
    }
  }

  SUBCASE("invariance along the normal flow") {
    const CmcMesh c = solved_sine(0.2, 0.0, 8);
    const GaussMapResult g0 = gauss_map(c);
    const Scalar t = 0.2;
    const SurfaceGeometry flowed = flow_geometry(c, t);
    const GaussMapResult g1 = gauss_map_positions(flowed.X, flowed.normal);
    Scalar worst = 0;
    for (Index v = 0; v < g0.left.size(); ++v) {
      if (!c.mesh->core[v] || g0.degenerate[v] || g1.degenerate[v]) continue;
      worst = std::max(worst, dhyp(g0.left(v), g1.left(v)));
      worst = std::max(worst, dhyp(g0.right(v), g1.right(v)));
    }
    CHECK(worst < 0.05);
  }

  SUBCASE("left projection is injective on a convex leaf") {
    const CmcMesh c = solved_sine(0.2, 0.0, 6);
    const FlowWindow w = flow_window(c);
    const Scalar t = w.T_plus + 0.15;  // past-convex leaf
    const SurfaceGeometry flowed = flow_geometry(c, t);
    const GaussMapResult gm = gauss_map_positions(flowed.X, flowed.normal);
    Scalar min_gap = 1e300;
    for (Index a = 0; a < gm.left.size(); ++a) {
      if (!c.mesh->core[a] || gm.degenerate[a]) continue;
      for (Index b = a + 1; b < gm.left.size(); ++b) {
        if (!c.mesh->core[b] || gm.degenerate[b]) continue;
        min_gap = std::min(min_gap, dhyp(gm.left(a), gm.left(b)));
      }
    }
    CHECK(min_gap > 1e-7);
  }
}

TEST_CASE("trend table over a theta band") {
  std::vector<LandslideReport> reports;
  for (Scalar eps : {0.05, 0.1, 0.2}) {
    const CmcMesh c = solved_sine(eps, 0.0, 6);
    ComplexDilatation cd = complex_dilatation(c);
    cd.report.cr_norm = cross_ratio_norm(boundary_to_circle_map(sine_boundary(eps))).norm;
    reports.push_back(cd.report);
  }
  const TrendTable t = dilatation_trend_table(reports, kPi / 4, 3 * kPi / 4);
  CHECK(t.rows.size() == 3);
  CHECK(t.empirical_Q > 0);
  CHECK(t.empirical_Q < 100.0);
  CHECK_THROWS_AS(dilatation_trend_table(reports, 0.01, 0.02), std::invalid_argument);
}

TEST_CASE("rank-1 factorization rejects non-null representatives") {
  Vec spacelike(4);
  spacelike << 1.0, 0.4, 0.1, 0.2;
  CHECK_THROWS(rank1_factor(ads_matrix(spacelike)));
}

TEST_CASE("cross-ratio norm grows with sampler density") {
  FourierSeries g;
  g.cos_coeffs = Vec::Zero(1);
  g.sin_coeffs = Vec::Zero(2);
  g.sin_coeffs(1) = 0.15;
  const CircleMap phi = boundary_to_circle_map(make_boundary_fourier(384, g, 1e-3));
  CrNormOptions coarse{8, 4, 16}, fine{32, 8, 64};
  const Scalar nc = cross_ratio_norm(phi, coarse).norm;
  const Scalar nf = cross_ratio_norm(phi, fine).norm;
  CHECK(nf >= nc - 1e-12);
}
