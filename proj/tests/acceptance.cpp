// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "adslab/flow.hpp"
#include "adslab/hull.hpp"
#include "adslab/inequalities.hpp"
#include "adslab/pipeline.hpp"
#include "adslab/solver.hpp"
#include "adslab/teich.hpp"
#include "adslab/vdiag.hpp"
#include "support.hpp"

using namespace adslab;
using namespace adslab::testing;
namespace fs = std::filesystem;

namespace {

struct Harness {
  int failures = 0;

  void run(int id, const std::string& name, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = body();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (!detail.empty() && detail.rfind("FAIL", 0) == 0) ok = false;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %-28s (%6.1fs) %s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fail(const std::string& msg) { return "FAIL " + msg; }

AdmissibleBoundary sine_boundary(Scalar eps, int N = 384) {
  FourierSeries g;
  g.cos_coeffs = Vec::Zero(1);
  g.sin_coeffs = Vec::Constant(1, eps);
  return make_boundary_fourier(N, g, 1e-3);
}

AdmissibleBoundary mix_boundary(int N = 384) {
  FourierSeries g;
  g.cos_coeffs = Vec::Zero(3);
  g.cos_coeffs(2) = 0.08;
  g.sin_coeffs = Vec::Constant(1, 0.15);
  return make_boundary_fourier(N, g, 1e-3);
}

// second-harmonic graphs are genuinely non-planar (the first harmonic is a
// tilt of a totally geodesic slice, up to cubic corrections)
AdmissibleBoundary wave_boundary(Scalar eps, int N = 384) {
  FourierSeries g;
  g.cos_coeffs = Vec::Zero(1);
  g.sin_coeffs = Vec::Zero(2);
  g.sin_coeffs(1) = eps;
  return make_boundary_fourier(N, g, 1e-3);
}

Vec umbilical_ring(const DiscMesh& mesh, Scalar delta) {
  Vec g(static_cast<Index>(mesh.boundary_ring.size()));
  for (size_t r = 0; r < mesh.boundary_ring.size(); ++r)
    g(static_cast<Index>(r)) = umbilical_graph_height(delta, mesh.rho(mesh.boundary_ring[r]));
  return g;
}

Scalar ls_slope(const std::vector<Scalar>& h, const std::vector<Scalar>& e) {
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(h.size());
  for (int i = 0; i < n; ++i) {
    const Scalar x = std::log(h[i]), y = std::log(std::max(e[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// shared solved cases: (boundary index, H) -> surface at the report level
struct Workbench {
  std::vector<AdmissibleBoundary> boundaries;
  std::vector<std::string> names;
  DiscMesh ext_mesh;
  std::vector<ExtremalExtensions> exts;
  std::map<std::pair<int, int>, CmcMesh> solved;  // (boundary, 10*H)
  std::map<std::pair<int, int>, WidthReport> widths;

  const CmcMesh& surface(int bi, Scalar H) {
    const auto key = std::make_pair(bi, static_cast<int>(std::lround(10 * H)));
    auto it = solved.find(key);
    if (it == solved.end()) {
      auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.5, 14));
      it = solved.emplace(key, solve_cmc(boundaries[bi], H, mesh)).first;
    }
    return it->second;
  }

  const WidthReport& width_of(int bi, Scalar H) {
    const auto key = std::make_pair(bi, static_cast<int>(std::lround(10 * H)));
    auto it = widths.find(key);
    if (it == widths.end()) {
      HullQuery qr(boundaries[bi], exts[bi], H, 2, 5e-3);
      it = widths.emplace(key, width(qr, WidthGrid{200, 14})).first;
    }
    return it->second;
  }
};

}  // namespace

int main() {
  Harness h;
  Workbench wb;
  wb.boundaries = {sine_boundary(0.05), sine_boundary(0.1), sine_boundary(0.2), mix_boundary(),
                   wave_boundary(0.1),  wave_boundary(0.2)};
  wb.names = {"sin05", "sin10", "sin20", "mix", "wave10", "wave20"};
  wb.ext_mesh = make_polar_disc(3.0, 12);
  for (const auto& b : wb.boundaries) wb.exts.push_back(extremal_extensions(b, wb.ext_mesh));
  const std::vector<int> active = {2, 3, 4, 5};  // boundaries with real curvature signal

  h.run(1, "quadric/geodesic suite", [&]() -> std::string {
    Rng rng(2024);
    Scalar worst_quadric = 0, worst_invert = 0, worst_triangle = 0;
    std::uniform_real_distribution<Scalar> ut(-10.0, 10.0);
    std::uniform_real_distribution<Scalar> upos(0.05, 1.2);
    for (int rep = 0; rep < 10000; ++rep) {
      const AdSPoint p = random_point(rng, 2, 1.5);
      const auto cls = static_cast<CausalClass>(rep % 3);
      const AdSTangent v = random_tangent(rng, p, cls);
      const AdSPoint q = exp_map(p, v, cls == CausalClass::Lightlike ? upos(rng) : ut(rng));
      worst_quadric = std::max(worst_quadric, q.quadric_residual());

      const AdSTangent w = random_tangent(rng, p, CausalClass::Timelike);
      const Scalar t = upos(rng);
      const auto d = lorentz_distance(p, exp_map(p, w, t));
      if (!d) return fail("distance undefined on a timelike geodesic");
      worst_invert = std::max(worst_invert, std::abs(*d - t));

      const Scalar t1 = upos(rng), t2 = upos(rng);
      const AdSPoint r = exp_map(p, w, t1);
      const AdSPoint s = exp_map(r, random_tangent(rng, r, CausalClass::Timelike, true), t2);
      const auto dps = lorentz_distance(p, s);
      if (dps) worst_triangle = std::min(worst_triangle, *dps - (t1 + t2));

      // duality: the antipode and the orthogonal crossing of the dual pair
      if (rep % 100 == 0) {
        const auto dpi = lorentz_distance(p, AdSPoint(-p.v));
        if (!dpi || std::abs(*dpi - kPi) > 1e-10) return fail("antipodal distance");
        if (std::abs(lorentz_dot(exp_map(p, w, kPi / 2).v, p.v)) > 1e-10)
          return fail("dual crossing not orthogonal");
      }
    }
    if (worst_quadric > 1e-10) return fail("quadric residual " + format_scalar(worst_quadric));
    if (worst_invert > 1e-10) return fail("inversion error " + format_scalar(worst_invert));
    if (worst_triangle < -1e-9) return fail("triangle slack " + format_scalar(worst_triangle));
    return "residual " + format_scalar(worst_quadric) + ", inversion " +
           format_scalar(worst_invert) + ", slack " + format_scalar(worst_triangle);
  });

  h.run(2, "umbilical solver oracle", [&]() -> std::string {
    std::string note;
    for (Scalar H : {0.0, 1.0, 3.0}) {
      const Scalar delta = std::atan(H / 2);
      std::vector<Scalar> hs, ef, eb;
      for (int rings : {8, 16, 32}) {
        auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.0, rings));
        const CmcMesh c = solve_cmc(mesh, umbilical_ring(*mesh, delta), H);
        Scalar werr = 0, berr = 0;
        for (Index v = 0; v < mesh->num_vertices(); ++v) {
          werr = std::max(werr, std::abs(c.f(v) - umbilical_graph_height(delta, mesh->rho(v))));
          if (!mesh->on_boundary[v])
            berr = std::max(berr, (c.geo.B[v] - std::tan(delta) * Mat::Identity(2, 2))
                                      .cwiseAbs()
                                      .maxCoeff());
        }
        hs.push_back(mesh->h_max);
        ef.push_back(std::max(werr, 1e-14));
        eb.push_back(berr);
      }
      const Scalar order_f = ls_slope(hs, ef);
      const Scalar order_b = ls_slope(hs, eb);
      if (H > 0 && order_f < 1.8)
        return fail("H=" + format_scalar(H) + " value order " + format_scalar(order_f));
      if (order_b < 0.9 && eb.back() > 1e-6)
        return fail("H=" + format_scalar(H) + " shape order " + format_scalar(order_b));
      if (eb.back() > 3.0 * hs.back())
        return fail("H=" + format_scalar(H) + " shape error " + format_scalar(eb.back()));
      note += "H=" + format_scalar(H) + " f-order " + format_scalar(order_f) + " ";
    }
    return note;
  });

  h.run(3, "elliptic identity residual", [&]() -> std::string {
    std::string note;
    for (Scalar H : {0.0, 1.0}) {
      const Scalar delta = std::atan(H / 2);
      const UmbilicalHypersurface P = standard_umbilical(2, delta);
      std::vector<Scalar> hs, res;
      for (int rings : {8, 16, 32}) {
        auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.0, rings));
        const CmcMesh c = solve_cmc(wave_boundary(0.15), H, mesh);
        const VDiagnostics d = v_diagnostics(c, P);
        hs.push_back(mesh->h_max);
        res.push_back(d.max_interior_residual);
      }
      const Scalar order = ls_slope(hs, res);
      if (!(res[2] < res[1] && res[1] < res[0]))
        return fail("H=" + format_scalar(H) + " residual not decreasing");
      if (order < 1.0) return fail("H=" + format_scalar(H) + " order " + format_scalar(order));
      note += "H=" + format_scalar(H) + " order " + format_scalar(order) + " ";
    }
    return note;
  });

  h.run(4, "width bounds and profile", [&]() -> std::string {
    const Scalar tol = 0.02;
    const std::vector<Scalar> Hs{-2, -1, 0, 1, 2};
    for (int bi : active) {
      std::map<int, Scalar> omega;
      for (Scalar H : Hs) {
        const WidthReport& w = wb.width_of(static_cast<int>(bi), H);
        if (w.omega > kPi / 2 - std::abs(w.delta_H) + tol)
          return fail(wb.names[bi] + " H=" + format_scalar(H) + " upper bound");
        omega[static_cast<int>(std::lround(H))] = w.omega;
      }
      if (omega[0] + tol < omega[1] || omega[0] + tol < omega[-1])
        return fail(wb.names[bi] + " max not at H=0");
      if (omega[1] + tol < omega[2] || omega[-1] + tol < omega[-2])
        return fail(wb.names[bi] + " not monotone in |H|");
      (void)0;
      // sandwich for nested pairs with the time-symmetric offsets
      auto dH = [](Scalar H) { return std::abs(std::atan(H / 2)); };
      const std::pair<Scalar, Scalar> pairs[] = {{2, 1}, {1, 0}, {2, 0}, {-2, -1}, {-1, 0}, {-2, 0}};
      for (auto [H, K] : pairs) {
        const Scalar wH = omega[static_cast<int>(std::lround(H))];
        const Scalar wK = omega[static_cast<int>(std::lround(K))];
        if (wK + dH(K) - dH(H) > wH + tol)
          return fail(wb.names[bi] + " sandwich lower H=" + format_scalar(H));
        if (wH > wK + tol) return fail(wb.names[bi] + " sandwich upper H=" + format_scalar(H));
      }
    }
    return "4 boundaries x 5 curvatures";
  });

  h.run(5, "width vs principal curvature range", [&]() -> std::string {
    const Scalar tol = 0.02;
    Scalar worst = -1e300;
    for (int bi : active)
      for (Scalar H : {0.0, 1.0, 2.0}) {
        const CmcMesh& c = wb.surface(bi, H);
        const WidthReport& w = wb.width_of(bi, H);
        const WidthUpperBound wub = width_upper_bound(c, H);
        if (w.omega > wub.bound + tol)
          return fail(wb.names[bi] + " H=" + format_scalar(H) + ": omega " +
                      format_scalar(w.omega) + " > range " + format_scalar(wub.bound));
        worst = std::max(worst, w.omega - wub.bound);
      }
    return "max slack " + format_scalar(-worst);
  });

  h.run(6, "small-traceless tangent bounds", [&]() -> std::string {
    const Scalar tol = 0.02;
    for (int bi : active)
      for (Scalar H : {0.0, 1.0, 2.0}) {
        const CmcMesh& c = wb.surface(bi, H);
        const WidthReport& w = wb.width_of(bi, H);
        const InequalityChecks t = inequality_checks(c, w, wb.width_of(bi, 0.0), tol);
        if (!t.check_ii_applicable)
          return fail(wb.names[bi] + " H=" + format_scalar(H) +
                      ": |B0|^2 > 1 + (H/2)^2 on a converged surface");
        if (t.check_ii_lhs - t.check_ii_rhs > tol)
          return fail(wb.names[bi] + " H=" + format_scalar(H) + " tangent bound");
        if (t.check_v_applicable && t.check_v_lhs - t.check_v_rhs > tol)
          return fail(wb.names[bi] + " H=" + format_scalar(H) + " curvature form");
      }
    return "slack >= -0.02 on 12 cases";
  });

  h.run(7, "normal flow law and switch times", [&]() -> std::string {
    std::string note;
    for (int bi : {3, 4})
      for (Scalar H : {0.0, 1.0}) {
        const CmcMesh& c = wb.surface(bi, H);
        const Scalar hmax = c.mesh->h_max;
        const FlowWindow w = flow_window(c);
        Scalar dev = 0;
        for (Scalar t : {-0.5, -0.2, 0.2, 0.5})
          if (t > w.A_minus + 0.05 && t < w.A_plus - 0.05)
            dev = std::max(dev, curvature_evolution(c, t).max_deviation);
        if (dev > 5.0 * hmax)
          return fail("flow deviation " + format_scalar(dev) + " at h " + format_scalar(hmax));
        const Scalar t_past = convexity_time(c, H, ConvexSide::Past, 1e-4);
        const Scalar t_fut = convexity_time(c, H, ConvexSide::Future, 1e-4);
        const Scalar err = std::max(std::abs(t_past - (w.T_plus - c.delta_H())),
                                    std::abs(t_fut - (w.T_minus - c.delta_H())));
        if (err > 1e-3 + 2.0 * hmax) return fail("switch time error " + format_scalar(err));
        note = "dev " + format_scalar(dev) + ", switch err " + format_scalar(err);
      }
    return note;
  });

  h.run(8, "surface curvature sign and Gauss identity", [&]() -> std::string {
    Scalar supK = -1e300;
    for (int bi : active)
      for (Scalar H : {0.0, 1.0, 2.0}) {
        const CmcMesh& c = wb.surface(bi, H);
        const SectionalReport sec = sectional_curvature(*c.mesh, c.geo, H);
        supK = std::max(supK, sec.sup_K);
      }
    if (supK > 1e-6) return fail("positive sectional curvature " + format_scalar(supK));
    // intrinsic angle defects vs the extrinsic route; the defect estimator
    // is pointwise consistent on symmetric stencils, so probe at a
    // resolution where entire regular rows exist
    Scalar gauss_worst = 0, href = 0;
    int probed = 0;
    for (int bi : {4, 5})
      for (Scalar H : {0.0, 1.0}) {
        auto mesh = std::make_shared<DiscMesh>(make_polar_disc(2.5, 20));
        const CmcMesh c = solve_cmc(wb.boundaries[bi], H, mesh);
        const Vec Kd = angle_defect_curvature(*mesh, c.geo.X);
        href = std::max(href, mesh->h_max);
        for (Index v = 0; v < Kd.size(); ++v) {
          if (!mesh->core[v] || std::isnan(Kd(v))) continue;
          bool regular = mesh->nbrs[v].size() == 6;
          for (int w : mesh->nbrs[v]) regular &= mesh->nbrs[w].size() == 6;
          if (!regular) continue;
          const Scalar extrinsic = -1.0 - c.geo.lambda(v, 0) * c.geo.lambda(v, 1);
          gauss_worst = std::max(gauss_worst, std::abs(Kd(v) - extrinsic));
          ++probed;
        }
      }
    if (probed < 100) return fail("too few regular probes: " + std::to_string(probed));
    if (gauss_worst > 0.5 * href)
      return fail("Gauss identity gap " + format_scalar(gauss_worst) + " at h " +
                  format_scalar(href));
    return "sup K " + format_scalar(supK) + ", Gauss gap " + format_scalar(gauss_worst) + " (" +
           std::to_string(probed) + " probes)";
  });

  h.run(9, "circle-map layer", [&]() -> std::string {
    if (cross_ratio_norm(make_identity_circle_map(128)).norm > 1e-8)
      return fail("identity norm");
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
      Mobius M;
      std::uniform_real_distribution<Scalar> uni(-0.5, 0.5);
      M.m << 1.0 + uni(rng), uni(rng), uni(rng), 1.0 + uni(rng);
      if (M.m.determinant() < 0.2) continue;
      if (cross_ratio_norm(make_mobius_circle_map(M, 128)).norm > 1e-8)
        return fail("moebius norm");
    }
    if (std::abs(theta_of_H(0.0) - kPi / 2) > 1e-12) return fail("theta(0)");
    const Scalar tol = 0.02;
    // the first-harmonic family named by the criterion, plus the families
    // with genuine distortion
    for (int bi : {0, 1, 2, 3, 4, 5}) {
      const CircleMap phi = boundary_to_circle_map(wb.boundaries[bi]);
      const Scalar cr = cross_ratio_norm(phi).norm;
      const Scalar w0 = wb.width_of(bi, 0.0).omega;
      if (std::tan(w0) > std::sinh(cr / 2) + tol)
        return fail("cross-ratio width bound for " + wb.names[bi]);
      const ComplexDilatation cd = complex_dilatation(wb.surface(bi, 0.0));
      if (cd.report.identity_error > 1e-12) return fail("modulus identity");
    }
    return "identity/moebius <= 1e-8, family bound holds";
  });

  h.run(10, "trend reports (non-gating)", [&]() -> std::string {
    Scalar CL = 0, Q = 0;
    std::vector<LandslideReport> reports;
    for (int bi : active)
      for (Scalar H : {0.0, 1.0}) {
        const CmcMesh& c = wb.surface(bi, H);
        const WidthReport& wH = wb.width_of(bi, H);
        const WidthReport& wK = wb.width_of(bi, 0.0);
        const InequalityChecks t = inequality_checks(c, wH, wK);
        CL = std::max(CL, t.ratio_iii);
        ComplexDilatation cd = complex_dilatation(c);
        cd.report.cr_norm = cross_ratio_norm(boundary_to_circle_map(wb.boundaries[bi])).norm;
        cd.report.omega_H = wH.omega;
        cd.report.omega_0 = wK.omega;
        reports.push_back(cd.report);
        if (cd.report.cr_norm > 1e-9)
          Q = std::max(Q, std::log(cd.report.K_maxdil) / cd.report.cr_norm);
      }
    const TrendTable band = dilatation_trend_table(reports, kPi / 4, 3 * kPi / 4);
    const TrendTable wide = dilatation_trend_table(reports, kPi / 8, 7 * kPi / 8);
    PipelineConfig cfg = default_config();
    fs::create_directories("acceptance_out");
    std::ofstream out("acceptance_out/trend_fixtures.json");
    out << "{\n  \"config_hash\": \"" << config_hash(cfg) << "\",\n  \"C_L\": "
        << format_scalar(CL) << ",\n  \"Q_band_mid\": " << format_scalar(band.empirical_Q)
        << ",\n  \"Q_band_wide\": " << format_scalar(wide.empirical_Q)
        << ",\n  \"rows\": [\n";
    for (size_t r = 0; r < reports.size(); ++r)
      out << "    {\"theta\": " << format_scalar(reports[r].theta) << ", \"cr\": "
          << format_scalar(reports[r].cr_norm) << ", \"lnK\": "
          << format_scalar(std::log(reports[r].K_maxdil)) << ", \"omega_H\": "
          << format_scalar(reports[r].omega_H) << "}" << (r + 1 < reports.size() ? ",\n" : "\n");
    out << "  ]\n}\n";
    if (wide.empirical_Q + 1e-12 < band.empirical_Q)
      return fail("wider band produced a smaller empirical constant");
    return "C_L ~ " + format_scalar(CL) + ", Q ~ " + format_scalar(band.empirical_Q) +
           " (archived)";
  });

  h.run(11, "equidistant-duality discrepancy report", [&]() -> std::string {
    const HkDuality hk = hk_duality(0.0);
    fs::create_directories("acceptance_out");
    write_csv("acceptance_out/hk_duality.csv",
              {"H", "d_plus", "d_minus", "K_plus_printed", "K_minus_printed", "K_plus_flow",
               "K_minus_flow"},
              {{format_scalar(0.0), format_scalar(hk.d_plus), format_scalar(hk.d_minus),
                format_scalar(hk.K_plus_printed), format_scalar(hk.K_minus_printed),
                format_scalar(hk.K_plus_flow), format_scalar(hk.K_minus_flow)}});
    if (std::abs(hk.K_plus_printed + 5.0) > 1e-12) return fail("printed value changed");
    if (std::abs(hk.K_plus_flow + 2.0) > 1e-12) return fail("flow value changed");
    // mesh oracle: the flowed leaf has nearly constant curvature
    const CmcMesh& c = wb.surface(4, 0.0);
    const SurfaceGeometry g = flow_geometry(c, hk.d_plus, 1e-3);
    Scalar lo = 1e300, hi = -1e300;
    for (Index v = 0; v < g.lambda.rows(); ++v) {
      if (c.mesh->on_boundary[v]) continue;
      const Scalar K = -1.0 - g.lambda(v, 0) * g.lambda(v, 1);
      lo = std::min(lo, K);
      hi = std::max(hi, K);
    }
    if (hi - lo > 6.0 * c.mesh->h_max) return fail("leaf curvature not constant");
    if (std::abs(0.5 * (hi + lo) + 2.0) > 0.1) return fail("leaf curvature not near -2");
    return "printed -5 vs flow -2, leaf K in [" + format_scalar(lo) + ", " + format_scalar(hi) +
           "]";
  });

  h.run(12, "deterministic report bundles", [&]() -> std::string {
    PipelineConfig cfg = default_config();
    cfg.N_theta = 128;
    cfg.ext_rings = 6;
    cfg.solver_rings = 6;
    cfg.grid_Nx = 120;
    cfg.grid_Nt = 10;
    cfg.width_H = {-1, 0, 1};
    cfg.solve_H = {0.0, 1.0};
    cfg.boundaries.resize(2);
    cfg.threads = 2;
    const VerifySummary s1 = run_verify(cfg, "acceptance_out/run1");
    const VerifySummary s2 = run_verify(cfg, "acceptance_out/run2");
    if (!s1.hard_pass) return fail("verify bundle failed its own hard checks");
    for (const char* name : {"widths.csv", "solver_report.csv", "landslide_report.csv"}) {
      std::ifstream a(fs::path("acceptance_out/run1") / name, std::ios::binary);
      std::ifstream b(fs::path("acceptance_out/run2") / name, std::ios::binary);
      std::string sa((std::istreambuf_iterator<char>(a)), {});
      std::string sb((std::istreambuf_iterator<char>(b)), {});
      if (sa.empty() || sa != sb) return fail(std::string("bundle differs: ") + name);
    }
    return "byte-identical CSV bundles";
  });

  if (h.failures) {
    std::printf("%d criterion(s) failed\n", h.failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
