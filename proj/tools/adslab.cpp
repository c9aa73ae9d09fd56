// Command-line front end: boundary generation/validation, hull widths,
// CMC solving, normal-flow tables, circle-map reports, and the full
// verification pipeline.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "adslab/pipeline.hpp"
#include "adslab/vdiag.hpp"

namespace fs = std::filesystem;
using namespace adslab;

namespace {

FourierSeries parse_fourier(const std::string& spec) {
  FourierSeries g;
  std::vector<Scalar> a(1, 0.0), b;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || item.size() < 3)
      throw CLI::ValidationError("--fourier", "expected terms like a1=0.2,b2=0.1");
    const char kind = item[0];
    const int k = std::stoi(item.substr(1, eq - 1));
    const Scalar val = std::stod(item.substr(eq + 1));
    if (kind == 'a') {
      if (static_cast<int>(a.size()) <= k) a.resize(k + 1, 0.0);
      a[k] = val;
    } else if (kind == 'b') {
      if (k < 1) throw CLI::ValidationError("--fourier", "sine terms start at b1");
      if (static_cast<int>(b.size()) < k) b.resize(k, 0.0);
      b[k - 1] = val;
    } else {
      throw CLI::ValidationError("--fourier", "terms must start with 'a' or 'b'");
    }
  }
  g.cos_coeffs = Eigen::Map<Vec>(a.data(), static_cast<Index>(a.size()));
  g.sin_coeffs = Eigen::Map<Vec>(b.data(), static_cast<Index>(b.size()));
  return g;
}

void apply_common(PipelineConfig& cfg, const std::string& grid, int mesh_depth, Scalar tol,
                  unsigned long seed) {
  // tol < 0 means "not given"; an explicit 0 is a valid (failing) request
  if (!grid.empty()) {
    int nt = cfg.N_theta, nx = cfg.grid_Nx, ntt = cfg.grid_Nt;
    if (std::sscanf(grid.c_str(), "%d,%d,%d", &nt, &nx, &ntt) != 3)
      throw CLI::ValidationError("--grid", "expected N_theta,N_x,N_t");
    cfg.N_theta = nt;
    cfg.grid_Nx = nx;
    cfg.grid_Nt = ntt;
  }
  if (mesh_depth >= 0) {
    cfg.solver_rings = 8 << mesh_depth;
    cfg.ext_rings = std::max(cfg.ext_rings, 8 << std::min(mesh_depth, 1));
  }
  if (tol >= 0) cfg.hard_tol = tol;
  if (seed) cfg.seed = seed;
}

int cmd_verify(const PipelineConfig& cfg, const fs::path& out) {
  VerifySummary sum = run_verify(cfg, out);
  for (const auto& f : sum.files_written) std::cout << "wrote " << f << "\n";
  if (!sum.hard_pass) {
    std::cout << "FAIL\n";
    for (const auto& f : sum.failures) std::cout << "  " << f << "\n";
    return 1;
  }
  std::cout << "PASS (" << sum.cases.size() << " cases)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for CMC hypersurfaces in the (n,1) quadric"};
  app.require_subcommand(1);

  std::string config_file, out_dir = "out", grid, only, fourier_spec = "a0=0";
  int mesh_depth = -1, n_dim = 2, samples = 512;
  Scalar tol = -1.0, H = 0, K = 0, margin = 1e-3, t_request = std::nan("");
  unsigned long seed = 0;
  bool clamp = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "pipeline config JSON");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--grid", grid, "N_theta,N_x,N_t");
    cmd->add_option("--mesh-depth", mesh_depth, "solver mesh refinement depth");
    cmd->add_option("--tol", tol, "hard-check tolerance");
    cmd->add_option("--seed", seed, "rng seed (reports are deterministic per seed)");
  };

  auto* cb = app.add_subcommand("boundary", "generate or validate boundary files");
  auto* cb_gen = cb->add_subcommand("gen", "write a boundary JSON from a Fourier generator");
  cb_gen->add_option("--fourier", fourier_spec, "terms, e.g. a1=0.2,b2=0.1")->required();
  cb_gen->add_option("--n", n_dim, "slice dimension (2)");
  cb_gen->add_option("--samples", samples, "number of circle samples");
  cb_gen->add_option("--margin", margin, "antipodal margin");
  cb_gen->add_flag("--clamp", clamp, "scale the generator into the Lipschitz bound");
  std::string gen_out = "boundary.json";
  cb_gen->add_option("--out", gen_out, "output file");
  std::string validate_file;
  auto* cb_val = cb->add_subcommand("validate", "print the admissibility certificate");
  cb_val->add_option("file", validate_file, "boundary JSON")->required();

  auto* ch = app.add_subcommand("hull", "width of the H-shifted hull");
  add_common(ch);
  std::vector<Scalar> hull_H;
  ch->add_option("--H", hull_H, "H values (default config grid)");

  auto* cs = app.add_subcommand("solve", "solve the CMC graph problem and dump the surface");
  add_common(cs);
  cs->add_option("--H", H, "mean curvature")->required();
  std::string solve_boundary;
  cs->add_option("--boundary", solve_boundary, "boundary JSON (default: config families)");

  auto* cf = app.add_subcommand("flow", "normal-flow table for a solved case");
  add_common(cf);
  cf->add_option("--H", H, "mean curvature")->required();
  cf->add_option("--t", t_request, "single flow time to evaluate");

  auto* ct = app.add_subcommand("teich", "circle-map and dilatation report");
  add_common(ct);

  auto* cv = app.add_subcommand("verify", "full pipeline with hard-check exit code");
  add_common(cv);
  cv->add_option("--K", K, "reference K for the width ratio");
  cv->add_option("--only", only, "stage filter: hull|solve|flow|teich");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cb_gen->parsed()) {
      FourierSeries g = parse_fourier(fourier_spec);
      const Scalar d = g.max_abs_deriv();
      if (d >= 1.0 - margin) {
        if (!clamp) {
          std::cerr << "rejected: generator slope " << format_scalar(d)
                    << " >= 1 - margin; pass --clamp to rescale\n";
          return 1;
        }
        const Scalar s = (1.0 - margin) / d * 0.999;
        g.cos_coeffs.tail(g.cos_coeffs.size() - 1) *= s;
        g.sin_coeffs *= s;
      }
      AdmissibleBoundary b = make_boundary_fourier(samples, g, margin);
      const BoundaryCertificate cert = validate(b);
      if (!cert.pass) {
        std::cerr << "rejected: lipschitz " << format_scalar(cert.lipschitz_constant)
                  << ", antipodal margin " << format_scalar(cert.antipodal_margin) << "\n";
        return 1;
      }
      save_boundary_json(gen_out, b);
      std::cout << "wrote " << gen_out << " (lipschitz " << format_scalar(cert.lipschitz_constant)
                << ", margin " << format_scalar(cert.antipodal_margin) << ")\n";
      return 0;
    }
    if (cb_val->parsed()) {
      AdmissibleBoundary b = load_boundary_json(validate_file);
      const BoundaryCertificate cert = validate(b);
      std::cout << (cert.pass ? "pass" : "fail") << " lipschitz "
                << format_scalar(cert.lipschitz_constant) << " antipodal_margin "
                << format_scalar(cert.antipodal_margin) << " violations "
                << cert.violations.size() << "\n";
      return cert.pass ? 0 : 1;
    }

    PipelineConfig cfg =
        config_file.empty() ? default_config() : config_from_json_file(config_file);
    apply_common(cfg, grid, mesh_depth, tol, seed);
    fs::create_directories(out_dir);

    if (ch->parsed()) {
      if (!hull_H.empty()) cfg.width_H = hull_H;
      std::vector<CsvRow> rows;
      for (const auto& spec : cfg.boundaries) run_hull_stage(cfg, spec, &rows);
      const fs::path p = fs::path(out_dir) / "widths.csv";
      write_csv(p, {"case_id", "H", "delta_H", "omega", "upper_bound", "chain_len", "grid_Nx",
                    "grid_Nt"},
                rows);
      std::cout << "wrote " << p.string() << "\n";
      return 0;
    }

    if (cs->parsed()) {
      AdmissibleBoundary b =
          solve_boundary.empty()
              ? make_boundary_fourier(cfg.N_theta, cfg.boundaries.at(0).gen,
                                      cfg.boundaries.at(0).margin)
              : load_boundary_json(solve_boundary, cfg.N_theta);
      auto mesh = std::make_shared<DiscMesh>(make_polar_disc(cfg.R_disc, cfg.solver_rings));
      SolveStats stats;
      CmcMesh c = solve_cmc(b, H, mesh, {}, &stats);
      const fs::path p = fs::path(out_dir) / "surface.json";
      save_surface_json(p, c);
      std::cout << "wrote " << p.string() << " (" << stats.newton_iters << " newton iters, |r| "
                << format_scalar(stats.residual) << ")\n";
      return 0;
    }

    if (cf->parsed()) {
      AdmissibleBoundary b = make_boundary_fourier(cfg.N_theta, cfg.boundaries.at(0).gen,
                                                   cfg.boundaries.at(0).margin);
      auto mesh = std::make_shared<DiscMesh>(make_polar_disc(cfg.R_disc, cfg.solver_rings));
      CmcMesh c = solve_cmc(b, H, mesh);
      const FlowWindow w = flow_window(c);
      if (!std::isnan(t_request) &&
          (t_request <= w.A_minus + 1e-3 || t_request >= w.A_plus - 1e-3)) {
        std::cerr << "refused: t outside the spacelike window (" << format_scalar(w.A_minus)
                  << ", " << format_scalar(w.A_plus) << ")\n";
        return 1;
      }
      std::vector<CsvRow> rows;
      std::vector<Scalar> ts;
      if (!std::isnan(t_request))
        ts = {t_request};
      else {
        // leaves close to the window ends degenerate pointwise first
        const Scalar span = w.A_plus - w.A_minus;
        for (int k = 0; k < 9; ++k)
          ts.push_back(w.A_minus + span * (0.12 + 0.76 * k / 8.0));
      }
      for (Scalar t : ts) {
        try {
          CurvatureEvolution ev = curvature_evolution(c, t, 1e-3);
          SurfaceGeometry g = flow_geometry(c, t, 1e-3);
          const auto past = is_H_convex(*c.mesh, g, H, ConvexSide::Past, 1e-6);
          const auto fut = is_H_convex(*c.mesh, g, H, ConvexSide::Future, 1e-6);
          Scalar mn = 1e300, mx = -1e300;
          for (Index v = 0; v < g.lambda.rows(); ++v) {
            if (!c.mesh->core[v]) continue;
            mn = std::min(mn, g.lambda(v, c.mesh->n - 1));
            mx = std::max(mx, g.lambda(v, 0));
          }
          rows.push_back({format_scalar(t), format_scalar(mn), format_scalar(mx),
                          format_scalar(ev.max_deviation), past.convex ? "1" : "0",
                          fut.convex ? "1" : "0"});
        } catch (const std::exception&) {
          rows.push_back({format_scalar(t), "nan", "nan", "nan", "degenerate", "degenerate"});
        }
      }
      const fs::path p = fs::path(out_dir) / "flow_report.csv";
      write_csv(p, {"t", "min_lambda", "max_lambda", "deviation", "past_H_convex",
                    "future_H_convex"},
                rows);
      const Scalar t_past = convexity_time(c, H, ConvexSide::Past);
      const Scalar t_fut = convexity_time(c, H, ConvexSide::Future);
      std::cout << "wrote " << p.string() << "\n";
      std::cout << "past-convexity time " << format_scalar(t_past) << " (analytic "
                << format_scalar(w.T_plus - c.delta_H()) << ")\n";
      std::cout << "future-convexity time " << format_scalar(t_fut) << " (analytic "
                << format_scalar(w.T_minus - c.delta_H()) << ")\n";
      return 0;
    }

    if (ct->parsed()) {
      cfg.only = "teich";
      std::vector<CsvRow> rows;
      for (const auto& spec : cfg.boundaries) {
        AdmissibleBoundary b = make_boundary_fourier(cfg.N_theta, spec.gen, spec.margin);
        CircleMap phi = boundary_to_circle_map(b);
        CrNormResult cr = cross_ratio_norm(phi);
        rows.push_back({spec.name, format_scalar(cr.norm),
                        cr.resolution_warning ? "resolution_warning" : "ok"});
      }
      const fs::path p = fs::path(out_dir) / "circle_maps.csv";
      write_csv(p, {"case_id", "cr_norm", "status"}, rows);
      std::cout << "wrote " << p.string() << "\n";
      return 0;
    }

    if (cv->parsed()) {
      if (!only.empty()) cfg.only = only;
      if (K != 0) cfg.K_ref = K;
      return cmd_verify(cfg, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
