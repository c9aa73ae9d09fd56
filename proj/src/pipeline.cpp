#include "adslab/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "adslab/vdiag.hpp"
#include "json.hpp"

namespace adslab {

using nlohmann::json;

PipelineConfig default_config() {
  PipelineConfig cfg;
  auto fourier = [](std::initializer_list<Scalar> a, std::initializer_list<Scalar> b) {
    FourierSeries g;
    g.cos_coeffs = Vec::Zero(static_cast<Index>(a.size()));
    Index i = 0;
    for (Scalar v : a) g.cos_coeffs(i++) = v;
    g.sin_coeffs = Vec::Zero(static_cast<Index>(b.size()));
    i = 0;
    for (Scalar v : b) g.sin_coeffs(i++) = v;
    return g;
  };
  cfg.boundaries = {
      {"flat", fourier({0.0}, {}), 1e-3},
      {"sin10", fourier({0.0}, {0.10}), 1e-3},
      {"wave10", fourier({0.0}, {0.0, 0.10}), 1e-3},
      {"mix20", fourier({0.0, 0.0, 0.08}, {0.15}), 1e-3},
  };
  return cfg;
}

namespace {

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["N_theta"] = cfg.N_theta;
  j["ext_rings"] = cfg.ext_rings;
  j["solver_rings"] = cfg.solver_rings;
  j["R_disc"] = cfg.R_disc;
  j["grid_Nx"] = cfg.grid_Nx;
  j["grid_Nt"] = cfg.grid_Nt;
  j["hull_tol"] = cfg.hull_tol;
  j["hard_tol"] = cfg.hard_tol;
  j["K_ref"] = cfg.K_ref;
  j["width_H"] = cfg.width_H;
  j["solve_H"] = cfg.solve_H;
  j["seed"] = cfg.seed;
  j["only"] = cfg.only;
  json bs = json::array();
  for (const auto& b : cfg.boundaries) {
    json e;
    e["name"] = b.name;
    e["a"] = std::vector<Scalar>(b.gen.cos_coeffs.data(),
                                 b.gen.cos_coeffs.data() + b.gen.cos_coeffs.size());
    e["b"] = std::vector<Scalar>(b.gen.sin_coeffs.data(),
                                 b.gen.sin_coeffs.data() + b.gen.sin_coeffs.size());
    e["margin"] = b.margin;
    bs.push_back(e);
  }
  j["boundaries"] = bs;
  return j;
}

}  // namespace

PipelineConfig config_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  json j;
  in >> j;
  PipelineConfig cfg = default_config();
  cfg.N_theta = j.value("N_theta", cfg.N_theta);
  cfg.ext_rings = j.value("ext_rings", cfg.ext_rings);
  cfg.solver_rings = j.value("solver_rings", cfg.solver_rings);
  cfg.R_disc = j.value("R_disc", cfg.R_disc);
  cfg.grid_Nx = j.value("grid_Nx", cfg.grid_Nx);
  cfg.grid_Nt = j.value("grid_Nt", cfg.grid_Nt);
  cfg.hull_tol = j.value("hull_tol", cfg.hull_tol);
  cfg.hard_tol = j.value("hard_tol", cfg.hard_tol);
  cfg.K_ref = j.value("K_ref", cfg.K_ref);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.only = j.value("only", cfg.only);
  if (j.contains("width_H")) cfg.width_H = j["width_H"].get<std::vector<Scalar>>();
  if (j.contains("solve_H")) cfg.solve_H = j["solve_H"].get<std::vector<Scalar>>();
  if (j.contains("boundaries")) {
    cfg.boundaries.clear();
    for (const auto& e : j["boundaries"]) {
      BoundarySpec s;
      s.name = e.value("name", "case");
      auto a = e.value("a", std::vector<Scalar>{0.0});
      auto b = e.value("b", std::vector<Scalar>{});
      s.gen.cos_coeffs = Eigen::Map<Vec>(a.data(), static_cast<Index>(a.size()));
      s.gen.sin_coeffs = Eigen::Map<Vec>(b.data(), static_cast<Index>(b.size()));
      s.margin = e.value("margin", 1e-3);
      cfg.boundaries.push_back(std::move(s));
    }
  }
  return cfg;
}

std::string config_hash(const PipelineConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

int pool_threads(const PipelineConfig& cfg, int cases) {
  int t = cfg.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("ADSLAB_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::min(t, std::max(1, cases));
}

std::vector<WidthReport> run_hull_stage(const PipelineConfig& cfg, const BoundarySpec& spec,
                                        std::vector<CsvRow>* rows_out) {
  AdmissibleBoundary b = make_boundary_fourier(cfg.N_theta, spec.gen, spec.margin);
  const BoundaryCertificate cert = validate(b);
  if (!cert.pass) throw std::runtime_error("run_hull_stage: boundary " + spec.name + " rejected");
  DiscMesh mesh = make_polar_disc(cfg.R_disc, cfg.ext_rings);
  ExtremalExtensions ext = extremal_extensions(b, mesh);
  WidthGrid grid{cfg.grid_Nx, cfg.grid_Nt};
  std::vector<WidthReport> out;
  for (Scalar H : cfg.width_H) {
    HullQuery qr(b, ext, H, b.n, cfg.hull_tol);
    out.push_back(width(qr, grid));
    if (rows_out) {
      const WidthReport& w = out.back();
      rows_out->push_back({spec.name, format_scalar(w.H), format_scalar(w.delta_H),
                           format_scalar(w.omega), format_scalar(w.upper_bound),
                           std::to_string(w.chain_len), std::to_string(w.grid_Nx),
                           std::to_string(w.grid_Nt)});
    }
  }
  return out;
}

namespace {

struct SolveCaseInput {
  const PipelineConfig* cfg;
  const BoundarySpec* spec;
  Scalar H;
  const AdmissibleBoundary* b;
  const ExtremalExtensions* ext;
  const WidthReport* wr_H;
  const WidthReport* wr_K;
};

CaseOutput run_solve_case(const SolveCaseInput& in) {
  const PipelineConfig& cfg = *in.cfg;
  CaseOutput out;
  out.case_id = in.spec->name + "_H" + format_scalar(in.H);
  out.H = in.H;
  out.width_H_report = *in.wr_H;
  out.width_K_report = *in.wr_K;
  try {
    auto mesh = std::make_shared<DiscMesh>(make_polar_disc(cfg.R_disc, cfg.solver_rings));
    out.h_max = mesh->h_max;
    SolveOptions opts;
    CmcMesh c = solve_cmc(*in.b, in.H, mesh, opts, &out.stats);
    out.solved = true;

    out.checks = inequality_checks(c, *in.wr_H, *in.wr_K, cfg.hard_tol);

    // flow cross-check (skipped only when another stage was singled out)
    const WidthUpperBound wub = width_upper_bound(c, in.H);
    out.flow_bound = wub.bound;
    if (cfg.only.empty() || cfg.only == "flow") {
      const FlowWindow w = flow_window(c);
      Scalar dev = 0;
      for (Scalar t : {0.2, -0.2})
        if (t > w.A_minus + 0.05 && t < w.A_plus - 0.05)
          dev = std::max(dev, curvature_evolution(c, t).max_deviation);
      out.flow_deviation = dev;
    }

    // support umbilical + the elliptic identity diagnostics
    const Index center = 0;
    SupportSearchResult sup = find_support_umbilical(
        *in.b, *in.ext, in.H, AdSPoint(c.geo.X.row(center).transpose()),
        0.5 * std::sin(in.wr_H->omega));
    out.support_sin_dist = sup.sin_dist;
    try {
      VDiagnostics vd = v_diagnostics(c, reference_umbilical(*in.b, c.delta_H()));
      out.pde_residual = vd.max_interior_residual;
    } catch (const std::exception&) {
      out.pde_residual = std::numeric_limits<Scalar>::quiet_NaN();
    }
    try {
      VDiagnostics vds = v_diagnostics(c, sup.P, true);
      GradientRatioReport gr = gradient_ratio_report(c, vds);
      out.gradient_ratio = gr.skipped ? 0.0 : gr.max_ratio;
    } catch (const std::exception&) {
      out.gradient_ratio = 0.0;
    }

    // induced circle map invariants
    ComplexDilatation cd = complex_dilatation(c);
    out.landslide = cd.report;
    if (cfg.only.empty() || cfg.only == "teich") {
      CircleMap phi = boundary_to_circle_map(*in.b);
      out.landslide.cr_norm = cross_ratio_norm(phi).norm;
    }
    out.landslide.omega_H = in.wr_H->omega;
    out.landslide.omega_0 = in.wr_K->omega;
  } catch (const std::exception& e) {
    out.solved = false;
    out.error = e.what();
  }
  return out;
}

}  // namespace

VerifySummary run_verify(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  VerifySummary sum;

  // hull stage
  std::vector<AdmissibleBoundary> boundaries;
  std::vector<DiscMesh> ext_meshes;
  std::vector<ExtremalExtensions> exts;
  std::vector<std::vector<WidthReport>> profiles;
  std::vector<CsvRow> width_rows;
  for (const auto& spec : cfg.boundaries) {
    AdmissibleBoundary b = make_boundary_fourier(cfg.N_theta, spec.gen, spec.margin);
    const BoundaryCertificate cert = validate(b);
    if (!cert.pass) {
      sum.hard_pass = false;
      sum.failures.push_back("boundary " + spec.name + " failed validation");
      continue;
    }
    boundaries.push_back(std::move(b));
    ext_meshes.push_back(make_polar_disc(cfg.R_disc, cfg.ext_rings));
  }
  exts.reserve(boundaries.size());
  for (size_t i = 0; i < boundaries.size(); ++i)
    exts.push_back(extremal_extensions(boundaries[i], ext_meshes[i]));

  WidthGrid wgrid{cfg.grid_Nx, cfg.grid_Nt};
  // every width the run needs, deduplicated and computed in the pool
  std::vector<std::vector<Scalar>> want_H(boundaries.size());
  for (size_t i = 0; i < boundaries.size(); ++i) {
    std::vector<Scalar> hs = cfg.width_H;
    if (cfg.only != "hull") {
      hs.insert(hs.end(), cfg.solve_H.begin(), cfg.solve_H.end());
      hs.push_back(cfg.K_ref);
    }
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    want_H[i] = std::move(hs);
  }
  std::vector<std::pair<size_t, Scalar>> wtasks;
  for (size_t i = 0; i < boundaries.size(); ++i)
    for (Scalar H : want_H[i]) wtasks.emplace_back(i, H);
  std::vector<WidthReport> wresults(wtasks.size());
  {
    std::atomic<size_t> next{0};
    const int nthreads = pool_threads(cfg, static_cast<int>(wtasks.size()));
    auto worker = [&]() {
      for (size_t k = next.fetch_add(1); k < wtasks.size(); k = next.fetch_add(1)) {
        const auto [i, H] = wtasks[k];
        HullQuery qr(boundaries[i], exts[i], H, boundaries[i].n, cfg.hull_tol);
        wresults[k] = width(qr, wgrid);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  auto width_for = [&](size_t i, Scalar H) -> const WidthReport& {
    for (size_t k = 0; k < wtasks.size(); ++k)
      if (wtasks[k].first == i && wtasks[k].second == H) return wresults[k];
    throw std::logic_error("run_verify: missing width report");
  };

  for (size_t i = 0; i < boundaries.size(); ++i) {
    std::vector<WidthReport> prof;
    for (Scalar H : cfg.width_H) {
      prof.push_back(width_for(i, H));
      const WidthReport& w = prof.back();
      width_rows.push_back({cfg.boundaries[i].name, format_scalar(w.H),
                            format_scalar(w.delta_H), format_scalar(w.omega),
                            format_scalar(w.upper_bound), std::to_string(w.chain_len),
                            std::to_string(w.grid_Nx), std::to_string(w.grid_Nt)});
      if (w.omega > kPi / 2 - std::abs(w.delta_H) + cfg.hard_tol) {
        sum.hard_pass = false;
        sum.failures.push_back("width bound violated: " + cfg.boundaries[i].name + " H=" +
                               format_scalar(H));
      }
    }
    // profile shape: maximum at H = 0, monotone in |H|
    for (size_t a = 0; a + 1 < prof.size(); ++a) {
      const Scalar Ha = prof[a].H, Hb = prof[a + 1].H;
      const Scalar wa = prof[a].omega, wb = prof[a + 1].omega;
      bool ok = true;
      if (Hb <= 0)
        ok = wb >= wa - cfg.hard_tol;  // increasing toward 0
      else if (Ha >= 0)
        ok = wb <= wa + cfg.hard_tol;  // decreasing past 0
      if (!ok) {
        sum.hard_pass = false;
        sum.failures.push_back("width profile not monotone: " + cfg.boundaries[i].name);
      }
    }
    profiles.push_back(std::move(prof));
  }
  const fs::path width_csv = out_dir / "widths.csv";
  write_csv(width_csv,
            {"case_id", "H", "delta_H", "omega", "upper_bound", "chain_len", "grid_Nx", "grid_Nt"},
            width_rows);
  sum.files_written.push_back(width_csv.string());

  if (cfg.only == "hull") return sum;

  std::vector<std::vector<WidthReport>> wr_solve(boundaries.size());
  std::vector<WidthReport> wr_K(boundaries.size());
  for (size_t i = 0; i < boundaries.size(); ++i) {
    for (Scalar H : cfg.solve_H) wr_solve[i].push_back(width_for(i, H));
    wr_K[i] = width_for(i, cfg.K_ref);
  }

  // solver cases, worker pool over case index
  std::vector<SolveCaseInput> inputs;
  for (size_t i = 0; i < boundaries.size(); ++i)
    for (size_t k = 0; k < cfg.solve_H.size(); ++k)
      inputs.push_back(SolveCaseInput{&cfg, &cfg.boundaries[i], cfg.solve_H[k], &boundaries[i],
                                      &exts[i], &wr_solve[i][k], &wr_K[i]});
  std::vector<CaseOutput> cases(inputs.size());
  {
    std::atomic<size_t> next{0};
    const int nthreads = pool_threads(cfg, static_cast<int>(inputs.size()));
    auto worker = [&]() {
      for (size_t k = next.fetch_add(1); k < inputs.size(); k = next.fetch_add(1))
        cases[k] = run_solve_case(inputs[k]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  // reports
  std::vector<CsvRow> solver_rows, landslide_rows;
  std::vector<SvgSeries> omega_series, scatter_series, lnk_series;
  Scalar CL_emp = 0, Q_emp = 0, EL_emp = 0, GL_emp = 0;
  for (size_t i = 0; i < profiles.size(); ++i) {
    SvgSeries s;
    s.line = true;
    s.label = cfg.boundaries[i].name;
    const char* palette[] = {"#1f6fb2", "#b2541f", "#3a9e4e", "#8e44ad", "#c0392b", "#16a085"};
    s.color = palette[i % 6];
    for (const auto& w : profiles[i]) s.points.emplace_back(w.H, w.omega);
    omega_series.push_back(std::move(s));
  }
  SvgSeries scatter, lnk;
  for (const auto& c : cases) {
    if (!c.solved) {
      sum.hard_pass = false;
      sum.failures.push_back("case " + c.case_id + " failed: " + c.error);
      continue;
    }
    const InequalityChecks& t = c.checks;
    if (!t.hard_checks_pass(cfg.hard_tol)) {
      sum.hard_pass = false;
      sum.failures.push_back("inequality checks failed for " + c.case_id);
    }
    if (c.width_H_report.omega > c.flow_bound + 2 * cfg.hard_tol) {
      sum.hard_pass = false;
      sum.failures.push_back("hull width exceeds the flow bound for " + c.case_id);
    }
    solver_rows.push_back(
        {c.case_id, format_scalar(c.H), format_scalar(cfg.K_ref), format_scalar(t.omega_H),
         format_scalar(t.omega_K), format_scalar(t.sup_lambda1), format_scalar(t.inf_lambdan),
         format_scalar(t.B0_norm), format_scalar(t.max_K_sigma),
         format_scalar(t.check_i_rhs - t.check_i_lhs),
         t.check_ii_applicable ? format_scalar(t.check_ii_rhs - t.check_ii_lhs) : "nan",
         format_scalar(t.ratio_iii), format_scalar(t.ratio_iv),
         t.check_v_applicable ? format_scalar(t.check_v_rhs - t.check_v_lhs) : "nan",
         format_scalar(c.h_max), format_scalar(cfg.R_disc)});
    landslide_rows.push_back(
        {c.case_id, format_scalar(c.H), format_scalar(c.landslide.theta),
         format_scalar(c.landslide.cr_norm), format_scalar(c.landslide.omega_0),
         format_scalar(c.landslide.omega_H), format_scalar(t.B0_norm),
         format_scalar(c.landslide.mu_norm), format_scalar(c.landslide.K_maxdil),
         format_scalar(c.landslide.K_dil1),
         format_scalar(c.landslide.cr_norm > 1e-9
                           ? std::log(c.landslide.K_maxdil) / c.landslide.cr_norm
                           : 0.0)});
    scatter.points.emplace_back(std::sin(t.omega_K), t.B0_norm);
    if (c.landslide.cr_norm > 1e-9) {
      lnk.points.emplace_back(c.landslide.cr_norm, std::log(c.landslide.K_maxdil));
      Q_emp = std::max(Q_emp, std::log(c.landslide.K_maxdil) / c.landslide.cr_norm);
    }
    CL_emp = std::max(CL_emp, t.ratio_iii);
    GL_emp = std::max(GL_emp, c.gradient_ratio);
    if (std::sin(c.width_H_report.omega) > 1e-9)
      EL_emp = std::max(EL_emp, c.support_sin_dist / std::sin(c.width_H_report.omega));
    sum.cases.push_back(c);
  }
  const fs::path solver_csv = out_dir / "solver_report.csv";
  write_csv(solver_csv,
            {"case_id", "H", "K", "omega_H", "omega_K", "sup_l1", "inf_ln", "B0_norm", "maxK",
             "check_i", "check_ii", "check_iii", "check_iv", "check_v", "h", "R_disc"},
            solver_rows);
  sum.files_written.push_back(solver_csv.string());
  const fs::path landslide_csv = out_dir / "landslide_report.csv";
  write_csv(landslide_csv,
            {"case_id", "H", "theta", "cr_norm", "omega_0", "omega_H", "B0_norm", "mu_norm",
             "K_maxdil", "K_dil1", "lnK_over_cr"},
            landslide_rows);
  sum.files_written.push_back(landslide_csv.string());

  scatter.label = "cases";
  if (CL_emp > 0) {
    SvgSeries cl_line;
    cl_line.line = true;
    cl_line.color = "#c0392b";
    cl_line.label = "empirical C_L";
    Scalar xmax = 1e-6;
    for (auto [x, y] : scatter.points) xmax = std::max(xmax, x);
    cl_line.points = {{0.0, 0.0}, {xmax, CL_emp * xmax}};
    scatter_series.push_back(cl_line);
  }
  scatter_series.push_back(scatter);
  lnk.label = "cases";
  lnk_series.push_back(lnk);

  const fs::path svg1 = out_dir / "omega_vs_H.svg";
  write_svg_plot(svg1, "width of the shifted hull vs H", "H", "omega", omega_series);
  const fs::path svg2 = out_dir / "B0_vs_sin_omega.svg";
  write_svg_plot(svg2, "traceless shape norm vs sin(omega_K)", "sin(omega_K)", "|B0|",
                 scatter_series);
  const fs::path svg3 = out_dir / "lnK_vs_cr.svg";
  write_svg_plot(svg3, "log max dilatation vs cross-ratio norm", "cr norm", "ln K", lnk_series);
  sum.files_written.push_back(svg1.string());
  sum.files_written.push_back(svg2.string());
  sum.files_written.push_back(svg3.string());

  // empirical constants, archived with the config hash (never gate)
  json fix;
  fix["config_hash"] = config_hash(cfg);
  fix["C_L"] = {{"value", CL_emp}, {"kind", "empirical"}};
  fix["G_L"] = {{"value", GL_emp}, {"kind", "empirical"}};
  fix["E_L"] = {{"value", EL_emp}, {"kind", "empirical"}};
  fix["Q_alpha"] = {{"value", Q_emp}, {"kind", "empirical"}};
  const fs::path fixture = out_dir / "constants.json";
  std::ofstream fout(fixture);
  fout << fix.dump(2) << "\n";
  sum.files_written.push_back(fixture.string());

  return sum;
}

}  // namespace adslab
