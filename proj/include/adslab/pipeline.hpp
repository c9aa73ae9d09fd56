#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adslab/boundary.hpp"
#include "adslab/flow.hpp"
#include "adslab/hull.hpp"
#include "adslab/inequalities.hpp"
#include "adslab/report.hpp"
#include "adslab/solver.hpp"
#include "adslab/teich.hpp"

// Case orchestration behind the CLI: boundary families, width profiles,
// solver cases, the inequality battery, and report emission.

namespace adslab {

struct BoundarySpec {
  std::string name;
  FourierSeries gen;
  Scalar margin = 1e-3;
};

struct PipelineConfig {
  int N_theta = 512;
  int ext_rings = 10;
  int solver_rings = 10;
  Scalar R_disc = 3.0;
  int grid_Nx = 360;
  int grid_Nt = 24;
  Scalar hull_tol = 5e-3;
  Scalar hard_tol = 0.02;
  Scalar K_ref = 0.0;
  std::vector<Scalar> width_H{-2, -1, 0, 1, 2};
  std::vector<Scalar> solve_H{0, 1, 2};
  std::vector<BoundarySpec> boundaries;
  unsigned long seed = 12345;
  int threads = 0;  // 0: ADSLAB_THREADS or hardware
  std::string only;  // "", "hull", "solve", "flow", "teich"
};

PipelineConfig default_config();
PipelineConfig config_from_json_file(const std::filesystem::path& path);
std::string config_hash(const PipelineConfig& cfg);

struct CaseOutput {
  std::string case_id;
  Scalar H = 0;
  bool solved = false;
  std::string error;
  WidthReport width_H_report;
  WidthReport width_K_report;
  InequalityChecks checks;
  LandslideReport landslide;
  Scalar flow_deviation = 0;   // curvature-evolution mismatch at t = +-0.2
  Scalar flow_bound = 0;       // T_plus - T_minus
  Scalar pde_residual = 0;     // max interior residual of the v identity
  Scalar gradient_ratio = 0;
  Scalar support_sin_dist = 0;
  Scalar h_max = 0;
  SolveStats stats;
};

struct VerifySummary {
  bool hard_pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> files_written;
  std::vector<CaseOutput> cases;
};

/// Full pipeline per (boundary, H): exit contract is hard-checks only;
/// trend numbers are archived, never gated.
VerifySummary run_verify(const PipelineConfig& cfg, const std::filesystem::path& out_dir);

/// Width-profile stage alone (the `--only hull` path).
std::vector<WidthReport> run_hull_stage(const PipelineConfig& cfg, const BoundarySpec& spec,
                                        std::vector<CsvRow>* rows_out = nullptr);

int pool_threads(const PipelineConfig& cfg, int cases);

}  // namespace adslab
