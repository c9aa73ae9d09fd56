#include "adslab/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <cstdio>

namespace adslab {

namespace {

// clamp toward the ring mean until strictly below the slope limit
void enforce_slope(const DiscMesh& mesh, Vec& f, Scalar limit) {
  const Scalar mean = f.mean();
  for (int guard = 0; guard < 60; ++guard) {
    if (graph_slope(mesh, f) < limit) return;
    f = (mean + 0.9 * (f.array() - mean)).matrix();
  }
  throw SolveError("solve_cmc: cannot produce a spacelike initial guess");
}

struct Problem {
  const DiscMesh& mesh;
  Scalar H;
  std::vector<Index> interior;       // interior vertex ids
  std::vector<Index> interior_of;    // vertex -> interior slot (-1 on ring)

  explicit Problem(const DiscMesh& m, Scalar H_) : mesh(m), H(H_) {
    interior_of.assign(m.num_vertices(), -1);
    for (Index v = 0; v < m.num_vertices(); ++v)
      if (!m.on_boundary[v]) {
        interior_of[v] = static_cast<Index>(interior.size());
        interior.push_back(v);
      }
  }

  Vec residual(const Mat& X) const {
    Vec r(static_cast<Index>(interior.size()));
    for (size_t k = 0; k < interior.size(); ++k)
      r(static_cast<Index>(k)) = vertex_mean_curvature(mesh, X, interior[k]) - H;
    return r;
  }
};

}  // namespace

Vec ring_data_from_boundary(const AdmissibleBoundary& b, const DiscMesh& mesh) {
  Vec g(static_cast<Index>(mesh.boundary_ring.size()));
  for (size_t r = 0; r < mesh.boundary_ring.size(); ++r) {
    const Index v = mesh.boundary_ring[r];
    if (b.generator && b.n == 2) {
      const Scalar theta = std::atan2(mesh.vertices(v, 1), mesh.vertices(v, 0));
      g(static_cast<Index>(r)) = b.generator->eval(theta);
    } else {
      auto [up, um] = extension_bounds_at(b, mesh.klein(v));
      g(static_cast<Index>(r)) = 0.5 * (up + um);
    }
  }
  return g;
}

CmcMesh solve_cmc(std::shared_ptr<const DiscMesh> mesh_ptr, const Vec& ring_values, Scalar H,
                  const SolveOptions& opts, SolveStats* stats) {
  const DiscMesh& mesh = *mesh_ptr;
  SolveStats local;
  SolveStats& st = stats ? *stats : local;

  Vec f = harmonic_extension(mesh, ring_values);
  enforce_slope(mesh, f, opts.slope_limit);

  Problem prob(mesh, H);
  const Index M = static_cast<Index>(prob.interior.size());
  if (M == 0) throw SolveError("solve_cmc: mesh has no interior vertices");

  Mat X = embed_graph(mesh, f, false);
  Vec r = prob.residual(X);
  Scalar rnorm = r.lpNorm<Eigen::Infinity>();

  Eigen::SparseMatrix<Scalar> J(M, M);
  std::vector<Eigen::Triplet<Scalar>> trips;
  Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;

  const int n = mesh.n;
  auto embed_row = [&](Mat& Xm, Index v, Scalar fv) {
    const Scalar Y = mesh.vertices(v, n);
    Xm(v, n) = Y * std::sin(fv);
    Xm(v, n + 1) = Y * std::cos(fv);
  };

  for (int it = 0; it < opts.max_iter && rnorm > opts.tol; ++it) {
    // finite-difference Jacobian over the 2-ring dependency pattern
    trips.clear();
    for (Index col = 0; col < M; ++col) {
      const Index j = prob.interior[col];
      const Scalar delta = opts.fd_eps * (1.0 + std::abs(f(j)));
      embed_row(X, j, f(j) + delta);
      auto column_entry = [&](Index vi) {
        const Index row = prob.interior_of[vi];
        if (row < 0) return;
        const Scalar hpert = vertex_mean_curvature(mesh, X, vi) - H;
        trips.emplace_back(row, col, (hpert - r(row)) / delta);
      };
      column_entry(j);
      for (int vi : mesh.ring2[j]) column_entry(vi);
      embed_row(X, j, f(j));
    }
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw SolveError("solve_cmc: Jacobian factorization failed");
    Vec d = lu.solve(-r);

    // damped step, clamped against the causal slope
    Scalar alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < opts.max_linesearch; ++ls) {
      Vec f_try = f;
      for (Index k = 0; k < M; ++k) f_try(prob.interior[k]) += alpha * d(k);
      if (graph_slope(mesh, f_try) < opts.slope_limit) {
        Mat X_try = embed_graph(mesh, f_try, false);
        Vec r_try = prob.residual(X_try);
        const Scalar rn = r_try.lpNorm<Eigen::Infinity>();
        if (rn < rnorm || rn <= opts.tol) {
          f = std::move(f_try);
          X = std::move(X_try);
          r = std::move(r_try);
          rnorm = rn;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    ++st.newton_iters;
    if (opts.verbose)
      std::fprintf(stderr, "  newton %d: |r| = %.3e (alpha %.3g)\n", st.newton_iters, rnorm, alpha);

    if (!accepted) {
      // pseudo-time relaxation fallback: df/ds = H_mean - H
      const Scalar tau = 0.2 * mesh.h_max * mesh.h_max;
      bool relaxed = false;
      for (int rs = 0; rs < opts.max_relax; ++rs) {
        Vec f_try = f;
        for (Index k = 0; k < M; ++k) f_try(prob.interior[k]) += tau * r(k);
        if (graph_slope(mesh, f_try) >= opts.slope_limit) break;
        Mat X_try = embed_graph(mesh, f_try, false);
        Vec r_try = prob.residual(X_try);
        const Scalar rn = r_try.lpNorm<Eigen::Infinity>();
        ++st.relax_steps;
        f = std::move(f_try);
        X = std::move(X_try);
        r = std::move(r_try);
        if (rn < 0.7 * rnorm) {
          rnorm = rn;
          relaxed = true;
          break;
        }
        rnorm = rn;
      }
      if (!relaxed && rnorm > opts.tol) {
        // find the worst vertex for the report
        Index worst = prob.interior[0];
        r.cwiseAbs().maxCoeff(&worst);
        throw SolveError("solve_cmc: no progress, residual " + std::to_string(rnorm) +
                         " at interior slot " + std::to_string(worst));
      }
    }
  }

  st.residual = rnorm;
  st.converged = rnorm <= opts.tol;
  if (!st.converged)
    throw SolveError("solve_cmc: not converged, residual " + std::to_string(rnorm));

  CmcMesh out;
  out.mesh = std::move(mesh_ptr);
  out.f = std::move(f);
  out.H_target = H;
  out.geo = geometry_from_positions(mesh, X);
  return out;
}

CmcMesh solve_cmc(const AdmissibleBoundary& b, Scalar H, std::shared_ptr<const DiscMesh> mesh,
                  const SolveOptions& opts, SolveStats* stats) {
  Vec ring = ring_data_from_boundary(b, *mesh);
  return solve_cmc(std::move(mesh), ring, H, opts, stats);
}

}  // namespace adslab
