#include "adslab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adslab {

namespace {

// multi-indices of total degree 1..max_deg in n variables, lexicographic
std::vector<std::vector<int>> monomial_exponents(int n, int max_deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n) {
      int deg = 0;
      for (int e : cur) deg += e;
      if (deg >= 1) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur[pos] = e;
      self(self, pos + 1, remaining - e);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, max_deg);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int e : a) da += e;
    for (int e : b) db += e;
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

Scalar eval_monomial(const std::vector<int>& expo, const Vec& a) {
  Scalar m = 1.0;
  for (size_t k = 0; k < expo.size(); ++k)
    for (int e = 0; e < expo[k]; ++e) m *= a(static_cast<Index>(k));
  return m;
}

// spacelike orthonormal tangent frame at x, orthogonal to both x and tau
Mat spacelike_frame(const Vec& x, const Vec& tau, int n) {
  const Index m = x.size();
  Mat E(m, n);
  int have = 0;
  for (Index k = 0; k < m && have < n; ++k) {
    Vec w = Vec::Zero(m);
    w(k) = 1.0;
    w += lorentz_dot(w, x) * x;
    w += lorentz_dot(w, tau) * tau;
    for (int s = 0; s < have; ++s) w -= lorentz_dot(w, E.col(s)) * E.col(s);
    const Scalar q = lorentz_norm2(w);
    if (q > 1e-8) E.col(have++) = w / std::sqrt(q);
  }
  if (have < n) throw std::runtime_error("spacelike_frame: degenerate basis");
  return E;
}

struct FitContext {
  Vec normal;
  Mat frame;      // (n+2) x n
  Mat A;          // design matrix, scaled monomials
  Vec scale_pow;  // per-column rescale factors
  std::vector<int> stencil;
  Scalar scale = 1;
  const std::vector<std::vector<int>>* expos = nullptr;
  int deg = 3;
};

FitContext build_fit(const DiscMesh& mesh, const Mat& X, Index i) {
  static const std::vector<std::vector<int>> expos2_d3 = monomial_exponents(2, 3);
  static const std::vector<std::vector<int>> expos2_d2 = monomial_exponents(2, 2);
  static const std::vector<std::vector<int>> expos3_d3 = monomial_exponents(3, 3);
  static const std::vector<std::vector<int>> expos3_d2 = monomial_exponents(3, 2);

  const int n = mesh.n;
  FitContext ctx;
  ctx.stencil = mesh.ring2[i];
  const int m = static_cast<int>(ctx.stencil.size());

  const Vec x = X.row(i).transpose();
  const Vec tau = future_reference(x);
  Mat S = spacelike_frame(x, tau, n);

  Mat D(x.size(), m);
  for (int j = 0; j < m; ++j) D.col(j) = X.row(ctx.stencil[j]).transpose() - x;

  // normal from the least-squares tangent plane: N ~ tau + S c
  Mat A0(m, n);
  Vec b0(m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) A0(j, k) = lorentz_dot(D.col(j), S.col(k));
    b0(j) = lorentz_dot(D.col(j), tau);
  }
  Vec c = (A0.transpose() * A0).ldlt().solve(-A0.transpose() * b0);
  const Scalar c2 = c.squaredNorm();
  if (c2 >= 1.0 - 1e-10)
    throw std::runtime_error("fit_vertex: non-spacelike data at vertex " + std::to_string(i));
  Vec N = (tau + S * c) / std::sqrt(1.0 - c2);
  ctx.normal = N;

  // orthonormal frame in the tangent space of the fitted plane
  Mat E(x.size(), n);
  int have = 0;
  for (int k = 0; k < n; ++k) {
    Vec w = S.col(k) + lorentz_dot(S.col(k), N) * N;
    for (int s = 0; s < have; ++s) w -= lorentz_dot(w, E.col(s)) * E.col(s);
    const Scalar q = lorentz_norm2(w);
    if (q > 1e-12) E.col(have++) = w / std::sqrt(q);
  }
  if (have < n) throw std::runtime_error("fit_vertex: degenerate tangent frame");
  ctx.frame = E;

  // tangent coordinates and design matrix
  Mat coords(m, n);
  Scalar scale = 0;
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) coords(j, k) = lorentz_dot(D.col(j), E.col(k));
    scale = std::max(scale, coords.row(j).lpNorm<Eigen::Infinity>());
  }
  ctx.scale = scale > 0 ? scale : 1.0;

  const std::vector<std::vector<int>>* expos =
      n == 2 ? &expos2_d3 : (n == 3 ? &expos3_d3 : nullptr);
  int deg = 3;
  if (!expos) throw std::runtime_error("fit_vertex: unsupported dimension");
  if (m < static_cast<int>(expos->size()) + 2) {
    expos = n == 2 ? &expos2_d2 : &expos3_d2;
    deg = 2;
    if (m < static_cast<int>(expos->size()))
      throw std::runtime_error("fit_vertex: stencil too small at vertex " + std::to_string(i));
  }
  ctx.expos = expos;
  ctx.deg = deg;

  const int cols = static_cast<int>(expos->size());
  ctx.A.resize(m, cols);
  ctx.scale_pow.resize(cols);
  for (int col = 0; col < cols; ++col) {
    int d = 0;
    for (int e : (*expos)[col]) d += e;
    ctx.scale_pow(col) = std::pow(ctx.scale, d);
  }
  for (int j = 0; j < m; ++j) {
    Vec a = coords.row(j).transpose() / ctx.scale;
    for (int col = 0; col < cols; ++col) ctx.A(j, col) = eval_monomial((*expos)[col], a);
  }
  return ctx;
}

// solves the height fit and returns true coefficients (unscaled)
Vec solve_fit(const FitContext& ctx, const Vec& rhs) {
  Vec sol = ctx.A.colPivHouseholderQr().solve(rhs);
  return sol.cwiseQuotient(ctx.scale_pow);
}

Mat quadratic_part(const FitContext& ctx, const Vec& coeffs, int n) {
  Mat Q = Mat::Zero(n, n);
  for (size_t col = 0; col < ctx.expos->size(); ++col) {
    const auto& e = (*ctx.expos)[col];
    int d = 0;
    for (int v : e) d += v;
    if (d != 2) continue;
    int k = -1, l = -1;
    for (int v = 0; v < n; ++v) {
      if (e[v] == 2) k = l = v;
      if (e[v] == 1) (k < 0 ? k : l) = v;
    }
    if (k == l)
      Q(k, k) = 2.0 * coeffs(static_cast<Index>(col));
    else {
      Q(k, l) = coeffs(static_cast<Index>(col));
      Q(l, k) = coeffs(static_cast<Index>(col));
    }
  }
  return Q;
}

Vec linear_part(const FitContext& ctx, const Vec& coeffs, int n) {
  Vec g = Vec::Zero(n);
  for (size_t col = 0; col < ctx.expos->size(); ++col) {
    const auto& e = (*ctx.expos)[col];
    int d = 0;
    for (int v : e) d += v;
    if (d != 1) continue;
    for (int v = 0; v < n; ++v)
      if (e[v] == 1) g(v) = coeffs(static_cast<Index>(col));
  }
  return g;
}

}  // namespace

Mat embed_graph(const DiscMesh& mesh, const Vec& f, bool check_spacelike) {
  if (f.size() != mesh.num_vertices())
    throw std::invalid_argument("embed_graph: value count mismatch");
  if (check_spacelike) {
    const Scalar s = graph_slope(mesh, f);
    if (s >= 1.0)
      throw std::runtime_error("embed_graph: causal slope violation, slope = " + std::to_string(s));
  }
  const int n = mesh.n;
  Mat X(mesh.num_vertices(), n + 2);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Scalar Y = mesh.vertices(v, n);
    X.row(v).head(n) = mesh.vertices.row(v).head(n);
    X(v, n) = Y * std::sin(f(v));
    X(v, n + 1) = Y * std::cos(f(v));
  }
  return X;
}

Scalar graph_slope(const DiscMesh& mesh, const Vec& f) {
  Scalar worst = 0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Scalar g2 = cell_grad_norm2(mesh, c, f);
    worst = std::max(worst, cell_cosh_rho(mesh, c) * std::sqrt(std::max(0.0, g2)));
  }
  return worst;
}

VertexFit fit_vertex(const DiscMesh& mesh, const Mat& X, Index i) {
  FitContext ctx = build_fit(mesh, X, i);
  const int m = static_cast<int>(ctx.stencil.size());
  Vec h(m);
  const Vec x = X.row(i).transpose();
  for (int j = 0; j < m; ++j)
    h(j) = -lorentz_dot((X.row(ctx.stencil[j]).transpose() - x).eval(), ctx.normal);
  Vec coeffs = solve_fit(ctx, h);
  VertexFit out;
  // the plane-fit normal carries a first-order tilt on lopsided stencils;
  // the fitted linear term measures it, so fold it back in
  const Vec tilt = linear_part(ctx, coeffs, mesh.n);
  Vec n_corr = ctx.normal + ctx.frame * tilt;
  const Scalar q = lorentz_norm2(n_corr);
  out.normal = q < -1e-12 ? (n_corr / std::sqrt(-q)).eval() : ctx.normal;
  out.frame = ctx.frame;
  out.shape = quadratic_part(ctx, coeffs, mesh.n);
  return out;
}

Scalar vertex_mean_curvature(const DiscMesh& mesh, const Mat& X, Index i) {
  return fit_vertex(mesh, X, i).shape.trace();
}

Scalar SurfaceGeometry::traceless_norm(Scalar H) const {
  const int n = static_cast<int>(lambda.cols());
  Scalar m = 0;
  for (Index v = 0; v < lambda.rows(); ++v)
    for (int k = 0; k < n; ++k) m = std::max(m, std::abs(lambda(v, k) - H / n));
  return m;
}

SurfaceGeometry geometry_from_positions(const DiscMesh& mesh, const Mat& X) {
  const Index V = mesh.num_vertices();
  const int n = mesh.n;
  SurfaceGeometry geo;
  geo.X = X;
  geo.normal.resize(V, n + 2);
  geo.B.resize(V);
  geo.frame.resize(V);
  geo.lambda.resize(V, n);
  geo.mean.resize(V);
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (Index v = 0; v < V; ++v) {
    VertexFit fit = fit_vertex(mesh, X, v);
    geo.normal.row(v) = fit.normal.transpose();
    geo.frame[v] = fit.frame;
    geo.B[v] = 0.5 * (fit.shape + fit.shape.transpose());
    eig.compute(geo.B[v]);
    Vec ev = eig.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<Scalar>());
    geo.lambda.row(v) = ev.transpose();
    geo.mean(v) = geo.B[v].trace();
  }
  return geo;
}

ScalarDerivatives fit_scalar_derivatives(const DiscMesh& mesh, const SurfaceGeometry& geo,
                                         const Vec& values) {
  const Index V = mesh.num_vertices();
  const int n = mesh.n;
  ScalarDerivatives out;
  out.grad.resize(V, n);
  out.grad_norm.resize(V);
  out.laplace.resize(V);
  for (Index v = 0; v < V; ++v) {
    FitContext ctx = build_fit(mesh, geo.X, v);
    const int m = static_cast<int>(ctx.stencil.size());
    Vec w(m);
    for (int j = 0; j < m; ++j) w(j) = values(ctx.stencil[j]) - values(v);
    Vec coeffs = solve_fit(ctx, w);
    Vec g = linear_part(ctx, coeffs, n);
    out.grad.row(v) = g.transpose();
    out.grad_norm(v) = g.norm();
    out.laplace(v) = quadratic_part(ctx, coeffs, n).trace();
  }
  return out;
}

CmcMesh make_graph_surface(std::shared_ptr<const DiscMesh> mesh, Vec f, Scalar H_target) {
  CmcMesh c;
  c.mesh = std::move(mesh);
  c.f = std::move(f);
  c.H_target = H_target;
  Mat X = embed_graph(*c.mesh, c.f);
  c.geo = geometry_from_positions(*c.mesh, X);
  return c;
}

ConvexityResult is_H_convex(const DiscMesh& mesh, const SurfaceGeometry& geo, Scalar H,
                            ConvexSide side, Scalar tol) {
  const int n = mesh.n;
  ConvexityResult res;
  if (side == ConvexSide::Future) {
    Scalar m = std::numeric_limits<Scalar>::infinity();
    for (Index v = 0; v < geo.lambda.rows(); ++v)
      if (mesh.core[v]) m = std::min(m, geo.lambda(v, n - 1) - H / n);
    res.margin = m;
    res.convex = m >= -tol;
  } else {
    Scalar m = -std::numeric_limits<Scalar>::infinity();
    for (Index v = 0; v < geo.lambda.rows(); ++v)
      if (mesh.core[v]) m = std::max(m, geo.lambda(v, 0) - H / n);
    res.margin = m;
    res.convex = m <= tol;
  }
  return res;
}

SectionalReport sectional_curvature(const DiscMesh& mesh, const SurfaceGeometry& geo, Scalar H) {
  const Index V = geo.lambda.rows();
  const int n = mesh.n;
  SectionalReport rep;
  rep.K_max.resize(V);
  rep.bound.resize(V);
  rep.sup_K = -std::numeric_limits<Scalar>::infinity();
  for (Index v = 0; v < V; ++v) {
    Scalar kmax = -std::numeric_limits<Scalar>::infinity();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        kmax = std::max(kmax, -1.0 - geo.lambda(v, a) * geo.lambda(v, b));
    rep.K_max(v) = kmax;
    Scalar b0 = 0;
    for (int a = 0; a < n; ++a) b0 = std::max(b0, std::abs(geo.lambda(v, a) - H / n));
    rep.bound(v) = -1.0 - (H / n) * (H / n) + b0 * b0 + 2.0 * (std::abs(H) / n) * b0;
    if (rep.K_max(v) > rep.bound(v) + 1e-9) rep.bound_ok = false;
    if (!mesh.on_boundary[v]) rep.sup_K = std::max(rep.sup_K, kmax);
  }
  return rep;
}

Vec angle_defect_curvature(const DiscMesh& mesh, const Mat& X) {
  const Index V = mesh.num_vertices();
  Vec defect = Vec::Zero(V);
  Vec area = Vec::Zero(V);
  if (mesh.n != 2) return Vec::Constant(V, std::numeric_limits<Scalar>::quiet_NaN());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    Scalar g[3][3];
    Vec e[3];
    for (int a = 0; a < 3; ++a) e[a] = X.row(mesh.cells(c, a)).transpose();
    Vec d01 = e[1] - e[0], d02 = e[2] - e[0], d12 = e[2] - e[1];
    g[0][1] = lorentz_dot(d01, d01);
    g[0][2] = lorentz_dot(d02, d02);
    g[1][2] = lorentz_dot(d12, d12);
    const Scalar cross = lorentz_dot(d01, d02);
    const Scalar det = g[0][1] * g[0][2] - cross * cross;
    const Scalar A = 0.5 * std::sqrt(std::max(0.0, det));
    auto corner = [&](Scalar qa, Scalar qb, Scalar dot_ab) {
      return std::acos(std::clamp(dot_ab / std::sqrt(qa * qb), -1.0, 1.0));
    };
    const Scalar th0 = corner(g[0][1], g[0][2], cross);
    const Scalar th1 = corner(g[0][1], g[1][2], lorentz_dot((-d01).eval(), d12));
    const Scalar th2 = kPi - th0 - th1;
    defect(mesh.cells(c, 0)) += th0;
    defect(mesh.cells(c, 1)) += th1;
    defect(mesh.cells(c, 2)) += th2;
    for (int a = 0; a < 3; ++a) area(mesh.cells(c, a)) += A / 3.0;
  }
  Vec K(V);
  for (Index v = 0; v < V; ++v)
    K(v) = mesh.on_boundary[v] || area(v) <= 0
               ? std::numeric_limits<Scalar>::quiet_NaN()
               : (2.0 * kPi - defect(v)) / area(v);
  return K;
}

}  // namespace adslab
