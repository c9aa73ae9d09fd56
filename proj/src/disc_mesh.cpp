#include "adslab/disc_mesh.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace adslab {

namespace {

Vec polar_vertex(Scalar rho, Scalar theta) {
  Vec y(3);
  y << std::sinh(rho) * std::cos(theta), std::sinh(rho) * std::sin(theta), std::cosh(rho);
  return y;
}

void build_adjacency(DiscMesh& m) {
  std::vector<std::set<int>> adj(m.num_vertices());
  const int k = m.cells.cols();
  for (Index c = 0; c < m.num_cells(); ++c)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b) adj[m.cells(c, a)].insert(m.cells(c, b));
  m.nbrs.resize(m.num_vertices());
  for (Index i = 0; i < m.num_vertices(); ++i)
    m.nbrs[i].assign(adj[i].begin(), adj[i].end());
  m.ring2.resize(m.num_vertices());
  for (Index i = 0; i < m.num_vertices(); ++i) {
    std::set<int> s;
    for (int j : m.nbrs[i]) {
      s.insert(j);
      for (int k : m.nbrs[j])
        if (k != i) s.insert(k);
    }
    m.ring2[i].assign(s.begin(), s.end());
  }
}

void compute_core_flags(DiscMesh& m) {
  m.core.assign(m.num_vertices(), 0);
  for (Index i = 0; i < m.num_vertices(); ++i) {
    if (m.on_boundary[i]) continue;
    bool clean = true;
    for (int j : m.ring2[i]) clean &= !m.on_boundary[j];
    m.core[i] = clean;
  }
}

void compute_mesh_quality(DiscMesh& m) {
  Scalar hmax = 0;
  Scalar min_angle = kPi;
  for (Index c = 0; c < m.num_cells(); ++c) {
    const int k = m.cells.cols();
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        hmax = std::max(hmax, hyp_distance(m.vertices.row(m.cells(c, a)).transpose(),
                                           m.vertices.row(m.cells(c, b)).transpose()));
    if (m.n == 2) {
      // angles from the induced Gram at each corner
      for (int a = 0; a < 3; ++a) {
        const Vec p0 = m.vertices.row(m.cells(c, a)).transpose();
        const Vec p1 = m.vertices.row(m.cells(c, (a + 1) % 3)).transpose();
        const Vec p2 = m.vertices.row(m.cells(c, (a + 2) % 3)).transpose();
        Vec e1 = p1 - p0, e2 = p2 - p0;
        e1 += hyp_dot(e1, p0) * p0;  // tangent projection, hyp_dot(p0,p0) = -1
        e2 += hyp_dot(e2, p0) * p0;
        const Scalar cosa = hyp_dot(e1, e2) /
                            std::sqrt(hyp_dot(e1, e1) * hyp_dot(e2, e2));
        min_angle = std::min(min_angle, std::acos(std::clamp(cosa, -1.0, 1.0)));
      }
    }
  }
  m.h_max = hmax;
  m.min_angle = min_angle;
}

}  // namespace

DiscMesh make_polar_disc(Scalar R, int rings) {
  if (rings < 2) throw std::invalid_argument("make_polar_disc: need at least 2 rings");
  DiscMesh m;
  m.n = 2;
  m.radius = R;
  const Scalar drho = R / rings;

  // angular count per ring, doubling when spacing exceeds ~1.3 * drho
  std::vector<int> M(rings + 1, 0);
  int cur = 8;
  for (int k = 1; k <= rings; ++k) {
    const Scalar circ = 2.0 * kPi * std::sinh(k * drho);
    while (circ / cur > 1.3 * drho) cur *= 2;
    M[k] = cur;
  }

  std::vector<int> ring_start(rings + 1, 0);
  int nv = 1;  // center
  for (int k = 1; k <= rings; ++k) {
    ring_start[k] = nv;
    nv += M[k];
  }

  m.vertices.resize(nv, 3);
  m.vertices.row(0) = polar_vertex(0.0, 0.0).transpose();
  for (int k = 1; k <= rings; ++k)
    for (int j = 0; j < M[k]; ++j)
      m.vertices.row(ring_start[k] + j) =
          polar_vertex(k * drho, 2.0 * kPi * j / M[k]).transpose();

  std::vector<Eigen::Vector3i> tris;
  // center fan
  for (int j = 0; j < M[1]; ++j)
    tris.emplace_back(0, ring_start[1] + j, ring_start[1] + (j + 1) % M[1]);
  // ring strips
  for (int k = 1; k < rings; ++k) {
    const int a0 = ring_start[k], b0 = ring_start[k + 1];
    const int Ma = M[k], Mb = M[k + 1];
    if (Mb == Ma) {
      for (int j = 0; j < Ma; ++j) {
        const int a = a0 + j, a1 = a0 + (j + 1) % Ma;
        const int b = b0 + j, b1 = b0 + (j + 1) % Ma;
        tris.emplace_back(a, b, b1);
        tris.emplace_back(a, b1, a1);
      }
    } else if (Mb == 2 * Ma) {
      for (int j = 0; j < Ma; ++j) {
        const int a = a0 + j, a1 = a0 + (j + 1) % Ma;
        const int f0 = b0 + 2 * j, f1 = b0 + (2 * j + 1) % Mb, f2 = b0 + (2 * j + 2) % Mb;
        tris.emplace_back(a, f0, f1);
        tris.emplace_back(a, f1, a1);
        tris.emplace_back(a1, f1, f2);
      }
    } else {
      throw std::logic_error("make_polar_disc: unsupported ring transition");
    }
  }

  m.cells.resize(static_cast<Index>(tris.size()), 3);
  for (size_t t = 0; t < tris.size(); ++t) m.cells.row(static_cast<Index>(t)) = tris[t];

  m.on_boundary.assign(nv, 0);
  for (int j = 0; j < M[rings]; ++j) {
    m.boundary_ring.push_back(ring_start[rings] + j);
    m.on_boundary[ring_start[rings] + j] = 1;
  }

  build_adjacency(m);
  compute_core_flags(m);
  compute_mesh_quality(m);
  return m;
}

DiscMesh make_lattice_ball(Scalar R, int divisions) {
  DiscMesh m;
  m.n = 3;
  m.radius = R;
  const Scalar rk = std::tanh(R);
  const Scalar s = rk / divisions;

  const int lim = divisions;
  auto idx = [&](int i, int j, int k) {
    return ((i + lim) * (2 * lim + 1) + (j + lim)) * (2 * lim + 1) + (k + lim);
  };
  std::vector<int> vid((2 * lim + 1) * (2 * lim + 1) * (2 * lim + 1), -1);

  std::vector<Vec> pts;
  for (int i = -lim; i <= lim; ++i)
    for (int j = -lim; j <= lim; ++j)
      for (int k = -lim; k <= lim; ++k) {
        Eigen::Vector3d q(i * s, j * s, k * s);
        if (q.norm() <= rk * (1.0 - 1e-12)) {
          Vec y(4);
          const Scalar w = 1.0 / std::sqrt(1.0 - q.squaredNorm());
          y << q(0) * w, q(1) * w, q(2) * w, w;
          vid[idx(i, j, k)] = static_cast<int>(pts.size());
          pts.push_back(y);
        }
      }

  m.vertices.resize(static_cast<Index>(pts.size()), 4);
  for (size_t i = 0; i < pts.size(); ++i) m.vertices.row(static_cast<Index>(i)) = pts[i];

  // Kuhn split of each complete cube into 6 tets
  static const int kuhn[6][4][3] = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 1, 1}}, {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}}};
  std::vector<Eigen::Vector4i> tets;
  for (int i = -lim; i < lim; ++i)
    for (int j = -lim; j < lim; ++j)
      for (int k = -lim; k < lim; ++k) {
        bool full = true;
        for (int di = 0; di <= 1 && full; ++di)
          for (int dj = 0; dj <= 1 && full; ++dj)
            for (int dk = 0; dk <= 1 && full; ++dk)
              if (vid[idx(i + di, j + dj, k + dk)] < 0) full = false;
        if (!full) continue;
        for (auto& t : kuhn) {
          Eigen::Vector4i tet;
          for (int v = 0; v < 4; ++v) tet(v) = vid[idx(i + t[v][0], j + t[v][1], k + t[v][2])];
          tets.push_back(tet);
        }
      }
  m.cells.resize(static_cast<Index>(tets.size()), 4);
  for (size_t t = 0; t < tets.size(); ++t) m.cells.row(static_cast<Index>(t)) = tets[t];

  m.on_boundary.assign(pts.size(), 1);
  // interior = vertices appearing only in complete cubes' tets with a full 3x3x3 block
  for (int i = -lim; i <= lim; ++i)
    for (int j = -lim; j <= lim; ++j)
      for (int k = -lim; k <= lim; ++k) {
        const int v = vid[idx(i, j, k)];
        if (v < 0) continue;
        bool full = true;
        for (int di = -1; di <= 1 && full; ++di)
          for (int dj = -1; dj <= 1 && full; ++dj)
            for (int dk = -1; dk <= 1 && full; ++dk) {
              if (std::abs(i + di) > lim || std::abs(j + dj) > lim || std::abs(k + dk) > lim ||
                  vid[idx(i + di, j + dj, k + dk)] < 0)
                full = false;
            }
        if (full) m.on_boundary[v] = 0;
      }
  for (size_t v = 0; v < pts.size(); ++v)
    if (m.on_boundary[v]) m.boundary_ring.push_back(static_cast<int>(v));

  build_adjacency(m);
  compute_core_flags(m);
  compute_mesh_quality(m);
  return m;
}

Mat cell_gram(const DiscMesh& mesh, Index c) {
  const int k = mesh.cells.cols();
  Vec bary = Vec::Zero(mesh.n + 1);
  for (int a = 0; a < k; ++a) bary += mesh.vertices.row(mesh.cells(c, a)).transpose();
  bary /= std::sqrt(-hyp_dot(bary, bary));

  Mat edges(mesh.n + 1, k - 1);
  const Vec p0 = mesh.vertices.row(mesh.cells(c, 0)).transpose();
  for (int a = 1; a < k; ++a) {
    Vec e = mesh.vertices.row(mesh.cells(c, a)).transpose() - p0;
    e += hyp_dot(e, bary) * bary;
    edges.col(a - 1) = e;
  }
  Mat G(k - 1, k - 1);
  for (int a = 0; a < k - 1; ++a)
    for (int b = 0; b < k - 1; ++b) G(a, b) = hyp_dot(edges.col(a), edges.col(b));
  return G;
}

Scalar cell_grad_norm2(const DiscMesh& mesh, Index c, const Vec& u) {
  const int k = mesh.cells.cols();
  Mat G = cell_gram(mesh, c);
  Vec du(k - 1);
  for (int a = 1; a < k; ++a) du(a - 1) = u(mesh.cells(c, a)) - u(mesh.cells(c, 0));
  Vec coeffs = G.ldlt().solve(du);
  return coeffs.dot(du);
}

Scalar cell_cosh_rho(const DiscMesh& mesh, Index c) {
  const int k = mesh.cells.cols();
  Scalar s = 0;
  for (int a = 0; a < k; ++a) s += mesh.vertices(mesh.cells(c, a), mesh.n);
  Vec bary = Vec::Zero(mesh.n + 1);
  for (int a = 0; a < k; ++a) bary += mesh.vertices.row(mesh.cells(c, a)).transpose();
  bary /= std::sqrt(-hyp_dot(bary, bary));
  return bary(mesh.n);
}

Vec harmonic_extension(const DiscMesh& mesh, const Vec& dirichlet_on_ring) {
  const Index V = mesh.num_vertices();
  if (dirichlet_on_ring.size() != static_cast<Index>(mesh.boundary_ring.size()))
    throw std::invalid_argument("harmonic_extension: ring data size mismatch");

  Vec g = Vec::Zero(V);
  for (size_t r = 0; r < mesh.boundary_ring.size(); ++r)
    g(mesh.boundary_ring[r]) = dirichlet_on_ring(static_cast<Index>(r));

  std::vector<Index> free_of(V, -1);
  std::vector<Index> free_list;
  for (Index i = 0; i < V; ++i)
    if (!mesh.on_boundary[i]) {
      free_of[i] = static_cast<Index>(free_list.size());
      free_list.push_back(i);
    }

  using Trip = Eigen::Triplet<Scalar>;
  std::vector<Trip> trips;
  Vec rhs = Vec::Zero(static_cast<Index>(free_list.size()));
  const int k = mesh.cells.cols();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    Mat G = cell_gram(mesh, c);
    const Scalar detG = G.determinant();
    if (detG <= 0) continue;
    Scalar fact = 1.0;
    for (int a = 2; a < k; ++a) fact *= a;
    const Scalar vol = std::sqrt(detG) / fact;
    Mat Ginv = G.inverse();
    Mat loc(k, k);
    for (int a = 1; a < k; ++a)
      for (int b = 1; b < k; ++b) loc(a, b) = vol * Ginv(a - 1, b - 1);
    for (int a = 1; a < k; ++a) {
      loc(a, 0) = 0;
      for (int b = 1; b < k; ++b) loc(a, 0) -= loc(a, b);
      loc(0, a) = loc(a, 0);
    }
    loc(0, 0) = 0;
    for (int b = 1; b < k; ++b) loc(0, 0) -= loc(0, b);

    for (int a = 0; a < k; ++a) {
      const Index ia = mesh.cells(c, a);
      if (free_of[ia] < 0) continue;
      for (int b = 0; b < k; ++b) {
        const Index ib = mesh.cells(c, b);
        if (free_of[ib] >= 0)
          trips.emplace_back(free_of[ia], free_of[ib], loc(a, b));
        else
          rhs(free_of[ia]) -= loc(a, b) * g(ib);
      }
    }
  }

  Eigen::SparseMatrix<Scalar> K(static_cast<Index>(free_list.size()),
                                static_cast<Index>(free_list.size()));
  K.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> solver(K);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("harmonic_extension: factorization failed");
  Vec sol = solver.solve(rhs);
  for (size_t r = 0; r < free_list.size(); ++r) g(free_list[r]) = sol(static_cast<Index>(r));
  return g;
}

}  // namespace adslab
