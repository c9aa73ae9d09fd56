#include "adslab/teich.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace adslab {

Mat2 ads_matrix(const Vec& x) {
  if (x.size() != 4) throw std::invalid_argument("ads_matrix: ambient dimension must be 4");
  Mat2 M;
  M << x(2) + x(0), x(3) + x(1), x(1) - x(3), x(2) - x(0);
  return M;
}

Rank1Factor rank1_factor(const Mat2& M, Scalar tol) {
  Eigen::JacobiSVD<Mat2> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rank1Factor out;
  const Scalar s0 = svd.singularValues()(0);
  const Scalar s1 = svd.singularValues()(1);
  out.defect = s0 > 0 ? s1 / s0 : 1.0;
  if (out.defect > tol)
    throw std::runtime_error("rank1_factor: representative is not null (defect " +
                             std::to_string(out.defect) + ")");
  out.u = svd.matrixU().col(0);
  out.v = svd.matrixV().col(0);
  return out;
}

namespace {
Scalar proj_det(const Vec2& a, const Vec2& b) { return a(0) * b(1) - b(0) * a(1); }
}  // namespace

Scalar cross_ratio(const Vec2& z1, const Vec2& z2, const Vec2& z3, const Vec2& z4) {
  const Scalar d41 = proj_det(z4, z1);
  const Scalar d32 = proj_det(z3, z2);
  const Scalar d21 = proj_det(z2, z1);
  const Scalar d34 = proj_det(z3, z4);
  if (std::abs(d21) < 1e-300 || std::abs(d34) < 1e-300)
    throw std::invalid_argument("cross_ratio: coincident points");
  return (d41 * d32) / (d21 * d34);
}

Scalar cross_ratio_angles(Scalar a1, Scalar a2, Scalar a3, Scalar a4) {
  return cross_ratio(circle_point(a1), circle_point(a2), circle_point(a3), circle_point(a4));
}

Mobius mobius_from_triples(const std::array<Scalar, 3>& src, const std::array<Scalar, 3>& dst) {
  auto canonical = [](const std::array<Scalar, 3>& t) {
    Vec2 h1 = circle_point(t[0]), h2 = circle_point(t[1]), h3 = circle_point(t[2]);
    Mat2 M;
    const Scalar d13 = proj_det(h1, h3), d23 = proj_det(h2, h3);
    M.row(0) = d13 * Vec2(-h2(1), h2(0)).transpose();
    M.row(1) = d23 * Vec2(-h1(1), h1(0)).transpose();
    return M;
  };
  Mat2 A = canonical(src), B = canonical(dst);
  Mobius out;
  out.m = B.inverse() * A;
  // orientation-preserving normalization
  if (out.m.determinant() < 0) out.m.row(1) *= -1.0;
  return out;
}

Scalar CircleMap::eval(Scalar angle) const {
  if (exact) {
    Scalar out = std::fmod(exact(angle), 2.0 * kPi);
    return out < 0 ? out + 2.0 * kPi : out;
  }
  const Index N = src.size();
  Scalar a = std::fmod(angle, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  Index hi = static_cast<Index>(std::lower_bound(src.data(), src.data() + N, a) - src.data());
  const Index lo = (hi + N - 1) % N;
  hi = hi % N;
  Scalar s0 = src(lo), s1 = src(hi);
  Scalar span = s1 - s0;
  if (span <= 0) span += 2.0 * kPi;
  Scalar off = a - s0;
  if (off < 0) off += 2.0 * kPi;
  const Scalar w = span > 0 ? off / span : 0.0;
  Scalar i0 = img_lifted(lo), i1 = img_lifted(hi);
  if (i1 < i0) i1 += 2.0 * kPi;  // wrap of the lift
  Scalar out = std::fmod((1.0 - w) * i0 + w * i1, 2.0 * kPi);
  return out < 0 ? out + 2.0 * kPi : out;
}

CircleMap CircleMap::inverse() const {
  // the inverse is returned as a sampled map (no analytic evaluator)
  Vec src_new(img_lifted.size()), img_new(src.size());
  for (Index i = 0; i < src.size(); ++i) {
    Scalar a = std::fmod(img_lifted(i), 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    src_new(i) = a;
    img_new(i) = src(i);
  }
  return make_circle_map(src_new, img_new);
}

Scalar CircleMap::min_spacing() const {
  Scalar m = 2.0 * kPi;
  const Index N = src.size();
  for (Index i = 0; i < N; ++i) {
    Scalar d = src((i + 1) % N) - src(i);
    if (d <= 0) d += 2.0 * kPi;
    m = std::min(m, d);
  }
  return m;
}

CircleMap make_circle_map(Vec src_angles, Vec img_angles) {
  const Index N = src_angles.size();
  if (N < 3 || img_angles.size() != N)
    throw std::invalid_argument("make_circle_map: need matched samples");
  std::vector<Index> order(N);
  for (Index i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return src_angles(a) < src_angles(b); });
  CircleMap m;
  m.src.resize(N);
  m.img_lifted.resize(N);
  for (Index i = 0; i < N; ++i) {
    m.src(i) = src_angles(order[i]);
    m.img_lifted(i) = img_angles(order[i]);
  }
  // lift to a strictly increasing sequence with total increment 2pi
  Scalar total = 0;
  for (Index i = 1; i < N; ++i) {
    Scalar d = m.img_lifted(i) - m.img_lifted(i - 1);
    while (d <= 0) d += 2.0 * kPi;
    while (d > 2.0 * kPi) d -= 2.0 * kPi;
    total += d;
    m.img_lifted(i) = m.img_lifted(i - 1) + d;
    if (d <= 0)
      throw std::runtime_error("make_circle_map: image not strictly monotone");
  }
  Scalar closing = m.img_lifted(0) + 2.0 * kPi - m.img_lifted(N - 1);
  while (closing <= 0) closing += 2.0 * kPi;
  if (std::abs(total + closing - 2.0 * kPi) > 1e-6)
    throw std::runtime_error("make_circle_map: image is not a degree-1 monotone circle map");
  return m;
}

CircleMap make_identity_circle_map(int samples) {
  Vec s(samples);
  for (int i = 0; i < samples; ++i) s(i) = 2.0 * kPi * i / samples;
  CircleMap m = make_circle_map(s, s);
  m.exact = [](Scalar a) { return a; };
  return m;
}

CircleMap make_mobius_circle_map(const Mobius& M, int samples) {
  Vec s(samples), img(samples);
  for (int i = 0; i < samples; ++i) {
    s(i) = 2.0 * kPi * i / samples;
    img(i) = M.apply_angle(s(i));
  }
  CircleMap m = make_circle_map(s, img);
  m.exact = [M](Scalar a) { return M.apply_angle(a); };
  return m;
}

CrNormResult cross_ratio_norm(const CircleMap& map, const CrNormOptions& opts) {
  CrNormResult res;
  const Scalar spacing = map.exact ? 0.0 : map.min_spacing();
  for (int ir = 0; ir < opts.rotations; ++ir) {
    const Scalar theta0 = 2.0 * kPi * ir / opts.rotations;
    for (int iw = 0; iw < opts.widths; ++iw) {
      const Scalar c = 0.2 + (kPi / 2 - 0.2) * (iw + 0.5) / opts.widths;
      for (int ip = 0; ip < opts.perpendiculars; ++ip) {
        const Scalar u = -c + 2.0 * c * (ip + 0.5) / opts.perpendiculars;
        const Scalar t = std::atan2(std::cos(u) - std::cos(c), std::sin(u));
        const Scalar w = u + 2.0 * t;
        const Scalar z1 = theta0 - c, z2 = theta0 + u, z3 = theta0 + c, z4 = theta0 + w;
        // quadruple separation vs sample resolution
        if (!map.exact) {
          const Scalar sep = std::min({std::abs(u + c), std::abs(c - u)});
          if (sep < spacing) res.resolution_warning = true;
        }
        Scalar cr;
        try {
          cr = cross_ratio_angles(map.eval(z1), map.eval(z2), map.eval(z3), map.eval(z4));
        } catch (const std::invalid_argument&) {
          res.resolution_warning = true;
          continue;
        }
        const Scalar val = std::abs(std::log(std::abs(cr)));
        if (val > res.norm) {
          res.norm = val;
          res.worst_quadruple[0] = z1;
          res.worst_quadruple[1] = z2;
          res.worst_quadruple[2] = z3;
          res.worst_quadruple[3] = z4;
        }
      }
    }
  }
  return res;
}

CircleMap boundary_to_circle_map(const AdmissibleBoundary& b, bool normalize, Scalar rank_tol) {
  if (b.n != 2) throw std::invalid_argument("boundary_to_circle_map: needs n = 2");
  const Index N = b.num_samples();
  Vec left(N), right(N);
  for (Index i = 0; i < N; ++i) {
    Rank1Factor f = rank1_factor(ads_matrix(b.null_rep(i)), rank_tol);
    Scalar al = std::atan2(f.u(1), f.u(0));  // projective angle, mod pi
    Scalar ar = std::atan2(f.v(1), f.v(0));
    if (al < 0) al += kPi;
    if (ar < 0) ar += kPi;
    left(i) = 2.0 * al;  // circle chart of the projective line
    right(i) = 2.0 * ar;
  }
  CircleMap m = make_circle_map(left, right);
  if (normalize) {
    const Index i0 = 0, i1 = m.size() / 3, i2 = 2 * m.size() / 3;
    auto ang = [&](Index i) {
      Scalar a = std::fmod(m.img_lifted(i), 2.0 * kPi);
      return a < 0 ? a + 2.0 * kPi : a;
    };
    Mobius T = mobius_from_triples({ang(i0), ang(i1), ang(i2)},
                                   {m.src(i0), m.src(i1), m.src(i2)});
    Vec img(m.size());
    for (Index i = 0; i < m.size(); ++i) img(i) = T.apply_angle(ang(i));
    m = make_circle_map(m.src, img);
  }
  return m;
}

Scalar theta_of_H(Scalar H) {
  const Scalar r = H + std::sqrt(4.0 + H * H);
  return 2.0 * std::acos(r / std::sqrt(r * r + 4.0));
}

Scalar equidistant_curvature(Scalar H, Scalar D, Scalar t) {
  const Scalar T = std::tan(t);
  return -1.0 - (D - T * H + T * T) / (1.0 + T * H + T * T * D);
}

HkDuality hk_duality(Scalar H) {
  HkDuality out;
  const Scalar s = std::sqrt(1.0 + H * H / 4.0);
  out.d_plus = std::atan(H / 2 + s);
  out.d_minus = std::atan(H / 2 - s);
  const Scalar sp = H + std::sqrt(1.0 + H * H);
  const Scalar sm = H - std::sqrt(1.0 + H * H);
  out.K_plus_printed = -1.0 - 4.0 / (sp * sp);
  out.K_minus_printed = -1.0 - 4.0 / (sm * sm);
  // independent route: flow an H-surface to the two distances where the
  // leaf curvature no longer depends on the traceless part
  out.K_plus_flow = equidistant_curvature(H, H * H / 4.0, out.d_plus);
  out.K_minus_flow = equidistant_curvature(H, H * H / 4.0, out.d_minus);
  return out;
}

Scalar hk_distance_of_K(Scalar K) { return std::atan(1.0 / std::sqrt(-1.0 - K)); }

Scalar hk_H_of_K(Scalar K) { return (2.0 - K) / std::sqrt(-1.0 - K); }

ComplexDilatation complex_dilatation(const CmcMesh& c) {
  if (c.mesh->n != 2) throw std::invalid_argument("complex_dilatation: needs n = 2");
  const Scalar H = c.H_target;
  const Scalar half = H / 2;
  const Scalar denom = 1.0 + half * half;
  const Index V = c.geo.lambda.rows();
  ComplexDilatation out;
  out.mu.resize(V);
  Scalar mu_norm = 0;
  Scalar id_err = 0;
  for (Index v = 0; v < V; ++v) {
    const Scalar a = std::max(0.0, c.geo.lambda(v, 0) - half);
    out.mu(v) = -a * Complex(half, 1.0) / denom;
    const Scalar m2 = std::norm(out.mu(v));
    id_err = std::max(id_err, std::abs(m2 - a * a / denom));
    if (c.mesh->core[v]) mu_norm = std::max(mu_norm, std::abs(out.mu(v)));
  }
  if (mu_norm >= 1.0)
    throw std::runtime_error("complex_dilatation: |mu| >= 1, surface is not a converged CMC graph");
  out.report.H = H;
  out.report.theta = theta_of_H(H);
  out.report.mu_norm = mu_norm;
  out.report.K_maxdil = (1.0 + mu_norm) / (1.0 - mu_norm);
  out.report.K_dil1 = (1.0 + mu_norm * mu_norm) / (1.0 - mu_norm * mu_norm);
  out.report.identity_error = id_err;
  return out;
}

GaussMapResult gauss_map_positions(const Mat& X, const Mat& N) {
  const Index V = X.rows();
  GaussMapResult out;
  out.left.resize(V);
  out.right.resize(V);
  out.degenerate.assign(V, 0);
  for (Index v = 0; v < V; ++v) {
    const Mat2 Mx = ads_matrix(X.row(v).transpose());
    const Mat2 Mn = ads_matrix(N.row(v).transpose());
    const Mat2 A = Mn.inverse() * Mx;
    const Scalar tr = A.trace();
    const Scalar det = A.determinant();
    const Scalar disc = 4.0 * det - tr * tr;
    if (disc <= 0 || std::abs(A(1, 0)) < 1e-12) {
      out.degenerate[v] = 1;
      out.left(v) = out.right(v) = Complex(0, 1);
      continue;
    }
    // fixed point of A in the upper half plane
    const Scalar sgn = A(1, 0) > 0 ? 1.0 : -1.0;
    Complex z((A(0, 0) - A(1, 1)) / (2.0 * A(1, 0)), sgn * std::sqrt(disc) / (2.0 * A(1, 0)));
    out.right(v) = z;
    out.left(v) = (Mx(0, 0) * z + Mx(0, 1)) / (Mx(1, 0) * z + Mx(1, 1));
  }
  return out;
}

GaussMapResult gauss_map(const CmcMesh& c) {
  return gauss_map_positions(c.geo.X, c.geo.normal);
}

TrendTable dilatation_trend_table(const std::vector<LandslideReport>& reports, Scalar band_lo,
                           Scalar band_hi) {
  TrendTable t;
  t.band_lo = band_lo;
  t.band_hi = band_hi;
  for (const auto& r : reports) {
    if (r.theta < band_lo - 1e-12 || r.theta > band_hi + 1e-12) continue;
    TrendRow row;
    row.theta = r.theta;
    row.cr_norm = r.cr_norm;
    row.lnK = std::log(r.K_maxdil);
    row.ratio = r.cr_norm > 1e-9 ? row.lnK / r.cr_norm : 0.0;
    t.rows.push_back(row);
    t.empirical_Q = std::max(t.empirical_Q, row.ratio);
  }
  if (t.rows.empty()) throw std::invalid_argument("dilatation_trend_table: empty band");
  return t;
}

}  // namespace adslab
