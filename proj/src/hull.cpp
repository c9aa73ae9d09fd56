#include "adslab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adslab {

UmbilicalHypersurface standard_umbilical(int n, Scalar delta) {
  Vec e = Vec::Zero(n + 2);
  e(n) = -1.0;  // past dual of the zero slice
  return UmbilicalHypersurface{AdSPoint(e), delta};
}

UmbilicalHypersurface reference_umbilical(const AdmissibleBoundary& b, Scalar delta) {
  const Scalar c = b.values.mean();
  Vec e = Vec::Zero(b.n + 2);
  e(b.n) = std::sin(c - kPi / 2);
  e(b.n + 1) = std::cos(c - kPi / 2);
  return UmbilicalHypersurface{AdSPoint(e), delta};
}

Scalar umbilical_graph_height(Scalar delta, Scalar rho) {
  const Scalar s = std::sin(delta);
  return std::acos(std::clamp(s / std::cosh(rho), -1.0, 1.0)) - std::acos(std::clamp(s, -1.0, 1.0));
}

// Membership: below the past-time leaf at pi/2 - delta_H and above the
// future-time leaf at pi/2 + delta_H. The two-sided half-space definition
// forces tau_fut <= pi/2 + delta_H (points deeper in the past have larger
// future time and lie outside).
bool hull_contains(const HullQuery& qr, const AdSPoint& p) {
  if (!invisible_domain_contains(*qr.boundary, p)) return false;
  const CosmologicalTimes ct = cosmological_times(*qr.boundary, p, *qr.ext);
  return ct.tau_past <= kPi / 2 - qr.delta_H + qr.tol &&
         ct.tau_fut <= kPi / 2 + qr.delta_H + qr.tol;
}

WidthReport width(const HullQuery& qr, const WidthGrid& grid) {
  const AdmissibleBoundary& b = *qr.boundary;
  const ExtremalExtensions& ext = *qr.ext;
  const DiscMesh& mesh = *ext.mesh;

  WidthReport rep;
  rep.H = qr.H;
  rep.delta_H = qr.delta_H;
  rep.upper_bound = kPi / 2 - std::abs(qr.delta_H);
  rep.grid_Nx = grid.Nx;
  rep.grid_Nt = grid.Nt;

  // subsample slice points, deterministic stride; far fibers carry no hull
  // content (the hull pinches onto the boundary data) and only add noise
  const Scalar rho_cap = grid.rho_cap > 0 ? grid.rho_cap : std::max(1.0, mesh.radius - 0.8);
  const Index V = mesh.num_vertices();
  const Index stride = std::max<Index>(1, V / grid.Nx);
  std::vector<Index> slice_pts;
  for (Index v = 0; v < V; v += stride)
    if (mesh.rho(v) <= rho_cap) slice_pts.push_back(v);

  struct Node {
    Vec x;
    Scalar t;
    Index key;
  };
  std::vector<Node> nodes;
  const Scalar guard = 1e-3;
  const Scalar bound_past = kPi / 2 - qr.delta_H + qr.tol;
  const Scalar bound_fut = kPi / 2 + qr.delta_H + qr.tol;
  for (size_t si = 0; si < slice_pts.size(); ++si) {
    const Index v = slice_pts[si];
    const Scalar lo0 = ext.u_minus(v) + guard;
    const Scalar hi0 = ext.u_plus(v) - guard;
    if (hi0 <= lo0) continue;
    const Vec y = mesh.vertices.row(v).transpose();
    auto embed = [&](Scalar t) {
      Vec x(b.n + 2);
      x.head(b.n) = y.head(b.n);
      x(b.n) = y(b.n) * std::sin(t);
      x(b.n + 1) = y(b.n) * std::cos(t);
      return AdSPoint(std::move(x));
    };
    Vec k_past, k_fut;  // warm starts shared along the fiber
    auto times_at = [&](Scalar t) -> std::optional<CosmologicalTimes> {
      try {
        return cosmological_times_seeded(b, embed(t), ext, &k_past, &k_fut);
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
    };
    // both time functions are monotone along the fiber, so the acceptance
    // window is an interval; locate its ends by bisection
    const auto ct_lo = times_at(lo0);
    const auto ct_hi = times_at(hi0);
    if (!ct_lo || !ct_hi) continue;
    Scalar tP = hi0;  // upper end: tau_past <= bound_past
    if (ct_lo->tau_past > bound_past) continue;
    if (ct_hi->tau_past > bound_past) {
      Scalar a = lo0, c = hi0;
      for (int it = 0; it < 16; ++it) {
        const Scalar m = 0.5 * (a + c);
        const auto ct = times_at(m);
        if (ct && ct->tau_past <= bound_past)
          a = m;
        else
          c = m;
      }
      tP = a;
    }
    Scalar tF = lo0;  // lower end: tau_fut <= bound_fut
    if (ct_hi->tau_fut > bound_fut) continue;
    if (ct_lo->tau_fut > bound_fut) {
      Scalar a = lo0, c = hi0;
      for (int it = 0; it < 16; ++it) {
        const Scalar m = 0.5 * (a + c);
        const auto ct = times_at(m);
        if (ct && ct->tau_fut <= bound_fut)
          c = m;
        else
          a = m;
      }
      tF = c;
    }
    if (tP <= tF) continue;
    for (int it = 0; it < grid.Nt; ++it) {
      const Scalar t = tF + (tP - tF) * (it + 0.5) / grid.Nt;
      nodes.push_back(Node{embed(t).v, t, static_cast<Index>(si) * grid.Nt + it});
    }
  }
  rep.accepted_nodes = static_cast<int>(nodes.size());
  if (nodes.empty()) {
    rep.omega = 0;
    rep.upper_bound_ok = true;
    return rep;
  }

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b_) {
    if (a.t != b_.t) return a.t < b_.t;
    return a.key < b_.key;
  });

  // longest chain of time-related pairs, weighted by the timelike distance
  const size_t N = nodes.size();
  std::vector<Scalar> best(N, 0.0);
  std::vector<int> pred(N, -1);
  Scalar omega = 0;
  size_t argbest = 0;
  for (size_t j = 0; j < N; ++j) {
    for (size_t i = 0; i < j; ++i) {
      if (nodes[i].t >= nodes[j].t) continue;
      const Scalar c = lorentz_dot(nodes[i].x, nodes[j].x);
      if (c <= -1.0 + 1e-12 || c >= 1.0 - 1e-12) continue;
      const Scalar w = std::acos(-c);
      const Scalar cand = best[i] + w;
      if (cand > best[j]) {
        best[j] = cand;
        pred[j] = static_cast<int>(i);
      }
    }
    if (best[j] > omega) {
      omega = best[j];
      argbest = j;
    }
  }

  rep.omega = omega;
  rep.upper_bound_ok = omega <= rep.upper_bound + qr.tol + 1e-9;
  for (int k = static_cast<int>(argbest); k >= 0; k = pred[k]) {
    rep.witness_chain.push_back(nodes[k].x);
    if (pred[k] < 0) break;
  }
  std::reverse(rep.witness_chain.begin(), rep.witness_chain.end());
  rep.chain_len = static_cast<int>(rep.witness_chain.size());
  return rep;
}

std::vector<WidthReport> width_profile(const AdmissibleBoundary& b, const ExtremalExtensions& ext,
                                       const std::vector<Scalar>& H_grid, const WidthGrid& grid) {
  std::vector<WidthReport> out;
  out.reserve(H_grid.size());
  for (Scalar H : H_grid) {
    HullQuery qr(b, ext, H, b.n);
    out.push_back(width(qr, grid));
  }
  return out;
}

namespace {

struct Candidate {
  Scalar v_abs = std::numeric_limits<Scalar>::infinity();
  Scalar slack = 0;
  bool past_side = true;
  Vec e;
};

// evaluates a dual-point candidate: uniform boundary side + |v| at x
void consider(const AdmissibleBoundary& b, const AdSPoint& x, Scalar delta, const Vec& e,
              Candidate& best) {
  Scalar mn = std::numeric_limits<Scalar>::infinity();
  Scalar mx = -mn;
  for (Index i = 0; i < b.num_samples(); ++i) {
    const Scalar s = lorentz_dot(b.null_rep(i), e);
    mn = std::min(mn, s);
    mx = std::max(mx, s);
  }
  const Scalar side_tol = 1e-7;
  bool past_ok = mn >= -side_tol;   // boundary of P weakly below the data
  bool fut_ok = mx <= side_tol;     // weakly above
  if (!past_ok && !fut_ok) return;
  const Scalar u = lorentz_dot(x.v, e);
  if (std::abs(u) >= 1.0 - 1e-9) return;
  const Scalar v = std::cos(delta) * u + std::sin(delta) * std::sqrt(1.0 - u * u);
  if (std::abs(v) < best.v_abs) {
    best.v_abs = std::abs(v);
    best.slack = past_ok ? mn : -mx;
    best.past_side = past_ok;
    best.e = e;
  }
}

}  // namespace

SupportSearchResult find_support_umbilical(const AdmissibleBoundary& b,
                                           const ExtremalExtensions& ext, Scalar H,
                                           const AdSPoint& x, Scalar target_sin_dist,
                                           Scalar tol) {
  const int n = b.n;
  const Scalar delta = delta_of(H, n);
  const DiscMesh& mesh = *ext.mesh;

  Candidate best;
  auto embed = [&](const Vec& y, Scalar s) {
    Vec e(n + 2);
    e.head(n) = y.head(n);
    e(n) = y(n) * std::sin(s);
    e(n + 1) = y(n) * std::cos(s);
    return e;
  };

  // seed with the time-function realizers: the support plane through the
  // hull near x is the dual of the point of the domain sheet hit by the
  // time geodesic, so the sheet sample realizing tau is the natural dual
  const CosmologicalTimes ct = cosmological_times(b, x, ext);
  if (ct.witness_past >= 0)
    consider(b, x, delta, ext.graph_minus.row(ct.witness_past).transpose(), best);
  if (ct.witness_fut >= 0)
    consider(b, x, delta, (-ext.graph_plus.row(ct.witness_fut)).transpose(), best);
  // coarse sweep over the center fiber as a fallback
  const Scalar f_med = b.values.mean();
  Vec y0 = Vec::Zero(n + 1);
  y0(n) = 1.0;
  for (int side = 0; side < 2; ++side) {
    const Scalar s_center = f_med + (side == 0 ? -1.0 : 1.0) * (kPi / 2);
    for (int k = -25; k <= 25; ++k)
      consider(b, x, delta, embed(y0, s_center + 0.04 * k), best);
  }
  if (!best.e.size()) {
    SupportSearchResult r;
    r.P = standard_umbilical(n, delta);
    r.certified = false;
    return r;
  }

  // local refinement in (klein offset, fiber angle)
  Scalar step_k = 0.15, step_s = 0.04;
  for (int round = 0; round < 7; ++round) {
    Candidate cur = best;
    const Vec e0 = cur.e;
    // current base slice point and fiber of e0
    Vec y0(n + 1);
    const Scalar r = std::hypot(e0(n), e0(n + 1));
    y0.head(n) = e0.head(n);
    y0(n) = r;
    const Scalar s0 = std::atan2(e0(n) / r, e0(n + 1) / r);
    const Vec k0 = y0.head(n) / y0(n);
    for (int a = -2; a <= 2; ++a)
      for (int bb = -2; bb <= 2; ++bb)
        for (int c = -2; c <= 2; ++c) {
          Vec k = k0;
          k(0) += step_k * a;
          if (n >= 2) k(1) += step_k * bb;
          if (k.norm() >= 0.995) continue;
          Vec y(n + 1);
          const Scalar w = 1.0 / std::sqrt(1.0 - k.squaredNorm());
          y.head(n) = k * w;
          y(n) = w;
          consider(b, x, delta, embed(y, s0 + step_s * c), best);
        }
    step_k /= 2.5;
    step_s /= 2.5;
  }

  SupportSearchResult res;
  res.P = UmbilicalHypersurface{AdSPoint(best.e), delta};
  res.sin_dist = best.v_abs;
  res.boundary_slack = best.slack;
  res.past_side = best.past_side;
  res.certified = best.v_abs <= target_sin_dist + tol;
  return res;
}

}  // namespace adslab
