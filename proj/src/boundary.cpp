#include "adslab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adslab {

Scalar FourierSeries::eval(Scalar theta) const {
  Scalar s = cos_coeffs.size() > 0 ? cos_coeffs(0) : 0.0;
  for (Index k = 1; k < cos_coeffs.size(); ++k) s += cos_coeffs(k) * std::cos(k * theta);
  for (Index k = 0; k < sin_coeffs.size(); ++k) s += sin_coeffs(k) * std::sin((k + 1) * theta);
  return s;
}

Scalar FourierSeries::deriv(Scalar theta) const {
  Scalar s = 0;
  for (Index k = 1; k < cos_coeffs.size(); ++k) s -= k * cos_coeffs(k) * std::sin(k * theta);
  for (Index k = 0; k < sin_coeffs.size(); ++k)
    s += (k + 1) * sin_coeffs(k) * std::cos((k + 1) * theta);
  return s;
}

Scalar FourierSeries::max_abs_deriv(int probe) const {
  Scalar m = 0;
  for (int i = 0; i < probe; ++i) m = std::max(m, std::abs(deriv(2.0 * kPi * i / probe)));
  return m;
}

Vec null_rep_of(const Vec& dir, Scalar value) {
  Vec z(dir.size() + 2);
  z.head(dir.size()) = dir;
  z(dir.size()) = std::sin(value);
  z(dir.size() + 1) = std::cos(value);
  return z;
}

Vec AdmissibleBoundary::null_rep(Index i) const {
  return null_rep_of(dirs.row(i).transpose(), values(i));
}

Scalar AdmissibleBoundary::value_at(Scalar theta) const {
  if (generator) return generator->eval(theta);
  if (n != 2 || angles.size() == 0)
    throw std::logic_error("value_at: no generator and no circle samples");
  const Index N = angles.size();
  Scalar t = std::fmod(theta, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  Index hi = static_cast<Index>(std::lower_bound(angles.data(), angles.data() + N, t) -
                                angles.data());
  const Index lo = (hi + N - 1) % N;
  hi = hi % N;
  Scalar a0 = angles(lo), a1 = angles(hi);
  Scalar span = a1 - a0;
  if (span <= 0) span += 2.0 * kPi;
  Scalar off = t - a0;
  if (off < 0) off += 2.0 * kPi;
  const Scalar w = span > 0 ? off / span : 0.0;
  return (1.0 - w) * values(lo) + w * values(hi);
}

AdmissibleBoundary make_boundary_fourier(int num_samples, FourierSeries gen, Scalar margin) {
  AdmissibleBoundary b;
  b.n = 2;
  b.margin = margin;
  b.angles.resize(num_samples);
  b.values.resize(num_samples);
  b.dirs.resize(num_samples, 2);
  for (int i = 0; i < num_samples; ++i) {
    const Scalar th = 2.0 * kPi * i / num_samples;
    b.angles(i) = th;
    b.values(i) = gen.eval(th);
    b.dirs(i, 0) = std::cos(th);
    b.dirs(i, 1) = std::sin(th);
  }
  b.generator = std::move(gen);
  return b;
}

AdmissibleBoundary make_boundary_samples(Vec angles, Vec values, Scalar margin) {
  if (angles.size() != values.size() || angles.size() == 0)
    throw std::invalid_argument("make_boundary_samples: bad sample arrays");
  std::vector<Index> order(angles.size());
  for (Index i = 0; i < angles.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Index a, Index c) { return angles(a) < angles(c); });
  AdmissibleBoundary b;
  b.n = 2;
  b.margin = margin;
  const Index N = angles.size();
  b.angles.resize(N);
  b.values.resize(N);
  b.dirs.resize(N, 2);
  for (Index i = 0; i < N; ++i) {
    b.angles(i) = angles(order[i]);
    b.values(i) = values(order[i]);
    b.dirs(i, 0) = std::cos(b.angles(i));
    b.dirs(i, 1) = std::sin(b.angles(i));
  }
  return b;
}

AdmissibleBoundary make_boundary_constant(int n, int num_samples, Scalar value, Scalar margin) {
  if (n == 2) {
    FourierSeries g;
    g.cos_coeffs = Vec::Constant(1, value);
    return make_boundary_fourier(num_samples, g, margin);
  }
  if (n != 3) throw std::invalid_argument("make_boundary_constant: n must be 2 or 3");
  // Fibonacci sphere grid on S^2
  AdmissibleBoundary b;
  b.n = 3;
  b.margin = margin;
  b.dirs.resize(num_samples, 3);
  b.values = Vec::Constant(num_samples, value);
  const Scalar ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < num_samples; ++i) {
    const Scalar z = 1.0 - 2.0 * (i + 0.5) / num_samples;
    const Scalar r = std::sqrt(std::max(0.0, 1.0 - z * z));
    b.dirs(i, 0) = r * std::cos(ga * i);
    b.dirs(i, 1) = r * std::sin(ga * i);
    b.dirs(i, 2) = z;
  }
  return b;
}

namespace {
// fiber values are angles; differences live on the circle
Scalar circle_gap(Scalar a, Scalar b) {
  Scalar d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}
}  // namespace

BoundaryCertificate validate(const AdmissibleBoundary& b) {
  if (b.num_samples() == 0) throw std::invalid_argument("validate: empty grid");
  BoundaryCertificate cert;
  const Index N = b.num_samples();
  Scalar lip = 0;
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j) {
      const Scalar d = std::acos(std::clamp(b.dirs.row(i).dot(b.dirs.row(j)), -1.0, 1.0));
      const Scalar df = circle_gap(b.values(i), b.values(j));
      if (d > 1e-12) lip = std::max(lip, df / d);
      if (df > d + 1e-12) cert.violations.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  cert.lipschitz_constant = lip;

  Scalar max_gap = 0;
  for (Index i = 0; i < N; ++i) {
    // nearest sample to the antipode of theta_i
    Index best = 0;
    Scalar bestdot = 2.0;
    for (Index j = 0; j < N; ++j) {
      const Scalar d = (b.dirs.row(i) + b.dirs.row(j)).norm();
      if (d < bestdot) {
        bestdot = d;
        best = j;
      }
    }
    max_gap = std::max(max_gap, circle_gap(b.values(i), b.values(best)));
  }
  cert.antipodal_margin = kPi - max_gap;
  cert.pass = cert.violations.empty() && cert.antipodal_margin >= b.margin;
  return cert;
}

std::pair<Scalar, Scalar> extension_bounds_at(const AdmissibleBoundary& b, const Vec& klein) {
  Scalar up = std::numeric_limits<Scalar>::infinity();
  Scalar um = -std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < b.num_samples(); ++i) {
    const Scalar d = std::acos(std::clamp(klein.dot(b.dirs.row(i).transpose()), -1.0, 1.0));
    up = std::min(up, b.values(i) + d);
    um = std::max(um, b.values(i) - d);
  }
  return {up, um};
}

ExtremalExtensions extremal_extensions(const AdmissibleBoundary& b, const DiscMesh& mesh) {
  ExtremalExtensions ext;
  ext.mesh = &mesh;
  const Index V = mesh.num_vertices();
  ext.u_plus.resize(V);
  ext.u_minus.resize(V);
  ext.graph_plus.resize(V, b.n + 2);
  ext.graph_minus.resize(V, b.n + 2);
  for (Index v = 0; v < V; ++v) {
    auto [up, um] = extension_bounds_at(b, mesh.klein(v));
    ext.u_plus(v) = up;
    ext.u_minus(v) = um;
    const Vec y = mesh.vertices.row(v).transpose();
    auto embed = [&](Scalar t) {
      Vec x(b.n + 2);
      x.head(b.n) = y.head(b.n);
      x(b.n) = y(b.n) * std::sin(t);
      x(b.n + 1) = y(b.n) * std::cos(t);
      return x;
    };
    ext.graph_plus.row(v) = embed(up).transpose();
    ext.graph_minus.row(v) = embed(um).transpose();
  }
  ext.t_plus = ext.u_plus;
  ext.t_minus = ext.u_minus;
  return ext;
}

bool invisible_domain_contains(const AdmissibleBoundary& b, const AdSPoint& p) {
  for (Index i = 0; i < b.num_samples(); ++i)
    if (lorentz_dot(p.v, b.null_rep(i)) >= 0) return false;
  return true;
}

namespace {

// distance from p to the sheet point over Klein coordinates k; the sheet
// value comes from the extension formulas, so any k can be probed
Scalar sheet_distance(const AdmissibleBoundary& b, const AdSPoint& p, const Vec& k, bool lower,
                      Scalar tp) {
  const Vec dots = (b.dirs * k).array().min(1.0).max(-1.0).acos().matrix();
  const Scalar t = lower ? (b.values - dots).maxCoeff() : (b.values + dots).minCoeff();
  if (lower ? (t >= tp) : (t <= tp)) return -1.0;
  const Scalar w = 1.0 / std::sqrt(std::max(1e-12, 1.0 - k.squaredNorm()));
  Vec x(b.n + 2);
  x.head(b.n) = k * w;
  x(b.n) = w * std::sin(t);
  x(b.n + 1) = w * std::cos(t);
  const Scalar c = lorentz_dot(p.v, x);
  if (c <= -1.0 + 1e-12 || c >= 1.0 - 1e-12) return -1.0;
  return std::acos(-c);
}

// The sheets are only Lipschitz with razor-sharp ridges, so the discrete
// argmax is polished by a compass search with uniform hyperbolic steps
// (taken along slice geodesics at the current point).
struct PolishResult {
  Scalar value = -1.0;
  Vec k;
};

PolishResult polish_sheet_distance(const AdmissibleBoundary& b, const AdSPoint& p,
                                   const Vec& seed, bool lower, Scalar tp, Scalar step,
                                   int rounds = 10) {
  const int n = b.n;
  PolishResult res;
  res.k = seed;
  res.value = sheet_distance(b, p, seed, lower, tp);
  // lift to the hyperboloid of the slice
  auto lift = [&](const Vec& k) {
    const Scalar w = 1.0 / std::sqrt(std::max(1e-12, 1.0 - k.squaredNorm()));
    Vec y(n + 1);
    y.head(n) = k * w;
    y(n) = w;
    return y;
  };
  auto to_klein = [&](const Vec& y) { return (y.head(n) / y(n)).eval(); };
  Vec y = lift(seed);
  Scalar srad = step;
  for (int round = 0; round < rounds; ++round) {
    // orthonormal tangent frame at y
    Mat E(n + 1, n);
    int have = 0;
    for (int c = 0; c < n + 1 && have < n; ++c) {
      Vec w = Vec::Zero(n + 1);
      w(c) = 1.0;
      w += hyp_dot(w, y) * y;
      for (int s2 = 0; s2 < have; ++s2) w -= hyp_dot(w, E.col(s2)) * E.col(s2);
      const Scalar q = hyp_dot(w, w);
      if (q > 1e-10) E.col(have++) = w / std::sqrt(q);
    }
    if (have < n) break;
    Vec ybest = y;
    bool moved = false;
    const int dirs = n == 2 ? 8 : 2 * n;
    for (int m = 0; m < dirs; ++m) {
      Vec dir;
      if (n == 2) {
        const Scalar ang = 2.0 * kPi * m / dirs;
        dir = std::cos(ang) * E.col(0) + std::sin(ang) * E.col(1);
      } else {
        dir = (m % 2 ? -1.0 : 1.0) * E.col(m / 2);
      }
      Vec y2 = std::cosh(srad) * y + std::sinh(srad) * dir;
      Vec k2 = to_klein(y2);
      if (k2.norm() > 0.9993) continue;
      const Scalar d = sheet_distance(b, p, k2, lower, tp);
      if (d > res.value) {
        res.value = d;
        ybest = y2;
        moved = true;
      }
    }
    y = ybest;
    if (!moved) srad /= 2.0;
  }
  res.k = to_klein(y);
  return res;
}

}  // namespace

CosmologicalTimes cosmological_times(const AdmissibleBoundary& b, const AdSPoint& p,
                                     const ExtremalExtensions& ext) {
  return cosmological_times_seeded(b, p, ext, nullptr, nullptr);
}

CosmologicalTimes cosmological_times_seeded(const AdmissibleBoundary& b, const AdSPoint& p,
                                            const ExtremalExtensions& ext, Vec* k_past_io,
                                            Vec* k_fut_io) {
  if (!invisible_domain_contains(b, p))
    throw std::domain_error("cosmological_times: point outside the invisible domain");
  CosmologicalTimes out;
  const Splitting s = standard_splitting(b.n);
  const Scalar tp = splitting_project(s, p).t;
  const Index V = ext.graph_minus.rows();
  // a few best grid candidates per sheet, to seed the polish
  constexpr int kSeeds = 3;
  struct Top {
    Scalar d[kSeeds] = {-1, -1, -1};
    int v[kSeeds] = {-1, -1, -1};
    void offer(Scalar dist, int idx) {
      for (int a = 0; a < kSeeds; ++a)
        if (dist > d[a]) {
          for (int c = kSeeds - 1; c > a; --c) {
            d[c] = d[c - 1];
            v[c] = v[c - 1];
          }
          d[a] = dist;
          v[a] = idx;
          return;
        }
    }
  } top_past, top_fut;
  for (Index v = 0; v < V; ++v) {
    // past sheet: only graph points in the past of p contribute
    if (ext.t_minus(v) < tp) {
      const Scalar c = lorentz_dot(p.v, ext.graph_minus.row(v).transpose());
      if (c > -1.0 + 1e-12 && c < 1.0 - 1e-12)
        top_past.offer(std::acos(-c), static_cast<int>(v));
    }
    if (ext.t_plus(v) > tp) {
      const Scalar c = lorentz_dot(p.v, ext.graph_plus.row(v).transpose());
      if (c > -1.0 + 1e-12 && c < 1.0 - 1e-12)
        top_fut.offer(std::acos(-c), static_cast<int>(v));
    }
  }
  out.tau_past = std::max(0.0, top_past.d[0]);
  out.witness_past = top_past.v[0];
  out.tau_fut = std::max(0.0, top_fut.d[0]);
  out.witness_fut = top_fut.v[0];

  const Scalar step = 0.7 * (ext.mesh ? ext.mesh->h_max : 0.2);
  auto refine = [&](bool lower, Scalar cur, const Top& top, Vec* io) {
    Scalar best = cur;
    Vec kbest;
    std::vector<Vec> done;
    auto near_done = [&](const Vec& k) {
      const Scalar w = 1.0 / std::sqrt(std::max(1e-12, 1.0 - k.squaredNorm()));
      for (const Vec& q : done) {
        const Scalar wq = 1.0 / std::sqrt(std::max(1e-12, 1.0 - q.squaredNorm()));
        const Scalar ch = w * wq * (1.0 - k.dot(q));
        if (std::acosh(std::max(1.0, ch)) < 0.9 * step) return true;
      }
      return false;
    };
    auto run_seed = [&](const Vec& seed, Scalar s0, int rounds) {
      if (near_done(seed)) return;
      const PolishResult r = polish_sheet_distance(b, p, seed, lower, tp, s0, rounds);
      done.push_back(r.k);
      done.push_back(seed);
      if (r.value > best) {
        best = r.value;
        kbest = r.k;
      }
    };
    if (io && io->size() > 0) run_seed(*io, step / 2, 10);
    for (int a = 0; a < kSeeds; ++a) {
      if (top.v[a] < 0) continue;
      if (top.d[a] < top.d[0] - 0.3) break;
      run_seed(ext.mesh->klein(top.v[a]), step, 10);
    }
    if (io && kbest.size() > 0) *io = kbest;
    return best;
  };
  out.tau_past = refine(true, out.tau_past, top_past, k_past_io);
  out.tau_fut = refine(false, out.tau_fut, top_fut, k_fut_io);
  return out;
}

}  // namespace adslab
