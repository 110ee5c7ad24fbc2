#include "ampere/sections.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace ampere {

namespace {

// Barrier objective for the inscribed-ellipsoid program. Unknowns
// theta = (cx, cy, l11, l21, l22), E = c + L B_1 with L lower triangular.
struct MvieProblem {
  const std::vector<HalfPlane>* hp;

  // phi_i = d_i - n_i.c - |L^T n_i| > 0 is feasibility.
  double slack(const double* th, size_t i, Vec2* v_out = nullptr) const {
    const HalfPlane& H = (*hp)[i];
    Vec2 v{th[2] * H.n.x + th[3] * H.n.y, th[4] * H.n.y};
    if (v_out) *v_out = v;
    return H.c - (H.n.x * th[0] + H.n.y * th[1]) - norm(v);
  }

  bool feasible(const double* th) const {
    if (th[2] <= 0.0 || th[4] <= 0.0) return false;
    for (size_t i = 0; i < hp->size(); ++i)
      if (slack(th, i) <= 0.0) return false;
    return true;
  }

  double value(double t, const double* th) const {
    double f = -t * (std::log(th[2]) + std::log(th[4]));
    for (size_t i = 0; i < hp->size(); ++i) {
      double s = slack(th, i);
      if (s <= 0.0) return 1e300;
      f -= std::log(s);
    }
    return f;
  }

  void grad_hess(double t, const double* th, Eigen::Matrix<double, 5, 1>& g,
                 Eigen::Matrix<double, 5, 5>& H) const {
    g.setZero();
    H.setZero();
    g[2] = -t / th[2];
    g[4] = -t / th[4];
    H(2, 2) = t / (th[2] * th[2]);
    H(4, 4) = t / (th[4] * th[4]);
    for (size_t i = 0; i < hp->size(); ++i) {
      const HalfPlane& hpi = (*hp)[i];
      Vec2 v;
      double s = slack(th, i, &v);
      double nv = norm(v);
      // dv/dl11 = (nx, 0), dv/dl21 = (ny, 0), dv/dl22 = (0, ny).
      Eigen::Matrix<double, 5, 1> ds;  // gradient of phi_i
      ds[0] = -hpi.n.x;
      ds[1] = -hpi.n.y;
      ds[2] = -hpi.n.x * v.x / nv;
      ds[3] = -hpi.n.y * v.x / nv;
      ds[4] = -hpi.n.y * v.y / nv;
      g -= ds / s;
      H += ds * ds.transpose() / (s * s);
      // Second derivative of -|v|: -(w_a^T P w_b)/|v| with P = I - vv^T/|v|^2.
      double px = 1.0 - v.x * v.x / (nv * nv);
      double py = 1.0 - v.y * v.y / (nv * nv);
      double pxy = -v.x * v.y / (nv * nv);
      // w indexed over (l11, l21, l22) as above.
      double W[3][2] = {{hpi.n.x, 0.0}, {hpi.n.y, 0.0}, {0.0, hpi.n.y}};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double q = W[a][0] * (px * W[b][0] + pxy * W[b][1]) + W[a][1] * (pxy * W[b][0] + py * W[b][1]);
          H(2 + a, 2 + b) += (q / nv) / s;  // -phi'' / s with phi'' = -q/nv
        }
    }
  }
};

}  // namespace

Ellipsoid john_ellipsoid(const ConvexDomain& K, const Tolerances& tol) {
  MvieProblem prob{&K.half_planes};
  Vec2 c0 = K.centroid();
  double r0 = 1e300;
  for (auto& hp : K.half_planes) r0 = std::min(r0, hp.c - dot(hp.n, c0));
  if (!(r0 > 0.0)) throw std::invalid_argument("john_ellipsoid: degenerate polygon");
  double th[5] = {c0.x, c0.y, 0.9 * r0, 0.0, 0.9 * r0};

  double m = double(K.half_planes.size());
  for (double t = 1.0; t <= 1e12 * m; t *= 20.0) {
    for (int it = 0; it < 100; ++it) {
      Eigen::Matrix<double, 5, 1> g;
      Eigen::Matrix<double, 5, 5> H;
      prob.grad_hess(t, th, g, H);
      Eigen::Matrix<double, 5, 1> step = H.ldlt().solve(-g);
      double decrement = std::sqrt(std::max(0.0, -double(g.dot(step))));
      double f0 = prob.value(t, th);
      double alpha = 1.0;
      double trial[5];
      for (int ls = 0; ls < 50; ++ls, alpha *= 0.5) {
        for (int k = 0; k < 5; ++k) trial[k] = th[k] + alpha * step[k];
        if (prob.feasible(trial) && prob.value(t, trial) <= f0 - 0.25 * alpha * decrement * decrement) break;
      }
      for (int k = 0; k < 5; ++k) th[k] = trial[k];
      if (decrement < 1e-8) break;
    }
    if (m / t < 1e-10) break;
  }

  Ellipsoid E;
  E.center = {th[0], th[1]};
  // shape = (L L^T)^{-1}.
  double l11 = th[2], l21 = th[3], l22 = th[4];
  Sym2 LL{l11 * l11, l11 * l21, l21 * l21 + l22 * l22};
  E.shape = LL.inverse();

  // Containment certificates.
  double scale = K.diameter();
  for (size_t i = 0; i < K.half_planes.size(); ++i)
    if (prob.slack(th, i) < -tol.geom * scale) throw std::runtime_error("john_ellipsoid: E escapes K");
  for (auto& w : K.vertices) {
    double q = E.shape.quad(w - E.center);
    if (q > 4.0 * (1.0 + tol.ineq) + tol.ineq) throw std::runtime_error("john_ellipsoid: 2-dilation misses K");
  }
  return E;
}

Normalization normalize(const ConvexDomain& K, const Tolerances& tol) {
  Ellipsoid E = john_ellipsoid(K, tol);
  // Factor shape = R^T R (Cholesky); T(x) = R (x - c) maps E to B_1.
  double a = std::sqrt(E.shape.a11);
  double b = E.shape.a12 / a;
  double d = std::sqrt(std::max(E.shape.a22 - b * b, 1e-300));
  Mat2 R{a, b, 0.0, d};
  Normalization N;
  N.map.A = R;
  N.map.b = {-dot(Vec2{R.a11, R.a12}, E.center), -dot(Vec2{R.a21, R.a22}, E.center)};
  std::vector<Vec2> verts;
  for (auto& w : K.vertices) verts.push_back(N.map(w));
  N.normalized = ConvexDomain::from_vertices(verts, tol);
  for (auto& w : N.normalized.vertices) {
    double r = norm(w);
    if (r > 2.0 * (1.0 + tol.ineq) + tol.ineq) throw std::runtime_error("normalize: image escapes B_2");
  }
  // B_1 inside: every half plane of the image at distance >= 1.
  for (auto& hp : N.normalized.half_planes)
    if (hp.c < 1.0 - tol.ineq) throw std::runtime_error("normalize: B_1 not inside the image");
  return N;
}

namespace {

Section finish_section(std::vector<Vec2>&& pts, Vec2 x0, Vec2 slope, double height, bool clipped,
                       std::vector<int>&& realized) {
  Section s;
  s.center = x0;
  s.slope = slope;
  s.height = height;
  s.realized = std::move(realized);
  // Sections of convex functions are convex; the hull orders the marched
  // crossing points into the boundary polygon.
  s.boundary_polygon = convex_hull(std::move(pts));
  s.volume = s.boundary_polygon.size() >= 3 ? polygon_area(s.boundary_polygon) : 0.0;
  s.clipped = clipped;
  return s;
}

}  // namespace

Section extract_section(const GridFunction& u, Vec2 x0, double height, std::optional<Vec2> slope) {
  if (!(height > 0.0)) throw std::invalid_argument("extract_section: height must be positive");
  int ci = int(std::lround((x0.x - u.origin.x) / u.h));
  int cj = int(std::lround((x0.y - u.origin.y) / u.h));
  if (!u.interior(ci, cj)) throw std::invalid_argument("extract_section: center not interior");
  Vec2 xc = u.point(ci, cj);
  Vec2 p = slope ? *slope
                 : Vec2{(u.at(ci + 1, cj) - u.at(ci - 1, cj)) / (2.0 * u.h),
                        (u.at(ci, cj + 1) - u.at(ci, cj - 1)) / (2.0 * u.h)};
  double u0 = u.at(ci, cj);
  auto phi = [&](int i, int j) { return u.at(i, j) - (u0 + dot(p, u.point(i, j) - xc)) - height; };

  // Connected component of { phi < 0 } containing the center (4-neighbor).
  std::vector<uint8_t> comp(u.mask.size(), 0);
  std::vector<int> realized;
  bool clipped = false;
  std::queue<std::pair<int, int>> bfs;
  if (phi(ci, cj) >= 0.0) throw std::invalid_argument("extract_section: center outside its own section");
  bfs.push({ci, cj});
  comp[u.idx(ci, cj)] = 1;
  while (!bfs.empty()) {
    auto [i, j] = bfs.front();
    bfs.pop();
    realized.push_back(u.idx(i, j));
    if (u.mask[u.idx(i, j)] == 1) clipped = true;  // reached the Dirichlet layer
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int s = 0; s < 4; ++s) {
      int ii = i + di[s], jj = j + dj[s];
      if (!u.inside(ii, jj)) {
        clipped = true;
        continue;
      }
      int node = u.idx(ii, jj);
      if (comp[node] || phi(ii, jj) >= 0.0) continue;
      comp[node] = 1;
      bfs.push({ii, jj});
    }
  }
  std::sort(realized.begin(), realized.end());

  // Marching crossings along lattice edges out of the component.
  std::vector<Vec2> pts;
  for (int node : realized) {
    int i = node % u.nx, j = node / u.nx;
    double p0 = phi(i, j);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int s = 0; s < 4; ++s) {
      int ii = i + di[s], jj = j + dj[s];
      if (!u.inside(ii, jj)) {
        pts.push_back(u.point(i, j));  // clipped: close along the boundary
        continue;
      }
      double p1 = phi(ii, jj);
      if (p1 < 0.0) continue;
      double tcr = p0 / (p0 - p1);
      pts.push_back(u.point(i, j) + tcr * (u.point(ii, jj) - u.point(i, j)));
    }
  }
  return finish_section(std::move(pts), xc, p, height, clipped, std::move(realized));
}

Section extract_section(const PLConvexFunction& u, Vec2 x0, double height, std::optional<Vec2> slope) {
  if (!(height > 0.0)) throw std::invalid_argument("extract_section: height must be positive");
  Vec2 p;
  double u0;
  if (slope) {
    p = *slope;
    u0 = u.eval(x0);
  } else {
    // Nearest vertex: centroid of the subdifferential there, else the
    // containing triangle's gradient.
    int best = -1;
    double bd = 1e300;
    for (int v = 0; v < u.mesh.n_vertices(); ++v) {
      double d = norm2(u.mesh.pts[v] - x0);
      if (d < bd) {
        bd = d;
        best = v;
      }
    }
    if (best >= 0 && bd <= 1e-20) {
      if (u.mesh.is_boundary[best]) throw std::invalid_argument("extract_section: center on the boundary");
      auto sd = subdifferential(u, best);
      p = polygon_centroid(sd.slopes);
      u0 = u.values[best];
      x0 = u.mesh.pts[best];
    } else {
      int t = u.mesh.locate(x0, 1e-9);
      if (t < 0) throw std::invalid_argument("extract_section: center outside the mesh");
      p = u.tri_grad[t];
      u0 = u.eval(x0);
    }
  }
  auto phi_v = [&](int v) { return u.values[v] - (u0 + dot(p, u.mesh.pts[v] - x0)) - height; };
  std::vector<int> realized;
  bool clipped = false;
  for (int v = 0; v < u.mesh.n_vertices(); ++v)
    if (phi_v(v) < 0.0) {
      realized.push_back(v);
      if (u.mesh.is_boundary[v]) clipped = true;
    }
  std::vector<Vec2> pts;
  // Exact crossings on mesh edges.
  for (int t = 0; t < u.mesh.n_triangles(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = u.mesh.tris[t][e], b = u.mesh.tris[t][(e + 1) % 3];
      if (u.mesh.nbr[t][e] >= 0 && u.mesh.nbr[t][e] < t) continue;  // visit each edge once
      double pa = phi_v(a), pb = phi_v(b);
      if ((pa < 0.0) == (pb < 0.0)) continue;
      double s = pa / (pa - pb);
      pts.push_back(u.mesh.pts[a] + s * (u.mesh.pts[b] - u.mesh.pts[a]));
    }
  for (int v : realized)
    if (u.mesh.is_boundary[v]) pts.push_back(u.mesh.pts[v]);
  return finish_section(std::move(pts), x0, p, height, clipped, std::move(realized));
}

SectionField field_of(const GridFunction& u) {
  SectionField f;
  f.eval = [&u](Vec2 q) { return u.bilinear(q); };
  f.slope_at = [&u](Vec2 q) {
    int i = int(std::lround((q.x - u.origin.x) / u.h));
    int j = int(std::lround((q.y - u.origin.y) / u.h));
    if (!u.interior(i, j)) throw std::invalid_argument("slope_at: not an interior node");
    return Vec2{(u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * u.h),
                (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * u.h)};
  };
  f.anchor = [&u](Vec2 q) {
    int i = int(std::lround((q.x - u.origin.x) / u.h));
    int j = int(std::lround((q.y - u.origin.y) / u.h));
    return u.point(i, j);
  };
  f.extract = [&u](Vec2 x0, double h, std::optional<Vec2> p) { return extract_section(u, x0, h, p); };
  return f;
}

SectionField field_of(const PLConvexFunction& u) {
  SectionField f;
  f.eval = [&u](Vec2 q) { return u.eval(q); };
  f.anchor = [](Vec2 q) { return q; };
  f.slope_at = [&u](Vec2 q) {
    for (int v = 0; v < u.mesh.n_vertices(); ++v)
      if (norm2(u.mesh.pts[v] - q) <= 1e-20) {
        if (u.mesh.is_boundary[v]) throw std::invalid_argument("slope_at: boundary vertex");
        return polygon_centroid(subdifferential(u, v).slopes);
      }
    int t = u.mesh.locate(q, 1e-9);
    if (t < 0) throw std::invalid_argument("slope_at: outside the mesh");
    return u.tri_grad[t];
  };
  f.extract = [&u](Vec2 x0, double h, std::optional<Vec2> p) { return extract_section(u, x0, h, p); };
  return f;
}

VolumeSweep section_volume_sweep(const SectionField& f, Vec2 x0, const std::vector<double>& heights,
                                 double ratio_bound) {
  VolumeSweep sweep;
  sweep.ratio_min = 1e300;
  sweep.ratio_max = -1e300;
  for (double h : heights) {
    Section s = f.extract(x0, h, {});
    VolumeSweepRow row{h, s.volume, s.volume / h, s.clipped};
    sweep.rows.push_back(row);
    if (!s.clipped) {
      sweep.ratio_min = std::min(sweep.ratio_min, row.ratio);
      sweep.ratio_max = std::max(sweep.ratio_max, row.ratio);
    }
  }
  sweep.pass = sweep.ratio_max > 0 && sweep.ratio_max / sweep.ratio_min <= ratio_bound;
  return sweep;
}

namespace {

// Is S(y, h) inside S(x, theta h)? Sufficient on the inner polygon's
// vertices since sections of convex functions are convex.
bool engulfed(const SectionField& f, const Section& inner, Vec2 x, Vec2 px, double ux, double theta,
              double h) {
  for (auto& q : inner.boundary_polygon) {
    if (f.eval(q) - (ux + dot(px, q - x)) >= theta * h) return false;
  }
  return true;
}

}  // namespace

EngulfingReport engulfing_constant(const SectionField& f, const std::vector<std::pair<Vec2, double>>& pairs,
                                   const Tolerances& tol) {
  (void)tol;
  EngulfingReport rep;
  rep.theta = 2.0;
  int admissible = 0;
  for (auto& [y, h] : pairs) {
    Section outer = f.extract(y, 2.0 * h, {});
    if (outer.clipped) continue;
    Section inner = f.extract(y, h, {});
    ++admissible;
    // Probe points x in S(y, h): its center and polygon vertices pulled
    // slightly inside, anchored to exact samples so the slope and the value
    // are taken at the same point. Points that leave the section under
    // anchoring are skipped.
    double uy = f.eval(f.anchor(y));
    Vec2 py = f.slope_at(f.anchor(y));
    Vec2 ya = f.anchor(y);
    std::vector<Vec2> xs = {ya};
    for (auto& q : inner.boundary_polygon) xs.push_back(f.anchor(y + 0.999 * (q - y)));
    for (auto& x : xs) {
      if (f.eval(x) - (uy + dot(py, x - ya)) >= h) continue;
      Vec2 px = f.slope_at(x);
      double ux = f.eval(x);
      double lo = 2.0, hi = 64.0;
      if (!engulfed(f, inner, x, px, ux, hi, h)) {
        rep.theta = hi;
        rep.worst_y = y;
        rep.worst_h = h;
        continue;
      }
      if (engulfed(f, inner, x, px, ux, lo, h)) continue;
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (engulfed(f, inner, x, px, ux, mid, h))
          hi = mid;
        else
          lo = mid;
      }
      if (hi > rep.theta) {
        rep.theta = hi;
        rep.worst_y = y;
        rep.worst_h = h;
      }
    }
  }
  rep.pairs = admissible;
  if (admissible == 0) throw std::invalid_argument("engulfing_constant: no admissible samples");
  return rep;
}

InclusionExclusionReport inclusion_exclusion_probe(const SectionField& f, Vec2 x0, double t, double r, double s,
                                                   double p1, int n_samples, const Tolerances& tol,
                                                   double frac_cap) {
  (void)tol;
  if (!(0.0 < r && r < s && s <= 1.0)) throw std::invalid_argument("inclusion_exclusion_probe: need 0 < r < s <= 1");
  Section big = f.extract(x0, 2.0 * t, {});
  if (big.clipped) throw std::invalid_argument("inclusion_exclusion_probe: S(x0, 2t) not compactly included");
  Section Sr = f.extract(x0, r * t, {});
  Section Ss = f.extract(x0, s * t, {});
  Section St = f.extract(x0, t, {});
  double u0 = f.eval(x0);
  Vec2 p0 = Sr.slope;
  auto in_height = [&](Vec2 q, double hh) { return f.eval(q) - (u0 + dot(p0, q - x0)) < hh; };

  InclusionExclusionReport rep;
  rep.inclusion_c = 1e300;
  rep.exclusion_c = 1e300;
  double scale = std::pow(s - r, p1) * t;
  // Inclusion: x1 inside S(x0, r t), sampled up to the boundary where the
  // admissible height is smallest. Samples are anchored to exact function
  // samples and must remain inside after anchoring.
  int m = std::max(1, n_samples);
  for (int k = 0; k < m; ++k) {
    double frac = frac_cap * double(k + 1) / m;
    for (auto& q : Sr.boundary_polygon) {
      Vec2 x1 = f.anchor(x0 + frac * (q - x0));
      if (!in_height(x1, r * t)) continue;
      double lo = 0.0, hi = 4.0 * t / scale;
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        Section cand = f.extract(x1, mid * scale, {});
        bool inside = !cand.clipped;
        for (auto& w : cand.boundary_polygon)
          if (inside && !(f.eval(w) - (u0 + dot(p0, w - x0)) < s * t)) inside = false;
        if (inside)
          lo = mid;
        else
          hi = mid;
      }
      rep.inclusion_c = std::min(rep.inclusion_c, lo);
      ++rep.samples;
    }
    if (m == 1) break;
  }
  // Exclusion: x1 in S(x0, t) \ S(x0, s t).
  auto realized_disjoint = [](const Section& a, const Section& b) {
    size_t i = 0, j = 0;
    while (i < a.realized.size() && j < b.realized.size()) {
      if (a.realized[i] == b.realized[j]) return false;
      if (a.realized[i] < b.realized[j])
        ++i;
      else
        ++j;
    }
    return true;
  };
  for (auto& q : St.boundary_polygon) {
    Vec2 x1 = f.anchor(x0 + 0.999 * (q - x0));
    if (in_height(x1, s * t) || !in_height(x1, t)) continue;
    Vec2 p1v = f.slope_at(x1);
    double u1 = f.eval(x1);
    double lo = 0.0, hi = 4.0 * t / scale;
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (lo + hi);
      Section cand = f.extract(x1, mid * scale, {});
      bool disjoint = realized_disjoint(cand, Sr);
      for (auto& w : cand.boundary_polygon)
        if (disjoint && in_height(w, r * t)) disjoint = false;
      for (auto& w : Sr.boundary_polygon)
        if (disjoint && f.eval(w) - (u1 + dot(p1v, w - x1)) < mid * scale) disjoint = false;
      if (disjoint)
        lo = mid;
      else
        hi = mid;
    }
    rep.exclusion_c = std::min(rep.exclusion_c, lo);
  }
  return rep;
}

CoveringSelection vitali_select(const SectionField& f, const std::vector<std::pair<Vec2, double>>& family,
                                double theta0) {
  CoveringSelection out;
  out.K = 2.0 * theta0 * theta0;
  if (family.empty()) return out;
  double H = 0.0;
  for (auto& [c, h] : family) H = std::max(H, h);
  std::vector<Section> secs;
  secs.reserve(family.size());
  for (auto& [c, h] : family) secs.push_back(f.extract(c, h, {}));

  std::vector<int> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  auto bucket = [&](int i) {
    double h = family[i].second;
    return std::max(0, int(std::ceil(std::log2(H / h))));  // H/2^b < h <= H/2^{b-1}
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int ba = bucket(a), bb = bucket(b);
    if (ba != bb) return ba < bb;
    if (family[a].second != family[b].second) return family[a].second > family[b].second;
    Vec2 ca = family[a].first, cb = family[b].first;
    if (ca.x != cb.x) return ca.x < cb.x;
    return ca.y < cb.y;
  });
  auto disjoint = [&](const Section& a, const Section& b) {
    // Realized node sets are sorted index lists.
    size_t i = 0, j = 0;
    while (i < a.realized.size() && j < b.realized.size()) {
      if (a.realized[i] == b.realized[j]) return false;
      if (a.realized[i] < b.realized[j])
        ++i;
      else
        ++j;
    }
    return true;
  };
  for (int i : order) {
    bool ok = true;
    for (int c : out.chosen)
      if (!disjoint(secs[i], secs[c])) {
        ok = false;
        break;
      }
    if (ok) out.chosen.push_back(i);
  }
  return out;
}

C1AlphaReport c1alpha_inclusion_probe(const SectionField& f, const Tolerances& tol) {
  Section s1 = f.extract({0, 0}, 1.0, Vec2{0, 0});
  Section s12 = f.extract({0, 0}, 0.5, Vec2{0, 0});
  if (s1.clipped || s12.clipped) throw std::invalid_argument("c1alpha_inclusion_probe: clipped sections");
  double u0 = f.eval({0, 0});
  auto both_hold = [&](double delta) {
    for (auto& q : s1.boundary_polygon) {
      Vec2 w = (0.5 + delta) * q;
      if (!(f.eval(w) - u0 < 0.5)) return false;
    }
    for (auto& q : s12.boundary_polygon) {
      Vec2 w = (1.0 / (1.0 - delta)) * q;
      if (!(f.eval(w) - u0 < 1.0)) return false;
    }
    return true;
  };
  C1AlphaReport rep;
  if (!both_hold(tol.ineq)) {
    rep.degenerate = true;
    return rep;
  }
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    if (both_hold(mid))
      lo = mid;
    else
      hi = mid;
  }
  rep.delta = lo;
  return rep;
}

double theta_probe(const SectionField& f, double height) {
  Section s = f.extract({0, 0}, height, Vec2{0, 0});
  if (s.clipped) throw std::invalid_argument("theta_probe: clipped section");
  double u0 = f.eval({0, 0});
  auto holds = [&](double theta) {
    for (auto& q : s.boundary_polygon)
      if (f.eval(theta * q) - u0 < 0.5 * (f.eval(q) - u0)) return false;
    return true;
  };
  double lo = 0.5, hi = 1.0;
  if (!holds(1.0 - 1e-9)) return 1.0;
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double section_size_exponent(const SectionField& f, Vec2 z, const std::vector<double>& heights) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (double h : heights) {
    Section s = f.extract(z, h, {});
    if (s.clipped || s.boundary_polygon.size() < 3) continue;
    double d = polygon_diameter(s.boundary_polygon);
    double X = std::log(h), Y = std::log(d);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("section_size_exponent: not enough admissible heights");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace ampere
