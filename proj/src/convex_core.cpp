#include "ampere/convex_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ampere {

ConvexDomain ConvexDomain::from_vertices(std::vector<Vec2> vs, const Tolerances& tol) {
  size_t n = vs.size();
  if (n < 3) throw std::invalid_argument("domain: need at least 3 vertices");
  if (polygon_signed_area(vs) < 0) std::reverse(vs.begin(), vs.end());
  double area = polygon_signed_area(vs);
  if (area <= tol.geom) throw std::invalid_argument("domain: degenerate polygon");
  double scale = polygon_diameter(vs);
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n, k = (i + 2) % n;
    if (norm(vs[j] - vs[i]) <= tol.geom * scale) throw std::invalid_argument("domain: duplicate vertices");
    if (cross(vs[j] - vs[i], vs[k] - vs[j]) < -tol.geom * scale * scale)
      throw std::invalid_argument("domain: not convex");
  }
  ConvexDomain d;
  d.vertices = std::move(vs);
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    Vec2 e = d.vertices[j] - d.vertices[i];
    Vec2 nrm = Vec2{e.y, -e.x} / norm(e);  // outward for CCW
    d.half_planes.push_back({nrm, dot(nrm, d.vertices[i])});
  }
  return d;
}

ConvexDomain ConvexDomain::regular_polygon(Vec2 center, double R, int n) {
  std::vector<Vec2> vs;
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * i / n;
    vs.push_back(center + Vec2{R * std::cos(th), R * std::sin(th)});
  }
  return from_vertices(std::move(vs));
}

bool ConvexDomain::contains(Vec2 p, double slack) const {
  for (auto& hp : half_planes)
    if (dot(hp.n, p) > hp.c + slack) return false;
  return true;
}

double ConvexDomain::boundary_distance(Vec2 p) const {
  double d = 1e300;
  for (auto& hp : half_planes) d = std::min(d, hp.c - dot(hp.n, p));
  return d;
}

PLConvexFunction PLConvexFunction::build(TriMesh mesh, std::vector<double> values, const Tolerances& tol,
                                         bool require_convex) {
  if (mesh.nbr.empty()) mesh.finalize();
  if (values.size() != mesh.pts.size()) throw std::invalid_argument("pl function: values/vertices mismatch");
  PLConvexFunction f;
  f.mesh = std::move(mesh);
  f.values = std::move(values);
  int nt = f.mesh.n_triangles();
  f.tri_grad.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tr = f.mesh.tris[t];
    Vec2 a = f.mesh.pts[tr[0]], b = f.mesh.pts[tr[1]], c = f.mesh.pts[tr[2]];
    double za = f.values[tr[0]], zb = f.values[tr[1]], zc = f.values[tr[2]];
    double det = cross(b - a, c - a);
    Vec2 g{((zb - za) * (c.y - a.y) - (zc - za) * (b.y - a.y)) / det,
           ((zc - za) * (b.x - a.x) - (zb - za) * (c.x - a.x)) / det};
    f.tri_grad[t] = g;
  }
  // Gradient monotonicity across interior edges.
  double worst = 0.0;
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      int t2 = f.mesh.nbr[t][e];
      if (t2 < 0 || t2 < t) continue;
      Vec2 a = f.mesh.pts[f.mesh.tris[t][e]], b = f.mesh.pts[f.mesh.tris[t][(e + 1) % 3]];
      Vec2 ed = b - a;
      Vec2 en = Vec2{ed.y, -ed.x} / norm(ed);  // right normal: from t into t2 for CCW triangles
      double slope = dot(f.tri_grad[t2] - f.tri_grad[t], en);
      worst = std::min(worst, slope);
    }
  }
  f.worst_edge_violation = worst;
  f.convex_certified = worst >= -tol.conv;
  if (require_convex && !f.convex_certified) throw std::runtime_error("convexity certificate failed");
  return f;
}

double PLConvexFunction::eval(Vec2 p) const {
  int t = mesh.locate(p, 1e-9);
  if (t < 0) {
    // Boundary round-off: project onto the boundary loop, nudge inward.
    std::vector<int> loop = mesh.boundary_loop();
    double best = 1e300;
    Vec2 q = p;
    size_t m = loop.size();
    for (size_t i = 0; i < m; ++i) {
      Vec2 a = mesh.pts[loop[i]], b = mesh.pts[loop[(i + 1) % m]];
      Vec2 e = b - a;
      double s = std::clamp(dot(p - a, e) / norm2(e), 0.0, 1.0);
      Vec2 c = a + s * e;
      double d = norm(p - c);
      if (d < best) {
        best = d;
        q = c;
      }
    }
    double diam = polygon_diameter(mesh.pts);
    if (best > 1e-7 * (1.0 + diam)) throw std::runtime_error("pl function: point outside domain");
    Vec2 inward = polygon_centroid(mesh.pts) - q;
    q = q + (1e-12 * (1.0 + diam) / (norm(inward) + 1e-300)) * inward;
    t = mesh.locate(q, 1e-6);
    if (t < 0) throw std::runtime_error("pl function: point outside domain");
    p = q;
  }
  auto w = mesh.barycentric(t, p);
  auto& tr = mesh.tris[t];
  return w[0] * values[tr[0]] + w[1] * values[tr[1]] + w[2] * values[tr[2]];
}

double PLConvexFunction::eval_support(Vec2 p) const {
  double z = -1e300;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    int v = mesh.tris[t][0];
    z = std::max(z, values[v] + dot(tri_grad[t], p - mesh.pts[v]));
  }
  return z;
}

double PLConvexFunction::min_value() const { return *std::min_element(values.begin(), values.end()); }

int PLConvexFunction::argmin_vertex() const {
  return int(std::min_element(values.begin(), values.end()) - values.begin());
}

std::vector<int> PLConvexFunction::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.is_boundary[v]) out.push_back(v);
  return out;
}

double DiscreteMeasure::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

SubdifferentialPolytope subdifferential(const PLConvexFunction& f, int vertex) {
  if (vertex < 0 || vertex >= f.mesh.n_vertices()) throw std::invalid_argument("subdifferential: bad vertex");
  if (f.mesh.is_boundary[vertex]) throw std::invalid_argument("boundary subdifferential undefined");
  std::vector<Vec2> g;
  double gscale = 0.0;
  for (int t : f.mesh.vert_tris[vertex]) {
    g.push_back(f.tri_grad[t]);
    gscale = std::max(gscale, norm(f.tri_grad[t]));
  }
  // Collapse rounding-level duplicates (affine patches) before hulling.
  double dtol = 1e-12 * (1.0 + gscale);
  std::vector<Vec2> uniq;
  for (auto& p : g) {
    bool dup = false;
    for (auto& q : uniq)
      if (norm(p - q) <= dtol) {
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(p);
  }
  SubdifferentialPolytope s;
  s.vertex = vertex;
  s.slopes = convex_hull(std::move(uniq));
  return s;
}

DiscreteMeasure ma_measure(const PLConvexFunction& f) {
  if (!f.convex_certified) throw std::runtime_error("convexity certificate failed");
  DiscreteMeasure mu;
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    auto s = subdifferential(f, v);
    mu.sites.push_back(f.mesh.pts[v]);
    mu.masses.push_back(s.area());
    mu.site_index.push_back(v);
  }
  return mu;
}

namespace {

// Breakpoints of max_v (a_v + t b_v) on (0, 1): returns (t, value) pairs.
std::vector<std::pair<double, double>> upper_envelope_breakpoints(std::vector<double> a, std::vector<double> b) {
  size_t n = a.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return b[i] < b[j] || (b[i] == b[j] && a[i] < a[j]); });
  std::vector<int> stack;
  auto isect = [&](int i, int j) { return (a[i] - a[j]) / (b[j] - b[i]); };
  for (int idx : order) {
    if (!stack.empty() && b[stack.back()] == b[idx]) stack.pop_back();  // equal slope: keep larger offset
    while (stack.size() >= 2) {
      int m = stack[stack.size() - 1], l = stack[stack.size() - 2];
      if (isect(l, idx) <= isect(l, m))
        stack.pop_back();
      else
        break;
    }
    stack.push_back(idx);
  }
  std::vector<std::pair<double, double>> out;
  for (size_t k = 0; k + 1 < stack.size(); ++k) {
    int i = stack[k], j = stack[k + 1];
    double t = isect(i, j);
    if (t > 1e-12 && t < 1.0 - 1e-12) out.push_back({t, a[i] + b[i] * t});
  }
  return out;
}

}  // namespace

LegendreTransform legendre_transform(const PLConvexFunction& f, const Tolerances& tol) {
  if (!f.convex_certified) throw std::runtime_error("convexity certificate failed");
  // Interior dual vertices: per-triangle gradients with exact dual values.
  // For p = grad(u|_T), x.p - u(x) is constant on T, so any corner works.
  std::vector<Vec2> g;
  std::vector<double> val;
  double gscale = 0.0;
  for (int t = 0; t < f.mesh.n_triangles(); ++t) gscale = std::max(gscale, norm(f.tri_grad[t]));
  double dtol = 1e-11 * (1.0 + gscale);
  auto add_point = [&](Vec2 p, double w) {
    for (size_t k = 0; k < g.size(); ++k) {
      if (norm(g[k] - p) <= dtol) {
        val[k] = std::max(val[k], w);
        return;
      }
    }
    g.push_back(p);
    val.push_back(w);
  };
  for (int t = 0; t < f.mesh.n_triangles(); ++t) {
    Vec2 p = f.tri_grad[t];
    int v0 = f.mesh.tris[t][0];
    add_point(p, dot(f.mesh.pts[v0], p) - f.values[v0]);
  }
  LegendreTransform out;
  auto hull = convex_hull(g);
  if (hull.size() <= 2) {
    out.degenerate = true;
    out.support = hull;
    for (auto& p : out.support) {
      double w = -1e300;
      for (int v = 0; v < f.mesh.n_vertices(); ++v) w = std::max(w, dot(f.mesh.pts[v], p) - f.values[v]);
      out.support_values.push_back(w);
    }
    return out;
  }
  // Boundary dual vertices: on each hull edge of the gradient image the
  // transform is a 1D max of affine functions of the edge parameter; its
  // breakpoints are dual-cell boundaries crossing the hull and are needed
  // for the transform to be exact up to the image boundary.
  int nv = f.mesh.n_vertices();
  for (size_t e = 0; e < hull.size(); ++e) {
    Vec2 p0 = hull[e], p1 = hull[(e + 1) % hull.size()];
    std::vector<double> a(nv), b(nv);
    for (int v = 0; v < nv; ++v) {
      a[v] = dot(f.mesh.pts[v], p0) - f.values[v];
      b[v] = dot(f.mesh.pts[v], p1 - p0);
    }
    for (auto& [t, w] : upper_envelope_breakpoints(std::move(a), std::move(b))) add_point(p0 + t * (p1 - p0), w);
  }
  TriMesh dual_mesh = triangulate_points(g);
  flip_to_envelope(dual_mesh, val);
  out.dual = PLConvexFunction::build(std::move(dual_mesh), std::move(val), tol);
  return out;
}

AleksandrovBoundReport aleksandrov_bound(const PLConvexFunction& f, const Tolerances& tol) {
  const int n = 2;
  const double omega_nm1 = 2.0;  // |B_1| in R^1
  const double Cn = n / omega_nm1;
  double vscale = 0.0;
  for (double z : f.values) vscale = std::max(vscale, std::fabs(z));
  std::vector<int> bdry = f.boundary_vertices();
  for (int v : bdry)
    if (std::fabs(f.values[v]) > tol.bc * (1.0 + vscale))
      throw std::invalid_argument("aleksandrov_bound: nonzero boundary data");

  // Boundary polygon in loop order for distances and diameter.
  std::vector<int> loop = f.mesh.boundary_loop();
  std::vector<Vec2> poly;
  for (int v : loop) poly.push_back(f.mesh.pts[v]);
  double D = polygon_diameter(poly);
  double total_mass = ma_measure(f).total();

  auto dist_to_boundary = [&](Vec2 p) {
    double d = 1e300;
    size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
      Vec2 a = poly[i], b = poly[(i + 1) % m];
      Vec2 e = b - a;
      double t = std::clamp(dot(p - a, e) / norm2(e), 0.0, 1.0);
      d = std::min(d, norm(p - (a + t * e)));
    }
    return d;
  };

  AleksandrovBoundReport rep;
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    double lhs = std::pow(std::fabs(f.values[v]), n);
    double rhs = Cn * std::pow(D, n - 1) * dist_to_boundary(f.mesh.pts[v]) * total_mass;
    rep.rows.push_back({v, lhs, rhs});
    if (lhs > rhs * (1.0 + tol.ineq) + tol.ineq) rep.pass = false;
    if (rhs > 0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
  }
  return rep;
}

MatrixLemmaVerdict matrix_lemma_checks(Sym2 A, Sym2 B, double lambda, double theta, const Tolerances& tol) {
  const int n = 2;
  if (!A.psd(tol.psd) || !B.psd(tol.psd)) throw std::invalid_argument("matrix_lemma_checks: matrices must be PSD");
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("matrix_lemma_checks: lambda outside [0,1]");
  if (theta < 0.0 || theta > 1.0 / n + tol.ineq) throw std::invalid_argument("matrix_lemma_checks: theta outside [0,1/n]");
  MatrixLemmaVerdict v;
  auto powt = [&](double d) { return theta == 0.0 ? 1.0 : std::pow(std::max(d, 0.0), theta); };

  Sym2 M = lambda * A + (1.0 - lambda) * B;
  double lhs1 = powt(M.det());
  double rhs1 = lambda * powt(A.det()) + (1.0 - lambda) * powt(B.det());
  double s1 = tol.ineq * std::max({1.0, std::fabs(lhs1), std::fabs(rhs1)});
  v.det_concavity = lhs1 + s1 >= rhs1;

  double tr = trace_prod(A, B);
  double lhs2 = A.det() * B.det();
  double rhs2 = std::pow(tr / n, n);
  double s2 = tol.ineq * std::max({1.0, std::fabs(lhs2), std::fabs(rhs2)});
  v.det_trace = lhs2 <= rhs2 + s2;

  if (A.pd(tol.psd)) {
    double trinv = A.inverse().trace();
    bool ok = true;
    for (int k = 0; k < 64 && ok; ++k) {
      double th = 2.0 * M_PI * k / 64.0;
      Vec2 b{std::cos(th), std::sin(th)};
      double lhs3 = A.quad(b);
      double rhs3 = 1.0 / trinv;  // |b| = 1
      ok = lhs3 + tol.ineq * std::max(1.0, rhs3) >= rhs3;
    }
    v.quad_lower = ok;
  } else {
    v.quad_lower = false;  // requires PD; reported as failing, not an error
  }
  return v;
}

ComparisonVerdict comparison_check(const PLConvexFunction& u, const PLConvexFunction& v, const Tolerances& tol) {
  if (u.mesh.n_vertices() != v.mesh.n_vertices()) throw std::invalid_argument("comparison_check: mesh mismatch");
  for (int i = 0; i < u.mesh.n_vertices(); ++i)
    if (norm(u.mesh.pts[i] - v.mesh.pts[i]) > 0.0) throw std::invalid_argument("comparison_check: mesh mismatch");

  ComparisonVerdict out;
  DiscreteMeasure mu = ma_measure(u), mv = ma_measure(v);
  out.preconditions_ok = true;
  for (size_t k = 0; k < mu.masses.size(); ++k)
    if (mv.masses[k] < mu.masses[k] - tol.meas) out.preconditions_ok = false;
  for (int i = 0; i < u.mesh.n_vertices(); ++i)
    if (u.mesh.is_boundary[i] && u.values[i] < v.values[i] - tol.cmp) out.preconditions_ok = false;

  double worst = 0.0;
  for (int i = 0; i < u.mesh.n_vertices(); ++i) worst = std::min(worst, u.values[i] - v.values[i]);
  out.worst_gap = worst;
  out.holds = worst >= -tol.cmp;
  return out;
}

}  // namespace ampere
