#include "ampere/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ampere {

void TriMesh::finalize() {
  int nv = n_vertices(), nt = n_triangles();
  nbr.assign(nt, {-1, -1, -1});
  std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;  // (lo,hi) -> (tri, edge)
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      int a = tris[t][e], b = tris[t][(e + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_owner.find(key);
      if (it == edge_owner.end()) {
        edge_owner[key] = {t, e};
      } else {
        nbr[t][e] = it->second.first;
        nbr[it->second.first][it->second.second] = t;
      }
    }
  }
  vert_tris.assign(nv, {});
  for (int t = 0; t < nt; ++t)
    for (int e = 0; e < 3; ++e) vert_tris[tris[t][e]].push_back(t);
  for (auto& vt : vert_tris) std::sort(vt.begin(), vt.end());
  is_boundary.assign(nv, 0);
  for (int t = 0; t < nt; ++t)
    for (int e = 0; e < 3; ++e)
      if (nbr[t][e] < 0) {
        is_boundary[tris[t][e]] = 1;
        is_boundary[tris[t][(e + 1) % 3]] = 1;
      }
}

std::array<double, 3> TriMesh::barycentric(int t, Vec2 p) const {
  auto& tr = tris[t];
  Vec2 a = pts[tr[0]], b = pts[tr[1]], c = pts[tr[2]];
  double area = cross(b - a, c - a);
  double w0 = cross(b - p, c - p) / area;
  double w1 = cross(c - p, a - p) / area;
  double w2 = cross(a - p, b - p) / area;
  return {w0, w1, w2};
}

int TriMesh::locate(Vec2 p, double tol, int hint) const {
  int nt = n_triangles();
  if (nt == 0) return -1;
  int t = (hint >= 0 && hint < nt) ? hint : 0;
  for (int step = 0; step < 4 * nt + 8; ++step) {
    auto w = barycentric(t, p);
    int worst = 0;
    for (int e = 1; e < 3; ++e)
      if (w[e] < w[worst]) worst = e;
    if (w[worst] >= -tol) return t;
    // Edge opposite to vertex `worst` is (worst+1, worst+2).
    int next = nbr.empty() ? -1 : nbr[t][(worst + 1) % 3];
    if (next < 0) break;
    t = next;
  }
  // Robust fallback.
  for (int s = 0; s < nt; ++s) {
    auto w = barycentric(s, p);
    if (w[0] >= -tol && w[1] >= -tol && w[2] >= -tol) return s;
  }
  return -1;
}

std::vector<int> TriMesh::boundary_loop() const {
  std::map<int, int> next;  // boundary edge a -> b (CCW)
  for (int t = 0; t < n_triangles(); ++t)
    for (int e = 0; e < 3; ++e)
      if (nbr[t][e] < 0) next[tris[t][e]] = tris[t][(e + 1) % 3];
  std::vector<int> loop;
  if (next.empty()) return loop;
  int start = next.begin()->first, v = start;
  do {
    loop.push_back(v);
    auto it = next.find(v);
    if (it == next.end()) break;
    v = it->second;
  } while (v != start && loop.size() <= next.size() + 1);
  return loop;
}

namespace {

// Index-based strict hull (collinear points dropped); returns CCW chain.
std::vector<int> hull_strict_indices(const std::vector<Vec2>& pts) {
  int n = int(pts.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return pts[i].x < pts[j].x || (pts[i].x == pts[j].x && pts[i].y < pts[j].y);
  });
  if (n <= 2) return order;
  std::vector<int> h(2 * n);
  size_t k = 0;
  for (int ii = 0; ii < n; ++ii) {
    int i = order[ii];
    while (k >= 2 && orient_sign(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  size_t lower = k + 1;
  for (int ii = n - 1; ii-- > 0;) {
    int i = order[ii];
    while (k >= lower && orient_sign(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

// Incremental triangulation with neighbor maintenance.
struct IncMesh {
  const std::vector<Vec2>& pts;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 3>> nbr;
  int last_tri = 0;

  explicit IncMesh(const std::vector<Vec2>& p) : pts(p) {}

  double area(int t) const { return 0.5 * cross(pts[tris[t][1]] - pts[tris[t][0]], pts[tris[t][2]] - pts[tris[t][0]]); }

  void set_nbr(int t, int e, int n) {
    if (t >= 0) nbr[t][e] = n;
  }
  int edge_of(int t, int a, int b) const {
    for (int e = 0; e < 3; ++e)
      if (tris[t][e] == a && tris[t][(e + 1) % 3] == b) return e;
    return -1;
  }
  void patch_neighbor(int t, int old_t, int new_t) {
    if (t < 0) return;
    for (int e = 0; e < 3; ++e)
      if (nbr[t][e] == old_t) {
        nbr[t][e] = new_t;
        return;
      }
  }

  // Locate triangle containing p; out_edge = -1 for strict interior,
  // else the local edge index p lies on.
  int locate(Vec2 p, int& out_edge) {
    int nt = int(tris.size());
    int t = std::min(last_tri, nt - 1);
    double scale = 1.0;
    for (int step = 0; step < 4 * nt + 8; ++step) {
      Vec2 a = pts[tris[t][0]], b = pts[tris[t][1]], c = pts[tris[t][2]];
      double ar = cross(b - a, c - a);
      scale = std::fabs(ar);
      double w0 = cross(b - p, c - p), w1 = cross(c - p, a - p), w2 = cross(a - p, b - p);
      double wm[3] = {w0, w1, w2};
      int worst = 0;
      for (int e = 1; e < 3; ++e)
        if (wm[e] < wm[worst]) worst = e;
      if (wm[worst] >= 0 || wm[worst] > -1e-13 * scale) {
        // Inside (or on an edge): find near-zero coordinate.
        out_edge = -1;
        for (int e = 0; e < 3; ++e)
          if (std::fabs(wm[e]) <= 1e-13 * scale) out_edge = (e + 1) % 3;  // p on edge opposite vertex e
        last_tri = t;
        return t;
      }
      int next = nbr[t][(worst + 1) % 3];
      if (next < 0) break;
      t = next;
    }
    // Fallback scan with growing tolerance.
    for (int s = 0; s < nt; ++s) {
      Vec2 a = pts[tris[s][0]], b = pts[tris[s][1]], c = pts[tris[s][2]];
      double ar = std::fabs(cross(b - a, c - a));
      double w0 = cross(b - p, c - p), w1 = cross(c - p, a - p), w2 = cross(a - p, b - p);
      if (w0 >= -1e-9 * ar && w1 >= -1e-9 * ar && w2 >= -1e-9 * ar) {
        double wm[3] = {w0, w1, w2};
        out_edge = -1;
        for (int e = 0; e < 3; ++e)
          if (std::fabs(wm[e]) <= 1e-9 * ar) out_edge = (e + 1) % 3;
        last_tri = s;
        return s;
      }
    }
    return -1;
  }

  // Insert vertex v at interior point of triangle t: 1 -> 3 split.
  void split_interior(int t, int v) {
    int a = tris[t][0], b = tris[t][1], c = tris[t][2];
    int nab = nbr[t][0], nbc = nbr[t][1], nca = nbr[t][2];
    int t1 = int(tris.size()), t2 = t1 + 1;
    tris[t] = {a, b, v};
    tris.push_back({b, c, v});
    tris.push_back({c, a, v});
    nbr[t] = {nab, t1, t2};
    nbr.push_back({nbc, t2, t});
    nbr.push_back({nca, t, t1});
    patch_neighbor(nbc, t, t1);
    patch_neighbor(nca, t, t2);
    last_tri = t;
  }

  // Insert vertex v on edge e of triangle t: splits t (and its neighbor).
  void split_edge(int t, int e, int v) {
    int a = tris[t][e], b = tris[t][(e + 1) % 3], c = tris[t][(e + 2) % 3];
    int t2 = nbr[t][e];
    int nbc = nbr[t][(e + 1) % 3], nca = nbr[t][(e + 2) % 3];
    int tn = int(tris.size());
    // t: (a, v, c), tn: (v, b, c)
    tris[t] = {a, v, c};
    tris.push_back({v, b, c});
    nbr[t] = {-1, tn, nca};
    nbr.push_back({-1, nbc, t});
    patch_neighbor(nbc, t, tn);
    if (t2 >= 0) {
      int e2 = edge_of(t2, b, a);
      if (e2 < 0) throw std::runtime_error("mesh: inconsistent adjacency");
      int d = tris[t2][(e2 + 2) % 3];
      int nad = nbr[t2][(e2 + 1) % 3], ndb = nbr[t2][(e2 + 2) % 3];
      int tm = int(tris.size());
      // t2: (b, v, d), tm: (v, a, d)
      tris[t2] = {b, v, d};
      tris.push_back({v, a, d});
      nbr[t2] = {tn, tm, ndb};
      nbr.push_back({t, nad, t2});
      patch_neighbor(nad, t2, tm);
      nbr[t][0] = tm;
      nbr[tn][0] = t2;
    }
    last_tri = t;
  }

  void insert(int v) {
    int e = -1;
    int t = locate(pts[v], e);
    if (t < 0) throw std::runtime_error("mesh: point outside triangulation");
    if (e < 0)
      split_interior(t, v);
    else
      split_edge(t, e, v);
  }
};

}  // namespace

TriMesh triangulate_points(const std::vector<Vec2>& pts) {
  int n = int(pts.size());
  if (n < 3) throw std::invalid_argument("triangulate_points: need at least 3 points");
  {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return pts[i].x < pts[j].x || (pts[i].x == pts[j].x && pts[i].y < pts[j].y);
    });
    for (int k = 1; k < n; ++k)
      if (pts[order[k]].x == pts[order[k - 1]].x && pts[order[k]].y == pts[order[k - 1]].y)
        throw std::invalid_argument("triangulate_points: duplicate point");
  }
  std::vector<int> hull = hull_strict_indices(pts);
  int m = int(hull.size());
  if (m < 3) throw std::invalid_argument("triangulate_points: degenerate (collinear) point set");

  // Fan over the strict hull; every corner is a strict turn so all fan
  // triangles have positive area.
  IncMesh im(pts);
  for (int k = 1; k + 1 < m; ++k) im.tris.push_back({hull[0], hull[k], hull[k + 1]});

  TriMesh tmp;
  tmp.pts = pts;
  tmp.tris = im.tris;
  tmp.finalize();
  im.nbr = tmp.nbr;

  // Insert the remaining points; points on hull edges take the edge-split path.
  std::vector<uint8_t> on_hull(n, 0);
  for (int v : hull) on_hull[v] = 1;
  for (int v = 0; v < n; ++v)
    if (!on_hull[v]) im.insert(v);

  TriMesh out;
  out.pts = pts;
  out.tris = std::move(im.tris);
  out.finalize();
  return out;
}

void flip_to_envelope(TriMesh& m, const std::vector<double>& z) {
  int nt = m.n_triangles();
  if (m.nbr.empty()) m.finalize();
  auto& tris = m.tris;
  auto& nbr = m.nbr;
  auto& pts = m.pts;

  auto below = [&](int a, int b, int c, int d) -> bool {
    // Is lifted d strictly below the plane through lifted a,b,c (CCW abc)?
    Vec2 e1 = pts[b] - pts[a], e2 = pts[c] - pts[a], e3 = pts[d] - pts[a];
    double z1 = z[b] - z[a], z2 = z[c] - z[a], z3 = z[d] - z[a];
    double det = e1.x * (e2.y * z3 - z2 * e3.y) - e1.y * (e2.x * z3 - z2 * e3.x) + z1 * (e2.x * e3.y - e2.y * e3.x);
    double mag = std::fabs(e1.x * e2.y * z3) + std::fabs(e1.x * z2 * e3.y) + std::fabs(e1.y * e2.x * z3) +
                 std::fabs(e1.y * z2 * e3.x) + std::fabs(z1 * e2.x * e3.y) + std::fabs(z1 * e2.y * e3.x);
    return det < -1e-14 * mag - 1e-300;
  };

  std::vector<std::pair<int, int>> stack;
  stack.reserve(4 * nt);
  for (int t = 0; t < nt; ++t)
    for (int e = 0; e < 3; ++e)
      if (nbr[t][e] > t) stack.push_back({t, e});

  long guard = 64L * nt * nt + 4096;
  while (!stack.empty() && guard-- > 0) {
    auto [t, e] = stack.back();
    stack.pop_back();
    int t2 = nbr[t][e];
    if (t2 < 0) continue;
    int a = tris[t][e], b = tris[t][(e + 1) % 3], c = tris[t][(e + 2) % 3];
    int e2 = -1;
    for (int k = 0; k < 3; ++k)
      if (tris[t2][k] == b && tris[t2][(k + 1) % 3] == a) e2 = k;
    if (e2 < 0) continue;  // stale entry
    int d = tris[t2][(e2 + 2) % 3];
    if (!below(a, b, c, d)) continue;
    // Flip validity: the quad a,d,b,c must be strictly convex.
    if (orient_sign(pts[a], pts[d], pts[c]) <= 0) continue;
    if (orient_sign(pts[d], pts[b], pts[c]) <= 0) continue;
    int n_adc_ad = nbr[t2][(e2 + 1) % 3];  // across (a,d)
    int n_db = nbr[t2][(e2 + 2) % 3];      // across (d,b)
    int n_bc = nbr[t][(e + 1) % 3];
    int n_ca = nbr[t][(e + 2) % 3];
    // t -> (a, d, c); t2 -> (d, b, c)
    tris[t] = {a, d, c};
    tris[t2] = {d, b, c};
    nbr[t] = {n_adc_ad, t2, n_ca};
    nbr[t2] = {n_db, n_bc, t};
    auto patch = [&](int tt, int old_t, int new_t) {
      if (tt < 0) return;
      for (int k = 0; k < 3; ++k)
        if (nbr[tt][k] == old_t) {
          nbr[tt][k] = new_t;
          return;
        }
    };
    patch(n_adc_ad, t2, t);
    patch(n_bc, t, t2);
    stack.push_back({t, 0});
    stack.push_back({t, 2});
    stack.push_back({t2, 0});
    stack.push_back({t2, 1});
  }
  m.finalize();
}

TriMesh delaunay_mesh(const std::vector<Vec2>& pts) {
  TriMesh m = triangulate_points(pts);
  std::vector<double> z(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) z[i] = norm2(pts[i]);
  flip_to_envelope(m, z);
  return m;
}

TriMesh disk_mesh(Vec2 center, double R, int rings, int apex_degree) {
  // Aligned polar rings: each annulus quad is coplanar under radially
  // symmetric lifts (e.g. the cone |x - center|), so direct sampling of
  // such functions stays convex and the apex fan keeps its degree.
  TriMesh m;
  int d = apex_degree;
  m.pts.push_back(center);
  for (int k = 1; k <= rings; ++k) {
    double r = R * double(k) / rings;
    for (int j = 0; j < d; ++j) {
      double th = 2.0 * M_PI * j / d;
      m.pts.push_back(center + Vec2{r * std::cos(th), r * std::sin(th)});
    }
  }
  auto idx = [&](int k, int j) { return 1 + (k - 1) * d + ((j % d) + d) % d; };
  for (int j = 0; j < d; ++j) m.tris.push_back({0, idx(1, j), idx(1, j + 1)});
  for (int k = 1; k < rings; ++k)
    for (int j = 0; j < d; ++j) {
      int a = idx(k, j), b = idx(k, j + 1), c = idx(k + 1, j), e = idx(k + 1, j + 1);
      m.tris.push_back({a, c, e});
      m.tris.push_back({a, e, b});
    }
  m.finalize();
  return m;
}

TriMesh square_grid_mesh(Vec2 lo, Vec2 hi, int nx, int ny) {
  TriMesh m;
  double hx = (hi.x - lo.x) / (nx - 1), hy = (hi.y - lo.y) / (ny - 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.pts.push_back({lo.x + i * hx, lo.y + j * hy});
  auto id = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      m.tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.finalize();
  return m;
}

TriMesh polygon_mesh(const std::vector<Vec2>& boundary, double target_h) {
  std::vector<Vec2> pts = boundary;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& p : boundary) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  for (double y = ymin + target_h; y < ymax - 0.5 * target_h; y += target_h)
    for (double x = xmin + target_h; x < xmax - 0.5 * target_h; x += target_h) {
      Vec2 p{x, y};
      // Keep lattice points well inside the polygon.
      bool ok = true;
      int n = int(boundary.size());
      for (int i = 0; i < n && ok; ++i) {
        Vec2 a = boundary[i], b = boundary[(i + 1) % n];
        Vec2 e = b - a;
        if (cross(e, p - a) < 0.4 * target_h * norm(e)) ok = false;
      }
      if (ok) pts.push_back(p);
    }
  return delaunay_mesh(pts);
}

}  // namespace ampere
