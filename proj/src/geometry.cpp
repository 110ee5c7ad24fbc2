#include "ampere/geometry.hpp"

#include <algorithm>
#include <limits>

namespace ampere {

namespace {

// Error-free transforms (Dekker / Knuth); enough precision for the
// orientation fallback on coordinates that are themselves rounded.
struct DD {
  double hi, lo;
};

inline DD two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DD dd_sub(DD a, DD b) {
  DD s = two_sum(a.hi, -b.hi);
  s.lo += a.lo - b.lo;
  DD r = two_sum(s.hi, s.lo);
  return r;
}

}  // namespace

int orient_sign(Vec2 a, Vec2 b, Vec2 c) {
  double detl = (b.x - a.x) * (c.y - a.y);
  double detr = (b.y - a.y) * (c.x - a.x);
  double det = detl - detr;
  double mag = std::fabs(detl) + std::fabs(detr);
  // 4 eps covers the two products and the subtraction.
  double errbound = 4.0 * std::numeric_limits<double>::epsilon() * mag;
  if (det > errbound) return 1;
  if (det < -errbound) return -1;
  DD l = two_prod(b.x - a.x, c.y - a.y);
  DD r = two_prod(b.y - a.y, c.x - a.x);
  DD d = dd_sub(l, r);
  if (d.hi > 0) return 1;
  if (d.hi < 0) return -1;
  return d.lo > 0 ? 1 : (d.lo < 0 ? -1 : 0);
}

namespace {

std::vector<Vec2> hull_impl(std::vector<Vec2> pts, bool keep_collinear) {
  std::sort(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) { return p.x == q.x && p.y == q.y; }),
            pts.end());
  size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Vec2> h(2 * n);
  size_t k = 0;
  // Lower chain.
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2) {
      int s = orient_sign(h[k - 2], h[k - 1], pts[i]);
      if (s < 0 || (!keep_collinear && s == 0))
        --k;
      else
        break;
    }
    h[k++] = pts[i];
  }
  // Upper chain.
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower) {
      int s = orient_sign(h[k - 2], h[k - 1], pts[i]);
      if (s < 0 || (!keep_collinear && s == 0))
        --k;
      else
        break;
    }
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && h[0].x == h[1].x && h[0].y == h[1].y) h.resize(1);
  return h;
}

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) { return hull_impl(std::move(pts), false); }

std::vector<Vec2> convex_hull_keep_collinear(std::vector<Vec2> pts) { return hull_impl(std::move(pts), true); }

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    s += cross(poly[i], poly[j]);
  }
  return 0.5 * s;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  size_t n = poly.size();
  if (n == 0) return {};
  if (n <= 2) {
    Vec2 s{};
    for (auto& p : poly) s = s + p;
    return s / double(n);
  }
  double a = 0.0;
  Vec2 c{};
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    double w = cross(poly[i], poly[j]);
    a += w;
    c = c + w * (poly[i] + poly[j]);
  }
  if (std::fabs(a) < 1e-300) {
    Vec2 s{};
    for (auto& p : poly) s = s + p;
    return s / double(n);
  }
  return c / (3.0 * a);
}

double polygon_diameter(const std::vector<Vec2>& poly) {
  double d2 = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j) d2 = std::max(d2, norm2(poly[i] - poly[j]));
  return std::sqrt(d2);
}

bool point_in_convex(const std::vector<Vec2>& poly, Vec2 p, double tol) {
  size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    Vec2 e = poly[j] - poly[i];
    if (cross(e, p - poly[i]) < -tol * (norm(e) + 1.0)) return false;
  }
  return true;
}

double CutPoly::max_radius() const {
  double r2 = 0.0;
  for (auto& p : v) r2 = std::max(r2, norm2(p));
  return std::sqrt(r2);
}

double CutPoly::edge_length(int id) const {
  double len = 0.0;
  size_t n = v.size();
  for (size_t i = 0; i < n; ++i)
    if (edge_id[i] == id) len += norm(v[(i + 1) % n] - v[i]);
  return len;
}

CutPoly make_box(Vec2 lo, Vec2 hi) {
  CutPoly p;
  p.v = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
  p.edge_id = {-1, -1, -1, -1};
  return p;
}

bool clip(CutPoly& poly, Vec2 n, double c, int id) {
  size_t m = poly.v.size();
  if (m < 3) return false;
  // Signed slack c - n.p; keep s >= 0.
  thread_local std::vector<double> s;
  s.resize(m);
  bool any_neg = false, any_pos = false;
  for (size_t i = 0; i < m; ++i) {
    s[i] = c - dot(n, poly.v[i]);
    any_neg |= s[i] < 0;
    any_pos |= s[i] > 0;
  }
  if (!any_neg) return true;  // untouched
  if (!any_pos) {
    poly.v.clear();
    poly.edge_id.clear();
    return false;
  }
  thread_local std::vector<Vec2> nv;
  thread_local std::vector<int> nid;
  nv.clear();
  nid.clear();
  for (size_t i = 0; i < m; ++i) {
    size_t j = (i + 1) % m;
    bool in_i = s[i] >= 0, in_j = s[j] >= 0;
    if (in_i) {
      nv.push_back(poly.v[i]);
      nid.push_back(poly.edge_id[i]);
    }
    if (in_i != in_j) {
      double t = s[i] / (s[i] - s[j]);
      Vec2 q = poly.v[i] + t * (poly.v[j] - poly.v[i]);
      if (in_i) {
        // Leaving: edge from q along the new constraint.
        nv.push_back(q);
        nid.push_back(id);
      } else {
        // Entering: edge from q continues the old edge i.
        nv.push_back(q);
        nid.push_back(poly.edge_id[i]);
      }
    }
  }
  poly.v.swap(nv);
  poly.edge_id.swap(nid);
  return poly.v.size() >= 3;
}

CutPoly halfplane_intersection(const std::vector<HalfPlane>& hps, double r) {
  CutPoly p = make_box({-r, -r}, {r, r});
  for (size_t i = 0; i < hps.size(); ++i)
    if (!clip(p, hps[i].n, hps[i].c, int(i))) break;
  return p;
}

}  // namespace ampere
