#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ampere {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Sign of cross(b-a, c-a): +1 left turn, -1 right turn, 0 collinear.
/// Uses a floating-point filter, falling back to a compensated (double-double)
/// evaluation when the fast result is below its rounding error bound.
int orient_sign(Vec2 a, Vec2 b, Vec2 c);

/// Sign of x with a tolerance dead zone.
inline int sgn(double x, double tol = 0.0) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

/// Strict convex hull, counterclockwise, collinear points dropped.
/// Returns 1 point for coincident inputs and 2 points for collinear inputs.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

/// Hull that keeps collinear boundary points (useful as an ordered
/// boundary chain for triangulation). Counterclockwise.
std::vector<Vec2> convex_hull_keep_collinear(std::vector<Vec2> pts);

/// Signed area (positive for counterclockwise).
double polygon_signed_area(const std::vector<Vec2>& poly);
inline double polygon_area(const std::vector<Vec2>& poly) { return std::fabs(polygon_signed_area(poly)); }

Vec2 polygon_centroid(const std::vector<Vec2>& poly);
double polygon_diameter(const std::vector<Vec2>& poly);

/// Is p inside (or within tol of) the convex CCW polygon?
bool point_in_convex(const std::vector<Vec2>& poly, Vec2 p, double tol = 0.0);

/// Half plane { p : dot(n, p) <= c }.
struct HalfPlane {
  Vec2 n;
  double c = 0.0;
};

/// Convex polygon maintained under half-plane clipping, with one label per
/// edge recording which constraint produced it (-1 for the initial box).
struct CutPoly {
  std::vector<Vec2> v;
  std::vector<int> edge_id;  // edge_id[k] labels edge v[k] -> v[(k+1)%n]

  bool empty() const { return v.size() < 3; }
  double area() const { return polygon_area(v); }
  double max_radius() const;  // max |v_k|
  /// Length of the edge carrying label id (0 if absent).
  double edge_length(int id) const;
};

CutPoly make_box(Vec2 lo, Vec2 hi);

/// Clip by { p : dot(n,p) <= c }; returns false once the polygon is empty.
bool clip(CutPoly& poly, Vec2 n, double c, int id);

/// Intersection of half-planes seeded from a centered box of half-width r.
CutPoly halfplane_intersection(const std::vector<HalfPlane>& hps, double r);

}  // namespace ampere
