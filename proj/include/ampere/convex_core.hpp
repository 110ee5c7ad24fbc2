#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ampere/geometry.hpp"
#include "ampere/mesh.hpp"
#include "ampere/sym2.hpp"
#include "ampere/tolerances.hpp"

namespace ampere {

/// Convex polygonal domain, counterclockwise vertices, with the derived
/// supporting half planes { x : dot(n, x) <= c }, n the unit outward normal.
struct ConvexDomain {
  std::vector<Vec2> vertices;
  std::vector<HalfPlane> half_planes;

  static ConvexDomain from_vertices(std::vector<Vec2> vs, const Tolerances& tol = {});
  static ConvexDomain regular_polygon(Vec2 center, double R, int n);

  double area() const { return polygon_area(vertices); }
  Vec2 centroid() const { return polygon_centroid(vertices); }
  double diameter() const { return polygon_diameter(vertices); }
  bool contains(Vec2 p, double slack = 0.0) const;
  /// Distance from an inside point to the boundary (min over edges).
  double boundary_distance(Vec2 p) const;
};

/// Piecewise-linear convex function on a triangulated convex polygon.
/// Gradients are per-triangle; convexity is certified across interior edges
/// by monotonicity of the gradient.
struct PLConvexFunction {
  TriMesh mesh;
  std::vector<double> values;
  std::vector<Vec2> tri_grad;
  bool convex_certified = false;
  double worst_edge_violation = 0.0;  // most negative (g2-g1).n over interior edges

  static PLConvexFunction build(TriMesh mesh, std::vector<double> values, const Tolerances& tol = {},
                                bool require_convex = true);

  double eval(Vec2 p) const;
  /// Max over all triangle supporting planes: equals eval() inside the
  /// domain for convex data and extends the function convexly outside.
  double eval_support(Vec2 p) const;
  double min_value() const;
  int argmin_vertex() const;
  std::vector<int> boundary_vertices() const;
};

struct SubdifferentialPolytope {
  int vertex = -1;
  std::vector<Vec2> slopes;  // CCW hull; may be a single point or a segment
  double area() const { return slopes.size() >= 3 ? polygon_area(slopes) : 0.0; }
};

/// Nonnegative masses at sites (units: area of gradient space).
struct DiscreteMeasure {
  std::vector<Vec2> sites;
  std::vector<double> masses;
  std::vector<int> site_index;  // mesh vertex per site when applicable

  double total() const;
};

/// Subdifferential at an interior mesh vertex: convex hull of the incident
/// triangle gradients. Throws for boundary vertices.
SubdifferentialPolytope subdifferential(const PLConvexFunction& f, int vertex);

/// Monge-Ampere measure of a PL convex function: mass at each interior
/// vertex equals the area of its subdifferential polytope.
DiscreteMeasure ma_measure(const PLConvexFunction& f);

/// Legendre transform. The image of the gradient is a polygon in general;
/// a single point for affine input; a segment for functions of one
/// direction. The nondegenerate result is exact: its mesh vertices are the
/// per-triangle gradients of the input and the envelope triangulation of
/// those lifted values reproduces the transform everywhere on the hull.
struct LegendreTransform {
  bool degenerate = false;
  std::vector<Vec2> support;          // 1 point or 2 segment endpoints when degenerate
  std::vector<double> support_values;
  PLConvexFunction dual;              // valid iff !degenerate
};
LegendreTransform legendre_transform(const PLConvexFunction& f, const Tolerances& tol = {});

/// Per-vertex report of |f(x0)|^n <= C_n D^{n-1} dist(x0, bdry) |df(Omega)|,
/// C_n = n / omega_{n-1}. Requires f = 0 on the boundary.
struct AleksandrovBoundRow {
  int vertex = -1;
  double lhs = 0.0, rhs = 0.0;
};
struct AleksandrovBoundReport {
  std::vector<AleksandrovBoundRow> rows;
  bool pass = true;
  double worst_ratio = 0.0;  // max lhs/rhs
};
AleksandrovBoundReport aleksandrov_bound(const PLConvexFunction& f, const Tolerances& tol = {});

/// det^theta concavity, det-vs-trace, and quadratic-form lower bound checks
/// for symmetric nonnegative 2x2 matrices.
struct MatrixLemmaVerdict {
  bool det_concavity = false;   // [det(lA+(1-l)B)]^th >= l det(A)^th + (1-l) det(B)^th
  bool det_trace = false;       // det A det B <= (trace(AB)/n)^n
  bool quad_lower = false;      // A b.b >= |b|^2 / trace(A^{-1}) over probe directions
  bool all() const { return det_concavity && det_trace && quad_lower; }
};
MatrixLemmaVerdict matrix_lemma_checks(Sym2 A, Sym2 B, double lambda, double theta, const Tolerances& tol = {});

/// u, v on the identical vertex set with mass(v) >= mass(u) vertexwise and
/// u >= v on the boundary implies u >= v everywhere (within tolerance).
struct ComparisonVerdict {
  bool preconditions_ok = false;
  bool holds = false;
  double worst_gap = 0.0;  // most negative u - v over vertices
};
ComparisonVerdict comparison_check(const PLConvexFunction& u, const PLConvexFunction& v, const Tolerances& tol = {});

}  // namespace ampere
