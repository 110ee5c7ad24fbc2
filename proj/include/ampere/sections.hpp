#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ampere/convex_core.hpp"
#include "ampere/grid.hpp"
#include "ampere/tolerances.hpp"

namespace ampere {

struct Mat2 {
  double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
  Vec2 apply(Vec2 p) const { return {a11 * p.x + a12 * p.y, a21 * p.x + a22 * p.y}; }
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 inverse() const {
    double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
};

struct AffineMap {
  Mat2 A;
  Vec2 b;
  Vec2 operator()(Vec2 p) const { return A.apply(p) + b; }
};

/// E = { x : (x - center)^T shape (x - center) <= 1 }, shape PD.
struct Ellipsoid {
  Vec2 center;
  Sym2 shape;
  double volume() const { return M_PI / std::sqrt(shape.det()); }
};

/// Maximum-volume inscribed ellipsoid by damped Newton on a log-barrier
/// formulation (5 unknowns). Verifies E in K and K in center + 2 (E - center).
Ellipsoid john_ellipsoid(const ConvexDomain& K, const Tolerances& tol = {});

/// T with T(john ellipsoid) = B_1(0); asserts B_1 in T(K) in B_2.
struct Normalization {
  AffineMap map;
  ConvexDomain normalized;
};
Normalization normalize(const ConvexDomain& K, const Tolerances& tol = {});

/// Section S_u(x0, p, h) = { y : u(y) < u(x0) + p.(y - x0) + h }.
struct Section {
  Vec2 center;
  Vec2 slope;
  double height = 0.0;
  std::vector<int> realized;          // node / vertex indices
  std::vector<Vec2> boundary_polygon;  // convex, counterclockwise
  double volume = 0.0;
  bool clipped = false;
};

/// Uniform access to a function and its sections for the probes below.
struct SectionField {
  std::function<double(Vec2)> eval;
  std::function<Vec2(Vec2)> slope_at;  // subgradient choice at a point
  std::function<Vec2(Vec2)> anchor;    // snap to the nearest exact sample (grid node); identity for PL
  std::function<Section(Vec2, double, std::optional<Vec2>)> extract;
};
SectionField field_of(const GridFunction& u);
SectionField field_of(const PLConvexFunction& u);

Section extract_section(const GridFunction& u, Vec2 x0, double height, std::optional<Vec2> slope = {});
Section extract_section(const PLConvexFunction& u, Vec2 x0, double height, std::optional<Vec2> slope = {});

/// Rows of (h, |S|, |S|/h); clipped rows are flagged and excluded from the
/// ratio verdict.
struct VolumeSweepRow {
  double height = 0.0, volume = 0.0, ratio = 0.0;
  bool clipped = false;
};
struct VolumeSweep {
  std::vector<VolumeSweepRow> rows;
  double ratio_max = 0.0, ratio_min = 0.0;
  bool pass = false;
};
VolumeSweep section_volume_sweep(const SectionField& f, Vec2 x0, const std::vector<double>& heights,
                                 double ratio_bound);

/// Minimal theta such that S_u(y, h) is contained in S_u(x, theta h) for
/// every sampled pair and every probe point x in S_u(y, h); bisection over
/// [2, 64], 40 iterations, containment tested on the inner polygon.
struct EngulfingReport {
  double theta = 0.0;
  Vec2 worst_y;
  double worst_h = 0.0;
  int pairs = 0;
};
EngulfingReport engulfing_constant(const SectionField& f, const std::vector<std::pair<Vec2, double>>& pairs,
                                   const Tolerances& tol = {});

/// Largest c with S(x1, c (s-r)^{p1} t) inside S(x0, s t) over sampled
/// x1 in S(x0, r t), plus the exclusion counterpart.
struct InclusionExclusionReport {
  double inclusion_c = 0.0;
  double exclusion_c = 0.0;
  int samples = 0;
};
/// frac_cap limits how close the inclusion samples approach the boundary
/// of S(x0, r t); on PL data sub-facet heights cannot resolve the extreme
/// boundary, so regressions sample at moderate depth.
InclusionExclusionReport inclusion_exclusion_probe(const SectionField& f, Vec2 x0, double t, double r, double s,
                                                   double p1, int n_samples, const Tolerances& tol = {},
                                                   double frac_cap = 0.999);

/// Greedy Vitali selection over dyadic height buckets; K = 2 theta0^2.
struct CoveringSelection {
  std::vector<int> chosen;  // indices into the input family
  double K = 0.0;
};
CoveringSelection vitali_select(const SectionField& f, const std::vector<std::pair<Vec2, double>>& family,
                                double theta0);

/// Largest delta with (1/2 + delta) S(0,1) in S(0,1/2) in (1-delta) S(0,1)
/// for u normalized at the origin. Throws on clipped sections.
struct C1AlphaReport {
  double delta = 0.0;
  bool degenerate = false;  // no positive delta
};
C1AlphaReport c1alpha_inclusion_probe(const SectionField& f, const Tolerances& tol = {});

/// Minimal theta < 1 with u(theta x) >= u(x)/2 on the boundary of S(0, h).
double theta_probe(const SectionField& f, double height);

/// Slope of log diam S(z, h) against log h.
double section_size_exponent(const SectionField& f, Vec2 z, const std::vector<double>& heights);

}  // namespace ampere
