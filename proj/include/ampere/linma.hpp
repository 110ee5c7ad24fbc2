#pragma once

#include <functional>
#include <vector>

#include "ampere/grid.hpp"
#include "ampere/sym2.hpp"
#include "ampere/tolerances.hpp"

namespace ampere {

/// Per-node symmetric matrix field on a grid; valid where the 9-point
/// stencil fits (all 8 neighbors inside the mask).
struct Sym2Field {
  int nx = 0, ny = 0;
  double h = 0.0;
  Vec2 origin;
  std::vector<Sym2> m;
  std::vector<uint8_t> valid;

  int idx(int i, int j) const { return j * nx + i; }
};

/// Second central differences:
///   u11, u22 from the axis stencils, u12 from the symmetric 4-point cross.
/// Exact for quadratics.
Sym2Field discrete_hessian(const GridFunction& u);

/// Cofactor field U = [[u22, -u12], [-u12, u11]] of the discrete Hessian.
/// Nodes with a non-PSD Hessian are flagged, not an error.
struct CofactorField {
  Sym2Field U;
  std::vector<uint8_t> psd_ok;
  int flagged = 0;
  double min_det = 0.0, max_det = 0.0;  // over valid nodes
};
CofactorField cofactor_field(const GridFunction& u, const Tolerances& tol = {});

/// Central-difference row divergence of the cofactor field; max norm over
/// nodes two layers in. O(h^2) for smooth convex samples.
struct DivergenceReport {
  double max_norm = 0.0;
  int nodes = 0;
  int nx = 0, ny = 0;
  Vec2 origin;
  double h = 0.0;
  std::vector<double> norm_at;   // per node, 0 where invalid
  std::vector<uint8_t> valid;

  /// Max norm over valid nodes with |point - c| <= r (refinement studies
  /// need a resolution-independent region).
  double max_within(Vec2 c, double r) const;
};
DivergenceReport divergence_free_residual(const GridFunction& u, const Tolerances& tol = {});

struct LinearSolveReport {
  GridFunction v;
  double residual_norm = 0.0;  // relative
  int iterations = 0;
  bool converged = false;
  int non_monotone_nodes = 0;  // rows where the stencil is not an M-matrix
};

/// U^{ij} v_ij = g on the interior mask with Dirichlet data on the boundary
/// layer, solved by BiCGSTAB with an ILUT preconditioner.
/// Throws "degenerate Hessian nodes" when the cofactor field carries
/// non-PSD flags on interior nodes.
LinearSolveReport solve_linma(const GridFunction& u, const std::function<double(Vec2)>& g,
                              const std::function<double(Vec2)>& boundary_v, const Tolerances& tol = {});

/// Same equation restricted to an explicit unknown set. unknown[] holds
/// node indices; every 8-neighbor of an unknown must be unknown or carry a
/// Dirichlet value in dirichlet[] (indexed by node, NaN = unset).
LinearSolveReport solve_linma_nodes(const CofactorField& cof, const GridFunction& geom,
                                    const std::vector<int>& unknown, const std::vector<double>& dirichlet,
                                    const std::vector<double>& rhs_by_node, const Tolerances& tol = {});

/// Discrete ABP check: sup_in v <= sup_bdry v + C(n) |Omega|^{1/n}
/// ||g / det(a)^{1/n}||_{L^n(contact set)} with C(2) = 2/pi, contact set =
/// nodes supporting the graph of v from above.
struct AbpReport {
  double sup_interior = 0.0;
  double sup_boundary = 0.0;
  double bound_term = 0.0;
  int contact_nodes = 0;
  bool pass = false;
};
AbpReport abp_check(const Sym2Field& a, const GridFunction& v, const GridFunction& g, double lambda,
                    const Tolerances& tol = {});

/// Harnack diagnostics: solve L_u v = 0 on the realized section
/// S_u(x0, 2t) with the supplied trace, then measure sup/inf over the
/// half-height section and over the requested balls. Extremes are located
/// by per-grid-line quadratic interpolation, which is exact for quadratic
/// data so that closed-form section extremes are reproduced to rounding.
struct HarnackReport {
  double sup = 0.0, inf = 0.0;
  double ratio = 0.0;  // +inf encoded as std::numeric_limits infinity
  std::vector<double> ball_sup, ball_inf, ball_ratio;
  LinearSolveReport solve;
};
HarnackReport harnack_probe(const GridFunction& u, Vec2 center, double t,
                            const std::function<double(Vec2)>& trace, const std::vector<double>& ball_radii,
                            const Tolerances& tol = {});

/// Holder exponent estimate by least squares on the upper envelope of
/// log-oscillation versus log-distance over dyadic bins.
struct HoelderReport {
  double interior_exponent = 0.0;
  double interior_seminorm = 0.0;
  double boundary_exponent = 0.0;
  double boundary_seminorm = 0.0;
  int bins = 0;
};
HoelderReport hoelder_probe(const GridFunction& u, const GridFunction& v, const Tolerances& tol = {});

/// Oscillation of v over concentric sections S_u(x0, rho) for a list of
/// heights, plus the fitted geometric decay rate alpha.
struct OscillationDecay {
  std::vector<double> heights;
  std::vector<double> osc;
  double alpha = 0.0;
};
OscillationDecay oscillation_decay(const GridFunction& u, const GridFunction& v, Vec2 center,
                                   const std::vector<double>& heights);

/// sup/inf of the field v over the sublevel set { phi < 0 }, with
/// sub-grid extremes from per-line quadratic interpolation.
/// has_v marks nodes where v is defined.
struct SublevelExtremes {
  double sup = -1e300, inf = 1e300;
  bool found = false;
};
SublevelExtremes sublevel_extremes(const GridFunction& geom, const std::vector<double>& v,
                                   const std::vector<uint8_t>& has_v, const std::function<double(Vec2)>& phi);

}  // namespace ampere
