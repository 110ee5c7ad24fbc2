#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ampere/grid.hpp"
#include "ampere/linma.hpp"
#include "ampere/ma_dirichlet.hpp"
#include "ampere/tolerances.hpp"

namespace ampere {

/// Smooth strictly increasing, strictly concave weight G on (0, infinity):
/// the power family (d^theta - 1)/theta with 0 <= theta < 1/n (theta = 0 is
/// log d), and the log-over-loglog variant log d / log log(d + e^{e^{4n}}).
/// Provides G, G', G'', the inverse Theta of G', and the dual
/// w*(d) = G(d) - d G'(d).
struct GFunction {
  enum class Kind { power, logarithm, log_over_loglog };
  Kind kind = Kind::logarithm;
  double theta = 0.0;
  int n = 2;

  static GFunction power(double theta, int n = 2);
  static GFunction log(int n = 2);
  static GFunction log_over_loglog(int n = 2);

  double G(double d) const;
  double dG(double d) const;
  double d2G(double d) const;
  double Theta(double w) const;
  double dual(double d) const;
};

/// Sampled verdicts for the structure conditions.
struct A123Report {
  bool a1 = false, a2 = false, a3 = false;
  bool inconclusive = false;  // overflow at a range edge
  double a1_worst = 0.0;      // max of w' + (1 - 1/n) w/d over samples
  double a2_growth = 0.0;     // w*(1e8) - w*(1e4)
  double a3_growth = 0.0;     // d^{1-1/n} w at 1e-8 minus at 1e-4
};
A123Report check_A1_A2_A3(const GFunction& g);

/// Second boundary value problem on a grid domain (full box, or a disk
/// masked into the box).
struct SecondBVP {
  Vec2 lo;
  double h = 0.0;
  int nx = 0, ny = 0;
  std::function<bool(Vec2)> inside;  // empty => full box
  std::function<double(Vec2)> f;    // prescribed curvature data
  std::function<double(Vec2)> phi;  // boundary data for u
  std::function<double(Vec2)> psi;  // boundary data for w, inf psi > 0
  GFunction G = GFunction::power(0.25);
};

struct ContinuationState {
  double t = 0.0;
  GridFunction u, w;
  double ma_residual = 0.0, lin_residual = 0.0, fp_gap = 0.0;
  int sweeps = 0;
  double min_det = 0.0, max_det = 0.0;
};

struct ContinuationOptions {
  int t_steps = 11;           // uniform schedule 0, 0.1, ..., 1
  double damping = 0.5;
  int max_sweeps_per_t = 200;  // exceeded => bisect the t step
  double min_t_step = 1e-4;
};

struct PathRow {
  double t = 0.0;
  int sweeps = 0;
  double ma_residual = 0.0, lin_residual = 0.0, fp_gap = 0.0;
  double min_det = 0.0, max_det = 0.0;
};

/// One application of the fixed-point map at state.t: Monge-Ampere stage
/// det D^2 u = Theta(w), then the linear stage U^{ij} (w_t)_{ij} = t f with
/// w_t = t psi + (1 - t) on the boundary, then the damped update.
ContinuationState phi_t_step(const SecondBVP& prob, const ContinuationState& state, double damping,
                             const Tolerances& tol = {});

struct ContinuationResult {
  ContinuationState state;
  std::vector<PathRow> log;
  bool converged = false;
  std::string warnings;
};
ContinuationResult continuation_solve(const SecondBVP& prob, const ContinuationOptions& opt = {},
                                      const Tolerances& tol = {});

/// w = G'(det D^2 u) nodewise, then U^{ij} w_{ij} by the linma stencil.
/// Defined on nodes with two full layers. For theta = 1/(n+2) the affine
/// mean curvature -L[u]/(n+1) is also reported.
struct FourthOrderResidual {
  GridFunction residual;              // mask 2 where defined
  std::optional<GridFunction> affine_mean_curvature;
  double max_norm = 0.0;
};
FourthOrderResidual fourth_order_residual(const GridFunction& u, const GFunction& G,
                                          const Tolerances& tol = {});

/// Legendre-dual residual: build the PL transform of u, sample it on an
/// image grid, recover derivatives by local quadratic fits (exact for
/// quadratic data), and assemble U*^{ij} w*_{ij} + f(Du*) det D^2 u*.
struct DualEquationReport {
  double max_norm = 0.0;
  double l2_norm = 0.0;
  int nodes = 0;
  double image_spacing = 0.0;
};
DualEquationReport dual_equation_residual(const GridFunction& u, const GFunction& G,
                                          const std::function<double(Vec2)>& f, const Tolerances& tol = {});

/// Discrete affine area: sum of (det D^2 u)^gamma h^2 over valid nodes.
double affine_area(const GridFunction& u, double gamma);

/// Double-divergence assembly sum_ij D_ij (U^{ij} w) on nodes two layers in.
GridFunction second_divergence(const GridFunction& u, const std::vector<double>& w_by_node,
                               const Tolerances& tol = {});

/// 8 a^2 - (n^2 - 4n + 12) a + 2 (n - 1)^2, and its roots when real.
double affine_profile_polynomial(int n, double alpha);
std::optional<std::pair<double, double>> affine_profile_roots(int n);

}  // namespace ampere
