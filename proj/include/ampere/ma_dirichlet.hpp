#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ampere/convex_core.hpp"

namespace ampere {

/// Dirichlet data for det D^2 u = mu on a convex polygon: continuous
/// boundary values sampled at the polygon vertices and a measure given
/// either as Dirac masses at interior sites or as per-cell densities.
struct DirichletProblem {
  ConvexDomain domain;
  std::vector<double> boundary_values;  // one per domain vertex
  std::vector<Vec2> dirac_sites;
  std::vector<double> dirac_masses;
};

struct AleksandrovSolution {
  PLConvexFunction u;               // envelope triangulation over boundary + sites
  std::vector<Vec2> site_points;    // input site order
  std::vector<double> site_values;  // solved heights, aligned with site_points
  DiscreteMeasure residual;         // achieved - target mass per site
  int iterations = 0;
  bool converged = false;
  double max_rel_residual = 0.0;
};

struct SolverOptions {
  int max_iterations = 200;           // Newton iterations (each with line search)
  int max_sweeps = 100000;            // per-site fallback sweeps
  std::optional<std::vector<double>> warm_start;  // site heights
};

/// det D^2 u = 0: the convex envelope of the boundary data, computed as the
/// lower convex hull of the lifted boundary points.
AleksandrovSolution solve_homogeneous(const ConvexDomain& domain, const std::vector<double>& g,
                                      const Tolerances& tol = {});

/// det D^2 u = sum a_i delta_{x_i}: per-site height adjustment with
/// convex-envelope consistency, Newton-accelerated mass matching.
AleksandrovSolution solve_dirac(const DirichletProblem& prob, const Tolerances& tol = {},
                                const SolverOptions& opt = {});

/// det D^2 u = f dx with per-triangle density f: converts to vertex target
/// masses over barycentric dual cells and runs the Dirac engine over all
/// interior vertices of the mesh. boundary_g is indexed by mesh vertex
/// (interior entries ignored).
AleksandrovSolution solve_density(const TriMesh& mesh, const std::vector<double>& boundary_g,
                                  const std::vector<double>& tri_density, const Tolerances& tol = {},
                                  const SolverOptions& opt = {});

/// Convex lift phi + mu (e^rho - 1) with mu grown until the sampled values
/// pass the convexity certificate. Returns mu = 0 when phi is already
/// convex on the mesh.
struct BarrierResult {
  PLConvexFunction u;
  double mu = 0.0;
};
BarrierResult barrier(const TriMesh& mesh, const std::function<double(Vec2)>& phi,
                      const std::function<double(Vec2)>& rho, double mu_cap = 1e8, const Tolerances& tol = {});

/// Strictly convex defining-style functions for barrier construction.
std::function<double(Vec2)> disk_defining_function(Vec2 center, double R);
std::function<double(Vec2)> polygon_defining_function(const ConvexDomain& domain, double smoothing);

}  // namespace ampere
