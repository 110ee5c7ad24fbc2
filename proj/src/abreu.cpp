#include "ampere/abreu.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ampere {

GFunction GFunction::power(double theta, int n) {
  if (theta < 0.0 || theta >= 1.0 / n)
    throw std::invalid_argument("GFunction: power exponent must lie in [0, 1/n)");
  if (theta == 0.0) return log(n);
  GFunction g;
  g.kind = Kind::power;
  g.theta = theta;
  g.n = n;
  return g;
}

GFunction GFunction::log(int n) {
  GFunction g;
  g.kind = Kind::logarithm;
  g.n = n;
  return g;
}

GFunction GFunction::log_over_loglog(int n) {
  GFunction g;
  g.kind = Kind::log_over_loglog;
  g.n = n;
  return g;
}

// For the log-over-loglog variant the shift constant e^{e^{4n}} exceeds the
// double range for n >= 1, so log(d + shift) evaluates to e^{4n} for every
// representable d and the inner logarithm is the constant L = 4n.
double GFunction::G(double d) const {
  switch (kind) {
    case Kind::power: return (std::pow(d, theta) - 1.0) / theta;
    case Kind::logarithm: return std::log(d);
    case Kind::log_over_loglog: return std::log(d) / (4.0 * n);
  }
  return 0.0;
}

double GFunction::dG(double d) const {
  switch (kind) {
    case Kind::power: return std::pow(d, theta - 1.0);
    case Kind::logarithm: return 1.0 / d;
    case Kind::log_over_loglog: return 1.0 / (4.0 * n * d);
  }
  return 0.0;
}

double GFunction::d2G(double d) const {
  switch (kind) {
    case Kind::power: return (theta - 1.0) * std::pow(d, theta - 2.0);
    case Kind::logarithm: return -1.0 / (d * d);
    case Kind::log_over_loglog: return -1.0 / (4.0 * n * d * d);
  }
  return 0.0;
}

double GFunction::Theta(double w) const {
  switch (kind) {
    case Kind::power: return std::pow(w, 1.0 / (theta - 1.0));
    case Kind::logarithm: return 1.0 / w;
    case Kind::log_over_loglog: return 1.0 / (4.0 * n * w);
  }
  return 0.0;
}

double GFunction::dual(double d) const { return G(d) - d * dG(d); }

A123Report check_A1_A2_A3(const GFunction& g) {
  A123Report rep;
  int n = g.n;
  // (A1) w' + (1 - 1/n) w / d <= 0 on a log grid.
  rep.a1 = true;
  rep.a1_worst = -1e300;
  for (int k = -40; k <= 40; ++k) {
    double d = std::pow(10.0, 0.1 * k);
    double val = g.d2G(d) + (1.0 - 1.0 / n) * g.dG(d) / d;
    if (!std::isfinite(val)) {
      rep.inconclusive = true;
      continue;
    }
    rep.a1_worst = std::max(rep.a1_worst, val);
    if (val > 1e-12 * std::fabs(g.dG(d) / d)) rep.a1 = false;
  }
  // (A2) w*(d) -> infinity along d = 10^k.
  {
    bool mono = true;
    double prev = -1e300;
    for (int k = 1; k <= 8; ++k) {
      double v = g.dual(std::pow(10.0, k));
      if (!std::isfinite(v)) {
        rep.inconclusive = true;
        mono = false;
        break;
      }
      if (v <= prev) mono = false;
      prev = v;
    }
    rep.a2_growth = g.dual(1e8) - g.dual(1e4);
    rep.a2 = mono && rep.a2_growth > 0.5;
  }
  // (A3) d^{1 - 1/n} w -> infinity as d -> 0.
  {
    bool mono = true;
    double prev = -1e300;
    for (int k = 1; k <= 8; ++k) {
      double d = std::pow(10.0, -k);
      double v = std::pow(d, 1.0 - 1.0 / n) * g.dG(d);
      if (!std::isfinite(v)) {
        rep.inconclusive = true;
        mono = false;
        break;
      }
      if (v <= prev) mono = false;
      prev = v;
    }
    double at8 = std::pow(1e-8, 1.0 - 1.0 / n) * g.dG(1e-8);
    double at4 = std::pow(1e-4, 1.0 - 1.0 / n) * g.dG(1e-4);
    rep.a3_growth = at8 - at4;
    rep.a3 = mono && rep.a3_growth > 0.5;
  }
  return rep;
}

namespace {

// Sites of the density solve correspond to interior mesh vertices in
// mesh-vertex order; recover that order for target assembly and warm starts.
std::vector<int> interior_vertices(const TriMesh& mesh) {
  std::vector<int> out;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!mesh.is_boundary[v]) out.push_back(v);
  return out;
}

struct ProblemSetup {
  GridFunction tmpl;  // mask + geometry, values unused
  TriMesh mesh;
  std::vector<int> site_node;       // mesh interior vertex -> grid node
  std::vector<double> boundary_g;   // per mesh vertex (boundary entries)
  int n_sites = 0;
};

ProblemSetup setup_problem(const SecondBVP& prob) {
  ProblemSetup S;
  if (prob.inside) {
    S.tmpl = GridFunction::masked(prob.lo, prob.h, prob.nx, prob.ny, prob.inside, [](Vec2) { return 0.0; });
  } else {
    Vec2 hi{prob.lo.x + (prob.nx - 1) * prob.h, prob.lo.y + (prob.ny - 1) * prob.h};
    S.tmpl = GridFunction::box(prob.lo, hi, prob.nx, prob.ny, [](Vec2) { return 0.0; });
  }
  if (!prob.inside) {
    Vec2 hi{prob.lo.x + (prob.nx - 1) * prob.h, prob.lo.y + (prob.ny - 1) * prob.h};
    S.mesh = square_grid_mesh(prob.lo, hi, prob.nx, prob.ny);
    // Mesh vertex v corresponds to grid node v directly.
    for (int v = 0; v < S.mesh.n_vertices(); ++v)
      if (!S.mesh.is_boundary[v]) S.site_node.push_back(v);
    S.boundary_g.assign(S.mesh.n_vertices(), 0.0);
    for (int v = 0; v < S.mesh.n_vertices(); ++v)
      if (S.mesh.is_boundary[v]) S.boundary_g[v] = prob.phi(S.mesh.pts[v]);
  } else {
    // Masked domain: every inside grid node is a mesh site; the mesh
    // boundary is a polygon sampled from the domain shape boundary.
    std::vector<Vec2> pts;
    std::vector<int> nodes;
    for (int j = 0; j < S.tmpl.ny; ++j)
      for (int i = 0; i < S.tmpl.nx; ++i)
        if (S.tmpl.mask[S.tmpl.idx(i, j)] != 0) {
          pts.push_back(S.tmpl.point(i, j));
          nodes.push_back(S.tmpl.idx(i, j));
        }
    int n_inside = int(pts.size());
    // Boundary ring: march the shape boundary at roughly grid resolution by
    // bisecting between inside and outside points radially from the center.
    Vec2 c{0, 0};
    for (auto& p : pts) c = c + p;
    c = c / double(n_inside);
    int ring = std::max(32, int(std::ceil(2.0 * M_PI * (S.tmpl.nx * S.tmpl.h) / S.tmpl.h / 4.0)));
    for (int k = 0; k < ring; ++k) {
      double th = 2.0 * M_PI * k / ring;
      Vec2 dir{std::cos(th), std::sin(th)};
      double lo = 0.0, hi = S.tmpl.h * std::max(S.tmpl.nx, S.tmpl.ny);
      if (!prob.inside(c)) throw std::invalid_argument("abreu: domain center outside the shape");
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (prob.inside(c + mid * dir))
          lo = mid;
        else
          hi = mid;
      }
      pts.push_back(c + lo * dir);
    }
    S.mesh = delaunay_mesh(pts);
    S.boundary_g.assign(S.mesh.n_vertices(), 0.0);
    for (int v = 0; v < S.mesh.n_vertices(); ++v) {
      if (S.mesh.is_boundary[v]) {
        S.boundary_g[v] = prob.phi(S.mesh.pts[v]);
      } else if (v < n_inside) {
        S.site_node.push_back(v);
      }
    }
    // Map interior mesh vertices back to grid nodes by index order.
    // delaunay_mesh preserves the input point order, so vertex v < n_inside
    // corresponds to nodes[v].
    for (size_t k = 0; k < S.site_node.size(); ++k) S.site_node[k] = nodes[S.site_node[k]];
  }
  S.n_sites = int(S.site_node.size());
  // The density solver enumerates sites as interior mesh vertices in vertex
  // order; the node mapping above must agree exactly.
  if (interior_vertices(S.mesh).size() != size_t(S.n_sites))
    throw std::runtime_error("abreu: mesh interior vertices do not match the grid sites");
  return S;
}

struct StepCache {
  std::optional<std::vector<double>> warm;   // previous site values
  std::vector<double> last_density;          // detect unchanged density
  std::optional<GridFunction> last_u;
};

ContinuationState do_phi_t_step(const SecondBVP& prob, const ProblemSetup& S, const ContinuationState& state,
                                double damping, const Tolerances& tol, StepCache* cache) {
  ContinuationState next = state;
  const GridFunction& w = state.w;
  // Admissible range and the Monge-Ampere density Theta(w).
  std::vector<double> theta_at(w.values.size(), 0.0);
  for (size_t k = 0; k < w.values.size(); ++k) {
    if (w.mask[k] == 0) continue;
    double wv = w.values[k];
    if (!(wv >= 1e-8 && wv <= 1e8)) throw std::runtime_error("phi_t_step: w left admissible range");
    double th = prob.G.Theta(wv);
    if (!std::isfinite(th) || th <= 0.0) throw std::runtime_error("phi_t_step: w left admissible range");
    theta_at[k] = th;
  }
  // Per-triangle densities: average the nodal values over the corners
  // (boundary ring points of masked domains borrow the nearest node).
  std::vector<double> tri_density(S.mesh.n_triangles(), 0.0);
  auto node_value = [&](Vec2 p) {
    int i = std::clamp(int(std::lround((p.x - w.origin.x) / w.h)), 0, w.nx - 1);
    int j = std::clamp(int(std::lround((p.y - w.origin.y) / w.h)), 0, w.ny - 1);
    // Walk inward if the snapped node is exterior.
    if (w.mask[w.idx(i, j)] == 0) {
      for (int r = 1; r < 4 && w.mask[w.idx(i, j)] == 0; ++r)
        for (int dj = -r; dj <= r && w.mask[w.idx(i, j)] == 0; ++dj)
          for (int di = -r; di <= r; ++di)
            if (w.in_grid(i + di, j + dj) && w.mask[w.idx(i + di, j + dj)] != 0) {
              i += di;
              j += dj;
              break;
            }
    }
    return theta_at[w.idx(i, j)];
  };
  for (int t = 0; t < S.mesh.n_triangles(); ++t) {
    double s = 0.0;
    for (int e = 0; e < 3; ++e) s += node_value(S.mesh.pts[S.mesh.tris[t][e]]);
    tri_density[t] = s / 3.0;
  }

  // Monge-Ampere stage (skipped when the density is unchanged).
  bool same_density = cache && cache->last_u && cache->last_density.size() == tri_density.size();
  if (same_density) {
    for (size_t k = 0; k < tri_density.size() && same_density; ++k)
      if (std::fabs(tri_density[k] - cache->last_density[k]) >
          1e-14 * (1.0 + std::fabs(tri_density[k])))
        same_density = false;
  }
  if (same_density) {
    next.u = *cache->last_u;
    next.ma_residual = 0.0;
  } else {
    SolverOptions sopt;
    if (cache && cache->warm) sopt.warm_start = cache->warm;
    AleksandrovSolution sol = solve_density(S.mesh, S.boundary_g, tri_density, tol, sopt);
    next.ma_residual = sol.max_rel_residual;
    next.u = S.tmpl;
    // Interior sites first (mesh interior order matches site_node), then
    // boundary-layer nodes of the box case take phi directly.
    for (int k = 0; k < S.n_sites; ++k) next.u.values[S.site_node[k]] = sol.site_values[k];
    for (int j = 0; j < next.u.ny; ++j)
      for (int i = 0; i < next.u.nx; ++i)
        if (next.u.mask[next.u.idx(i, j)] == 1 && !prob.inside)
          next.u.values[next.u.idx(i, j)] = prob.phi(next.u.point(i, j));
    if (cache) {
      cache->warm = sol.site_values;
      cache->last_density = tri_density;
      cache->last_u = next.u;
    }
  }

  // Linear stage: U^{ij} (w_t)_{ij} = t f, w_t = t psi + (1 - t) on the layer.
  double t = state.t;
  auto rhs = [&](Vec2 p) { return t * prob.f(p); };
  auto wbnd = [&](Vec2 p) { return t * prob.psi(p) + (1.0 - t); };
  LinearSolveReport lin = solve_linma(next.u, rhs, wbnd, tol);
  next.lin_residual = lin.residual_norm;

  CofactorField cof = cofactor_field(next.u, tol);
  next.min_det = cof.min_det;
  next.max_det = cof.max_det;

  // Damped update; boundary values are set exactly.
  next.w = state.w;
  double gap = 0.0;
  for (size_t k = 0; k < next.w.values.size(); ++k) {
    if (next.w.mask[k] == 0) continue;
    double target = lin.v.values[k];
    gap = std::max(gap, std::fabs(target - state.w.values[k]));
    if (next.w.mask[k] == 1)
      next.w.values[k] = target;
    else
      next.w.values[k] = state.w.values[k] + damping * (target - state.w.values[k]);
    if (!(next.w.values[k] > 0.0)) throw std::runtime_error("phi_t_step: w lost positivity");
  }
  next.fp_gap = gap;
  return next;
}

}  // namespace

ContinuationState phi_t_step(const SecondBVP& prob, const ContinuationState& state, double damping,
                             const Tolerances& tol) {
  ProblemSetup S = setup_problem(prob);
  return do_phi_t_step(prob, S, state, damping, tol, nullptr);
}

ContinuationResult continuation_solve(const SecondBVP& prob, const ContinuationOptions& opt,
                                      const Tolerances& tol) {
  ProblemSetup S = setup_problem(prob);
  auto a123 = check_A1_A2_A3(prob.G);
  ContinuationResult out;
  if (!(a123.a1 && a123.a2 && a123.a3)) {
    std::ostringstream os;
    os << "structure conditions not all satisfied:";
    if (!a123.a1) os << " A1";
    if (!a123.a2) os << " A2";
    if (!a123.a3) os << " A3";
    out.warnings = os.str();
  }

  ContinuationState state;
  state.t = 0.0;
  state.u = S.tmpl;
  state.w = S.tmpl;
  for (size_t k = 0; k < state.w.values.size(); ++k)
    if (state.w.mask[k] != 0) state.w.values[k] = 1.0;  // the t = 0 fixed point

  StepCache cache;
  double t_prev = 0.0;
  std::vector<double> targets;
  for (int k = 0; k < opt.t_steps; ++k) targets.push_back(double(k) / (opt.t_steps - 1));
  size_t ti = 0;
  while (ti < targets.size()) {
    double t_goal = targets[ti];
    state.t = t_goal;
    ContinuationState saved = state;
    double damping = opt.damping;
    bool converged = false;
    double prev_gap = 1e300;
    int sweeps = 0;
    for (; sweeps < opt.max_sweeps_per_t; ++sweeps) {
      state = do_phi_t_step(prob, S, state, damping, tol, &cache);
      if (state.fp_gap <= tol.fp) {
        converged = true;
        ++sweeps;
        break;
      }
      if (state.fp_gap > prev_gap) damping = std::max(0.5 * damping, 1.0 / 64.0);
      prev_gap = state.fp_gap;
    }
    PathRow row{t_goal, sweeps, state.ma_residual, state.lin_residual, state.fp_gap,
                state.min_det, state.max_det};
    if (converged) {
      out.log.push_back(row);
      t_prev = t_goal;
      ++ti;
      continue;
    }
    // Bisect the step.
    double mid = 0.5 * (t_prev + t_goal);
    if (t_goal - t_prev <= opt.min_t_step) {
      out.state = state;
      out.converged = false;
      std::ostringstream os;
      os << "fixed-point stall at t = " << t_goal << " with gap " << state.fp_gap;
      out.warnings += (out.warnings.empty() ? "" : "; ") + os.str();
      return out;
    }
    state = saved;
    targets.insert(targets.begin() + ti, mid);
  }
  out.state = state;
  out.converged = true;
  return out;
}

FourthOrderResidual fourth_order_residual(const GridFunction& u, const GFunction& G, const Tolerances& tol) {
  Sym2Field H = discrete_hessian(u);
  std::vector<double> wv(u.values.size(), 0.0);
  std::vector<uint8_t> wvalid(u.values.size(), 0);
  for (size_t k = 0; k < u.values.size(); ++k) {
    if (!H.valid[k]) continue;
    double det = H.m[k].det();
    if (!(det > 0.0)) throw std::runtime_error("fourth_order_residual: degenerate Hessian");
    wv[k] = G.dG(det);
    wvalid[k] = 1;
  }
  FourthOrderResidual out;
  out.residual = u;
  std::fill(out.residual.values.begin(), out.residual.values.end(), 0.0);
  std::fill(out.residual.mask.begin(), out.residual.mask.end(), 0);
  bool affine_case = G.kind == GFunction::Kind::power && std::fabs(G.theta - 1.0 / (G.n + 2)) < 1e-14;
  GridFunction hmean = out.residual;
  double ih2 = 1.0 / (u.h * u.h);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      int node = u.idx(i, j);
      if (!H.valid[node]) continue;
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di)
          if (!wvalid[u.idx(i + di, j + dj)]) ok = false;
      if (!ok) continue;
      Sym2 U = H.m[node].cofactor();
      auto wat = [&](int di, int dj) { return wv[u.idx(i + di, j + dj)]; };
      double w11 = (wat(1, 0) - 2.0 * wat(0, 0) + wat(-1, 0)) * ih2;
      double w22 = (wat(0, 1) - 2.0 * wat(0, 0) + wat(0, -1)) * ih2;
      double w12 = (wat(1, 1) + wat(-1, -1) - wat(1, -1) - wat(-1, 1)) * 0.25 * ih2;
      double r = U.a11 * w11 + 2.0 * U.a12 * w12 + U.a22 * w22;
      out.residual.values[node] = r;
      out.residual.mask[node] = 2;
      out.max_norm = std::max(out.max_norm, std::fabs(r));
      if (affine_case) {
        hmean.values[node] = -r / (G.n + 1);
        hmean.mask[node] = 2;
      }
    }
  if (affine_case) out.affine_mean_curvature = std::move(hmean);
  (void)tol;
  return out;
}

GridFunction second_divergence(const GridFunction& u, const std::vector<double>& w_by_node,
                               const Tolerances& tol) {
  Sym2Field H = discrete_hessian(u);
  GridFunction out = u;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  std::fill(out.mask.begin(), out.mask.end(), 0);
  double ih2 = 1.0 / (u.h * u.h);
  auto P = [&](int node, int which) {
    Sym2 U = H.m[node].cofactor();
    double w = w_by_node[node];
    return which == 0 ? U.a11 * w : (which == 1 ? U.a12 * w : U.a22 * w);
  };
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di)
          if (!H.valid[u.idx(i + di, j + dj)]) ok = false;
      if (!ok) continue;
      auto at = [&](int di, int dj, int which) { return P(u.idx(i + di, j + dj), which); };
      double d11 = (at(1, 0, 0) - 2.0 * at(0, 0, 0) + at(-1, 0, 0)) * ih2;
      double d22 = (at(0, 1, 2) - 2.0 * at(0, 0, 2) + at(0, -1, 2)) * ih2;
      double d12 = (at(1, 1, 1) + at(-1, -1, 1) - at(1, -1, 1) - at(-1, 1, 1)) * 0.25 * ih2;
      out.values[u.idx(i, j)] = d11 + 2.0 * d12 + d22;
      out.mask[u.idx(i, j)] = 2;
    }
  (void)tol;
  return out;
}

double affine_area(const GridFunction& u, double gamma) {
  Sym2Field H = discrete_hessian(u);
  double s = 0.0;
  for (size_t k = 0; k < H.m.size(); ++k)
    if (H.valid[k]) s += std::pow(std::max(H.m[k].det(), 0.0), gamma) * u.h * u.h;
  return s;
}

DualEquationReport dual_equation_residual(const GridFunction& u, const GFunction& G,
                                          const std::function<double(Vec2)>& f, const Tolerances& tol) {
  // Strict convexity: the discrete Hessian must be PD wherever defined.
  Sym2Field H = discrete_hessian(u);
  for (size_t k = 0; k < H.m.size(); ++k)
    if (H.valid[k] && !(H.m[k].det() > 0.0 && H.m[k].a11 > 0.0))
      throw std::runtime_error("dual_equation_residual: gradient map not injective");

  // PL transform of the grid data.
  Vec2 hi{u.origin.x + (u.nx - 1) * u.h, u.origin.y + (u.ny - 1) * u.h};
  TriMesh mesh = square_grid_mesh(u.origin, hi, u.nx, u.ny);
  std::vector<double> vals = u.values;
  flip_to_envelope(mesh, vals);
  PLConvexFunction upl = PLConvexFunction::build(std::move(mesh), std::move(vals), tol);
  LegendreTransform L = legendre_transform(upl, tol);
  if (L.degenerate) throw std::runtime_error("dual_equation_residual: degenerate gradient image");

  // Image grid over the gradient hull, shrunk by a margin; spacing chosen
  // so local quadratic fits average out the PL facets of the transform.
  auto dom = convex_hull(L.dual.mesh.pts);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& p : dom) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double diam = std::hypot(xmax - xmin, ymax - ymin);
  // Facet wiggle of the PL transform has amplitude ~ h^2 and is divided by
  // H^4 through the two quadratic fits; H ~ h^{1/3} balances that noise
  // against the smooth truncation and still refines the image grid.
  double Hsp = std::min(0.35 * std::cbrt(u.h * diam * diam), std::min(xmax - xmin, ymax - ymin) / 16.0);
  int nxi = std::max(14, int((xmax - xmin) / Hsp) + 2);
  int nyi = std::max(14, int((ymax - ymin) / Hsp) + 2);
  Hsp = std::max((xmax - xmin) / (nxi - 1), (ymax - ymin) / (nyi - 1));
  double margin = 2.5 * Hsp;
  auto inside = [&](Vec2 p) {
    size_t m = dom.size();
    for (size_t i = 0; i < m; ++i) {
      Vec2 a = dom[i], b = dom[(i + 1) % m], e = b - a;
      if (cross(e, p - a) < margin * norm(e)) return false;
    }
    return true;
  };
  DualEquationReport rep;
  rep.image_spacing = Hsp;

  // Sample the transform and fit local quadratics: window of +-2 nodes.
  GridFunction ust = GridFunction::masked({xmin, ymin}, Hsp, nxi, nyi, inside,
                                          [&](Vec2 p) { return L.dual.eval_support(p); });
  const int W = 2;
  auto fit_quadratic = [&](const GridFunction& gf, int i, int j, double* coef) {
    // coef: [1, x, y, x^2/2, xy, y^2/2] in local coordinates.
    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
    for (int dj = -W; dj <= W; ++dj)
      for (int di = -W; di <= W; ++di) {
        if (!gf.in_grid(i + di, j + dj) || gf.mask[gf.idx(i + di, j + dj)] == 0) continue;
        double x = di * gf.h, y = dj * gf.h;
        Eigen::Matrix<double, 6, 1> row;
        row << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
        A += row * row.transpose();
        b += row * gf.values[gf.idx(i + di, j + dj)];
      }
    Eigen::Matrix<double, 6, 1> c = A.ldlt().solve(b);
    for (int k = 0; k < 6; ++k) coef[k] = c[k];
  };

  // First pass: d* = det D^2 u* and w* per node.
  GridFunction wst = ust;
  GridFunction ok = ust;
  std::fill(wst.values.begin(), wst.values.end(), 0.0);
  std::fill(ok.values.begin(), ok.values.end(), 0.0);
  std::vector<Vec2> grad(ust.values.size());
  std::vector<Sym2> hess(ust.values.size());
  for (int j = 0; j < ust.ny; ++j)
    for (int i = 0; i < ust.nx; ++i) {
      if (ust.mask[ust.idx(i, j)] != 2) continue;
      double c[6];
      fit_quadratic(ust, i, j, c);
      Sym2 Hs{c[3], c[4], c[5]};
      if (!(Hs.det() > 1e-12)) continue;
      grad[ust.idx(i, j)] = {c[1], c[2]};
      hess[ust.idx(i, j)] = Hs;
      double dstar = Hs.det();
      double d = 1.0 / dstar;
      wst.values[ust.idx(i, j)] = G.dual(d);
      ok.values[ust.idx(i, j)] = 1.0;
    }
  // Second pass: residual U*^{ij} w*_{ij} + f(Du*) det D^2 u*.
  for (int j = 0; j < ust.ny; ++j)
    for (int i = 0; i < ust.nx; ++i) {
      int node = ust.idx(i, j);
      if (ust.mask[node] != 2 || ok.values[node] == 0.0) continue;
      bool all_ok = true;
      for (int dj = -W; dj <= W && all_ok; ++dj)
        for (int di = -W; di <= W && all_ok; ++di)
          if (!ust.in_grid(i + di, j + dj) || ok.values[ust.idx(i + di, j + dj)] == 0.0) all_ok = false;
      if (!all_ok) continue;
      double c[6];
      fit_quadratic(wst, i, j, c);
      Sym2 Ustar = hess[node].cofactor();
      double res = Ustar.a11 * c[3] + 2.0 * Ustar.a12 * c[4] + Ustar.a22 * c[5] +
                   f(grad[node]) * hess[node].det();
      rep.max_norm = std::max(rep.max_norm, std::fabs(res));
      rep.l2_norm += res * res * Hsp * Hsp;
      ++rep.nodes;
    }
  rep.l2_norm = std::sqrt(rep.l2_norm);
  return rep;
}

double affine_profile_polynomial(int n, double alpha) {
  return 8.0 * alpha * alpha - double(n * n - 4 * n + 12) * alpha + 2.0 * double((n - 1) * (n - 1));
}

std::optional<std::pair<double, double>> affine_profile_roots(int n) {
  double b = double(n * n - 4 * n + 12);
  double disc = b * b - 64.0 * double((n - 1) * (n - 1));
  if (disc < 0.0) return std::nullopt;
  double s = std::sqrt(disc);
  return std::make_pair((b - s) / 16.0, (b + s) / 16.0);
}

}  // namespace ampere
