#include "ampere/linma.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ampere {

Sym2Field discrete_hessian(const GridFunction& u) {
  Sym2Field f;
  f.nx = u.nx;
  f.ny = u.ny;
  f.h = u.h;
  f.origin = u.origin;
  f.m.assign(size_t(u.nx) * u.ny, Sym2{});
  f.valid.assign(size_t(u.nx) * u.ny, 0);
  double ih2 = 1.0 / (u.h * u.h);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      if (!u.interior(i, j)) continue;
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di)
          if (!u.inside(i + di, j + dj)) ok = false;
      if (!ok) continue;
      Sym2 H;
      H.a11 = (u.at(i + 1, j) - 2.0 * u.at(i, j) + u.at(i - 1, j)) * ih2;
      H.a22 = (u.at(i, j + 1) - 2.0 * u.at(i, j) + u.at(i, j - 1)) * ih2;
      H.a12 = (u.at(i + 1, j + 1) + u.at(i - 1, j - 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1)) * 0.25 * ih2;
      f.m[f.idx(i, j)] = H;
      f.valid[f.idx(i, j)] = 1;
    }
  return f;
}

CofactorField cofactor_field(const GridFunction& u, const Tolerances& tol) {
  CofactorField c;
  c.U = discrete_hessian(u);
  c.psd_ok.assign(c.U.m.size(), 1);
  c.min_det = 1e300;
  c.max_det = -1e300;
  for (size_t k = 0; k < c.U.m.size(); ++k) {
    if (!c.U.valid[k]) continue;
    Sym2 H = c.U.m[k];
    if (!H.psd(tol.psd)) {
      c.psd_ok[k] = 0;
      ++c.flagged;
    }
    c.min_det = std::min(c.min_det, H.det());
    c.max_det = std::max(c.max_det, H.det());
    c.U.m[k] = H.cofactor();
  }
  return c;
}

double DivergenceReport::max_within(Vec2 c, double r) const {
  double m = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int node = j * nx + i;
      if (!valid[node]) continue;
      Vec2 p{origin.x + i * h, origin.y + j * h};
      if (norm(p - c) <= r) m = std::max(m, norm_at[node]);
    }
  return m;
}

DivergenceReport divergence_free_residual(const GridFunction& u, const Tolerances& tol) {
  CofactorField c = cofactor_field(u, tol);
  DivergenceReport rep;
  rep.nx = u.nx;
  rep.ny = u.ny;
  rep.origin = u.origin;
  rep.h = u.h;
  rep.norm_at.assign(u.mask.size(), 0.0);
  rep.valid.assign(u.mask.size(), 0);
  double i2h = 1.0 / (2.0 * u.h);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      bool ok = c.U.valid[c.U.idx(i, j)] != 0;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di)
          if (!c.U.valid[c.U.idx(i + di, j + dj)]) ok = false;
      if (!ok) continue;
      auto U = [&](int ii, int jj) { return c.U.m[c.U.idx(ii, jj)]; };
      double r1 = (U(i + 1, j).a11 - U(i - 1, j).a11) * i2h + (U(i, j + 1).a12 - U(i, j - 1).a12) * i2h;
      double r2 = (U(i + 1, j).a12 - U(i - 1, j).a12) * i2h + (U(i, j + 1).a22 - U(i, j - 1).a22) * i2h;
      double n = std::sqrt(r1 * r1 + r2 * r2);
      rep.norm_at[u.idx(i, j)] = n;
      rep.valid[u.idx(i, j)] = 1;
      rep.max_norm = std::max(rep.max_norm, n);
      ++rep.nodes;
    }
  return rep;
}

LinearSolveReport solve_linma_nodes(const CofactorField& cof, const GridFunction& geom,
                                    const std::vector<int>& unknown, const std::vector<double>& dirichlet,
                                    const std::vector<double>& rhs_by_node, const Tolerances& tol) {
  int n = int(unknown.size());
  std::vector<int> slot(geom.mask.size(), -1);
  for (int k = 0; k < n; ++k) slot[unknown[k]] = k;
  double ih2 = 1.0 / (geom.h * geom.h);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(n) * 9);
  Eigen::VectorXd b(n);
  int non_monotone = 0;
  for (int k = 0; k < n; ++k) {
    int node = unknown[k];
    int i = node % geom.nx, j = node / geom.nx;
    if (!cof.U.valid[node]) throw std::runtime_error("linma: unknown node lacks a full stencil");
    if (!cof.psd_ok[node]) throw std::runtime_error("degenerate Hessian nodes");
    Sym2 U = cof.U.m[node];
    double rhs = rhs_by_node[node];
    // Stencil coefficients: U11 D11 + 2 U12 D12 + U22 D22.
    const int di[8] = {1, -1, 0, 0, 1, -1, 1, -1};
    const int dj[8] = {0, 0, 1, -1, 1, -1, -1, 1};
    double co[8] = {U.a11 * ih2, U.a11 * ih2, U.a22 * ih2,         U.a22 * ih2,
                    0.5 * U.a12 * ih2, 0.5 * U.a12 * ih2, -0.5 * U.a12 * ih2, -0.5 * U.a12 * ih2};
    double diag = -2.0 * (U.a11 + U.a22) * ih2;
    bool monotone = true;
    for (int s = 0; s < 8; ++s) {
      if (co[s] < -1e-14 * (U.a11 + U.a22) * ih2) monotone = false;
      int nb = geom.idx(i + di[s], j + dj[s]);
      if (!geom.in_grid(i + di[s], j + dj[s])) throw std::runtime_error("linma: stencil leaves the grid");
      if (slot[nb] >= 0) {
        trip.emplace_back(k, slot[nb], co[s]);
      } else {
        double dv = dirichlet[nb];
        if (std::isnan(dv)) throw std::runtime_error("linma: stencil touches a node without data");
        rhs -= co[s] * dv;
      }
    }
    if (!monotone) ++non_monotone;
    trip.emplace_back(k, k, diag);
    b[k] = rhs;
  }

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.setTolerance(tol.lin);
  solver.setMaxIterations(10000);
  solver.compute(A);
  Eigen::VectorXd x = solver.solve(b);
  double bn = b.norm();
  double res = (A * x - b).norm() / (bn > tol.lin_abs ? bn : 1.0);
  LinearSolveReport rep;
  rep.iterations = int(solver.iterations());
  rep.non_monotone_nodes = non_monotone;
  rep.converged = res <= 10.0 * tol.lin + tol.lin_abs;
  if (!rep.converged) {
    // Krylov stall: fall back to a sparse direct factorization.
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() == Eigen::Success) {
      x = lu.solve(b);
      res = (A * x - b).norm() / (bn > tol.lin_abs ? bn : 1.0);
      rep.converged = res <= 10.0 * tol.lin + tol.lin_abs;
    }
    if (!rep.converged)
      throw std::runtime_error("linma: linear solve stalled, relative residual " + std::to_string(res));
  }
  rep.residual_norm = res;
  rep.v = geom;
  for (size_t node = 0; node < rep.v.values.size(); ++node)
    rep.v.values[node] = std::isnan(dirichlet[node]) ? 0.0 : dirichlet[node];
  for (int k = 0; k < n; ++k) rep.v.values[unknown[k]] = x[k];
  return rep;
}

LinearSolveReport solve_linma(const GridFunction& u, const std::function<double(Vec2)>& g,
                              const std::function<double(Vec2)>& boundary_v, const Tolerances& tol) {
  CofactorField cof = cofactor_field(u, tol);
  std::vector<int> unknown;
  std::vector<double> dirichlet(u.mask.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> rhs(u.mask.size(), 0.0);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      int node = u.idx(i, j);
      if (u.mask[node] == 2) {
        unknown.push_back(node);
        rhs[node] = g(u.point(i, j));
      } else if (u.mask[node] == 1) {
        dirichlet[node] = boundary_v(u.point(i, j));
      }
    }
  return solve_linma_nodes(cof, u, unknown, dirichlet, rhs, tol);
}

AbpReport abp_check(const Sym2Field& a, const GridFunction& v, const GridFunction& g, double lambda,
                    const Tolerances& tol) {
  if (!(lambda > 0.0)) throw std::invalid_argument("abp_check: lambda must be positive");
  // Inside nodes and the range of v.
  std::vector<int> nodes;
  double vmin = 1e300, vmax = -1e300;
  for (int j = 0; j < v.ny; ++j)
    for (int i = 0; i < v.nx; ++i)
      if (v.mask[v.idx(i, j)] != 0) {
        nodes.push_back(v.idx(i, j));
        vmin = std::min(vmin, v.values[v.idx(i, j)]);
        vmax = std::max(vmax, v.values[v.idx(i, j)]);
      }
  AbpReport rep;
  double R = 2.0 * (vmax - vmin) / v.h + 1.0;
  double l2 = 0.0;
  int inside_count = 0;
  for (int q : nodes) {
    int qi = q % v.nx, qj = q / v.nx;
    if (v.mask[q] == 1) {
      rep.sup_boundary = std::max(rep.sup_boundary, v.values[q]);
      continue;
    }
    ++inside_count;
    rep.sup_interior = std::max(rep.sup_interior, v.values[q]);
    // Upper contact: exists p with v(x) <= v(q) + p.(x - q) for all x.
    CutPoly poly = make_box({-R, -R}, {R, R});
    Vec2 xq = v.point(qi, qj);
    bool feasible = true;
    for (int x : nodes) {
      if (x == q) continue;
      Vec2 d = xq - v.point(x % v.nx, x / v.nx);
      feasible = clip(poly, d, v.values[q] - v.values[x], 0);
      if (!feasible) break;
    }
    if (feasible) {
      ++rep.contact_nodes;
      if (!a.valid[q]) continue;
      double det = a.m[q].det();
      if (det < lambda - tol.ineq) throw std::invalid_argument("abp_check: det(a) below lambda");
      double gq = g.values[q];
      l2 += gq * gq / std::sqrt(det) * v.h * v.h;
    }
  }
  double area = inside_count * v.h * v.h;
  rep.bound_term = (2.0 / M_PI) * std::sqrt(area) * std::sqrt(l2);
  rep.pass = rep.sup_interior <=
             rep.sup_boundary + rep.bound_term + tol.ineq * (1.0 + std::fabs(rep.sup_interior));
  return rep;
}

SublevelExtremes sublevel_extremes(const GridFunction& geom, const std::vector<double>& v,
                                   const std::vector<uint8_t>& has_v, const std::function<double(Vec2)>& phi) {
  SublevelExtremes ex;
  std::vector<double> ph(geom.mask.size(), 0.0);
  std::vector<uint8_t> has_ph(geom.mask.size(), 0);
  for (int j = 0; j < geom.ny; ++j)
    for (int i = 0; i < geom.nx; ++i) {
      int node = geom.idx(i, j);
      if (!has_v[node]) continue;
      ph[node] = phi(geom.point(i, j));
      has_ph[node] = 1;
    }
  auto consider = [&](double val) {
    ex.sup = std::max(ex.sup, val);
    ex.inf = std::min(ex.inf, val);
    ex.found = true;
  };
  for (int j = 0; j < geom.ny; ++j)
    for (int i = 0; i < geom.nx; ++i) {
      int node = geom.idx(i, j);
      if (has_ph[node] && ph[node] < 0.0) consider(v[node]);
    }
  // Quadratic crossing scan along each grid line, both orientations.
  auto scan = [&](bool horizontal) {
    int outer = horizontal ? geom.ny : geom.nx;
    int inner = horizontal ? geom.nx : geom.ny;
    auto id = [&](int a, int o) { return horizontal ? geom.idx(a, o) : geom.idx(o, a); };
    for (int o = 0; o < outer; ++o) {
      for (int a = 0; a + 1 < inner; ++a) {
        int n0 = id(a, o), n1 = id(a + 1, o);
        if (!has_ph[n0] || !has_ph[n1]) continue;
        double p0 = ph[n0], p1 = ph[n1];
        if (!((p0 <= 0.0 && p1 > 0.0) || (p1 <= 0.0 && p0 > 0.0))) continue;
        // Prefer the stencil centered at a; fall back to centered at a+1.
        int base = -1;
        if (a - 1 >= 0 && has_ph[id(a - 1, o)]) base = a;
        else if (a + 2 < inner && has_ph[id(a + 2, o)]) base = a + 1;
        double s = p0 / (p0 - p1);  // linear fallback in [0,1]
        double val;
        if (base >= 0) {
          int nb[3] = {id(base - 1, o), id(base, o), id(base + 1, o)};
          double f0 = ph[nb[0]], f1 = ph[nb[1]], f2 = ph[nb[2]];
          double qa = 0.5 * (f2 - 2.0 * f1 + f0), qb = 0.5 * (f2 - f0), qc = f1;
          // Solve in stencil coordinates; the crossing interval is
          // [0,1] when base == a and [-1,0] when base == a+1.
          double lo = (base == a) ? 0.0 : -1.0, hi = lo + 1.0;
          double root = std::numeric_limits<double>::quiet_NaN();
          if (std::fabs(qa) < 1e-14 * (std::fabs(qb) + std::fabs(qc))) {
            if (qb != 0.0) root = -qc / qb;
          } else {
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
              double sq = std::sqrt(disc);
              double r1 = (-qb - sq) / (2.0 * qa), r2 = (-qb + sq) / (2.0 * qa);
              if (r1 >= lo - 1e-9 && r1 <= hi + 1e-9) root = r1;
              if (r2 >= lo - 1e-9 && r2 <= hi + 1e-9)
                root = std::isnan(root) ? r2 : root;
            }
          }
          if (std::isnan(root)) {
            // Fit did not bracket; use the linear crossing.
            root = (base == a) ? s : s - 1.0;
          }
          double g0 = v[nb[0]], g1 = v[nb[1]], g2 = v[nb[2]];
          double va = 0.5 * (g2 - 2.0 * g1 + g0), vb = 0.5 * (g2 - g0), vc = g1;
          val = va * root * root + vb * root + vc;
        } else {
          val = (1.0 - s) * v[n0] + s * v[n1];
        }
        consider(val);
      }
    }
  };
  scan(true);
  scan(false);
  return ex;
}

HarnackReport harnack_probe(const GridFunction& u, Vec2 center, double t,
                            const std::function<double(Vec2)>& trace, const std::vector<double>& ball_radii,
                            const Tolerances& tol) {
  // Snap the center to the nearest node and take the centered-difference
  // slope there.
  int ci = int(std::lround((center.x - u.origin.x) / u.h));
  int cj = int(std::lround((center.y - u.origin.y) / u.h));
  if (!u.interior(ci, cj)) throw std::invalid_argument("harnack_probe: center not interior");
  Vec2 x0 = u.point(ci, cj);
  Vec2 p{(u.at(ci + 1, cj) - u.at(ci - 1, cj)) / (2.0 * u.h),
         (u.at(ci, cj + 1) - u.at(ci, cj - 1)) / (2.0 * u.h)};
  double u0 = u.at(ci, cj);
  auto ell = [&](Vec2 q) { return u0 + dot(p, q - x0); };

  CofactorField cof = cofactor_field(u, tol);
  std::vector<int> unknown;
  std::vector<double> dirichlet(u.mask.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> rhs(u.mask.size(), 0.0);
  std::vector<uint8_t> is_unknown(u.mask.size(), 0);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      int node = u.idx(i, j);
      if (u.mask[node] != 2) continue;
      Vec2 q = u.point(i, j);
      if (u.values[node] - ell(q) - 2.0 * t < 0.0) {
        unknown.push_back(node);
        is_unknown[node] = 1;
      }
    }
  double tr_min = 1e300, tr_jump = 0.0;
  for (int node : unknown) {
    int i = node % u.nx, j = node / u.nx;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int nb = u.idx(i + di, j + dj);
        if (!u.in_grid(i + di, j + dj)) throw std::runtime_error("harnack_probe: section touches the grid edge");
        if (!is_unknown[nb]) {
          if (std::isnan(dirichlet[nb])) dirichlet[nb] = trace(u.point(i + di, j + dj));
          tr_min = std::min(tr_min, dirichlet[nb]);
          tr_jump = std::max(tr_jump, std::fabs(dirichlet[nb] - trace(u.point(i, j))));
        }
      }
  }
  if (unknown.empty()) throw std::invalid_argument("harnack_probe: empty section");
  // The collar sits one cell outside the exact section boundary, so allow
  // the nonnegativity check a one-cell undershoot of the trace.
  if (tr_min < -(2.0 * tr_jump + tol.ineq))
    throw std::invalid_argument("harnack_probe: boundary data must be nonnegative");

  HarnackReport rep;
  rep.solve = solve_linma_nodes(cof, u, unknown, dirichlet, rhs, tol);

  std::vector<uint8_t> has_v(u.mask.size(), 0);
  for (int node : unknown) has_v[node] = 1;
  for (size_t node = 0; node < dirichlet.size(); ++node)
    if (!std::isnan(dirichlet[node])) has_v[node] = 1;

  auto ratio_of = [&](const SublevelExtremes& ex) {
    if (!ex.found) return std::numeric_limits<double>::quiet_NaN();
    if (ex.inf <= tol.ineq * std::max(1.0, std::fabs(ex.sup)))
      return std::numeric_limits<double>::infinity();
    return ex.sup / ex.inf;
  };
  // phi is only evaluated at nodes inside sublevel_extremes, so nodal u
  // values are exact here.
  SublevelExtremes sec = sublevel_extremes(u, rep.solve.v.values, has_v, [&](Vec2 q) {
    int i = int(std::lround((q.x - u.origin.x) / u.h));
    int j = int(std::lround((q.y - u.origin.y) / u.h));
    return u.at(i, j) - ell(q) - t;
  });
  rep.sup = sec.sup;
  rep.inf = sec.inf;
  rep.ratio = ratio_of(sec);
  // Ball extremes: solved values inside the section, the supplied trace
  // elsewhere (the trace is the function the section data came from).
  std::vector<double> v_ext = rep.solve.v.values;
  std::vector<uint8_t> has_ext(u.mask.size(), 0);
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      int node = u.idx(i, j);
      if (has_v[node]) {
        has_ext[node] = 1;
      } else {
        v_ext[node] = trace(u.point(i, j));
        has_ext[node] = 1;
      }
    }
  for (double r : ball_radii) {
    if (x0.x - r < u.origin.x || x0.y - r < u.origin.y || x0.x + r > u.origin.x + (u.nx - 1) * u.h ||
        x0.y + r > u.origin.y + (u.ny - 1) * u.h)
      throw std::invalid_argument("harnack_probe: ball leaves the grid");
    SublevelExtremes ball =
        sublevel_extremes(u, v_ext, has_ext, [&](Vec2 q) { return norm2(q - x0) - r * r; });
    rep.ball_sup.push_back(ball.sup);
    rep.ball_inf.push_back(ball.inf);
    rep.ball_ratio.push_back(ratio_of(ball));
  }
  return rep;
}

HoelderReport hoelder_probe(const GridFunction& u, const GridFunction& v, const Tolerances& tol) {
  (void)u;
  std::vector<int> interior, boundary;
  for (int j = 0; j < v.ny; ++j)
    for (int i = 0; i < v.nx; ++i) {
      int node = v.idx(i, j);
      if (v.mask[node] == 2) interior.push_back(node);
      if (v.mask[node] == 1) boundary.push_back(node);
    }
  auto strided = [](std::vector<int>& nodes, size_t cap) {
    if (nodes.size() > cap) {
      std::vector<int> out;
      size_t stride = (nodes.size() + cap - 1) / cap;
      for (size_t k = 0; k < nodes.size(); k += stride) out.push_back(nodes[k]);
      nodes.swap(out);
    }
  };
  strided(interior, 1500);
  strided(boundary, 400);

  double dmin = 2.0 * v.h, dmax = v.h * std::hypot(v.nx, v.ny) / 2.0;
  int nbins = int(std::floor(std::log2(dmax / dmin))) + 1;
  if (nbins < 3) throw std::invalid_argument("hoelder_probe: fewer than 3 distance bins");

  auto fit = [&](const std::vector<int>& a, const std::vector<int>& b, bool same, double& exponent,
                 double& seminorm) {
    std::vector<double> osc(nbins, 0.0);
    std::vector<double> dist(nbins, 0.0);
    for (int k = 0; k < nbins; ++k) dist[k] = dmin * std::pow(2.0, k + 0.5);
    for (size_t s = 0; s < a.size(); ++s)
      for (size_t r = same ? s + 1 : 0; r < b.size(); ++r) {
        int na = a[s], nb2 = b[r];
        Vec2 pa = v.point(na % v.nx, na / v.nx), pb = v.point(nb2 % v.nx, nb2 / v.nx);
        double d = norm(pa - pb);
        if (d < dmin || d >= dmax * 2.0) continue;
        int bin = std::min(int(std::floor(std::log2(d / dmin))), nbins - 1);
        osc[bin] = std::max(osc[bin], std::fabs(v.values[na] - v.values[nb2]));
      }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k < nbins; ++k) {
      if (osc[k] <= 0.0) continue;
      double X = std::log(dist[k]), Y = std::log(osc[k]);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      ++m;
    }
    if (m < 3) throw std::invalid_argument("hoelder_probe: fewer than 3 distance bins");
    exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    seminorm = 0.0;
    for (int k = 0; k < nbins; ++k)
      if (osc[k] > 0.0) seminorm = std::max(seminorm, osc[k] / std::pow(dist[k], exponent));
  };
  HoelderReport rep;
  rep.bins = nbins;
  fit(interior, interior, true, rep.interior_exponent, rep.interior_seminorm);
  fit(boundary, interior, false, rep.boundary_exponent, rep.boundary_seminorm);
  (void)tol;
  return rep;
}

OscillationDecay oscillation_decay(const GridFunction& u, const GridFunction& v, Vec2 center,
                                   const std::vector<double>& heights) {
  int ci = int(std::lround((center.x - u.origin.x) / u.h));
  int cj = int(std::lround((center.y - u.origin.y) / u.h));
  Vec2 x0 = u.point(ci, cj);
  Vec2 p{(u.at(ci + 1, cj) - u.at(ci - 1, cj)) / (2.0 * u.h),
         (u.at(ci, cj + 1) - u.at(ci, cj - 1)) / (2.0 * u.h)};
  double u0 = u.at(ci, cj);
  std::vector<uint8_t> has_v(v.mask.size(), 0);
  for (size_t k = 0; k < v.mask.size(); ++k) has_v[k] = v.mask[k] != 0;
  OscillationDecay out;
  for (double t : heights) {
    auto ex = sublevel_extremes(u, v.values, has_v, [&](Vec2 q) {
      int i = int(std::lround((q.x - u.origin.x) / u.h));
      int j = int(std::lround((q.y - u.origin.y) / u.h));
      return u.at(i, j) - (u0 + dot(p, q - x0)) - t;
    });
    if (!ex.found) continue;
    out.heights.push_back(t);
    out.osc.push_back(ex.sup - ex.inf);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t k = 0; k < out.heights.size(); ++k) {
    if (out.osc[k] <= 0.0) continue;
    double X = std::log(out.heights[k]), Y = std::log(out.osc[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++m;
  }
  out.alpha = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return out;
}

}  // namespace ampere
