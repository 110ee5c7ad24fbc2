#include "ampere/ma_dirichlet.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace ampere {

namespace {

// Mass-matching engine: heights z at interior sites, boundary lifted points
// fixed, subdifferential polygons by half-plane intersection. The area of
// site i's polygon is its Monge-Ampere mass; matching masses to targets is
// a monotone system solved by damped Newton with a per-site bisection
// fallback.
struct MassMatcher {
  std::vector<Vec2> pts;     // boundary first, then sites
  std::vector<double> vals;  // boundary values followed by current z
  int nb = 0, ns = 0;
  std::vector<double> target;
  std::vector<double> bdist;                  // site distance to domain boundary
  std::vector<std::vector<int>> near;         // per site: other point indices by distance
  std::vector<std::vector<double>> near_len;  // |y_j - x_i| in the same order
  double gmax = 0.0;
  // Per-site cache: last polygon centroid (slope estimate) and radius, used
  // to clip in shifted coordinates where far constraints test slack cheaply.
  mutable std::vector<Vec2> phat;
  mutable std::vector<double> prad;

  const Tolerances* tol = nullptr;

  Vec2 site(int i) const { return pts[nb + i]; }
  double& z(int i) { return vals[nb + i]; }
  double zv(int i) const { return vals[nb + i]; }

  void prepare(const std::vector<Vec2>& boundary_pts, const std::vector<double>& boundary_vals,
               const std::vector<Vec2>& sites, const std::vector<double>& targets, const ConvexDomain& domain) {
    nb = int(boundary_pts.size());
    ns = int(sites.size());
    pts = boundary_pts;
    pts.insert(pts.end(), sites.begin(), sites.end());
    vals = boundary_vals;
    vals.resize(nb + ns, 0.0);
    target = targets;
    gmax = *std::max_element(boundary_vals.begin(), boundary_vals.end());
    bdist.resize(ns);
    near.assign(ns, {});
    near_len.assign(ns, {});
    for (int i = 0; i < ns; ++i) {
      bdist[i] = domain.boundary_distance(site(i));
      std::vector<int>& ord = near[i];
      for (int j = 0; j < nb + ns; ++j)
        if (j != nb + i) ord.push_back(j);
      std::sort(ord.begin(), ord.end(), [&](int a, int b) {
        double da = norm2(pts[a] - site(i)), db = norm2(pts[b] - site(i));
        return da < db || (da == db && a < b);
      });
      for (int j : ord) near_len[i].push_back(norm(pts[j] - site(i)));
    }
    phat.assign(ns, Vec2{0, 0});
    prad.assign(ns, -1.0);
  }

  // Subdifferential polygon of site i at height zi, in coordinates shifted
  // by the cached slope estimate (returned vertices are absolute slopes).
  // Far constraints are skipped once provably slack for the current
  // polygon; the slope-estimate bound caps the retry growth, so an empty
  // result is only reported once the full bound has been searched.
  CutPoly polygon(int i, double zi) const {
    double rfull = 1.25 * std::max(gmax - zi, 0.0) / bdist[i] + 1e-9;
    Vec2 ph = phat[i];
    double rcap = rfull + norm(ph);
    double R = (prad[i] > 0.0) ? 2.0 * prad[i] : rcap;
    R = std::min(std::max(R, 1e-12), rcap);
    const auto& ord = near[i];
    const auto& len = near_len[i];
    for (int attempt = 0; attempt < 40; ++attempt) {
      bool full_box = R >= rcap;
      CutPoly poly = make_box({-R, -R}, {R, R});
      double rp = R * 1.4142135623730951;
      bool alive = true;
      for (size_t k = 0; k < ord.size() && alive; ++k) {
        int j = ord[k];
        Vec2 n = pts[j] - site(i);
        double c = vals[j] - zi - dot(n, ph);
        if (c > len[k] * rp) continue;  // slack for the whole polygon
        alive = clip(poly, n, c, j);
        if (alive && (k & 15) == 15) rp = poly.max_radius();
      }
      if (!alive) {
        if (full_box) return poly;  // genuinely empty
      } else {
        bool boxed = false;
        for (int id : poly.edge_id)
          if (id < 0) boxed = true;
        if (!boxed) {
          // Report in absolute slope coordinates and refresh the cache.
          for (auto& q : poly.v) q = q + ph;
          phat[i] = polygon_centroid(poly.v);
          double r2 = 0.0;
          for (auto& q : poly.v) r2 = std::max(r2, norm2(q - phat[i]));
          prad[i] = std::sqrt(r2);
          return poly;
        }
        if (full_box)
          throw std::runtime_error("ma solver: slope bound did not close the subdifferential");
      }
      R *= 4.0;
    }
    throw std::runtime_error("ma solver: subdifferential search did not terminate");
  }

  double mass(int i) const {
    CutPoly p = polygon(i, zv(i));
    return p.empty() ? 0.0 : p.area();
  }

  // Mass and Jacobian row: dA/dz_i (diagonal) and dA/dz_j for sites j.
  double mass_and_jacobian(int i, double& dii, std::vector<std::pair<int, double>>& dij) const {
    dij.clear();
    CutPoly p = polygon(i, zv(i));
    dii = 0.0;
    if (p.empty()) return 0.0;
    size_t n = p.v.size();
    for (size_t e = 0; e < n; ++e) {
      int j = p.edge_id[e];
      if (j < 0) continue;
      double el = norm(p.v[(e + 1) % n] - p.v[e]);
      double w = el / norm(pts[j] - site(i));
      dii -= w;  // every constraint offset is vals[j] - z_i
      if (j >= nb) dij.push_back({j - nb, w});
    }
    return p.area();
  }

  // sup { z : subdifferential nonempty } for site i given the others.
  double envelope_at(int i) const {
    double lo = zv(i), hi = *std::max_element(vals.begin(), vals.end()) + 1.0;
    double step = 0.5 * std::max(1.0, std::fabs(lo));
    for (int k = 0; k < 200; ++k) {
      if (!polygon(i, lo).empty()) break;
      lo -= step;
      step *= 2.0;
    }
    for (int k = 0; k < 100; ++k) {
      double mid = 0.5 * (lo + hi);
      if (polygon(i, mid).empty())
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 1e-15 * (1.0 + std::fabs(hi))) break;
    }
    return lo;
  }

  // Lower z_i until its mass reaches at least frac * target.
  void repair(int i, double frac) {
    if (mass(i) >= frac * target[i]) return;
    double env = envelope_at(i);
    double step = 1e-3 * (1.0 + std::fabs(env));
    double zi = std::min(zv(i), env);
    for (int k = 0; k < 200; ++k) {
      zi = env - step;
      CutPoly p = polygon(i, zi);
      if (!p.empty() && p.area() >= frac * target[i]) break;
      step *= 2.0;
    }
    z(i) = zi;
  }

  double max_rel_residual() const {
    double r = 0.0;
    for (int i = 0; i < ns; ++i) r = std::max(r, std::fabs(mass(i) - target[i]) / target[i]);
    return r;
  }

  // One Gauss-Seidel sweep: per-site height bisection to match the target.
  void gs_sweep() {
    for (int i = 0; i < ns; ++i) {
      double hi = envelope_at(i);
      double lo = std::min(zv(i), hi);
      double step = 1e-3 * (1.0 + std::fabs(hi));
      for (int k = 0; k < 200; ++k) {
        CutPoly p = polygon(i, lo);
        if (!p.empty() && p.area() >= target[i]) break;
        lo -= step;
        step *= 2.0;
      }
      for (int k = 0; k < 80; ++k) {
        double mid = 0.5 * (lo + hi);
        CutPoly p = polygon(i, mid);
        double a = p.empty() ? 0.0 : p.area();
        if (a >= target[i])
          lo = mid;
        else
          hi = mid;
      }
      z(i) = lo;
    }
  }

  std::pair<int, bool> solve(const SolverOptions& opt) {
    for (int i = 0; i < ns; ++i) repair(i, 0.05);
    std::vector<double> F(ns), dii(ns);
    std::vector<std::vector<std::pair<int, double>>> rows(ns);
    int it = 0;
    double last_norm = 1e300, last_rmax = 1e300;
    int stalls = 0;
    for (; it < opt.max_iterations; ++it) {
      double rmax = 0.0, fnorm = 0.0;
      for (int i = 0; i < ns; ++i) {
        double a = mass_and_jacobian(i, dii[i], rows[i]);
        F[i] = a - target[i];
        rmax = std::max(rmax, std::fabs(F[i]) / target[i]);
        fnorm += F[i] * F[i];
      }
      fnorm = std::sqrt(fnorm);
      if (rmax <= tol->solve) {
        // Newton converges quadratically here; polish toward rounding level
        // while the residual keeps collapsing (heights then carry no solver
        // bias into downstream difference quotients).
        if (rmax <= 1e-12 || rmax > 0.25 * last_rmax) return {it, true};
      }
      last_rmax = rmax;

      // Solve -J d = F with -J assembled symmetric (an M-matrix).
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(size_t(ns) * 8);
      for (int i = 0; i < ns; ++i) {
        trip.emplace_back(i, i, -dii[i] + 1e-14);
        for (auto& [j, w] : rows[i]) {
          trip.emplace_back(i, j, -0.5 * w);
          trip.emplace_back(j, i, -0.5 * w);
        }
      }
      Eigen::SparseMatrix<double> A(ns, ns);
      A.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
      bool newton_ok = ldlt.info() == Eigen::Success;
      Eigen::VectorXd d;
      if (newton_ok) {
        Eigen::VectorXd rhs(ns);
        for (int i = 0; i < ns; ++i) rhs[i] = F[i];
        d = ldlt.solve(rhs);
        newton_ok = ldlt.info() == Eigen::Success;
      }
      bool accepted = false;
      if (newton_ok) {
        std::vector<double> z0(ns);
        for (int i = 0; i < ns; ++i) z0[i] = zv(i);
        double alpha = 1.0;
        for (int ls = 0; ls < 12 && !accepted; ++ls, alpha *= 0.5) {
          for (int i = 0; i < ns; ++i) z(i) = z0[i] + alpha * d[i];
          double fn = 0.0;
          bool feasible = true;
          for (int i = 0; i < ns && feasible; ++i) {
            double a = mass(i);
            if (a <= 0.0) feasible = false;
            double r = a - target[i];
            fn += r * r;
          }
          if (feasible && std::sqrt(fn) <= (1.0 - 0.25 * alpha) * fnorm) accepted = true;
        }
        if (!accepted)
          for (int i = 0; i < ns; ++i) z(i) = z0[i];
      }
      if (!accepted) {
        gs_sweep();
        if (fnorm >= last_norm * (1.0 - 1e-12)) ++stalls;
        if (stalls > 30) return {it, false};
      }
      last_norm = fnorm;
    }
    return {it, max_rel_residual() <= tol->solve};
  }
};

AleksandrovSolution assemble_solution(const MassMatcher& mm, const Tolerances& tol, int iterations, bool converged) {
  AleksandrovSolution sol;
  TriMesh mesh = triangulate_points(mm.pts);
  flip_to_envelope(mesh, mm.vals);
  sol.u = PLConvexFunction::build(std::move(mesh), mm.vals, tol);
  for (int i = 0; i < mm.ns; ++i) {
    sol.site_points.push_back(mm.pts[mm.nb + i]);
    sol.site_values.push_back(mm.vals[mm.nb + i]);
  }
  // Independent residual route: hull-of-incident-gradients masses on the
  // assembled mesh versus the targets.
  DiscreteMeasure mu = ma_measure(sol.u);
  std::vector<double> achieved(mm.ns, 0.0);
  for (size_t k = 0; k < mu.site_index.size(); ++k) {
    int v = mu.site_index[k];
    if (v >= mm.nb) achieved[v - mm.nb] = mu.masses[k];
  }
  sol.residual.sites = sol.site_points;
  sol.residual.masses.resize(mm.ns);
  sol.max_rel_residual = 0.0;
  for (int i = 0; i < mm.ns; ++i) {
    sol.residual.masses[i] = achieved[i] - mm.target[i];
    sol.max_rel_residual = std::max(sol.max_rel_residual, std::fabs(sol.residual.masses[i]) / mm.target[i]);
  }
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

}  // namespace

AleksandrovSolution solve_homogeneous(const ConvexDomain& domain, const std::vector<double>& g,
                                      const Tolerances& tol) {
  if (g.size() != domain.vertices.size())
    throw std::invalid_argument("solve_homogeneous: boundary data size mismatch");
  TriMesh mesh = triangulate_points(domain.vertices);
  std::vector<double> vals = g;
  flip_to_envelope(mesh, vals);
  AleksandrovSolution sol;
  sol.u = PLConvexFunction::build(std::move(mesh), std::move(vals), tol);
  sol.converged = true;
  return sol;
}

AleksandrovSolution solve_dirac(const DirichletProblem& prob, const Tolerances& tol, const SolverOptions& opt) {
  if (prob.boundary_values.size() != prob.domain.vertices.size())
    throw std::invalid_argument("solve_dirac: boundary data size mismatch");
  if (prob.dirac_sites.size() != prob.dirac_masses.size())
    throw std::invalid_argument("solve_dirac: sites/masses size mismatch");
  double diam = prob.domain.diameter();
  std::vector<Vec2> sites;
  std::vector<double> masses;
  for (size_t i = 0; i < prob.dirac_sites.size(); ++i) {
    if (prob.dirac_masses[i] <= 0.0) throw std::invalid_argument("solve_dirac: masses must be positive");
    if (prob.domain.boundary_distance(prob.dirac_sites[i]) <= 1e-12 * diam)
      throw std::invalid_argument("solve_dirac: site on boundary");
    bool merged = false;
    for (size_t k = 0; k < sites.size() && !merged; ++k) {
      if (norm(sites[k] - prob.dirac_sites[i]) <= 1e-14 * diam) {
        masses[k] += prob.dirac_masses[i];
        merged = true;
      }
    }
    if (!merged) {
      sites.push_back(prob.dirac_sites[i]);
      masses.push_back(prob.dirac_masses[i]);
    }
  }

  MassMatcher mm;
  mm.tol = &tol;
  mm.prepare(prob.domain.vertices, prob.boundary_values, sites, masses, prob.domain);
  if (opt.warm_start && int(opt.warm_start->size()) == mm.ns) {
    for (int i = 0; i < mm.ns; ++i) mm.z(i) = (*opt.warm_start)[i];
  } else {
    // Subsolution-style start: boundary envelope pulled down by a radial
    // convex bump scaled until every site carries at least its target mass.
    AleksandrovSolution hom = solve_homogeneous(prob.domain, prob.boundary_values, tol);
    std::vector<double> env(mm.ns);
    for (int i = 0; i < mm.ns; ++i) {
      env[i] = hom.u.eval(mm.site(i));
      mm.z(i) = env[i];
    }
    Vec2 c = prob.domain.centroid();
    double R2 = 0.0;
    for (auto& v : prob.domain.vertices) R2 = std::max(R2, norm2(v - c));
    double mu = 0.0;
    std::vector<int> failing(mm.ns);
    std::iota(failing.begin(), failing.end(), 0);
    for (int attempt = 0; attempt < 60 && !failing.empty(); ++attempt) {
      std::vector<int> still;
      for (int i : failing)
        if (mm.mass(i) < masses[i]) still.push_back(i);
      failing.swap(still);
      if (failing.empty()) break;
      mu = (mu == 0.0) ? 0.25 : 2.0 * mu;
      for (int i = 0; i < mm.ns; ++i)
        mm.z(i) = env[i] + mu * (std::exp(norm2(mm.site(i) - c) / R2 - 1.0) - 1.0);
    }
  }
  auto [iters, ok] = mm.solve(opt);
  if (!ok)
    throw std::runtime_error("solve_dirac: no convergence, max relative residual " +
                             std::to_string(mm.max_rel_residual()));
  return assemble_solution(mm, tol, iters, true);
}

AleksandrovSolution solve_density(const TriMesh& mesh, const std::vector<double>& boundary_g,
                                  const std::vector<double>& tri_density, const Tolerances& tol,
                                  const SolverOptions& opt) {
  if (int(tri_density.size()) != mesh.n_triangles())
    throw std::invalid_argument("solve_density: density size mismatch");
  for (double f : tri_density)
    if (!(f > 0.0)) throw std::invalid_argument("solve_density: density must be positive");
  // Barycentric dual-cell targets.
  std::vector<double> target(mesh.n_vertices(), 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double w = tri_density[t] * mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) target[mesh.tris[t][e]] += w;
  }
  std::vector<int> loop = mesh.boundary_loop();
  std::vector<Vec2> bpts;
  std::vector<double> bvals;
  for (int v : loop) {
    bpts.push_back(mesh.pts[v]);
    bvals.push_back(boundary_g[v]);
  }
  DirichletProblem prob;
  prob.domain = ConvexDomain::from_vertices(bpts, tol);
  prob.boundary_values = bvals;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.is_boundary[v]) continue;
    prob.dirac_sites.push_back(mesh.pts[v]);
    prob.dirac_masses.push_back(target[v]);
  }
  return solve_dirac(prob, tol, opt);
}

BarrierResult barrier(const TriMesh& mesh, const std::function<double(Vec2)>& phi,
                      const std::function<double(Vec2)>& rho, double mu_cap, const Tolerances& tol) {
  auto values_for = [&](double mu) {
    std::vector<double> z;
    z.reserve(mesh.pts.size());
    for (auto& p : mesh.pts) z.push_back(phi(p) + mu * (std::exp(rho(p)) - 1.0));
    return z;
  };
  auto certify = [&](double mu, PLConvexFunction* out) {
    // Certify on the envelope triangulation of the lifted samples: vertex
    // values are unchanged when the sample set is in convex position, and a
    // genuinely non-convex sample still fails the certificate.
    std::vector<double> z = values_for(mu);
    TriMesh m = mesh;
    flip_to_envelope(m, z);
    PLConvexFunction f = PLConvexFunction::build(std::move(m), std::move(z), tol, false);
    if (!f.convex_certified) return false;
    if (out) *out = std::move(f);
    return true;
  };
  BarrierResult res;
  if (certify(0.0, &res.u)) {
    res.mu = 0.0;
    return res;
  }
  double lo = 0.0, hi = 1.0;
  bool found = false;
  for (int k = 0; k < 64 && hi <= mu_cap; ++k) {
    if (certify(hi, nullptr)) {
      found = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!found) throw std::runtime_error("barrier: cannot certify convexity up to mu cap");
  for (int k = 0; k < 40; ++k) {
    double mid = 0.5 * (lo + hi);
    if (certify(mid, nullptr))
      hi = mid;
    else
      lo = mid;
  }
  if (!certify(hi, &res.u)) throw std::runtime_error("barrier: certification lost at final mu");
  res.mu = hi;
  return res;
}

std::function<double(Vec2)> disk_defining_function(Vec2 center, double R) {
  return [center, R](Vec2 p) { return norm2(p - center) - R * R; };
}

std::function<double(Vec2)> polygon_defining_function(const ConvexDomain& domain, double smoothing) {
  auto hps = domain.half_planes;
  double margin = smoothing * std::log(double(hps.size()));
  return [hps, smoothing, margin](Vec2 p) {
    double m = -1e300;
    for (auto& hp : hps) m = std::max(m, dot(hp.n, p) - hp.c);
    double s = 0.0;
    for (auto& hp : hps) s += std::exp((dot(hp.n, p) - hp.c - m) / smoothing);
    return m + smoothing * std::log(s) - margin;
  };
}

}  // namespace ampere
