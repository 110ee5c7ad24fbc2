#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ampere/abreu.hpp"
#include "ampere/rng.hpp"

using namespace ampere;

TEST_CASE("G functions: derivative inverse and concavity") {
  for (auto g : {GFunction::power(0.25), GFunction::power(0.1), GFunction::log(),
                 GFunction::log_over_loglog()}) {
    for (double d : {1e-3, 0.1, 0.5, 1.0, 2.0, 50.0, 1e3}) {
      CHECK(g.dG(d) > 0.0);
      CHECK(g.d2G(d) < 0.0);
      CHECK(g.Theta(g.dG(d)) == doctest::Approx(d).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual formula for log is log d - 1") {
  auto g = GFunction::log();
  for (double d : {0.5, 1.0, 2.0}) CHECK(g.dual(d) == doctest::Approx(std::log(d) - 1.0).epsilon(1e-15));
}

TEST_CASE("dual is strictly increasing for admissible G") {
  for (auto g : {GFunction::power(0.25), GFunction::log(), GFunction::log_over_loglog()}) {
    double prev = -1e300;
    for (int k = -3; k <= 6; ++k) {
      double v = g.dual(std::pow(10.0, k));
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("structure conditions A1-A3") {
  auto p = check_A1_A2_A3(GFunction::power(0.25));
  CHECK(p.a1);
  CHECK(p.a2);
  CHECK(p.a3);
  auto l = check_A1_A2_A3(GFunction::log());
  CHECK(l.a1);
  CHECK(l.a2);
  CHECK(l.a3);
  auto ll = check_A1_A2_A3(GFunction::log_over_loglog());
  CHECK(ll.a1);
  CHECK(ll.a2);
  CHECK(ll.a3);
}

TEST_CASE("linear weight is rejected at construction") {
  CHECK_THROWS(GFunction::power(1.0));
  CHECK_THROWS(GFunction::power(0.5));   // 1/n for n = 2
  CHECK_THROWS(GFunction::power(-0.1));
}

namespace {

SecondBVP quadratic_problem(int n, double f_val = 0.0) {
  SecondBVP prob;
  prob.lo = {-1.0, -1.0};
  prob.h = 2.0 / (n - 1);
  prob.nx = n;
  prob.ny = n;
  prob.f = [f_val](Vec2) { return f_val; };
  prob.phi = [](Vec2 p) { return 0.5 * norm2(p); };
  prob.G = GFunction::power(0.25);
  prob.psi = [&](Vec2) { return 1.0; };  // G'(1) = 1 for the power family
  return prob;
}

}  // namespace

TEST_CASE("phi_t fixed point: t = 0 map sends any admissible w to 1") {
  auto prob = quadratic_problem(17);
  ContinuationState st;
  st.t = 0.0;
  st.u = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [](Vec2) { return 0.0; });
  Rng rng(3);
  st.w = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [&](Vec2) { return 0.5 + rng.uniform(); });
  for (int k = 0; k < 60; ++k) {
    st = phi_t_step(prob, st, 0.5);
    if (st.fp_gap <= 1e-9) break;
  }
  CHECK(st.fp_gap <= 1e-9);
  for (size_t k = 0; k < st.w.values.size(); ++k)
    if (st.w.mask[k] != 0) CHECK(st.w.values[k] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("phi_t at the quadratic fixed point stays put") {
  auto prob = quadratic_problem(17);
  ContinuationState st;
  st.t = 0.7;
  st.u = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [](Vec2 p) { return 0.5 * norm2(p); });
  st.w = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [](Vec2) { return 1.0; });
  auto next = phi_t_step(prob, st, 0.5);
  CHECK(next.fp_gap <= 1e-9);  // 10 tau_lin scale on the linear stage
  double uerr = 0.0;
  for (size_t k = 0; k < next.u.values.size(); ++k)
    if (next.u.mask[k] != 0) uerr = std::max(uerr, std::fabs(next.u.values[k] - st.u.values[k]));
  CHECK(uerr <= 1e-10);  // polished mass matching
}

TEST_CASE("continuation with quadratic-compatible data converges to the quadratic") {
  auto prob = quadratic_problem(33);
  auto res = continuation_solve(prob);
  REQUIRE(res.converged);
  CHECK(res.warnings.empty());
  double uerr = 0.0, werr = 0.0;
  for (int j = 0; j < res.state.u.ny; ++j)
    for (int i = 0; i < res.state.u.nx; ++i) {
      int node = res.state.u.idx(i, j);
      if (res.state.u.mask[node] == 0) continue;
      uerr = std::max(uerr, std::fabs(res.state.u.values[node] - 0.5 * norm2(res.state.u.point(i, j))));
      werr = std::max(werr, std::fabs(res.state.w.values[node] - 1.0));
    }
  CHECK(uerr <= 1e-8);
  CHECK(werr <= 1e-8);
  auto forth = fourth_order_residual(res.state.u, prob.G);
  CHECK(forth.max_norm <= 1e-8);
  // Path log sanity: one row per t, determinant bounds bracket 1.
  CHECK(res.log.size() >= 11);
  for (auto& row : res.log) {
    CHECK(row.min_det > 0.9);
    CHECK(row.max_det < 1.1);
    CHECK(row.fp_gap <= 1e-9);
  }
}

TEST_CASE("continuation on the disk with small constant curvature data") {
  SecondBVP prob;
  int n = 25;
  prob.lo = {-1.08, -1.08};
  prob.h = 2.16 / (n - 1);
  prob.nx = n;
  prob.ny = n;
  prob.inside = [](Vec2 p) { return norm(p) < 1.0; };
  prob.f = [](Vec2) { return 0.1; };
  prob.phi = [](Vec2 p) { return 0.5 * norm2(p); };
  prob.psi = [](Vec2) { return 1.0; };
  prob.G = GFunction::power(0.25);
  auto res = continuation_solve(prob);
  REQUIRE(res.converged);
  // Self-consistency: the fourth-order residual of the converged state
  // reproduces t f = 0.1 on interior nodes (within the mixed mesh error of
  // the two discretizations).
  // Pointwise residuals of envelope-solver output are dominated by the
  // second differences of its mesh-scale height wiggle; the averaged
  // residual over an interior region is the meaningful self-consistency
  // measure and must reproduce t f = 0.1.
  auto forth = fourth_order_residual(res.state.u, prob.G);
  double avg = 0.0;
  int counted = 0;
  for (int j = 0; j < forth.residual.ny; ++j)
    for (int i = 0; i < forth.residual.nx; ++i) {
      int node = forth.residual.idx(i, j);
      if (forth.residual.mask[node] != 2) continue;
      if (norm(forth.residual.point(i, j)) > 0.6) continue;
      avg += forth.residual.values[node];
      ++counted;
    }
  avg /= counted;
  CHECK(counted > 50);
  CHECK(avg == doctest::Approx(0.1).epsilon(0.25));
  CHECK(res.state.min_det > 0.5);
  CHECK(res.state.max_det < 2.0);
}

TEST_CASE("uniqueness: two starts reach the same fixed point at t = 1") {
  auto prob = quadratic_problem(17, 0.05);
  auto run = [&](double w0) {
    ContinuationState st;
    st.t = 1.0;
    st.u = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [](Vec2 p) { return 0.5 * norm2(p); });
    st.w = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [&](Vec2) { return w0; });
    for (int k = 0; k < 400; ++k) {
      st = phi_t_step(prob, st, 0.5);
      if (st.fp_gap <= 1e-10) break;
    }
    REQUIRE(st.fp_gap <= 1e-10);
    return st;
  };
  auto a = run(1.0), b = run(0.55);
  for (size_t k = 0; k < a.w.values.size(); ++k)
    if (a.w.mask[k] != 0) CHECK(std::fabs(a.w.values[k] - b.w.values[k]) <= 2e-9);
}

TEST_CASE("w outside the admissible range is a hard error") {
  auto prob = quadratic_problem(9);
  ContinuationState st;
  st.t = 0.0;
  st.u = GridFunction::box({-1, -1}, {1, 1}, 9, 9, [](Vec2 p) { return 0.5 * norm2(p); });
  st.w = GridFunction::box({-1, -1}, {1, 1}, 9, 9, [](Vec2) { return 1e-9; });
  CHECK_THROWS(phi_t_step(prob, st, 0.5));
}

TEST_CASE("fourth-order residual of a quadratic is exactly zero") {
  auto u = GridFunction::box({-1, -1}, {1, 1}, 17, 17,
                             [](Vec2 p) { return 0.4 * p.x * p.x + 0.7 * p.y * p.y + 0.1 * p.x * p.y; });
  auto r = fourth_order_residual(u, GFunction::power(0.25));
  CHECK(r.max_norm <= 1e-10);  // rounding in the double difference quotients
  REQUIRE(r.affine_mean_curvature.has_value());
  for (double v : r.affine_mean_curvature->values) CHECK(std::fabs(v) <= 1e-10);
}

TEST_CASE("appendix exponent algebra") {
  CHECK(affine_profile_polynomial(10, 4.5) == 0.0);
  auto roots = affine_profile_roots(10);
  REQUIRE(roots.has_value());
  CHECK(roots->first == doctest::Approx(4.5));
  CHECK(roots->second == doctest::Approx(4.5));
  CHECK(!affine_profile_roots(5).has_value());  // solvable only for n >= 10
}

TEST_CASE("euler-lagrange duality: variation of the affine area matches the double divergence") {
  int n = 33;
  auto u = GridFunction::box({-1, -1}, {1, 1}, n, n, [](Vec2 p) { return std::exp(0.4 * norm2(p)); });
  auto bump = [](Vec2 p) {
    double r2 = norm2(p) / 0.36;
    return r2 < 1.0 ? std::pow(1.0 - r2, 4) : 0.0;
  };
  double tq = 1e-4;
  auto shifted = [&](double s) {
    GridFunction v = u;
    for (int j = 0; j < v.ny; ++j)
      for (int i = 0; i < v.nx; ++i) v.values[v.idx(i, j)] += s * bump(v.point(i, j));
    return affine_area(v, 0.25);
  };
  double dA = (shifted(tq) - shifted(-tq)) / (2.0 * tq);
  // Inner product of the bump against (1/(n+2)) sum D_ij (U^{ij} w),
  // w = det^{-(n+1)/(n+2)}.
  Sym2Field H = discrete_hessian(u);
  std::vector<double> w(u.values.size(), 0.0);
  for (size_t k = 0; k < w.size(); ++k)
    if (H.valid[k]) w[k] = std::pow(H.m[k].det(), -0.75);
  auto dd = second_divergence(u, w);
  double inner = 0.0;
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      if (dd.mask[dd.idx(i, j)] != 2) continue;
      inner += bump(u.point(i, j)) * dd.values[dd.idx(i, j)] * u.h * u.h / 4.0;
    }
  CHECK(dA == doctest::Approx(inner).epsilon(0.02));
}

TEST_CASE("affine area is invariant under the unimodular rescaling") {
  // lambda = sqrt(2) makes the rescaled box grid-uniform with nx = 2 ny - 1.
  double lambda = std::sqrt(2.0);
  auto base = [](Vec2 p) { return std::exp(0.3 * p.x * p.x + 0.5 * p.y * p.y); };
  auto u = GridFunction::box({-1, -1}, {1, 1}, 65, 65, base);
  auto ul = GridFunction::box({-lambda, -1.0 / lambda}, {lambda, 1.0 / lambda}, 129, 65,
                              [&](Vec2 p) { return base({p.x / lambda, p.y * lambda}); });
  double A1 = affine_area(u, 0.25);
  double A2 = affine_area(ul, 0.25);
  // Quadrature regions differ by a one-node collar; tolerance reflects it.
  CHECK(A1 == doctest::Approx(A2).epsilon(0.02));
}

TEST_CASE("dual equation residual vanishes for quadratics up to fit error") {
  // The estimator noise comes from the PL facets of the transform seen
  // through the fixed fit window; it collapses at O(h^2).
  double prev = 1e300;
  for (int n : {33, 65, 129}) {
    double h = 2.0 / (n - 1);
    auto u = GridFunction::box({-1, -1}, {1, 1}, n, n, [](Vec2 p) { return 0.5 * norm2(p); });
    auto rep = dual_equation_residual(u, GFunction::log(), [](Vec2) { return 0.0; });
    CHECK(rep.nodes >= 36);
    CHECK(rep.l2_norm <= 120.0 * h * h);
    CHECK(rep.max_norm < prev);
    prev = rep.max_norm;
  }
}

TEST_CASE("dual equation residual rejects non-convex input") {
  auto u = GridFunction::box({-1, -1}, {1, 1}, 17, 17, [](Vec2 p) { return p.x * p.x - p.y * p.y; });
  CHECK_THROWS(dual_equation_residual(u, GFunction::log(), [](Vec2) { return 0.0; }));
}
