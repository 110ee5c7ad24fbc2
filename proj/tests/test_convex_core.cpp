#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "ampere/convex_core.hpp"
#include "ampere/rng.hpp"

using namespace ampere;

namespace {

PLConvexFunction sample_pl(TriMesh mesh, const std::function<double(Vec2)>& f, bool flip = true) {
  std::vector<double> z;
  z.reserve(mesh.pts.size());
  for (auto& p : mesh.pts) z.push_back(f(p));
  if (flip) flip_to_envelope(mesh, z);
  return PLConvexFunction::build(std::move(mesh), std::move(z));
}

// Brute-force oracle: gradients of triangles incident to `vertex`,
// hulled by gift wrapping.
std::vector<Vec2> oracle_incident_gradient_hull(const PLConvexFunction& f, int vertex) {
  std::vector<Vec2> g;
  for (int t : f.mesh.vert_tris[vertex]) {
    auto& tr = f.mesh.tris[t];
    Vec2 a = f.mesh.pts[tr[0]], b = f.mesh.pts[tr[1]], c = f.mesh.pts[tr[2]];
    // Solve the plane through the three lifted points directly.
    double det = cross(b - a, c - a);
    double zb = f.values[tr[1]] - f.values[tr[0]], zc = f.values[tr[2]] - f.values[tr[0]];
    g.push_back({(zb * (c.y - a.y) - zc * (b.y - a.y)) / det, (zc * (b.x - a.x) - zb * (c.x - a.x)) / det});
  }
  // Gift wrapping.
  size_t lo = 0;
  for (size_t i = 1; i < g.size(); ++i)
    if (g[i].x < g[lo].x || (g[i].x == g[lo].x && g[i].y < g[lo].y)) lo = i;
  std::vector<Vec2> hull;
  size_t cur = lo;
  for (size_t guard = 0; guard <= g.size() + 1; ++guard) {
    hull.push_back(g[cur]);
    size_t next = (cur + 1) % g.size();
    for (size_t i = 0; i < g.size(); ++i) {
      int s = orient_sign(g[cur], g[next], g[i]);
      if (s < 0 || (s == 0 && norm2(g[i] - g[cur]) > norm2(g[next] - g[cur]))) next = i;
    }
    cur = next;
    if (cur == lo) break;
  }
  return hull;
}

}  // namespace

TEST_CASE("subdifferential of the cone at the apex is the incident-gradient hull") {
  // Sample directly (no envelope flips): the ring mesh interpolates the cone
  // exactly and keeps the apex fan at the requested degree.
  int degree = 16;
  auto mesh = disk_mesh({0, 0}, 1.0, 3, degree);
  auto f = sample_pl(mesh, [](Vec2 p) { return norm(p); }, false);
  auto s = subdifferential(f, 0);
  CHECK(int(s.slopes.size()) == degree);
  auto oracle = oracle_incident_gradient_hull(f, 0);
  CHECK(polygon_area(oracle) == doctest::Approx(s.area()).epsilon(1e-12));
  // Vertices of the apex polytope sit at radius sec(pi/degree): the polygon
  // circumscribes the unit circle of gradient space.
  for (auto& p : s.slopes) CHECK(norm(p) == doctest::Approx(1.0 / std::cos(M_PI / degree)).epsilon(1e-9));
}

TEST_CASE("subdifferential of a smooth function clusters near the gradient") {
  int n = 17;
  double h = 2.0 / (n - 1);
  auto mesh = square_grid_mesh({-1, -1}, {1, 1}, n, n);
  auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    auto s = subdifferential(f, v);
    for (auto& p : s.slopes) CHECK(norm(p - f.mesh.pts[v]) <= 1.5 * h);
  }
}

TEST_CASE("subdifferential of an affine function is a single point") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 12);
  Vec2 b{0.3, -0.7};
  auto f = sample_pl(mesh, [&](Vec2 p) { return dot(b, p) + 2.0; });
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    auto s = subdifferential(f, v);
    CHECK(s.slopes.size() == 1);
    CHECK(norm(s.slopes[0] - b) < 1e-12);
  }
}

TEST_CASE("subdifferential rejects boundary vertices") {
  auto mesh = square_grid_mesh({0, 0}, {1, 1}, 4, 4);
  auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
  CHECK_THROWS_WITH(subdifferential(f, 0), "boundary subdifferential undefined");
}

TEST_CASE("ma_measure of a cone concentrates at the apex") {
  double a = 0.8;
  auto mesh = disk_mesh({0.1, -0.2}, 1.0, 4, 32);
  auto f = sample_pl(mesh, [&](Vec2 p) { return a * norm(p - Vec2{0.1, -0.2}); }, false);
  auto mu = ma_measure(f);
  // Mass at the apex within 2% of pi a^2, everything else negligible.
  double apex_mass = 0.0, rest = 0.0;
  for (size_t k = 0; k < mu.masses.size(); ++k) {
    if (mu.site_index[k] == 0)
      apex_mass = mu.masses[k];
    else
      rest += mu.masses[k];
  }
  CHECK(std::fabs(apex_mass - M_PI * a * a) / (M_PI * a * a) <= 0.02);
  CHECK(rest <= 1e-10);
}

TEST_CASE("ma_measure of an affine function vanishes") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 16);
  auto f = sample_pl(mesh, [](Vec2 p) { return 1.5 * p.x - 0.2 * p.y + 3.0; });
  CHECK(ma_measure(f).total() <= 1e-14);
}

TEST_CASE("quadratic total mass approaches the gradient image area") {
  // u = |x|^2/2 on the unit square: |Du(Omega)| = 1; interior masses on the
  // uniform diagonal mesh tile the square shrunk by one dual-cell collar.
  for (int n : {9, 17, 33}) {
    auto mesh = square_grid_mesh({0, 0}, {1, 1}, n, n);
    auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
    double h = 1.0 / (n - 1);
    double total = ma_measure(f).total();
    CHECK(std::fabs(total - 1.0) <= 4.5 * h);
  }
}

TEST_CASE("non-convex data is rejected") {
  auto mesh = square_grid_mesh({0, 0}, {1, 1}, 5, 5);
  std::vector<double> z(mesh.pts.size());
  for (size_t i = 0; i < mesh.pts.size(); ++i) z[i] = -0.5 * norm2(mesh.pts[i]);
  CHECK_THROWS(PLConvexFunction::build(mesh, z));
}

TEST_CASE("legendre transform of the quadratic is self-dual") {
  auto mesh = disk_mesh({0, 0}, 1.0, 10, 12);
  double h = 1.0 / 10;
  auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
  auto L = legendre_transform(f);
  REQUIRE(!L.degenerate);
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    double r = 0.8 * std::sqrt(rng.uniform());
    double th = rng.uniform(0, 2 * M_PI);
    Vec2 p{r * std::cos(th), r * std::sin(th)};
    CHECK(std::fabs(L.dual.eval(p) - 0.5 * norm2(p)) <= h);
  }
}

TEST_CASE("legendre transform of an affine function is a point mass") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 12);
  Vec2 b{0.4, 0.9};
  double c = -1.7;
  auto f = sample_pl(mesh, [&](Vec2 p) { return dot(b, p) + c; });
  auto L = legendre_transform(f);
  REQUIRE(L.degenerate);
  REQUIRE(L.support.size() == 1);
  CHECK(norm(L.support[0] - b) <= 1e-10);
  CHECK(L.support_values[0] == doctest::Approx(-c).epsilon(1e-12));
}

TEST_CASE("double legendre transform is the identity on max-of-affine functions") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> slopes;
    std::vector<double> offs;
    int k = 3 + trial % 5;
    for (int i = 0; i < k; ++i) {
      slopes.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      offs.push_back(rng.uniform(-0.2, 0.2));
    }
    auto fmax = [&](Vec2 p) {
      double z = -1e300;
      for (int i = 0; i < k; ++i) z = std::max(z, dot(slopes[i], p) + offs[i]);
      return z;
    };
    std::vector<Vec2> pts = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    auto mesh = triangulate_points(pts);
    auto u = sample_pl(mesh, fmax);
    auto L1 = legendre_transform(u);
    if (L1.degenerate) continue;  // needs >= 3 distinct active slopes
    auto L2 = legendre_transform(L1.dual);
    REQUIRE(!L2.degenerate);
    double scale = 1.0;
    for (double z : u.values) scale = std::max(scale, std::fabs(z));
    // The supporting-plane extension reproduces u at every vertex even in
    // corner wedges where the gradient image has zero area (the polygon
    // domain of u** omits those wedges).
    double worst = 0.0;
    for (int v = 0; v < u.mesh.n_vertices(); ++v)
      worst = std::max(worst, std::fabs(L2.dual.eval_support(u.mesh.pts[v]) - u.values[v]));
    CHECK(worst <= 1e-8 * scale);
  }
}

TEST_CASE("legendre pairing: p in du(x) implies x in du*(p)") {
  auto mesh = disk_mesh({0, 0}, 1.0, 6, 10);
  auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p) + 0.25 * p.x * p.x; });
  auto L = legendre_transform(f);
  REQUIRE(!L.degenerate);
  Rng rng(5);
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    auto s = subdifferential(f, v);
    Vec2 p = polygon_centroid(s.slopes);
    double up = -1e300;  // u*(p) by the defining max: exact for PL
    for (int w = 0; w < f.mesh.n_vertices(); ++w) up = std::max(up, dot(f.mesh.pts[w], p) - f.values[w]);
    for (int k = 0; k < 8; ++k) {
      Vec2 q = 0.9 * Vec2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      double uq = -1e300;
      for (int w = 0; w < f.mesh.n_vertices(); ++w) uq = std::max(uq, dot(f.mesh.pts[w], q) - f.values[w]);
      CHECK(uq >= up + dot(f.mesh.pts[v], q - p) - 1e-10);
    }
  }
}

TEST_CASE("aleksandrov bound on the unit cone") {
  auto mesh = disk_mesh({0, 0}, 1.0, 4, 32);
  auto f = sample_pl(mesh, [](Vec2 p) { return norm(p) - 1.0; });
  auto rep = aleksandrov_bound(f);
  CHECK(rep.pass);
  // Apex row: lhs = 1, rhs = C_2 * D * dist * |du(Omega)| ~ 2 pi.
  for (auto& row : rep.rows) {
    if (row.vertex == 0) {
      CHECK(row.lhs == doctest::Approx(1.0));
      CHECK(row.rhs == doctest::Approx(2.0 * M_PI).epsilon(0.02));
    }
  }
}

TEST_CASE("aleksandrov bound trivially passes for the zero function") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 12);
  auto f = sample_pl(mesh, [](Vec2) { return 0.0; });
  CHECK(aleksandrov_bound(f).pass);
}

TEST_CASE("aleksandrov bound rejects nonzero boundary data") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 12);
  auto f = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
  CHECK_THROWS(aleksandrov_bound(f));
}

TEST_CASE("matrix lemmas: identity equality case") {
  Sym2 I{1, 0, 1};
  auto v = matrix_lemma_checks(I, I, 0.5, 0.5);
  CHECK(v.all());
}

TEST_CASE("matrix lemmas: hand-evaluated diagonal case") {
  Sym2 A{4, 0, 1}, B{1, 0, 4};
  auto v = matrix_lemma_checks(A, B, 0.5, 0.5);
  CHECK(v.all());
  Sym2 M = 0.5 * A + 0.5 * B;
  CHECK(std::sqrt(M.det()) == doctest::Approx(2.5));
  CHECK(0.5 * std::sqrt(A.det()) + 0.5 * std::sqrt(B.det()) == doctest::Approx(2.0));
}

TEST_CASE("matrix lemmas: 1000 seeded random PSD pairs") {
  Rng rng(42);
  for (int k = 0; k < 1000; ++k) {
    auto rand_psd = [&]() {
      double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1), d = rng.uniform(-1, 1);
      // R^T R is PSD.
      return Sym2{a * a + c * c, a * b + c * d, b * b + d * d};
    };
    Sym2 A = rand_psd(), B = rand_psd();
    double lambda = rng.uniform();
    double theta = rng.uniform(0.0, 0.5);
    auto v = matrix_lemma_checks(A, B, lambda, theta);
    CHECK(v.det_concavity);
    CHECK(v.det_trace);
  }
}

TEST_CASE("matrix lemmas reject non-PSD input") {
  Sym2 A{1, 0, -1}, I{1, 0, 1};
  CHECK_THROWS(matrix_lemma_checks(A, I, 0.5, 0.5));
}

TEST_CASE("comparison principle on quadratic pair") {
  // u with the smaller Monge-Ampere measure stays above: u = (|x|^2-1)/2,
  // v = |x|^2 - 1 on the unit disk, both 0 on the boundary.
  auto mesh = disk_mesh({0, 0}, 1.0, 8, 16);
  auto u = sample_pl(mesh, [](Vec2 p) { return 0.5 * (norm2(p) - 1.0); });
  auto v = sample_pl(mesh, [](Vec2 p) { return norm2(p) - 1.0; });
  auto verdict = comparison_check(u, v);
  CHECK(verdict.preconditions_ok);
  CHECK(verdict.holds);
}

TEST_CASE("comparison with itself passes with equality") {
  auto mesh = disk_mesh({0, 0}, 1.0, 4, 12);
  auto u = sample_pl(mesh, [](Vec2 p) { return 0.5 * norm2(p); });
  auto verdict = comparison_check(u, u);
  CHECK(verdict.preconditions_ok);
  CHECK(verdict.holds);
  CHECK(verdict.worst_gap == doctest::Approx(0.0));
}

TEST_CASE("affine rescaling covariance of the measure") {
  // v(x) = u(Tx) has mass_v(T^{-1} x) = |det T| mass_u(x) exactly.
  auto mesh = disk_mesh({0, 0}, 1.0, 5, 14);
  auto u = sample_pl(mesh, [](Vec2 p) { return 0.6 * p.x * p.x + 0.9 * p.y * p.y + 0.2 * p.x * p.y; });
  double t11 = 1.3, t12 = 0.4, t21 = 0.2, t22 = 0.9;
  double detT = t11 * t22 - t12 * t21;
  TriMesh m2 = u.mesh;
  double idet = 1.0 / detT;
  for (auto& p : m2.pts) p = {idet * (t22 * p.x - t12 * p.y), idet * (-t21 * p.x + t11 * p.y)};  // T^{-1} p
  auto v = PLConvexFunction::build(m2, u.values);
  auto mu = ma_measure(u), mv = ma_measure(v);
  REQUIRE(mu.masses.size() == mv.masses.size());
  for (size_t k = 0; k < mu.masses.size(); ++k)
    CHECK(mv.masses[k] == doctest::Approx(detT * mu.masses[k]).epsilon(1e-9));
}

TEST_CASE("slope estimate bounds every subdifferential slope") {
  auto mesh = disk_mesh({0, 0}, 1.0, 6, 12);
  auto f = sample_pl(mesh, [](Vec2 p) { return std::exp(p.x) + 0.5 * norm2(p); });
  auto loop = f.mesh.boundary_loop();
  std::vector<Vec2> poly;
  double maxb = -1e300;
  for (int v : loop) {
    poly.push_back(f.mesh.pts[v]);
    maxb = std::max(maxb, f.values[v]);
  }
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    if (f.mesh.is_boundary[v]) continue;
    double dist = 1e300;
    size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
      Vec2 a = poly[i], b = poly[(i + 1) % m], e = b - a;
      double t = std::clamp(dot(f.mesh.pts[v] - a, e) / norm2(e), 0.0, 1.0);
      dist = std::min(dist, norm(f.mesh.pts[v] - (a + t * e)));
    }
    double bound = (maxb - f.values[v]) / dist;
    auto s = subdifferential(f, v);
    for (auto& p : s.slopes) CHECK(norm(p) <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("weak continuity: measure of a fixed disk converges under refinement") {
  // u = e^x + e^y, det D^2 u = e^{x+y}; mass over the disk |x| <= r tends to
  // the integral of the density. Integral(B_r) e^{x+y} = sqrt(2) pi r I_1(sqrt(2) r).
  double r = 0.5;
  double exact = std::sqrt(2.0) * M_PI * r * std::cyl_bessel_i(1.0, std::sqrt(2.0) * r);
  double prev_err = 1e300;
  for (int n : {17, 33, 65}) {
    auto mesh = square_grid_mesh({-1, -1}, {1, 1}, n, n);
    auto f = sample_pl(mesh, [](Vec2 p) { return std::exp(p.x) + std::exp(p.y); });
    auto mu = ma_measure(f);
    double m = 0.0;
    for (size_t k = 0; k < mu.masses.size(); ++k)
      if (norm(mu.sites[k]) <= r) m += mu.masses[k];
    double h = 2.0 / (n - 1);
    double err = std::fabs(m - exact);
    CHECK(err <= 4.0 * h);  // disk-restriction boundary layer is O(h)
    CHECK(err <= prev_err + 1e-12);
    prev_err = err;
  }
}
