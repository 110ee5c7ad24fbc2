#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ampere/mesh.hpp"
#include "ampere/rng.hpp"

using namespace ampere;

namespace {

double total_area(const TriMesh& m) {
  double a = 0;
  for (int t = 0; t < m.n_triangles(); ++t) a += m.tri_area(t);
  return a;
}

void check_valid(const TriMesh& m) {
  for (int t = 0; t < m.n_triangles(); ++t) CHECK(m.tri_area(t) > 0.0);
  // Euler: V - E + T = 1 for a triangulated disk.
  std::set<std::pair<int, int>> edges;
  for (auto& tr : m.tris)
    for (int e = 0; e < 3; ++e) {
      int a = tr[e], b = tr[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  CHECK(m.n_vertices() - int(edges.size()) + m.n_triangles() == 1);
}

}  // namespace

TEST_CASE("triangulate square grid boundary with collinear runs") {
  // All 16 boundary points of a 5x5 lattice square: many collinear points.
  std::vector<Vec2> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({double(i), 0.0});
  for (int j = 1; j < 5; ++j) pts.push_back({4.0, double(j)});
  for (int i = 3; i >= 0; --i) pts.push_back({double(i), 4.0});
  for (int j = 3; j >= 1; --j) pts.push_back({0.0, double(j)});
  auto m = triangulate_points(pts);
  check_valid(m);
  CHECK(m.n_vertices() == 16);
  CHECK(total_area(m) == doctest::Approx(16.0));
  // Every point must be a vertex of some triangle.
  for (int v = 0; v < m.n_vertices(); ++v) CHECK(!m.vert_tris[v].empty());
}

TEST_CASE("triangulate random points and locate") {
  Rng rng(11);
  std::vector<Vec2> pts = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int i = 0; i < 300; ++i) pts.push_back({rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99)});
  auto m = triangulate_points(pts);
  check_valid(m);
  CHECK(total_area(m) == doctest::Approx(4.0));
  for (int k = 0; k < 50; ++k) {
    Vec2 p{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    int t = m.locate(p);
    REQUIRE(t >= 0);
    auto w = m.barycentric(t, p);
    CHECK(w[0] >= -1e-9);
    CHECK(w[1] >= -1e-9);
    CHECK(w[2] >= -1e-9);
  }
}

TEST_CASE("delaunay empty-circumcircle spot check") {
  Rng rng(3);
  std::vector<Vec2> pts;
  for (int i = 0; i < 120; ++i) pts.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});
  auto m = delaunay_mesh(pts);
  check_valid(m);
  // Spot-check: no vertex strictly inside a triangle's circumcircle.
  Rng pick(5);
  for (int k = 0; k < 40; ++k) {
    int t = pick.uniform_int(0, m.n_triangles() - 1);
    Vec2 a = m.pts[m.tris[t][0]], b = m.pts[m.tris[t][1]], c = m.pts[m.tris[t][2]];
    double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    Vec2 cc{(norm2(a) * (b.y - c.y) + norm2(b) * (c.y - a.y) + norm2(c) * (a.y - b.y)) / d,
            (norm2(a) * (c.x - b.x) + norm2(b) * (a.x - c.x) + norm2(c) * (b.x - a.x)) / d};
    double r2 = norm2(a - cc);
    for (auto& p : pts) CHECK(norm2(p - cc) >= r2 * (1.0 - 1e-9) - 1e-12);
  }
}

TEST_CASE("lifted flips produce the lower hull of a convex sample") {
  // z = max of affine functions sampled on scattered points; after flips,
  // the interpolated surface must agree with the max formula everywhere.
  Rng rng(17);
  std::vector<Vec2> slopes;
  std::vector<double> offs;
  for (int i = 0; i < 6; ++i) {
    slopes.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    offs.push_back(rng.uniform(-0.3, 0.3));
  }
  auto fmax = [&](Vec2 p) {
    double z = -1e300;
    for (size_t i = 0; i < slopes.size(); ++i) z = std::max(z, dot(slopes[i], p) + offs[i]);
    return z;
  };
  std::vector<Vec2> pts = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  std::vector<double> z;
  for (auto& p : pts) z.push_back(fmax(p));
  auto m = triangulate_points(pts);
  flip_to_envelope(m, z);
  check_valid(m);
  for (int k = 0; k < 200; ++k) {
    Vec2 p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    int t = m.locate(p);
    REQUIRE(t >= 0);
    auto w = m.barycentric(t, p);
    double zi = w[0] * z[m.tris[t][0]] + w[1] * z[m.tris[t][1]] + w[2] * z[m.tris[t][2]];
    // Interpolant of the envelope >= the true max of affines, and they agree
    // wherever the sample set sees every active plane (here: everywhere,
    // since each plane is sampled densely).
    CHECK(zi >= fmax(p) - 1e-9);
  }
}

TEST_CASE("disk mesh has requested apex degree") {
  auto m = disk_mesh({0, 0}, 1.0, 4, 32);
  check_valid(m);
  CHECK(int(m.vert_tris[0].size()) == 32);
  CHECK(m.is_boundary[0] == 0);
  CHECK(total_area(m) > 3.0);
}

TEST_CASE("square grid mesh") {
  auto m = square_grid_mesh({0, 0}, {1, 1}, 5, 5);
  check_valid(m);
  CHECK(m.n_vertices() == 25);
  CHECK(m.n_triangles() == 32);
  CHECK(total_area(m) == doctest::Approx(1.0));
  CHECK(m.is_boundary[0] == 1);
  CHECK(m.is_boundary[12] == 0);  // center
}

TEST_CASE("boundary loop is the polygon boundary") {
  auto m = square_grid_mesh({0, 0}, {1, 1}, 4, 4);
  auto loop = m.boundary_loop();
  CHECK(loop.size() == 12);
  std::vector<Vec2> poly;
  for (int v : loop) poly.push_back(m.pts[v]);
  CHECK(polygon_area(poly) == doctest::Approx(1.0));
}
