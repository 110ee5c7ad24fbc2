#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ampere/geometry.hpp"
#include "ampere/rng.hpp"

using namespace ampere;

TEST_CASE("orientation sign") {
  CHECK(orient_sign({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient_sign({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orient_sign({0, 0}, {1, 1}, {2, 2}) == 0);
  // Near-degenerate: the fallback must still get the sign right.
  Vec2 a{0, 0}, b{1e-3, 1e-3};
  Vec2 c{2e-3, 2e-3 + 1e-18};
  CHECK(orient_sign(a, b, c) == 1);
}

TEST_CASE("convex hull basics") {
  std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0.0}};
  auto h = convex_hull(pts);
  CHECK(h.size() == 4);
  CHECK(polygon_area(h) == doctest::Approx(1.0));
  auto hk = convex_hull_keep_collinear(pts);
  CHECK(hk.size() == 5);  // keeps (0.5, 0) on the bottom edge

  // Degenerate inputs.
  CHECK(convex_hull({{1, 2}, {1, 2}, {1, 2}}).size() == 1);
  CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}}).size() == 2);
}

TEST_CASE("hull of random points contains all points") {
  Rng rng(7);
  std::vector<Vec2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  auto h = convex_hull(pts);
  for (auto& p : pts) CHECK(point_in_convex(h, p, 1e-12));
}

TEST_CASE("half-plane intersection with provenance") {
  // Unit square via 4 half planes.
  std::vector<HalfPlane> hp = {
      {{1, 0}, 1.0}, {{-1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, -1}, 1.0}};
  auto poly = halfplane_intersection(hp, 10.0);
  CHECK(poly.area() == doctest::Approx(4.0));
  for (int id = 0; id < 4; ++id) CHECK(poly.edge_length(id) == doctest::Approx(2.0));

  // Adding a diagonal cut halves the square corner.
  CutPoly p2 = poly;
  clip(p2, {1, 1}, 1.0, 99);
  CHECK(p2.area() == doctest::Approx(4.0 - 0.5));
  CHECK(p2.edge_length(99) == doctest::Approx(std::sqrt(2.0)));

  // Empty intersection detected.
  CutPoly p3 = poly;
  CHECK_FALSE(clip(p3, {1, 0}, -2.0, 5));
  CHECK(p3.empty());
}

TEST_CASE("polygon area derivative wrt constraint offset equals edge length over |n|") {
  // A = area{p : n_j . p <= c_j}; dA/dc_j = len_j / |n_j|.
  std::vector<HalfPlane> hp = {
      {{2, 0}, 1.0}, {{-1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, -1}, 1.0}, {{1, 1}, 1.2}};
  double d = 1e-7;
  auto base = halfplane_intersection(hp, 50.0);
  for (size_t j = 0; j < hp.size(); ++j) {
    auto hp2 = hp;
    hp2[j].c += d;
    auto up = halfplane_intersection(hp2, 50.0);
    double fd = (up.area() - base.area()) / d;
    double pred = base.edge_length(int(j)) / norm(hp[j].n);
    CHECK(fd == doctest::Approx(pred).epsilon(1e-4));
  }
}

TEST_CASE("centroid and diameter") {
  std::vector<Vec2> sq = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  Vec2 c = polygon_centroid(sq);
  CHECK(c.x == doctest::Approx(1.0));
  CHECK(c.y == doctest::Approx(1.0));
  CHECK(polygon_diameter(sq) == doctest::Approx(2.0 * std::sqrt(2.0)));
}
