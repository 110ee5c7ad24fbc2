#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ampere/io.hpp"
#include "ampere/rng.hpp"
#include "ampere/svg.hpp"

using namespace ampere;

TEST_CASE("pl function json round trip") {
  auto mesh = disk_mesh({0, 0}, 1.0, 3, 12);
  std::vector<double> z;
  for (auto& p : mesh.pts) z.push_back(0.5 * norm2(p));
  auto f = PLConvexFunction::build(mesh, z);
  auto g = pl_from_json(to_json(f));
  REQUIRE(g.mesh.n_vertices() == f.mesh.n_vertices());
  for (int v = 0; v < f.mesh.n_vertices(); ++v) {
    CHECK(g.mesh.pts[v].x == f.mesh.pts[v].x);
    CHECK(g.values[v] == f.values[v]);
  }
}

TEST_CASE("measure and ellipsoid json round trips") {
  DiscreteMeasure mu;
  mu.sites = {{0.1, 0.2}, {-0.3, 0.4}};
  mu.masses = {1.0 / 3.0, 0.125};
  auto mu2 = measure_from_json(to_json(mu));
  CHECK(mu2.masses[0] == mu.masses[0]);
  CHECK(mu2.sites[1].y == mu.sites[1].y);

  Ellipsoid e{{0.25, -0.5}, {2.0, 0.25, 1.0}};
  auto e2 = ellipsoid_from_json(to_json(e));
  CHECK(e2.shape.a12 == e.shape.a12);
  CHECK(e2.center.x == e.center.x);
}

TEST_CASE("grid json round trip preserves mask and values exactly") {
  auto g = GridFunction::masked({-1, -1}, 0.25, 9, 9, [](Vec2 p) { return norm(p) < 0.95; },
                                [](Vec2 p) { return std::exp(p.x) + p.y / 3.0; });
  auto g2 = grid_from_json(to_json(g));
  CHECK(g2.nx == g.nx);
  CHECK(g2.h == g.h);
  for (size_t k = 0; k < g.values.size(); ++k) {
    CHECK(g2.mask[k] == g.mask[k]);
    CHECK(g2.values[k] == g.values[k]);
  }
}

TEST_CASE("negative masses are rejected") {
  CHECK_THROWS(measure_from_json("{\"sites\":[[0,0]],\"masses\":[-1.0]}"));
}

TEST_CASE("csv uses 17 significant digits and LF") {
  CsvWriter csv({"a", "b"});
  csv.add_row({1.0 / 3.0, 2.0});
  CHECK(csv.text() == "a,b\n0.33333333333333331,2\n");
  CHECK_THROWS(csv.add_row({1.0}));
}

TEST_CASE("svg output is deterministic") {
  auto g = GridFunction::box({-1, -1}, {1, 1}, 33, 33, [](Vec2 p) { return 0.5 * norm2(p); });
  auto s1 = render_contours(g, {0.1, 0.3, 0.6});
  auto s2 = render_contours(g, {0.1, 0.3, 0.6});
  CHECK(s1 == s2);
  CHECK(s1.find("<svg") == 0);
  CHECK(s1.find("viewBox") != std::string::npos);
  // Quadratic contours are circles: every crossing sits at radius sqrt(2 lev).
  CHECK(s1.size() > 2000);
}

TEST_CASE("svg section rendering and empty artifact error") {
  auto u = GridFunction::box({-1, -1}, {1, 1}, 65, 65, [](Vec2 p) { return 0.5 * norm2(p); });
  auto s1 = extract_section(u, {0, 0}, 0.1);
  auto s2 = extract_section(u, {0.2, 0.1}, 0.05);
  auto svg = render_sections({s1, s2}, {});
  CHECK(svg.find("path") != std::string::npos);
  CHECK_THROWS(render_sections({}, {}));
}

TEST_CASE("loglog chart") {
  std::vector<std::pair<double, double>> series;
  for (int k = 1; k <= 8; ++k) series.push_back({std::pow(2.0, -k), std::pow(4.0, -k)});
  auto svg = render_loglog(series, "slope-2");
  CHECK(svg.find("slope-2") != std::string::npos);
}
