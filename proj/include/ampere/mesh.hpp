#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ampere/geometry.hpp"

namespace ampere {

/// Triangulated planar mesh with adjacency. Triangles are counterclockwise.
struct TriMesh {
  std::vector<Vec2> pts;
  std::vector<std::array<int, 3>> tris;

  // Derived by finalize():
  std::vector<std::array<int, 3>> nbr;       // nbr[t][e]: triangle across edge (tris[t][e], tris[t][e+1]), -1 if none
  std::vector<std::vector<int>> vert_tris;   // incident triangles per vertex, sorted
  std::vector<uint8_t> is_boundary;          // per vertex

  void finalize();

  int n_vertices() const { return int(pts.size()); }
  int n_triangles() const { return int(tris.size()); }
  double tri_area(int t) const {
    auto& tr = tris[t];
    return 0.5 * cross(pts[tr[1]] - pts[tr[0]], pts[tr[2]] - pts[tr[0]]);
  }
  Vec2 tri_centroid(int t) const {
    auto& tr = tris[t];
    return (pts[tr[0]] + pts[tr[1]] + pts[tr[2]]) / 3.0;
  }

  /// Triangle containing p (barycentric tolerance tol, relative), or -1.
  /// Walks the adjacency from a hint; falls back to a linear scan.
  int locate(Vec2 p, double tol = 1e-12, int hint = 0) const;

  /// Barycentric coordinates of p in triangle t.
  std::array<double, 3> barycentric(int t, Vec2 p) const;

  /// Ordered counterclockwise boundary loop (vertex indices).
  std::vector<int> boundary_loop() const;
};

/// Valid triangulation of the convex hull of pts with every point as a
/// vertex (collinear boundary runs handled). Points must be distinct.
TriMesh triangulate_points(const std::vector<Vec2>& pts);

/// Lawson flips under the lifted heights z until the surface is the lower
/// convex hull (locally convex across every interior edge).
/// Each flip lowers the lifted surface pointwise, so the loop terminates.
void flip_to_envelope(TriMesh& m, const std::vector<double>& z);

/// Delaunay triangulation: triangulate_points + flips lifted to |p|^2.
TriMesh delaunay_mesh(const std::vector<Vec2>& pts);

/// Disk mesh from concentric rings; ring k of `rings` has k*apex_degree
/// points, so the center vertex has the given incidence degree.
TriMesh disk_mesh(Vec2 center, double R, int rings, int apex_degree);

/// Uniform grid mesh of [lo,hi] with nx-by-ny vertices, cells split along
/// the (+1,+1) diagonal. Vertex index = j*nx + i (row-major, y-outer).
TriMesh square_grid_mesh(Vec2 lo, Vec2 hi, int nx, int ny);

/// Mesh of a convex polygon: boundary vertices plus an interior lattice of
/// roughly the requested spacing, Delaunay-triangulated.
TriMesh polygon_mesh(const std::vector<Vec2>& boundary, double target_h);

}  // namespace ampere
