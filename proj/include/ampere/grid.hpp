#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ampere/geometry.hpp"

namespace ampere {

/// Scalar field on a uniform grid over a convex domain mask.
/// Node (i, j) sits at origin + (i h, j h); storage is row-major with the
/// y index outer: values[j * nx + i].
/// mask: 0 exterior, 1 boundary layer (Dirichlet), 2 interior.
struct GridFunction {
  Vec2 origin;
  double h = 0.0;
  int nx = 0, ny = 0;
  std::vector<uint8_t> mask;
  std::vector<double> values;

  int idx(int i, int j) const { return j * nx + i; }
  Vec2 point(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
  bool in_grid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
  bool inside(int i, int j) const { return in_grid(i, j) && mask[idx(i, j)] != 0; }
  bool interior(int i, int j) const { return in_grid(i, j) && mask[idx(i, j)] == 2; }
  double at(int i, int j) const { return values[idx(i, j)]; }
  double& at(int i, int j) { return values[idx(i, j)]; }

  int count_mask(uint8_t m) const;

  /// Bilinear interpolation (requires the four cell corners inside).
  double bilinear(Vec2 p) const;

  /// Full-box grid: every node carries the domain, the outermost ring is
  /// the Dirichlet layer.
  static GridFunction box(Vec2 lo, Vec2 hi, int nx, int ny, const std::function<double(Vec2)>& f);

  /// Masked grid over { p : inside(p) }: inside nodes with all 8 neighbors
  /// inside are interior, remaining inside nodes form the boundary layer.
  static GridFunction masked(Vec2 lo, double h, int nx, int ny, const std::function<bool(Vec2)>& inside_fn,
                             const std::function<double(Vec2)>& f);
};

}  // namespace ampere
