#include "ampere/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ampere {

int GridFunction::count_mask(uint8_t m) const {
  int c = 0;
  for (uint8_t x : mask) c += (x == m);
  return c;
}

double GridFunction::bilinear(Vec2 p) const {
  double fx = (p.x - origin.x) / h, fy = (p.y - origin.y) / h;
  int i = int(std::floor(fx)), j = int(std::floor(fy));
  i = std::min(std::max(i, 0), nx - 2);
  j = std::min(std::max(j, 0), ny - 2);
  double sx = fx - i, sy = fy - j;
  if (sx < -1e-9 || sx > 1.0 + 1e-9 || sy < -1e-9 || sy > 1.0 + 1e-9)
    throw std::runtime_error("grid: bilinear evaluation outside the grid");
  if (!inside(i, j) || !inside(i + 1, j) || !inside(i, j + 1) || !inside(i + 1, j + 1))
    throw std::runtime_error("grid: bilinear evaluation touches exterior nodes");
  return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) + (1 - sx) * sy * at(i, j + 1) +
         sx * sy * at(i + 1, j + 1);
}

GridFunction GridFunction::box(Vec2 lo, Vec2 hi, int nx, int ny, const std::function<double(Vec2)>& f) {
  GridFunction g;
  g.origin = lo;
  g.nx = nx;
  g.ny = ny;
  g.h = (hi.x - lo.x) / (nx - 1);
  double hy = (hi.y - lo.y) / (ny - 1);
  if (std::fabs(hy - g.h) > 1e-12 * (std::fabs(g.h) + 1.0))
    throw std::invalid_argument("grid: box must have uniform spacing");
  g.mask.resize(size_t(nx) * ny);
  g.values.resize(size_t(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      bool edge = i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
      g.mask[g.idx(i, j)] = edge ? 1 : 2;
      g.values[g.idx(i, j)] = f(g.point(i, j));
    }
  return g;
}

GridFunction GridFunction::masked(Vec2 lo, double h, int nx, int ny, const std::function<bool(Vec2)>& inside_fn,
                                  const std::function<double(Vec2)>& f) {
  GridFunction g;
  g.origin = lo;
  g.h = h;
  g.nx = nx;
  g.ny = ny;
  g.mask.assign(size_t(nx) * ny, 0);
  g.values.assign(size_t(nx) * ny, 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (inside_fn(g.point(i, j))) {
        g.mask[g.idx(i, j)] = 1;
        g.values[g.idx(i, j)] = f(g.point(i, j));
      }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (g.mask[g.idx(i, j)] == 0) continue;
      bool all_in = true;
      for (int dj = -1; dj <= 1 && all_in; ++dj)
        for (int di = -1; di <= 1 && all_in; ++di)
          if (!g.inside(i + di, j + dj)) all_in = false;
      if (all_in) g.mask[g.idx(i, j)] = 2;
    }
  return g;
}

}  // namespace ampere
