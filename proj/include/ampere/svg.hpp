#pragma once

#include <string>
#include <vector>

#include "ampere/grid.hpp"
#include "ampere/sections.hpp"

namespace ampere {

/// Deterministic static SVG: fixed viewBox, fixed number formatting, no
/// timestamps. Identical inputs produce byte-identical output.
class SvgCanvas {
 public:
  SvgCanvas(double xmin, double ymin, double xmax, double ymax, int pixels = 640);

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool closed = false);
  void polygon_filled(const std::vector<Vec2>& pts, const std::string& fill, const std::string& stroke);
  void circle(Vec2 c, double r, const std::string& stroke);
  void text(Vec2 at, const std::string& s);

  std::string finish() const;

 private:
  double xmin_, ymin_, xmax_, ymax_;
  int pixels_;
  std::string body_;
  std::string fmt(double v) const;
  Vec2 map(Vec2 p) const;
};

/// Contour plot of a grid function at the given levels.
std::string render_contours(const GridFunction& g, const std::vector<double>& levels);

/// Filled section polygons (and optional ellipses) over the domain box.
std::string render_sections(const std::vector<Section>& sections, const std::vector<Ellipsoid>& ellipses);

/// log-log polyline chart of (x, y) series.
std::string render_loglog(const std::vector<std::pair<double, double>>& series, const std::string& label);

}  // namespace ampere
