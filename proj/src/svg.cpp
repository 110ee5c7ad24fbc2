#include "ampere/svg.hpp"

#include <cmath>
#include <cstdio>

namespace ampere {

SvgCanvas::SvgCanvas(double xmin, double ymin, double xmax, double ymax, int pixels)
    : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax), pixels_(pixels) {}

std::string SvgCanvas::fmt(double v) const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Vec2 SvgCanvas::map(Vec2 p) const {
  double sx = pixels_ / (xmax_ - xmin_);
  double sy = pixels_ / (ymax_ - ymin_);
  double s = std::min(sx, sy);
  // y axis points up in the data, down in SVG.
  return {(p.x - xmin_) * s, (ymax_ - p.y) * s};
}

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool closed) {
  if (pts.size() < 2) return;
  body_ += "<path d=\"";
  for (size_t k = 0; k < pts.size(); ++k) {
    Vec2 q = map(pts[k]);
    body_ += (k == 0 ? "M" : "L");
    body_ += fmt(q.x) + " " + fmt(q.y);
  }
  if (closed) body_ += "Z";
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgCanvas::polygon_filled(const std::vector<Vec2>& pts, const std::string& fill,
                               const std::string& stroke) {
  if (pts.size() < 3) return;
  body_ += "<path d=\"";
  for (size_t k = 0; k < pts.size(); ++k) {
    Vec2 q = map(pts[k]);
    body_ += (k == 0 ? "M" : "L");
    body_ += fmt(q.x) + " " + fmt(q.y);
  }
  body_ += "Z\" fill=\"" + fill + "\" fill-opacity=\"0.35\" stroke=\"" + stroke + "\" stroke-width=\"1\"/>\n";
}

void SvgCanvas::circle(Vec2 c, double r, const std::string& stroke) {
  Vec2 q = map(c);
  double s = pixels_ / std::min(xmax_ - xmin_, ymax_ - ymin_);
  body_ += "<circle cx=\"" + fmt(q.x) + "\" cy=\"" + fmt(q.y) + "\" r=\"" + fmt(r * s) +
           "\" fill=\"none\" stroke=\"" + stroke + "\"/>\n";
}

void SvgCanvas::text(Vec2 at, const std::string& s) {
  Vec2 q = map(at);
  body_ += "<text x=\"" + fmt(q.x) + "\" y=\"" + fmt(q.y) + "\" font-size=\"12\">" + s + "</text>\n";
}

std::string SvgCanvas::finish() const {
  double sx = pixels_ / (xmax_ - xmin_);
  double sy = pixels_ / (ymax_ - ymin_);
  double s = std::min(sx, sy);
  double w = (xmax_ - xmin_) * s, h = (ymax_ - ymin_) * s;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) +
                    "\">\n<rect x=\"0\" y=\"0\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
                    "\" fill=\"white\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

std::string render_contours(const GridFunction& g, const std::vector<double>& levels) {
  if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("render_contours: empty grid");
  SvgCanvas cv(g.origin.x, g.origin.y, g.origin.x + (g.nx - 1) * g.h, g.origin.y + (g.ny - 1) * g.h);
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  int ci = 0;
  for (double lev : levels) {
    std::string color = colors[ci++ % 6];
    // Marching-squares segments per cell.
    for (int j = 0; j + 1 < g.ny; ++j)
      for (int i = 0; i + 1 < g.nx; ++i) {
        if (!g.inside(i, j) || !g.inside(i + 1, j) || !g.inside(i, j + 1) || !g.inside(i + 1, j + 1)) continue;
        Vec2 P[4] = {g.point(i, j), g.point(i + 1, j), g.point(i + 1, j + 1), g.point(i, j + 1)};
        double V[4] = {g.at(i, j) - lev, g.at(i + 1, j) - lev, g.at(i + 1, j + 1) - lev, g.at(i, j + 1) - lev};
        std::vector<Vec2> cr;
        for (int e = 0; e < 4; ++e) {
          double a = V[e], b = V[(e + 1) % 4];
          if ((a < 0) == (b < 0)) continue;
          double t = a / (a - b);
          cr.push_back(P[e] + t * (P[(e + 1) % 4] - P[e]));
        }
        if (cr.size() >= 2) cv.polyline({cr[0], cr[1]}, color, 1.0);
        if (cr.size() == 4) cv.polyline({cr[2], cr[3]}, color, 1.0);
      }
  }
  return cv.finish();
}

std::string render_sections(const std::vector<Section>& sections, const std::vector<Ellipsoid>& ellipses) {
  if (sections.empty() && ellipses.empty()) throw std::invalid_argument("render_sections: empty artifact");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](Vec2 p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  for (auto& s : sections)
    for (auto& p : s.boundary_polygon) grow(p);
  for (auto& e : ellipses) {
    double r = 1.0 / std::sqrt(std::max(e.shape.min_eig(), 1e-12));
    grow(e.center + Vec2{r, r});
    grow(e.center - Vec2{r, r});
  }
  double pad = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1e-9;
  SvgCanvas cv(xmin - pad, ymin - pad, xmax + pad, ymax + pad);
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  int ci = 0;
  for (auto& s : sections) {
    cv.polygon_filled(s.boundary_polygon, colors[ci % 6], s.clipped ? "#000000" : colors[ci % 6]);
    ++ci;
  }
  for (auto& e : ellipses) {
    // Polygonize the ellipse boundary deterministically.
    std::vector<Vec2> pts;
    Sym2 inv = e.shape.inverse();
    double a = std::sqrt(inv.a11), c22 = std::sqrt(std::max(inv.a22 - inv.a12 * inv.a12 / inv.a11, 1e-300));
    double b = inv.a12 / a;
    for (int k = 0; k < 128; ++k) {
      double th = 2.0 * M_PI * k / 128;
      Vec2 y{std::cos(th), std::sin(th)};
      pts.push_back(e.center + Vec2{a * y.x, b * y.x + c22 * y.y});
    }
    cv.polyline(pts, "#000000", 1.5, true);
  }
  return cv.finish();
}

std::string render_loglog(const std::vector<std::pair<double, double>>& series, const std::string& label) {
  if (series.empty()) throw std::invalid_argument("render_loglog: empty series");
  std::vector<Vec2> pts;
  for (auto& [x, y] : series)
    if (x > 0 && y > 0) pts.push_back({std::log10(x), std::log10(y)});
  if (pts.empty()) throw std::invalid_argument("render_loglog: no positive data");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double pad = 0.1 * std::max({xmax - xmin, ymax - ymin, 0.1});
  SvgCanvas cv(xmin - pad, ymin - pad, xmax + pad, ymax + pad, 480);
  cv.polyline(pts, "#1f77b4", 1.5);
  for (auto& p : pts) cv.circle(p, 0.01 * std::max(xmax - xmin, 0.1), "#1f77b4");
  cv.text({xmin, ymax + 0.5 * pad}, label);
  return cv.finish();
}

}  // namespace ampere
