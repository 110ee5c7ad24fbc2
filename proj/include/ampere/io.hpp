#pragma once

#include <string>
#include <vector>

#include "ampere/abreu.hpp"
#include "ampere/convex_core.hpp"
#include "ampere/grid.hpp"
#include "ampere/ma_dirichlet.hpp"
#include "ampere/sections.hpp"

namespace ampere {

// JSON (text, byte-order independent). Schemas:
//   PLConvexFunction: {"vertices":[[x,y]...], "triangles":[[i,j,k]...], "values":[...]}
//   DiscreteMeasure:  {"sites":[[x,y]...], "masses":[...]}
//   Ellipsoid:        {"center":[x,y], "shape":[[a11,a12],[a12,a22]]}
//   GridFunction:     {"origin":[x,y], "h":h, "dims":[nx,ny], "mask":"012...", "values":[row-major]}
std::string to_json(const PLConvexFunction& f);
PLConvexFunction pl_from_json(const std::string& text, const Tolerances& tol = {});
std::string to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);
std::string to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const std::string& text);
std::string to_json(const GridFunction& g);
GridFunction grid_from_json(const std::string& text);

// Dirichlet problem:
//   {"domain":{"vertices":[[x,y]...]}, "boundary":[g0,g1,...],
//    "diracs":[{"x":..,"y":..,"mass":..}...]}
// or with "density": {"mesh":{PL mesh fields}, "per_triangle":[...]} in
// place of "diracs" (solved via solve_density on that mesh).
std::string to_json(const DirichletProblem& p);
DirichletProblem problem_from_json(const std::string& text, const Tolerances& tol = {});

/// CSV: comma, '.' decimal, LF line ends, header row, 17 significant
/// digits so doubles round-trip exactly.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  void save(const std::string& path) const;

 private:
  std::string text_;
  size_t columns_ = 0;
};

std::string format_double(double x);  // %.17g
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace ampere
