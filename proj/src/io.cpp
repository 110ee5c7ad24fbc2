#include "ampere/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ampere {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json(const PLConvexFunction& f) {
  json j;
  for (auto& p : f.mesh.pts) j["vertices"].push_back({p.x, p.y});
  for (auto& t : f.mesh.tris) j["triangles"].push_back({t[0], t[1], t[2]});
  j["values"] = f.values;
  return j.dump();
}

PLConvexFunction pl_from_json(const std::string& text, const Tolerances& tol) {
  json j = json::parse(text);
  TriMesh mesh;
  for (auto& p : j.at("vertices")) mesh.pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  for (auto& t : j.at("triangles"))
    mesh.tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
  mesh.finalize();
  std::vector<double> values = j.at("values").get<std::vector<double>>();
  return PLConvexFunction::build(std::move(mesh), std::move(values), tol);
}

std::string to_json(const DiscreteMeasure& mu) {
  json j;
  j["sites"] = json::array();
  for (auto& p : mu.sites) j["sites"].push_back({p.x, p.y});
  j["masses"] = mu.masses;
  return j.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
  json j = json::parse(text);
  DiscreteMeasure mu;
  for (auto& p : j.at("sites")) mu.sites.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  mu.masses = j.at("masses").get<std::vector<double>>();
  if (mu.sites.size() != mu.masses.size()) throw std::invalid_argument("measure: sites/masses mismatch");
  for (double m : mu.masses)
    if (m < 0.0) throw std::invalid_argument("measure: negative mass");
  return mu;
}

std::string to_json(const Ellipsoid& e) {
  json j;
  j["center"] = {e.center.x, e.center.y};
  j["shape"] = {{e.shape.a11, e.shape.a12}, {e.shape.a12, e.shape.a22}};
  return j.dump();
}

Ellipsoid ellipsoid_from_json(const std::string& text) {
  json j = json::parse(text);
  Ellipsoid e;
  e.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
  e.shape.a11 = j.at("shape").at(0).at(0).get<double>();
  e.shape.a12 = j.at("shape").at(0).at(1).get<double>();
  e.shape.a22 = j.at("shape").at(1).at(1).get<double>();
  return e;
}

std::string to_json(const GridFunction& g) {
  json j;
  j["origin"] = {g.origin.x, g.origin.y};
  j["h"] = g.h;
  j["dims"] = {g.nx, g.ny};
  std::string mask(g.mask.size(), '0');
  for (size_t k = 0; k < g.mask.size(); ++k) mask[k] = char('0' + g.mask[k]);
  j["mask"] = mask;
  j["values"] = g.values;
  return j.dump();
}

GridFunction grid_from_json(const std::string& text) {
  json j = json::parse(text);
  GridFunction g;
  g.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
  g.h = j.at("h").get<double>();
  g.nx = j.at("dims").at(0).get<int>();
  g.ny = j.at("dims").at(1).get<int>();
  std::string mask = j.at("mask").get<std::string>();
  g.mask.resize(mask.size());
  for (size_t k = 0; k < mask.size(); ++k) g.mask[k] = uint8_t(mask[k] - '0');
  g.values = j.at("values").get<std::vector<double>>();
  if (int(g.values.size()) != g.nx * g.ny || g.values.size() != g.mask.size())
    throw std::invalid_argument("grid: dims/values mismatch");
  return g;
}

std::string to_json(const DirichletProblem& p) {
  json j;
  for (auto& v : p.domain.vertices) j["domain"]["vertices"].push_back({v.x, v.y});
  j["boundary"] = p.boundary_values;
  j["diracs"] = json::array();
  for (size_t k = 0; k < p.dirac_sites.size(); ++k)
    j["diracs"].push_back({{"x", p.dirac_sites[k].x}, {"y", p.dirac_sites[k].y}, {"mass", p.dirac_masses[k]}});
  return j.dump();
}

DirichletProblem problem_from_json(const std::string& text, const Tolerances& tol) {
  json j = json::parse(text);
  DirichletProblem p;
  std::vector<Vec2> verts;
  for (auto& v : j.at("domain").at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  p.domain = ConvexDomain::from_vertices(verts, tol);
  p.boundary_values = j.at("boundary").get<std::vector<double>>();
  if (j.contains("diracs"))
    for (auto& d : j["diracs"]) {
      p.dirac_sites.push_back({d.at("x").get<double>(), d.at("y").get<double>()});
      p.dirac_masses.push_back(d.at("mass").get<double>());
    }
  return p;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (size_t k = 0; k < header.size(); ++k) {
    if (k) text_ += ',';
    text_ += header[k];
  }
  text_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
  for (size_t k = 0; k < values.size(); ++k) {
    if (k) text_ += ',';
    text_ += format_double(values[k]);
  }
  text_ += '\n';
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
  for (size_t k = 0; k < cells.size(); ++k) {
    if (k) text_ += ',';
    text_ += cells[k];
  }
  text_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_file(path, text_); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ampere
