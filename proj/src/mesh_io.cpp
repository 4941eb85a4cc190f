#include "vem/mesh_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vem {

using nlohmann::json;

GridDict parse_grid_dict(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("mesh file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("mesh file: top level must be an object");
  if (!doc.contains("vertices")) throw FormatError("mesh file: missing \"vertices\"");
  const bool has_polygons = doc.contains("polygons");
  const bool has_simplices = doc.contains("simplices");
  if (has_polygons == has_simplices)
    throw FormatError("mesh file: exactly one of \"polygons\" and \"simplices\" is required");

  GridDict g;
  try {
    for (const auto& v : doc.at("vertices")) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw FormatError("mesh file: vertices must be [x, y] pairs");
      g.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    const json& cells = has_polygons ? doc.at("polygons") : doc.at("simplices");
    for (const auto& c : cells) {
      if (!c.is_array()) throw FormatError("mesh file: polygons must be index lists");
      std::vector<int> poly;
      for (const auto& i : c) {
        if (!i.is_number_integer()) throw FormatError("mesh file: polygon entries must be integers");
        poly.push_back(i.get<int>());
      }
      if (has_simplices && poly.size() != 3) throw FormatError("mesh file: simplices must have 3 vertices");
      g.polygons.push_back(std::move(poly));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("mesh file: ") + e.what());
  }
  return g;
}

std::string format_grid_dict(const GridDict& grid) {
  json doc;
  doc["vertices"] = json::array();
  for (const Point& p : grid.vertices) doc["vertices"].push_back({p.x(), p.y()});
  doc["polygons"] = grid.polygons;
  return doc.dump() + "\n";
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open mesh file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Mesh(parse_grid_dict(ss.str()));
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write mesh file " + path);
  out << format_grid_dict(mesh.grid_dict());
  if (!out) throw IOError("write failed for " + path);
}

}  // namespace vem
