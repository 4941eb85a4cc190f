#pragma once

#include "vem/mesh.hpp"

#include <string>

namespace vem {

/// Parse a JSON grid description with keys "vertices" and "polygons"
/// ("simplices" is accepted for triangle lists).
GridDict parse_grid_dict(const std::string& text);
std::string format_grid_dict(const GridDict& grid);

Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace vem
