#pragma once

#include "vem/spaces.hpp"

#include <string>

namespace vem {

/// Legacy ASCII VTK (3.0) unstructured grid over the sub-triangulation.
/// Triangle vertices are duplicated per polygon so that the discontinuous
/// Pi0 u can be written as point data. Cell data: the polygon index and,
/// for two-component spaces with a gradient projection, tr(Pi1 u).
void write_vtk(const Space& space, const Vector& u, const std::string& path, const std::string& name = "u");

}  // namespace vem
