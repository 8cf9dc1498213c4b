#pragma once

#include <iosfwd>
#include <string>

#include "bjorling/patch.hpp"

namespace bjorling {

/// Wavefront OBJ: vertices in row-major grid order at 9 significant digits,
/// per-vertex normals where the patch is regular, two counterclockwise
/// triangles per cell as seen from +N. Output bytes are deterministic.
void export_obj(const SurfacePatch& patch, std::ostream& out);

/// Binary little-endian PLY with the same data; normals are included only
/// when every grid node is regular (PLY has no per-vertex optional fields).
void export_ply(const SurfacePatch& patch, std::ostream& out);

/// format is "obj" or "ply".
void export_mesh(const SurfacePatch& patch, const std::string& format, const std::string& path);

}  // namespace bjorling
