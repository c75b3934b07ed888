#pragma once

#include <filesystem>

#include "sphermite/mesh_field.hpp"

namespace sphermite {

/// Loads ASCII or binary STL (detected from content).
TriangleSoup load_stl(const std::filesystem::path& path);

/// Loads OBJ `v`/`f` records; polygons are fan-triangulated, negative
/// indices are resolved relative to the current vertex count.
TriangleSoup load_obj(const std::filesystem::path& path);

/// Dispatches on extension (.stl / .obj). Throws std::runtime_error.
TriangleSoup load_mesh(const std::filesystem::path& path);

void save_stl_binary(const std::filesystem::path& path, const TriangleSoup& mesh);

Vec3 mesh_centroid(const TriangleSoup& mesh);

}  // namespace sphermite
