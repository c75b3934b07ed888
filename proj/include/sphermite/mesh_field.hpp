#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "sphermite/field.hpp"

namespace sphermite {

struct Triangle {
    Vec3 a;
    Vec3 b;
    Vec3 c;
};

using TriangleSoup = std::vector<Triangle>;

/// Möller–Trumbore ray/triangle test; returns t > t_min on hit. Both faces
/// count as hits.
std::optional<double> intersect_triangle(const Triangle& tri, const Vec3& origin, const Vec3& dir,
                                         double t_min = 1e-12);

/// Radial depth R(ω) = farthest hit of the ray center + tω against the mesh.
///
/// A median-split BVH is built once at construction. Rays that miss return 0
/// and bump miss_count(), which flags meshes that are not star-shaped around
/// the center.
class MeshRadialField final : public SphericalField {
public:
    /// Throws std::invalid_argument on an empty mesh.
    MeshRadialField(TriangleSoup mesh, Vec3 center);

    double eval(const Vec3& d) const override;

    std::size_t miss_count() const { return misses_.load(std::memory_order_relaxed); }
    const TriangleSoup& triangles() const { return tris_; }
    const Vec3& center() const { return center_; }

private:
    struct Node {
        Vec3 lo;
        Vec3 hi;
        std::uint32_t first = 0;  // right child for inner nodes (left is next), triangle offset for leaves
        std::uint32_t count = 0;  // 0 for inner nodes
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end);

    TriangleSoup tris_;
    Vec3 center_;
    std::vector<Node> nodes_;
    mutable std::atomic<std::size_t> misses_{0};
};

FieldPtr mesh_radial_field(TriangleSoup mesh, Vec3 center);

/// Icosphere of radius 1 at the origin (subdivisions >= 0).
TriangleSoup make_icosphere(int subdivisions);

/// Axis-aligned box centered at the origin.
TriangleSoup make_box(double half_extent);

/// Icosphere whose vertices are pushed to radius field(ω); turns a procedural
/// radial field into a triangle mesh.
TriangleSoup tessellate_field(const SphericalField& field, int subdivisions);

}  // namespace sphermite
