#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "sphermite/vec3.hpp"

namespace sphermite {

/// Cubemap faces in storage order.
enum class Face : std::uint8_t { PosX = 0, NegX = 1, PosY = 2, NegY = 3, PosZ = 4, NegZ = 5 };

inline constexpr std::array<Face, 6> kAllFaces = {Face::PosX, Face::NegX, Face::PosY,
                                                  Face::NegY, Face::PosZ, Face::NegZ};

constexpr int face_index(Face f) { return static_cast<int>(f); }
std::string_view face_name(Face f);

/// Point in a face chart. u, v lie in [0,1] for interior queries; gutter and
/// bake-margin addressing extends slightly outside.
struct FacePoint {
    Face face = Face::PosX;
    double u = 0.5;
    double v = 0.5;
};

/// Affine chart of one face: unnormalized direction = origin + u * du + v * dv.
///
///   face  origin        du          dv
///   +X    ( 1, 1, 1)    ( 0, 0,-2)  ( 0,-2, 0)
///   -X    (-1, 1,-1)    ( 0, 0, 2)  ( 0,-2, 0)
///   +Y    (-1, 1,-1)    ( 2, 0, 0)  ( 0, 0, 2)
///   -Y    (-1,-1, 1)    ( 2, 0, 0)  ( 0, 0,-2)
///   +Z    (-1, 1, 1)    ( 2, 0, 0)  ( 0,-2, 0)
///   -Z    ( 1, 1,-1)    (-2, 0, 0)  ( 0,-2, 0)
///
/// This is the usual GL cubemap table with (u,v) = ((sc/|ma|+1)/2, (tc/|ma|+1)/2).
struct FaceAxes {
    Vec3 origin;
    Vec3 du;
    Vec3 dv;
};

const FaceAxes& face_axes(Face f);

/// Unnormalized direction for a chart point (affine in u, v).
Vec3 face_uv_to_unnormalized(const FacePoint& p);

/// Unit direction for a chart point.
Vec3 face_uv_to_direction(const FacePoint& p);

/// Face owning a direction: largest |component|, ties resolved in the order
/// +X, -X, +Y, -Y, +Z, -Z.
Face select_face(const Vec3& d);

/// Chart coordinates of `d` on a given face. `d` must lie in the open
/// half-space of that face's axis; u, v may fall outside [0,1].
FacePoint project_to_face(const Vec3& d, Face f);

/// Inverse of face_uv_to_direction using the owning face.
FacePoint direction_to_face_uv(const Vec3& d);

/// Tangent vectors e1 = dω/du, e2 = dω/dv and their metric.
struct TangentFrame {
    Vec3 e1;
    Vec3 e2;
    double g11 = 0.0;
    double g12 = 0.0;
    double g22 = 0.0;
    double det_g = 0.0;
};

TangentFrame tangent_frame(const FacePoint& p);

/// Lower clamp applied to det G before inversion.
inline constexpr double kDetEps = 1e-8;

/// Tangent-plane gradient alpha * e1 + beta * e2 with grad·e1 = Ru, grad·e2 = Rv.
struct SphericalGradient {
    double alpha = 0.0;
    double beta = 0.0;
    Vec3 vec;
};

SphericalGradient spherical_gradient(const TangentFrame& f, double ru, double rv);

}  // namespace sphermite
