#include "sphermite/cube_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sphermite {

namespace {

// origin, du, dv per face; see header table.
constexpr std::array<FaceAxes, 6> kFaceAxes = {{
    {{1, 1, 1}, {0, 0, -2}, {0, -2, 0}},    // +X: (1, 1-2v, 1-2u)
    {{-1, 1, -1}, {0, 0, 2}, {0, -2, 0}},   // -X: (-1, 1-2v, 2u-1)
    {{-1, 1, -1}, {2, 0, 0}, {0, 0, 2}},    // +Y: (2u-1, 1, 2v-1)
    {{-1, -1, 1}, {2, 0, 0}, {0, 0, -2}},   // -Y: (2u-1, -1, 1-2v)
    {{-1, 1, 1}, {2, 0, 0}, {0, -2, 0}},    // +Z: (2u-1, 1-2v, 1)
    {{1, 1, -1}, {-2, 0, 0}, {0, -2, 0}},   // -Z: (1-2u, 1-2v, -1)
}};

}  // namespace

std::string_view face_name(Face f) {
    static constexpr std::array<std::string_view, 6> names = {"+X", "-X", "+Y", "-Y", "+Z", "-Z"};
    return names[face_index(f)];
}

const FaceAxes& face_axes(Face f) { return kFaceAxes[face_index(f)]; }

Vec3 face_uv_to_unnormalized(const FacePoint& p) {
    const FaceAxes& a = face_axes(p.face);
    return a.origin + a.du * p.u + a.dv * p.v;
}

Vec3 face_uv_to_direction(const FacePoint& p) { return normalize(face_uv_to_unnormalized(p)); }

Face select_face(const Vec3& d) {
    const double ax = std::abs(d.x);
    const double ay = std::abs(d.y);
    const double az = std::abs(d.z);
    if (ax >= ay && ax >= az) return d.x >= 0.0 ? Face::PosX : Face::NegX;
    if (ay >= az) return d.y >= 0.0 ? Face::PosY : Face::NegY;
    return d.z >= 0.0 ? Face::PosZ : Face::NegZ;
}

FacePoint project_to_face(const Vec3& d, Face f) {
    // Scale d onto the face plane, then invert the affine chart. Each du/dv has
    // a single nonzero component of magnitude 2.
    const FaceAxes& a = face_axes(f);
    const int axis = face_index(f) / 2;
    const double ma = std::abs(d[axis]);
    const Vec3 w = d / ma;
    auto solve = [&](const Vec3& dir) {
        for (int k = 0; k < 3; ++k) {
            if (dir[k] != 0.0) return (w[k] - a.origin[k]) / dir[k];
        }
        return 0.0;
    };
    return {f, solve(a.du), solve(a.dv)};
}

FacePoint direction_to_face_uv(const Vec3& d) { return project_to_face(d, select_face(d)); }

TangentFrame tangent_frame(const FacePoint& p) {
    const FaceAxes& a = face_axes(p.face);
    const Vec3 wt = face_uv_to_unnormalized(p);
    const double len = length(wt);
    const Vec3 w = wt / len;
    // (I - w w^T) / |wt| applied to the constant chart axes.
    auto project = [&](const Vec3& d) { return (d - w * dot(w, d)) / len; };
    TangentFrame t;
    t.e1 = project(a.du);
    t.e2 = project(a.dv);
    t.g11 = dot(t.e1, t.e1);
    t.g12 = dot(t.e1, t.e2);
    t.g22 = dot(t.e2, t.e2);
    t.det_g = t.g11 * t.g22 - t.g12 * t.g12;
    return t;
}

SphericalGradient spherical_gradient(const TangentFrame& f, double ru, double rv) {
    const double det = std::max(f.det_g, kDetEps);
    SphericalGradient g;
    g.alpha = (f.g22 * ru - f.g12 * rv) / det;
    g.beta = (f.g11 * rv - f.g12 * ru) / det;
    g.vec = f.e1 * g.alpha + f.e2 * g.beta;
    return g;
}

}  // namespace sphermite
