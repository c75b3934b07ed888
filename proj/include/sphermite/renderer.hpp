#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sphermite/field.hpp"
#include "sphermite/hermite_map.hpp"
#include "sphermite/sampler.hpp"

namespace sphermite {

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
};

/// Pinhole camera; fov_y in radians.
struct Camera {
    Vec3 eye{0.0, 0.0, 3.0};
    Vec3 target{};
    Vec3 up{0.0, 1.0, 0.0};
    double fov_y = 0.8;
    int width = 256;
    int height = 256;

    /// Throws std::invalid_argument on a degenerate setup.
    void validate() const;
    /// Ray through the center of pixel (x, y); y = 0 is the top row.
    Ray ray(int x, int y) const;
};

struct Hit {
    double t = 0.0;
    Vec3 point;
    Vec3 omega;
    double R = 0.0;
    double residual = 0.0;
};

struct IntersectConfig {
    int march_steps = 32;
    int bisect_steps = 12;
    int newton_steps = 3;
    /// dF/dt differencing step, relative to the bound radius.
    double newton_step_rel = 1e-4;
    /// Hits with |F| above this fraction of the bound radius are rejected.
    double residual_tol_rel = 1e-5;
};

/// Rendered radius R(ω) for a unit direction from the surface center.
using RadiusFn = std::function<double(const Vec3&)>;

/// First crossing of F(t) = |p(t) - c| - R(ω) inside the bounding sphere:
/// uniform march, bisection on the first sign change, then safeguarded Newton.
std::optional<Hit> intersect(const RadialSurface& surface, const RadiusFn& radius, const Ray& ray,
                             const IntersectConfig& cfg = {});

struct Material {
    Vec3 albedo{0.8, 0.8, 0.8};
    double ka = 0.1;
    double kd = 0.8;
    double ks = 0.3;
    double shininess = 64.0;
};

struct Light {
    /// Unit vector towards the light.
    Vec3 direction = normalize(Vec3{0.5, 0.6, 0.8});
};

/// c = albedo (ka + kd max(n·l, 0)) + ks max(n·h, 0)^p with h the normalized
/// half vector of l and the view direction (no specular when l + v = 0).
Vec3 shade(const Vec3& normal, const Vec3& view, const Light& light, const Material& material);

enum class RenderMethod { GroundTruth, Nearest, BilinearFd, Bicubic16Fd, Bicubic16Analytic, FastBicubicFd, Hermite };

inline constexpr RenderMethod kAllRenderMethods[] = {
    RenderMethod::GroundTruth, RenderMethod::Nearest,           RenderMethod::BilinearFd, RenderMethod::Bicubic16Fd,
    RenderMethod::Bicubic16Analytic, RenderMethod::FastBicubicFd, RenderMethod::Hermite};

std::string_view render_method_name(RenderMethod m);
/// Throws std::invalid_argument for unknown names.
RenderMethod parse_render_method(std::string_view name);

/// One star-shaped surface with the maps its methods read. `hermite` is the
/// 4-channel map; `values` is the value-only map used by the FD and bicubic
/// baselines (falls back to channel 0 of `hermite` when absent).
struct SceneObject {
    RadialSurface surface;
    std::shared_ptr<const HermiteCubemap> hermite;
    std::shared_ptr<const HermiteCubemap> values;
};

struct Scene {
    std::vector<SceneObject> objects;
    Light light;
    Material material;
    Vec3 background{};
};

/// Reconstruction used by `method` for values, and the map it reads. Throws
/// std::invalid_argument("missing map") when the object lacks it.
const HermiteCubemap& method_map(const SceneObject& obj, RenderMethod method);

/// Radius function and shading normal of one object under a method.
RadiusFn method_radius(const SceneObject& obj, RenderMethod method);
NormalSample method_normal(const SceneObject& obj, RenderMethod method, const Vec3& omega);

struct RenderImage {
    int width = 0;
    int height = 0;
    std::vector<float> rgb;      // linear, row-major, 3 per pixel
    std::vector<float> normals;  // 3 per pixel, zero where not hit
    std::vector<std::uint8_t> mask;

    RenderImage() = default;
    RenderImage(int w, int h);
    std::size_t pixels() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    bool operator==(const RenderImage&) const = default;
};

struct RenderStats {
    std::uint64_t hits = 0;
    /// Shading-query cost (value + normal at the hit), summed over hit pixels.
    FetchCounter shading;
};

RenderImage render(const Scene& scene, const Camera& camera, RenderMethod method,
                   const IntersectConfig& cfg = {}, RenderStats* stats = nullptr);

}  // namespace sphermite
