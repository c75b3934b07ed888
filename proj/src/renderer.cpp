#include "sphermite/renderer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sphermite/parallel.hpp"

namespace sphermite {

void Camera::validate() const {
    if (width < 1 || height < 1) throw std::invalid_argument("camera image size must be >= 1");
    if (!(fov_y > 0.0 && fov_y < M_PI)) throw std::invalid_argument("camera fov must be in (0, pi)");
    const Vec3 fwd = target - eye;
    if (length(fwd) == 0.0 || length(cross(fwd, up)) == 0.0) throw std::invalid_argument("degenerate camera frame");
}

Ray Camera::ray(int x, int y) const {
    const Vec3 fwd = normalize(target - eye);
    const Vec3 right = normalize(cross(fwd, up));
    const Vec3 upv = cross(right, fwd);
    const double th = std::tan(0.5 * fov_y);
    const double aspect = static_cast<double>(width) / static_cast<double>(height);
    const double sx = (2.0 * (x + 0.5) / width - 1.0) * th * aspect;
    const double sy = (1.0 - 2.0 * (y + 0.5) / height) * th;
    return {eye, normalize(fwd + sx * right + sy * upv)};
}

std::optional<Hit> intersect(const RadialSurface& surface, const RadiusFn& radius, const Ray& ray,
                             const IntersectConfig& cfg) {
    const double rb = surface.bound_radius();
    if (!(rb > 0.0)) return std::nullopt;
    const Vec3 oc = ray.origin - surface.center;
    const double b = dot(ray.dir, oc);
    const double disc = b * b - (dot(oc, oc) - rb * rb);
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t1 = -b + sq;
    if (t1 <= 0.0) return std::nullopt;
    const double t0 = std::max(-b - sq, 0.0);

    auto F = [&](double t, Vec3* omega = nullptr, double* R = nullptr) {
        const Vec3 p = oc + t * ray.dir;
        const double len = length(p);
        const Vec3 w = len > 0.0 ? p / len : Vec3{0.0, 0.0, 1.0};
        const double r = radius(w);
        if (omega != nullptr) *omega = w;
        if (R != nullptr) *R = r;
        return len - r;
    };

    const double dt = (t1 - t0) / cfg.march_steps;
    double a = t0;
    double fa = F(a);
    double c = 0.0;
    bool bracketed = false;
    for (int k = 1; k <= cfg.march_steps; ++k) {
        const double t = t0 + k * dt;
        const double ft = F(t);
        if (fa > 0.0 && ft <= 0.0) {
            c = t;
            bracketed = true;
            break;
        }
        a = t;
        fa = ft;
    }
    if (!bracketed) return std::nullopt;

    for (int k = 0; k < cfg.bisect_steps; ++k) {
        const double m = 0.5 * (a + c);
        if (F(m) > 0.0) {
            a = m;
        } else {
            c = m;
        }
    }

    const double delta = cfg.newton_step_rel * rb;
    double t = 0.5 * (a + c);
    for (int k = 0; k < cfg.newton_steps; ++k) {
        const double ft = F(t);
        if (ft == 0.0) break;
        if (ft > 0.0) {
            a = t;
        } else {
            c = t;
        }
        const double slope = (F(t + delta) - F(t - delta)) / (2.0 * delta);
        double next = t - ft / slope;
        if (!std::isfinite(next) || next <= a || next >= c) next = 0.5 * (a + c);
        t = next;
    }

    Hit hit;
    hit.t = t;
    hit.point = ray.origin + t * ray.dir;
    hit.residual = std::abs(F(t, &hit.omega, &hit.R));
    if (!(hit.residual <= cfg.residual_tol_rel * rb)) return std::nullopt;
    return hit;
}

Vec3 shade(const Vec3& normal, const Vec3& view, const Light& light, const Material& material) {
    const Vec3& l = light.direction;
    const double diffuse = std::max(dot(normal, l), 0.0);
    const Vec3 hsum = l + view;
    const double hlen = length(hsum);
    double spec = 0.0;
    if (hlen > 0.0) spec = material.ks * std::pow(std::max(dot(normal, hsum / hlen), 0.0), material.shininess);
    const double k = material.ka + material.kd * diffuse;
    return {material.albedo.x * k + spec, material.albedo.y * k + spec, material.albedo.z * k + spec};
}

std::string_view render_method_name(RenderMethod m) {
    switch (m) {
        case RenderMethod::GroundTruth: return "ground_truth";
        case RenderMethod::Nearest: return "nearest";
        case RenderMethod::BilinearFd: return "bilinear_fd";
        case RenderMethod::Bicubic16Fd: return "bicubic16_fd";
        case RenderMethod::Bicubic16Analytic: return "bicubic16_analytic";
        case RenderMethod::FastBicubicFd: return "fast_bicubic_fd";
        case RenderMethod::Hermite: return "hermite";
    }
    return "unknown";
}

RenderMethod parse_render_method(std::string_view name) {
    for (RenderMethod m : kAllRenderMethods) {
        if (render_method_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown render method: " + std::string(name));
}

namespace {

Reconstruction value_reconstruction(RenderMethod m) {
    switch (m) {
        case RenderMethod::Nearest: return Reconstruction::Nearest;
        case RenderMethod::BilinearFd: return Reconstruction::Bilinear;
        case RenderMethod::Bicubic16Fd:
        case RenderMethod::Bicubic16Analytic: return Reconstruction::Bicubic16;
        case RenderMethod::FastBicubicFd: return Reconstruction::FastBicubic;
        case RenderMethod::Hermite:
        case RenderMethod::GroundTruth: break;
    }
    return Reconstruction::Hermite;
}

}  // namespace

const HermiteCubemap& method_map(const SceneObject& obj, RenderMethod method) {
    if (method == RenderMethod::GroundTruth) throw std::invalid_argument("ground truth reads no map");
    if (method == RenderMethod::Hermite) {
        if (!obj.hermite) throw std::invalid_argument("missing map: hermite");
        return *obj.hermite;
    }
    if (obj.values) return *obj.values;
    if (obj.hermite) return *obj.hermite;
    throw std::invalid_argument("missing map: " + std::string(render_method_name(method)));
}

RadiusFn method_radius(const SceneObject& obj, RenderMethod method) {
    if (method == RenderMethod::GroundTruth) {
        if (!obj.surface.field) throw std::invalid_argument("ground truth needs a field");
        return [&obj](const Vec3& w) { return radius_transform(obj.surface, w).R; };
    }
    const HermiteCubemap* map = &method_map(obj, method);
    const Reconstruction rec = value_reconstruction(method);
    return [&obj, map, rec](const Vec3& w) {
        return rendered_radius(obj.surface, sample_direction(*map, w, rec).value);
    };
}

NormalSample method_normal(const SceneObject& obj, RenderMethod method, const Vec3& omega) {
    switch (method) {
        case RenderMethod::GroundTruth:
            return {surface_normal(obj.surface, omega), radius_transform(obj.surface, omega).R, {}};
        case RenderMethod::Hermite:
            return analytic_normal(obj.surface, method_map(obj, method), omega, Reconstruction::Hermite);
        case RenderMethod::Bicubic16Analytic:
            return analytic_normal(obj.surface, method_map(obj, method), omega, Reconstruction::Bicubic16);
        case RenderMethod::Nearest:
        case RenderMethod::BilinearFd:
        case RenderMethod::Bicubic16Fd:
        case RenderMethod::FastBicubicFd:
            break;
    }
    return fd_normal(obj.surface, method_map(obj, method), omega, value_reconstruction(method));
}

RenderImage::RenderImage(int w, int h)
    : width(w),
      height(h),
      rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0.0f),
      normals(rgb.size(), 0.0f),
      mask(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

RenderImage render(const Scene& scene, const Camera& camera, RenderMethod method, const IntersectConfig& cfg,
                   RenderStats* stats) {
    camera.validate();
    RenderImage img(camera.width, camera.height);
    std::vector<RadiusFn> radius;
    radius.reserve(scene.objects.size());
    for (const auto& obj : scene.objects) radius.push_back(method_radius(obj, method));

    const int workers = thread_count();
    std::vector<RenderStats> partial(static_cast<std::size_t>(workers));
    parallel_chunks(static_cast<std::size_t>(camera.height), [&](std::size_t y0, std::size_t y1, int worker) {
        RenderStats& local = partial[static_cast<std::size_t>(worker)];
        for (auto y = static_cast<int>(y0); y < static_cast<int>(y1); ++y) {
            for (int x = 0; x < camera.width; ++x) {
                const std::size_t px = static_cast<std::size_t>(y) * static_cast<std::size_t>(camera.width) +
                                       static_cast<std::size_t>(x);
                const Ray ray = camera.ray(x, y);
                std::optional<Hit> best;
                std::size_t best_obj = 0;
                for (std::size_t o = 0; o < scene.objects.size(); ++o) {
                    auto h = intersect(scene.objects[o].surface, radius[o], ray, cfg);
                    if (h && (!best || h->t < best->t)) {
                        best = h;
                        best_obj = o;
                    }
                }
                Vec3 color = scene.background;
                if (best) {
                    const NormalSample ns = method_normal(scene.objects[best_obj], method, best->omega);
                    color = shade(ns.normal, -ray.dir, scene.light, scene.material);
                    img.mask[px] = 1;
                    img.normals[3 * px] = static_cast<float>(ns.normal.x);
                    img.normals[3 * px + 1] = static_cast<float>(ns.normal.y);
                    img.normals[3 * px + 2] = static_cast<float>(ns.normal.z);
                    local.hits += 1;
                    local.shading += ns.cost;
                }
                img.rgb[3 * px] = static_cast<float>(color.x);
                img.rgb[3 * px + 1] = static_cast<float>(color.y);
                img.rgb[3 * px + 2] = static_cast<float>(color.z);
            }
        }
    });
    if (stats != nullptr) {
        *stats = {};
        for (const auto& p : partial) {
            stats->hits += p.hits;
            stats->shading += p.shading;
        }
    }
    return img;
}

}  // namespace sphermite
