#include "sphermite/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sphermite {

namespace {

double unit(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

double uniform(std::uint64_t& state, double lo, double hi) { return lo + (hi - lo) * unit(state); }

Vec3 random_direction(std::uint64_t& state) {
    const double z = 1.0 - 2.0 * unit(state);
    const double phi = 2.0 * M_PI * unit(state);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {rho * std::cos(phi), rho * std::sin(phi), z};
}

Vec3 any_perpendicular(const Vec3& d) {
    const Vec3 a = std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    return normalize(cross(d, a));
}

void add_craters(TerrainParams& p, std::uint64_t& state, int count, double r_lo, double r_hi, double depth_per_radius) {
    for (int k = 0; k < count; ++k) {
        Crater c;
        c.center = random_direction(state);
        c.radius = uniform(state, r_lo, r_hi);
        c.depth = depth_per_radius * c.radius * uniform(state, 0.7, 1.3);
        c.rim = uniform(state, 0.2, 0.4);
        p.craters.push_back(c);
    }
}

void add_ridges(TerrainParams& p, std::uint64_t& state, int count, double len_lo, double len_hi, double width,
                double height) {
    for (int k = 0; k < count; ++k) {
        Ridge r;
        r.center = random_direction(state);
        const Vec3 t = any_perpendicular(r.center);
        const double a = 2.0 * M_PI * unit(state);
        const Vec3 along = std::cos(a) * t + std::sin(a) * cross(r.center, t);
        r.axis = normalize(cross(r.center, along));
        r.half_length = uniform(state, len_lo, len_hi);
        r.width = width * uniform(state, 0.8, 1.2);
        r.height = height * uniform(state, 0.7, 1.3);
        p.ridges.push_back(r);
    }
}

}  // namespace

ShCoefficients glyph_coefficients(int degree, std::uint64_t seed) {
    std::uint64_t state = seed;
    std::vector<double> c(static_cast<std::size_t>(sh_count(degree)), 0.0);
    for (int l = 1; l <= degree; ++l) {
        for (int m = -l; m <= l; ++m) c[static_cast<std::size_t>(sh_index(l, m))] = uniform(state, -1.0, 1.0) / l;
    }
    const ShCoefficients rest(c);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < 20000; ++i) {
        const double v = sh_eval(rest, fibonacci_direction(i, 20000));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    constexpr double kY00 = 0.28209479177387814;
    c[0] = (0.35 * (hi - lo) - lo) / kY00;
    return ShCoefficients(std::move(c));
}

TerrainParams asteroid_params(std::uint64_t seed) {
    std::uint64_t state = seed ^ 0xa57e501dULL;
    TerrainParams p;
    p.base_radius = 1.0;
    p.octaves = 5;
    p.frequency = 1.5;
    p.amplitude = 0.05;
    p.seed = splitmix64(state);
    add_craters(p, state, 6, 0.25, 0.4, 0.25);
    add_craters(p, state, 18, 0.1, 0.18, 0.25);
    add_craters(p, state, 45, 0.04, 0.08, 0.25);
    add_ridges(p, state, 8, 0.3, 0.7, 0.05, 0.02);
    for (int k = 0; k < 30; ++k) {
        Boulder b;
        b.center = random_direction(state);
        b.radius = uniform(state, 0.03, 0.06);
        b.height = 0.3 * b.radius;
        p.boulders.push_back(b);
    }
    return p;
}

TerrainParams planet_params(std::uint64_t seed) {
    std::uint64_t state = seed ^ 0x91a7e7ULL;
    TerrainParams p;
    p.base_radius = 1.0;
    p.octaves = 6;
    p.frequency = 1.0;
    p.amplitude = 0.03;
    p.gain = 0.5;
    p.seed = splitmix64(state);
    add_ridges(p, state, 6, 0.4, 0.9, 0.06, 0.012);
    add_craters(p, state, 10, 0.05, 0.15, 0.1);
    return p;
}

Scene make_scene(const RadialSurface& surface, const SceneBuild& build) {
    SceneObject obj;
    obj.surface = surface;
    BakeOptions opt;
    opt.gutter = build.hermite_gutter;
    opt.scale = surface.scale;
    opt.signed_abs = surface.signed_abs;
    obj.hermite = std::make_shared<HermiteCubemap>(bake(*surface.field, build.resolution, build.mode, opt));
    if (build.with_values) {
        opt.gutter = 2;
        const int nv = build.value_resolution > 0 ? build.value_resolution : build.resolution;
        obj.values = std::make_shared<HermiteCubemap>(bake_value_only(*surface.field, nv, opt));
    }
    Scene scene;
    scene.objects.push_back(std::move(obj));
    return scene;
}

RadialSurface surface_from_map(const HermiteCubemap& map, Vec3 center) {
    double r_max = 0.0;
    const int g = map.gutter();
    for (Face f : kAllFaces) {
        for (int j = g; j < g + map.resolution(); ++j) {
            for (int i = g; i < g + map.resolution(); ++i) {
                const double r = map.at(f, i, j);
                r_max = std::max(r_max, map.signed_abs() ? std::abs(r) : r);
            }
        }
    }
    RadialSurface s;
    s.center = center;
    s.scale = map.scale();
    s.signed_abs = map.signed_abs();
    s.r_max = r_max * kMaxSafetyFactor;
    return s;
}

Camera framing_camera(const RadialSurface& surface, int width, int height) {
    Camera cam;
    const double rb = surface.bound_radius();
    cam.target = surface.center;
    cam.eye = surface.center + normalize(Vec3{0.25, 0.35, 1.0}) * (3.0 * rb);
    cam.up = {0.0, 1.0, 0.0};
    cam.fov_y = 2.0 * std::asin(1.0 / 3.0) * 1.05;
    cam.width = width;
    cam.height = height;
    return cam;
}

}  // namespace sphermite
