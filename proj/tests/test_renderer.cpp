#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "sphermite/image_io.hpp"
#include "sphermite/metrics.hpp"
#include "sphermite/parallel.hpp"
#include "sphermite/renderer.hpp"
#include "sphermite/scenes.hpp"
#include "test_util.hpp"

using namespace sphermite;

namespace {

RadialSurface unit_sphere() {
    return make_radial_surface(std::make_shared<ConstantField>(1.0), {}, 1.0, false, 100);
}

// First sign change of F along the bounding-sphere segment with a fine uniform march.
std::optional<double> dense_march(const RadialSurface& s, const Ray& ray, int steps) {
    const Vec3 oc = ray.origin - s.center;
    const double rb = s.bound_radius();
    const double b = dot(ray.dir, oc);
    const double disc = b * b - (dot(oc, oc) - rb * rb);
    if (disc < 0.0) return std::nullopt;
    const double t0 = std::max(-b - std::sqrt(disc), 0.0);
    const double t1 = -b + std::sqrt(disc);
    auto F = [&](double t) {
        const Vec3 p = oc + t * ray.dir;
        return length(p) - s.field->eval(normalize(p)) * s.scale;
    };
    double prev = t0;
    double fprev = F(t0);
    for (int k = 1; k <= steps; ++k) {
        const double t = t0 + (t1 - t0) * k / steps;
        const double f = F(t);
        if (fprev > 0.0 && f <= 0.0) return 0.5 * (prev + t);
        prev = t;
        fprev = f;
    }
    return std::nullopt;
}

Scene glyph_scene(int n, int degree = 8) {
    const RadialSurface s = make_radial_surface(sh_field(glyph_coefficients(degree, 3)));
    return make_scene(s, {n, BakeMode::Analytic});
}

double mask_mismatch(const RenderImage& a, const RenderImage& b) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.mask.size(); ++i) diff += a.mask[i] != b.mask[i];
    return static_cast<double>(diff) / a.mask.size();
}

}  // namespace

TEST(CameraTest, RaysAndValidation) {
    Camera c;
    c.width = 3;
    c.height = 3;
    const Ray r = c.ray(1, 1);
    EXPECT_NEAR(r.dir.z, -1.0, 1e-15);
    EXPECT_GT(c.ray(1, 0).dir.y, 0.0);
    EXPECT_NEAR(length(c.ray(0, 2).dir), 1.0, 1e-12);
    c.fov_y = M_PI;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.fov_y = 0.5;
    c.width = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.width = 4;
    c.up = {0, 0, 1};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Intersect, UnitSphere) {
    const RadialSurface s = unit_sphere();
    const auto hit = intersect(s, [](const Vec3&) { return 1.0; }, {{0, 0, 3}, {0, 0, -1}});
    ASSERT_TRUE(hit.has_value());
    EXPECT_NEAR(hit->t, 2.0, 1e-12);
    EXPECT_LT(length(hit->point - Vec3{0, 0, 1}), 1e-12);
    EXPECT_LT(length(hit->omega - Vec3{0, 0, 1}), 1e-12);
}

TEST(Intersect, Misses) {
    const RadialSurface s = unit_sphere();
    auto one = [](const Vec3&) { return 1.0; };
    EXPECT_FALSE(intersect(s, one, {{0, 0, 3}, {0, 1, 0}}).has_value());
    EXPECT_FALSE(intersect(s, one, {{0, 0, 3}, {0, 0, 1}}).has_value());
    EXPECT_FALSE(intersect(s, one, {{0, 1.01, 3}, {0, 0, -1}}).has_value());
}

TEST(Intersect, HermitePipelineMatchesDenseMarch) {
    const RadialSurface s = make_radial_surface(sh_field(testutil::random_sh(4, 5, 20.0)));
    const auto map = std::make_shared<HermiteCubemap>(bake(*s.field, 64, BakeMode::Analytic));
    const SceneObject obj{s, map, nullptr};
    const RadiusFn radius = method_radius(obj, RenderMethod::Hermite);
    double r_min = 1e9;
    for (const Vec3& d : uniform_directions(10000, 1)) r_min = std::min(r_min, s.field->eval(d));

    std::mt19937_64 g(6);
    std::vector<Ray> rays;
    for (int k = 0; k < 500; ++k) {
        const Vec3 eye = 3.0 * s.bound_radius() * testutil::random_direction(g);
        const Vec3 target = 0.5 * r_min * testutil::random_direction(g);
        rays.push_back({eye, normalize(target - eye)});
    }
    std::vector<double> err(rays.size(), -1.0);
    parallel_for(rays.size(), [&](std::size_t i) {
        const auto hit = intersect(s, radius, rays[i]);
        const auto ref = dense_march(s, rays[i], 100000);
        if (hit && ref) err[i] = std::abs(hit->t - *ref);
    });
    int agree = 0;
    for (double e : err) agree += e >= 0.0 && e < 1e-3 * s.bound_radius();
    EXPECT_GE(agree, 495);
}

TEST(Intersect, ResidualBoundOnEveryHit) {
    const Scene scene = glyph_scene(16);
    const SceneObject& obj = scene.objects[0];
    const Camera cam = framing_camera(obj.surface, 96, 96);
    for (RenderMethod m : kAllRenderMethods) {
        const RadiusFn radius = method_radius(obj, m);
        int hits = 0;
        for (int y = 0; y < cam.height; ++y) {
            for (int x = 0; x < cam.width; ++x) {
                const auto h = intersect(obj.surface, radius, cam.ray(x, y));
                if (!h) continue;
                ++hits;
                const double F = length(h->point - obj.surface.center) - radius(h->omega);
                ASSERT_LE(std::abs(F), 1e-5 * obj.surface.bound_radius() * (1 + 1e-9)) << render_method_name(m);
                ASSERT_LE(h->residual, 1e-5 * obj.surface.bound_radius());
            }
        }
        EXPECT_GT(hits, 1000) << render_method_name(m);
    }
}

TEST(Shade, Examples) {
    Material mat;
    const Light light;
    const Vec3 l = light.direction;
    Material no_spec = mat;
    no_spec.ks = 0.0;
    const Vec3 full = shade(l, l, light, no_spec);
    EXPECT_NEAR(full.x, 0.8 * (0.1 + 0.8), 1e-15);

    // Normal perpendicular to the light, viewer opposite it: ambient only.
    const Vec3 perp = normalize(cross(l, Vec3{1, 0, 0}));
    const Vec3 amb = shade(perp, -l, light, mat);
    EXPECT_NEAR(amb.y, 0.8 * 0.1, 1e-15);

    const Vec3 n = normalize(Vec3{0.2, 0.5, 0.9});
    const Vec3 v = normalize(Vec3{-0.1, 0.3, 1.0});
    const Vec3 h = normalize(l + v);
    const double expect = 0.8 * (0.1 + 0.8 * std::max(dot(n, l), 0.0)) + 0.3 * std::pow(std::max(dot(n, h), 0.0), 64.0);
    EXPECT_NEAR(shade(n, v, light, mat).z, expect, 1e-12);
}

TEST(Render, EmptyScene) {
    Scene scene;
    scene.background = {0.25, 0.5, 0.75};
    Camera cam;
    cam.width = 8;
    cam.height = 5;
    const RenderImage img = render(scene, cam, RenderMethod::Hermite);
    for (auto m : img.mask) EXPECT_EQ(m, 0);
    for (std::size_t p = 0; p < img.pixels(); ++p) {
        EXPECT_EQ(img.rgb[3 * p], 0.25f);
        EXPECT_EQ(img.rgb[3 * p + 2], 0.75f);
    }
}

TEST(Render, MissingMapIsAnError) {
    Scene scene;
    scene.objects.push_back({unit_sphere(), nullptr, nullptr});
    Camera cam;
    cam.width = cam.height = 4;
    EXPECT_THROW(render(scene, cam, RenderMethod::Hermite), std::invalid_argument);
    EXPECT_THROW(render(scene, cam, RenderMethod::BilinearFd), std::invalid_argument);
    EXPECT_NO_THROW(render(scene, cam, RenderMethod::GroundTruth));
}

TEST(Render, MethodNames) {
    for (RenderMethod m : kAllRenderMethods) EXPECT_EQ(parse_render_method(render_method_name(m)), m);
    EXPECT_THROW(parse_render_method("trilinear"), std::invalid_argument);
}

TEST(Render, DeterministicAndUnitNormals) {
    const Scene scene = glyph_scene(16);
    const Camera cam = framing_camera(scene.objects[0].surface, 64, 48);
    for (RenderMethod m : kAllRenderMethods) {
        const RenderImage a = render(scene, cam, m);
        const RenderImage b = render(scene, cam, m);
        EXPECT_TRUE(a == b) << render_method_name(m);
        for (std::size_t p = 0; p < a.pixels(); ++p) {
            if (!a.mask[p]) continue;
            const double len = std::sqrt(double(a.normals[3 * p]) * a.normals[3 * p] +
                                         double(a.normals[3 * p + 1]) * a.normals[3 * p + 1] +
                                         double(a.normals[3 * p + 2]) * a.normals[3 * p + 2]);
            ASSERT_NEAR(len, 1.0, 1e-6);
            ASSERT_TRUE(std::isfinite(a.rgb[3 * p]));
        }
    }
}

TEST(Render, ClosestObjectWins) {
    Scene scene;
    auto near_map = std::make_shared<HermiteCubemap>(bake(ConstantField(0.5), 8, BakeMode::CentralDiff));
    auto far_map = std::make_shared<HermiteCubemap>(bake(ConstantField(1.0), 8, BakeMode::CentralDiff));
    scene.objects.push_back({make_radial_surface(std::make_shared<ConstantField>(1.0), {0, 0, -1}, 1.0, false, 100),
                             far_map, nullptr});
    scene.objects.push_back({make_radial_surface(std::make_shared<ConstantField>(0.5), {0, 0, 0.5}, 1.0, false, 100),
                             near_map, nullptr});
    Camera cam;
    cam.width = cam.height = 1;
    RenderStats stats;
    const RenderImage img = render(scene, cam, RenderMethod::Hermite, {}, &stats);
    EXPECT_EQ(stats.hits, 1u);
    EXPECT_NEAR(img.normals[2], 1.0, 1e-6);
}

TEST(Render, HermiteCloseToGroundTruthAtN64) {
    const Scene scene = glyph_scene(64);
    const Camera cam = framing_camera(scene.objects[0].surface, 160, 160);
    const PsnrReport r = psnr_images(render(scene, cam, RenderMethod::GroundTruth), render(scene, cam, RenderMethod::Hermite));
    EXPECT_GE(r.psnr_db, 55.0);
}

TEST(Render, SilhouetteMismatchShrinksWithResolution) {
    const RadialSurface s = make_radial_surface(sh_field(glyph_coefficients(8, 3)));
    const Camera cam = framing_camera(s, 160, 160);
    Scene gt_scene;
    gt_scene.objects.push_back({s, nullptr, nullptr});
    const RenderImage gt = render(gt_scene, cam, RenderMethod::GroundTruth);
    for (RenderMethod m : {RenderMethod::Hermite, RenderMethod::BilinearFd}) {
        double prev = 2.0;
        for (int n : {8, 16, 32}) {
            const double f = mask_mismatch(render(make_scene(s, {n, BakeMode::Analytic}), cam, m), gt);
            EXPECT_LT(f, prev) << render_method_name(m) << " N=" << n;
            prev = f;
        }
    }
}

TEST(ImageIo, PpmAndFloatDumps) {
    RenderImage img(2, 1);
    img.rgb = {0.0f, 1.0f, 0.5f, 2.0f, -1.0f, 0.25f};
    const auto ppm = encode_ppm(img);
    const std::string header = "P6\n2 1\n255\n";
    ASSERT_EQ(ppm.size(), header.size() + 6);
    EXPECT_EQ(std::string(ppm.begin(), ppm.begin() + header.size()), header);
    EXPECT_EQ(ppm[header.size()], 0);
    EXPECT_EQ(ppm[header.size() + 1], 255);
    EXPECT_EQ(ppm[header.size() + 2], encode_gamma(0.5f));
    EXPECT_EQ(encode_gamma(0.5f), static_cast<std::uint8_t>(std::lround(255.0 * std::pow(0.5, 1.0 / 2.2))));
    EXPECT_EQ(ppm[header.size() + 3], 255);
    EXPECT_EQ(ppm[header.size() + 4], 0);

    const auto raw = encode_float_raw(2, 1, img.rgb);
    ASSERT_EQ(raw.size(), 8u + 24u);
    float first_g = 0.0f;
    std::memcpy(&first_g, raw.data() + 8 + 8, 4);
    EXPECT_EQ(first_g, 1.0f);  // planar: R0 R1 G0 ...

    const auto path = std::filesystem::temp_directory_path() / "sphermite_img.f32";
    write_float_raw(path, 2, 1, img.rgb);
    int w = 0, h = 0;
    EXPECT_EQ(read_float_raw(path, &w, &h), img.rgb);
    EXPECT_EQ(w, 2);
    EXPECT_EQ(h, 1);
}

TEST(ImageIo, SideBySide) {
    RenderImage a(2, 2), b(3, 1);
    a.rgb.assign(a.rgb.size(), 1.0f);
    b.rgb.assign(b.rgb.size(), 0.5f);
    const RenderImage c = side_by_side({a, b});
    EXPECT_EQ(c.width, 5);
    EXPECT_EQ(c.height, 2);
    EXPECT_EQ(c.rgb[3 * (0 * 5 + 1)], 1.0f);
    EXPECT_EQ(c.rgb[3 * (0 * 5 + 4)], 0.5f);
    EXPECT_EQ(c.rgb[3 * (1 * 5 + 4)], 0.0f);
}
