#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sphermite/baker.hpp"
#include "sphermite/metrics.hpp"
#include "sphermite/sampler.hpp"
#include "test_util.hpp"

using namespace sphermite;
using testutil::rel_err;

namespace {

// Hermite patch of one cell evaluated at arbitrary local (s, t), including
// s or t = 1 which locate_cell never produces.
ReconstructionSample cell_eval(const HermiteCubemap& m, Face f, int i0, int j0, double s, double t) {
    const HermiteBasisEval bu = hermite_basis(s);
    const HermiteBasisEval bv = hermite_basis(t);
    const double hu[2] = {bu.h0, bu.h1}, hud[2] = {bu.h0d, bu.h1d}, du[2] = {bu.dh0, bu.dh1}, dud[2] = {bu.dh0d, bu.dh1d};
    const double hv[2] = {bv.h0, bv.h1}, hvd[2] = {bv.h0d, bv.h1d}, dv[2] = {bv.dh0, bv.dh1}, dvd[2] = {bv.dh0d, bv.dh1d};
    ReconstructionSample out;
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const HermiteTexel x = m.hermite_texel(f, i0 + i, j0 + j);
            out.value += hu[i] * hv[j] * x.r + hud[i] * hv[j] * x.ru_h + hu[i] * hvd[j] * x.rv_h + hud[i] * hvd[j] * x.ruv_h2;
            out.ru += du[i] * hv[j] * x.r + dud[i] * hv[j] * x.ru_h + du[i] * hvd[j] * x.rv_h + dud[i] * hvd[j] * x.ruv_h2;
            out.rv += hu[i] * dv[j] * x.r + hud[i] * dv[j] * x.ru_h + hu[i] * dvd[j] * x.rv_h + hud[i] * dvd[j] * x.ruv_h2;
        }
    }
    out.ru *= m.resolution();
    out.rv *= m.resolution();
    return out;
}

FacePoint random_point(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> f(0, 5);
    return {kAllFaces[f(g)], u(g), u(g)};
}

// Closed-form normal of R(ω) = a + w·ω.
Vec3 linear_field_normal(double a, const Vec3& w, const Vec3& d) {
    const double R = a + dot(w, d);
    const Vec3 grad = w - dot(w, d) * d;
    return normalize(R * d - grad);
}

double mean_error_vs_fd_truth(const RadialSurface& s, const HermiteCubemap& m) {
    const double eps = 1e-6;
    double sum = 0.0;
    const auto dirs = uniform_directions(3000, 31);
    for (const Vec3& d : dirs) {
        const FacePoint p = direction_to_face_uv(d);
        auto R = [&](double du, double dv) { return s.field->eval(face_uv_to_direction({p.face, p.u + du, p.v + dv})); };
        const double Ru = (R(eps, 0) - R(-eps, 0)) / (2 * eps);
        const double Rv = (R(0, eps) - R(0, -eps)) / (2 * eps);
        const Vec3 ref = radial_normal(d, R(0, 0), spherical_gradient(tangent_frame(p), Ru, Rv).vec);
        sum += angle_deg(analytic_normal(s, m, d).normal, ref);
    }
    return sum / dirs.size();
}

}  // namespace

TEST(HermiteBasis, EndpointConditions) {
    const HermiteBasisEval a = hermite_basis(0.0);
    const HermiteBasisEval b = hermite_basis(1.0);
    EXPECT_EQ(a.h0, 1.0);
    EXPECT_EQ(b.h1, 1.0);
    EXPECT_EQ(a.h0d, 0.0);
    EXPECT_EQ(b.h0d, 0.0);
    EXPECT_EQ(a.h1d, 0.0);
    EXPECT_EQ(b.h1d, 0.0);
    EXPECT_EQ(a.dh0d, 1.0);
    EXPECT_EQ(b.dh1d, 1.0);
    for (double s = 0.0; s <= 1.0; s += 0.05) {
        const HermiteBasisEval e = hermite_basis(s);
        EXPECT_NEAR(e.h0 + e.h1, 1.0, 1e-15);
        EXPECT_NEAR(e.dh0 + e.dh1, 0.0, 1e-15);
    }
}

TEST(HermiteSample, ReproducesStoredDataAtTexelCenters) {
    const HermiteCubemap m = bake(ShField(testutil::random_sh(4, 1, 4.0)), 12, BakeMode::CentralDiff);
    for (Face f : kAllFaces) {
        for (int j = 1; j <= 12; ++j) {
            for (int i = 1; i <= 12; ++i) {
                const ReconstructionSample s = hermite_sample(m, {f, m.texel_center(i), m.texel_center(j)});
                const HermiteTexel t = m.hermite_texel(f, i, j);
                EXPECT_LT(rel_err(s.value, t.r, 1e-300), 1e-12);
                EXPECT_LT(rel_err(s.ru, t.ru_h * 12.0), 1e-12);
                EXPECT_LT(rel_err(s.rv, t.rv_h * 12.0), 1e-12);
            }
        }
    }
}

TEST(HermiteSample, CubicCellExample) {
    // f(s, t) = s² t on a unit cell (N = 1, so h = 1).
    HermiteCubemap m(1, 1, 4);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const double s = i;
            const double t = j;
            m.set_texel(Face::PosX, 1 + i, 1 + j, {s * s * t, 2 * s * t, s * s, 2 * s});
        }
    }
    const CellQuery q = locate_cell(m, {Face::PosX, 1.0, 1.0});
    ASSERT_EQ(q.i0, 1);
    ASSERT_EQ(q.s, 0.5);
    const ReconstructionSample r = hermite_sample(m, {Face::PosX, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(r.value, 0.125);
    EXPECT_DOUBLE_EQ(r.ru, 0.5);
    EXPECT_DOUBLE_EQ(r.rv, 0.25);
}

TEST(HermiteSample, ConstantMap) {
    const HermiteCubemap m = bake(ConstantField(1.5), 8, BakeMode::CentralDiff);
    std::mt19937_64 g(2);
    for (int k = 0; k < 1000; ++k) {
        const ReconstructionSample s = hermite_sample(m, random_point(g));
        EXPECT_NEAR(s.value, 1.5, 1e-14);
        EXPECT_NEAR(s.ru, 0.0, 1e-13);
        EXPECT_NEAR(s.rv, 0.0, 1e-13);
    }
}

TEST(HermiteSample, RejectsValueOnlyMap) {
    EXPECT_THROW(hermite_sample(HermiteCubemap(4, 1, 1), {Face::PosX, 0.5, 0.5}), std::invalid_argument);
}

TEST(HermiteSample, ContinuousAcrossCellBoundaries) {
    const HermiteCubemap m = bake(ShField(testutil::random_sh(5, 3, 4.0)), 16, BakeMode::CentralDiff);
    std::mt19937_64 g(4);
    std::uniform_int_distribution<int> cell(1, 15);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const Face f = kAllFaces[k % 6];
        const int i = cell(g) + 1;
        const double t = u(g);
        const int j0 = cell(g);
        // Boundary u = texel_center(i), approached from cell i - 1 (s = 1) and cell i (s = 0).
        const ReconstructionSample left = cell_eval(m, f, i - 1, j0, 1.0, t);
        const ReconstructionSample right = cell_eval(m, f, i, j0, 0.0, t);
        const ReconstructionSample direct = hermite_sample(m, {f, m.texel_center(i), m.texel_center(j0) + t / 16.0});
        EXPECT_LT(rel_err(left.value, right.value), 1e-9);
        EXPECT_LT(rel_err(left.ru, right.ru), 1e-9);
        EXPECT_LT(rel_err(left.rv, right.rv), 1e-9);
        EXPECT_LT(rel_err(direct.value, left.value), 1e-9);
        EXPECT_LT(rel_err(direct.ru, left.ru), 1e-9);
    }
}

TEST(HermiteSample, DerivativesMatchFiniteDifferences) {
    const HermiteCubemap m = bake(ShField(testutil::random_sh(6, 5, 4.0)), 16, BakeMode::CentralDiff);
    std::mt19937_64 g(6);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    const double eps = 1e-6;
    for (int k = 0; k < 2000; ++k) {
        const FacePoint p{kAllFaces[k % 6], u(g), u(g)};
        const ReconstructionSample s = hermite_sample(m, p);
        auto at = [&](double du, double dv) { return hermite_sample(m, {p.face, p.u + du, p.v + dv}).value; };
        EXPECT_LT(rel_err(s.ru, (at(eps, 0) - at(-eps, 0)) / (2 * eps)), 1e-6);
        EXPECT_LT(rel_err(s.rv, (at(0, eps) - at(0, -eps)) / (2 * eps)), 1e-6);
    }
}

TEST(HermiteSample, SeamJumpShrinksWithResolution) {
    const ShField f(testutil::random_sh(4, 7, 4.0));
    std::vector<double> jumps;
    for (int n : {8, 16, 32}) {
        const HermiteCubemap m = bake(f, n, BakeMode::Analytic);
        double worst = 0.0;
        for (Face face : kAllFaces) {
            for (int k = 0; k <= 200; ++k) {
                const double v = k / 200.0;
                for (const FacePoint p : {FacePoint{face, 1.0, v}, FacePoint{face, 0.0, v}, FacePoint{face, v, 0.0},
                                          FacePoint{face, v, 1.0}}) {
                    const Vec3 d = face_uv_to_direction(p);
                    for (Face other : kAllFaces) {
                        if (other == face) continue;
                        const FacePoint q = project_to_face(d, other);
                        if (q.u < 0.0 || q.u > 1.0 || q.v < 0.0 || q.v > 1.0) continue;
                        if (length(face_uv_to_direction(q) - d) > 1e-9) continue;
                        worst = std::max(worst, std::abs(hermite_sample(m, p).value - hermite_sample(m, q).value));
                    }
                }
            }
        }
        jumps.push_back(worst);
    }
    EXPECT_GT(jumps[0], 0.0);
    EXPECT_GE(jumps[0] / jumps[1], 3.5) << jumps[0] << " " << jumps[1];
    EXPECT_GE(jumps[1] / jumps[2], 3.5) << jumps[1] << " " << jumps[2];
}

TEST(BaselineSample, ConstantsReproduced) {
    const HermiteCubemap m = bake_value_only(ConstantField(-0.75), 8, {2});
    std::mt19937_64 g(8);
    for (int k = 0; k < 500; ++k) {
        const FacePoint p = random_point(g);
        for (Reconstruction r : {Reconstruction::Nearest, Reconstruction::Bilinear, Reconstruction::Bicubic16,
                                 Reconstruction::FastBicubic}) {
            EXPECT_NEAR(baseline_sample(m, p, r).value, -0.75, 1e-14) << reconstruction_name(r);
        }
    }
}

TEST(BaselineSample, BilinearCellCenter) {
    HermiteCubemap m(4, 1, 1);
    m.at(Face::PosZ, 2, 2) = 0.0;
    m.at(Face::PosZ, 3, 2) = 1.0;
    m.at(Face::PosZ, 2, 3) = 0.0;
    m.at(Face::PosZ, 3, 3) = 1.0;
    const FacePoint p{Face::PosZ, 0.5, 0.5};
    const CellQuery q = locate_cell(m, p);
    ASSERT_EQ(q.i0, 2);
    ASSERT_DOUBLE_EQ(q.s, 0.5);
    EXPECT_DOUBLE_EQ(baseline_sample(m, p, Reconstruction::Bilinear).value, 0.5);
    EXPECT_DOUBLE_EQ(bilinear_tap(m, p).value, 0.5);
}

TEST(BaselineSample, NearestPicksClosestTexel) {
    HermiteCubemap m(4, 1, 1);
    m.at(Face::NegX, 2, 3) = 7.0;
    EXPECT_EQ(baseline_sample(m, {Face::NegX, 0.3, 0.6}, Reconstruction::Nearest).value, 7.0);
}

TEST(BaselineSample, CatmullRomReproducesQuadratics) {
    auto q = [](double u, double v) { return 1.0 + 0.5 * u - 2.0 * u * u + 0.3 * v * v + u * v - 0.7 * u * u * v * v; };
    const testutil::ChartField f([&](Face face, double u, double v) { return face == Face::PosX ? q(u, v) : 0.0; });
    const HermiteCubemap m = bake_value_only(f, 16, {2});
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int k = 0; k < 20; ++k) {
        const FacePoint p{Face::PosX, u(g), u(g)};
        EXPECT_NEAR(baseline_sample(m, p, Reconstruction::Bicubic16).value, q(p.u, p.v), 1e-12);
        const ReconstructionSample a = baseline_sample(m, p, Reconstruction::Bicubic16, true);
        ASSERT_TRUE(a.has_derivatives);
        EXPECT_NEAR(a.ru, 0.5 - 4.0 * p.u + p.v - 1.4 * p.u * p.v * p.v, 1e-10);
    }
}

TEST(BaselineSample, NoDerivativesWithoutFlag) {
    const HermiteCubemap m = bake_value_only(ConstantField(1.0), 8, {2});
    for (Reconstruction r : {Reconstruction::Nearest, Reconstruction::Bilinear, Reconstruction::Bicubic16,
                             Reconstruction::FastBicubic}) {
        EXPECT_FALSE(baseline_sample(m, {Face::PosY, 0.4, 0.4}, r).has_derivatives);
    }
}

TEST(BaselineSample, InsufficientGutter) {
    const HermiteCubemap m = bake(ConstantField(1.0), 8, BakeMode::CentralDiff);
    EXPECT_NO_THROW(baseline_sample(m, {Face::PosX, 0.5, 0.5}, Reconstruction::Bicubic16));
    try {
        baseline_sample(m, {Face::PosX, 0.01, 0.5}, Reconstruction::Bicubic16);
        ADD_FAILURE();
    } catch (const SamplingError& e) {
        EXPECT_STREQ(e.what(), "insufficient gutter");
    }
    EXPECT_THROW(baseline_sample(m, {Face::PosX, 0.5, 0.99}, Reconstruction::FastBicubic), SamplingError);
}

TEST(FetchCounts, PerMethod) {
    const HermiteCubemap vo = bake_value_only(ConstantField(1.0), 8, {2});
    const HermiteCubemap hm = bake(ConstantField(1.0), 8, BakeMode::CentralDiff);
    const FacePoint p{Face::PosX, 0.37, 0.61};
    EXPECT_EQ(hermite_sample(hm, p).cost, (FetchCounter{4, 16, 4}));
    EXPECT_EQ(baseline_sample(vo, p, Reconstruction::Nearest).cost, (FetchCounter{1, 1, 1}));
    EXPECT_EQ(baseline_sample(hm, p, Reconstruction::Nearest).cost, (FetchCounter{1, 4, 1}));
    EXPECT_EQ(baseline_sample(vo, p, Reconstruction::Bilinear).cost, (FetchCounter{1, 4, 4}));
    EXPECT_EQ(baseline_sample(vo, p, Reconstruction::Bicubic16).cost, (FetchCounter{16, 16, 16}));
    EXPECT_EQ(baseline_sample(vo, p, Reconstruction::Bicubic16, true).cost, (FetchCounter{16, 16, 16}));
    EXPECT_EQ(baseline_sample(vo, p, Reconstruction::FastBicubic).cost, (FetchCounter{4, 16, 16}));

    const RadialSurface s = make_radial_surface(std::make_shared<ConstantField>(1.0), {}, 1.0, false, 100);
    const Vec3 d = face_uv_to_direction(p);
    EXPECT_EQ(analytic_normal(s, hm, d).cost, hermite_sample(hm, p).cost);
    EXPECT_EQ(fd_normal(s, vo, d, Reconstruction::Bilinear).cost.tex_ops, 5u);
    EXPECT_EQ(fd_normal(s, vo, d, Reconstruction::Bilinear).cost, (FetchCounter{5, 20, 8}));
    EXPECT_EQ(fd_normal(s, vo, d, Reconstruction::Bicubic16).cost, (FetchCounter{20, 32, 20}));
    EXPECT_EQ(fd_normal(s, vo, d, Reconstruction::FastBicubic).cost, (FetchCounter{8, 32, 20}));
}

TEST(Normals, ConstantFieldGivesRadialNormal) {
    const RadialSurface s = make_radial_surface(std::make_shared<ConstantField>(2.0), {}, 1.0, false, 100);
    const HermiteCubemap hm = bake(*s.field, 8, BakeMode::CentralDiff);
    const HermiteCubemap vo = bake_value_only(*s.field, 8, {2});
    std::mt19937_64 g(10);
    for (int k = 0; k < 200; ++k) {
        const Vec3 d = testutil::random_direction(g);
        EXPECT_LT(length(analytic_normal(s, hm, d).normal - d), 1e-12);
        EXPECT_LT(length(fd_normal(s, vo, d, Reconstruction::Bilinear).normal - d), 1e-12);
        EXPECT_LT(length(fd_normal(s, hm, d, Reconstruction::Hermite).normal - d), 1e-12);
    }
}

TEST(Normals, LinearFieldMatchesClosedForm) {
    const double k0 = 0.5 / std::sqrt(M_PI);
    const double k1 = std::sqrt(3.0 / (4.0 * M_PI));
    const ShCoefficients c(std::vector<double>{3.0 / k0, 0.4 / k1, -0.3 / k1, 0.5 / k1});
    const Vec3 w{0.5, 0.4, -0.3};
    const RadialSurface s = make_radial_surface(sh_field(c), {}, 1.0, false, 2000);
    const HermiteCubemap m = bake(*s.field, 32, BakeMode::Analytic);
    for (const Vec3& d : uniform_directions(1000, 11)) {
        EXPECT_LT(angle_deg(analytic_normal(s, m, d).normal, linear_field_normal(3.0, w, d)), 0.2);
    }
}

TEST(Normals, SignedAbsChainRule) {
    const FieldPtr f = sh_field(testutil::random_sh(2, 12));
    const RadialSurface s = make_radial_surface(f, {}, 2.0, true, 5000);
    const HermiteCubemap m = bake(*f, 64, BakeMode::Analytic, {1, 2.0, true});
    int checked = 0;
    for (const Vec3& d : uniform_directions(2000, 13)) {
        if (std::abs(f->eval(d)) < 0.1) continue;
        EXPECT_LT(angle_deg(analytic_normal(s, m, d).normal, surface_normal(s, d)), 0.5);
        ++checked;
    }
    EXPECT_GT(checked, 500);
}

TEST(Normals, HermiteErrorDecreasesWithResolution) {
    const RadialSurface s = make_radial_surface(sh_field(testutil::random_sh(4, 14, 20.0)));
    double prev = 1e9;
    for (int n : {8, 16, 32}) {
        const double e = mean_error_vs_fd_truth(s, bake(*s.field, n, BakeMode::CentralDiff));
        EXPECT_LT(e, prev) << "N=" << n;
        prev = e;
    }
}

TEST(Normals, HermiteBeatsBilinearFdAtN48) {
    const RadialSurface s = make_radial_surface(sh_field(testutil::random_sh(4, 15, 20.0)));
    const HermiteCubemap hm = bake(*s.field, 48, BakeMode::CentralDiff);
    const HermiteCubemap vo = bake_value_only(*s.field, 48, {2});
    double eh = 0.0, eb = 0.0;
    const auto dirs = uniform_directions(5000, 16);
    for (const Vec3& d : dirs) {
        const Vec3 truth = surface_normal(s, d);
        eh += angle_deg(analytic_normal(s, hm, d).normal, truth);
        eb += angle_deg(fd_normal(s, vo, d, Reconstruction::Bilinear).normal, truth);
    }
    EXPECT_LE(eh, eb);
}

TEST(Normals, FdTapsCrossFaceEdges) {
    const RadialSurface s = make_radial_surface(sh_field(testutil::random_sh(3, 17, 20.0)));
    const HermiteCubemap hm = bake(*s.field, 16, BakeMode::CentralDiff);
    for (Face f : kAllFaces) {
        const Vec3 d = face_uv_to_direction({f, 0.999, 0.001});
        const NormalSample n = fd_normal(s, hm, d, Reconstruction::Bilinear);
        EXPECT_NEAR(length(n.normal), 1.0, 1e-12);
        EXPECT_LT(angle_deg(n.normal, surface_normal(s, d)), 5.0);
    }
}
