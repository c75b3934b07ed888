#include "sphermite/sampler.hpp"

#include <array>
#include <cmath>

namespace sphermite {

std::string_view reconstruction_name(Reconstruction r) {
    switch (r) {
        case Reconstruction::Nearest: return "nearest";
        case Reconstruction::Bilinear: return "bilinear";
        case Reconstruction::Bicubic16: return "bicubic16";
        case Reconstruction::FastBicubic: return "fast_bicubic";
        case Reconstruction::Hermite: return "hermite";
    }
    return "unknown";
}

HermiteBasisEval hermite_basis(double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {2 * s3 - 3 * s2 + 1,  -2 * s3 + 3 * s2,  s3 - 2 * s2 + s,  s3 - s2,
            6 * s2 - 6 * s,       -6 * s2 + 6 * s,   3 * s2 - 4 * s + 1, 3 * s2 - 2 * s};
}

namespace {

void require_inside(const HermiteCubemap& map, int lo_i, int lo_j, int hi_i, int hi_j) {
    const int s = map.stored_size();
    if (lo_i < 0 || lo_j < 0 || hi_i >= s || hi_j >= s) throw SamplingError("insufficient gutter");
}

std::uint64_t texel_scalars(const HermiteCubemap& map) { return static_cast<std::uint64_t>(map.channels()); }

// Emulated hardware bilinear filter at continuous stored-texel coordinates
// (texel centers at integers); one instruction reading a 2×2 footprint.
double hw_bilinear(const HermiteCubemap& map, Face f, double x, double y, FetchCounter& cost) {
    const int i = static_cast<int>(std::floor(x));
    const int j = static_cast<int>(std::floor(y));
    require_inside(map, i, j, i + 1, j + 1);
    const double a = x - i;
    const double b = y - j;
    cost.tex_ops += 1;
    cost.scalars += 4 * texel_scalars(map);
    cost.samples += 4;
    const double r0 = map.at(f, i, j) + a * (map.at(f, i + 1, j) - map.at(f, i, j));
    const double r1 = map.at(f, i, j + 1) + a * (map.at(f, i + 1, j + 1) - map.at(f, i, j + 1));
    return r0 + b * (r1 - r0);
}

struct Weights4 {
    std::array<double, 4> w;
    std::array<double, 4> dw;
};

Weights4 catmull_rom(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {{0.5 * (-t3 + 2 * t2 - t), 0.5 * (3 * t3 - 5 * t2 + 2), 0.5 * (-3 * t3 + 4 * t2 + t), 0.5 * (t3 - t2)},
            {0.5 * (-3 * t2 + 4 * t - 1), 0.5 * (9 * t2 - 10 * t), 0.5 * (-9 * t2 + 8 * t + 1), 0.5 * (3 * t2 - 2 * t)}};
}

std::array<double, 4> bspline(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double u = 1.0 - t;
    return {u * u * u / 6.0, (3 * t3 - 6 * t2 + 4) / 6.0, (-3 * t3 + 3 * t2 + 3 * t + 1) / 6.0, t3 / 6.0};
}

}  // namespace

ReconstructionSample hermite_sample(const HermiteCubemap& map, const FacePoint& p) {
    if (map.channels() != 4) throw std::invalid_argument("hermite_sample needs a 4-channel map");
    const CellQuery q = locate_cell(map, p);
    const HermiteBasisEval bu = hermite_basis(q.s);
    const HermiteBasisEval bv = hermite_basis(q.t);
    const HermiteTexel t00 = map.hermite_texel(q.face, q.i0, q.j0);
    const HermiteTexel t10 = map.hermite_texel(q.face, q.i0 + 1, q.j0);
    const HermiteTexel t01 = map.hermite_texel(q.face, q.i0, q.j0 + 1);
    const HermiteTexel t11 = map.hermite_texel(q.face, q.i0 + 1, q.j0 + 1);

    // Tensor-product form with H0 = 1 - H1 folded in, so constants come back
    // exactly: each row is a 1D Hermite curve in s of the value (P) and of the
    // v-tangent (Q), then the rows are blended in t.
    auto curve = [](double a0, double a1, double d0, double d1, const HermiteBasisEval& b) {
        return a0 + b.h1 * (a1 - a0) + b.h0d * d0 + b.h1d * d1;
    };
    auto slope = [](double a0, double a1, double d0, double d1, const HermiteBasisEval& b) {
        return b.dh1 * (a1 - a0) + b.dh0d * d0 + b.dh1d * d1;
    };
    const double p0 = curve(t00.r, t10.r, t00.ru_h, t10.ru_h, bu);
    const double p1 = curve(t01.r, t11.r, t01.ru_h, t11.ru_h, bu);
    const double q0 = curve(t00.rv_h, t10.rv_h, t00.ruv_h2, t10.ruv_h2, bu);
    const double q1 = curve(t01.rv_h, t11.rv_h, t01.ruv_h2, t11.ruv_h2, bu);
    const double dp0 = slope(t00.r, t10.r, t00.ru_h, t10.ru_h, bu);
    const double dp1 = slope(t01.r, t11.r, t01.ru_h, t11.ru_h, bu);
    const double dq0 = slope(t00.rv_h, t10.rv_h, t00.ruv_h2, t10.ruv_h2, bu);
    const double dq1 = slope(t01.rv_h, t11.rv_h, t01.ruv_h2, t11.ruv_h2, bu);

    ReconstructionSample out;
    out.value = curve(p0, p1, q0, q1, bv);
    const double inv_h = map.resolution();
    out.ru = curve(dp0, dp1, dq0, dq1, bv) * inv_h;
    out.rv = slope(p0, p1, q0, q1, bv) * inv_h;
    out.has_derivatives = true;
    out.cost = {4, 4 * texel_scalars(map), 4};
    return out;
}

ReconstructionSample baseline_sample(const HermiteCubemap& map, const FacePoint& p, Reconstruction method,
                                     bool analytic_gradient) {
    const CellQuery q = locate_cell(map, p);
    ReconstructionSample out;
    switch (method) {
        case Reconstruction::Nearest: {
            const int i = q.s < 0.5 ? q.i0 : q.i0 + 1;
            const int j = q.t < 0.5 ? q.j0 : q.j0 + 1;
            out.value = map.at(q.face, i, j);
            out.cost = {1, texel_scalars(map), 1};
            return out;
        }
        case Reconstruction::Bilinear:
            out.value = hw_bilinear(map, q.face, q.i0 + q.s, q.j0 + q.t, out.cost);
            return out;
        case Reconstruction::Bicubic16: {
            require_inside(map, q.i0 - 1, q.j0 - 1, q.i0 + 2, q.j0 + 2);
            const Weights4 wu = catmull_rom(q.s);
            const Weights4 wv = catmull_rom(q.t);
            // Weights sum to one; offsets from the base texel keep constants exact.
            const double base = map.at(q.face, q.i0, q.j0);
            double sum = 0.0;
            double su = 0.0;
            double sv = 0.0;
            for (int j = 0; j < 4; ++j) {
                for (int i = 0; i < 4; ++i) {
                    const double f = map.at(q.face, q.i0 - 1 + i, q.j0 - 1 + j) - base;
                    sum += wu.w[i] * wv.w[j] * f;
                    su += wu.dw[i] * wv.w[j] * f;
                    sv += wu.w[i] * wv.dw[j] * f;
                }
            }
            out.value = base + sum;
            out.cost = {16, 16 * texel_scalars(map), 16};
            if (analytic_gradient) {
                out.ru = su * map.resolution();
                out.rv = sv * map.resolution();
                out.has_derivatives = true;
            }
            return out;
        }
        case Reconstruction::FastBicubic: {
            const auto wu = bspline(q.s);
            const auto wv = bspline(q.t);
            const double gu0 = wu[0] + wu[1];
            const double gu1 = wu[2] + wu[3];
            const double gv0 = wv[0] + wv[1];
            const double gv1 = wv[2] + wv[3];
            const double xu0 = q.i0 - 1 + wu[1] / gu0;
            const double xu1 = q.i0 + 1 + wu[3] / gu1;
            const double yv0 = q.j0 - 1 + wv[1] / gv0;
            const double yv1 = q.j0 + 1 + wv[3] / gv1;
            require_inside(map, q.i0 - 1, q.j0 - 1, q.i0 + 2, q.j0 + 2);
            const double a = hw_bilinear(map, q.face, xu0, yv0, out.cost);
            const double b = hw_bilinear(map, q.face, xu1, yv0, out.cost);
            const double c = hw_bilinear(map, q.face, xu0, yv1, out.cost);
            const double d = hw_bilinear(map, q.face, xu1, yv1, out.cost);
            // gu0 + gu1 = gv0 + gv1 = 1
            const double r0 = a + gu1 * (b - a);
            const double r1 = c + gu1 * (d - c);
            out.value = r0 + gv1 * (r1 - r0);
            return out;
        }
        case Reconstruction::Hermite:
            break;
    }
    throw std::invalid_argument("baseline_sample does not handle Hermite");
}

ReconstructionSample sample(const HermiteCubemap& map, const FacePoint& p, Reconstruction method,
                            bool analytic_gradient) {
    if (method == Reconstruction::Hermite) return hermite_sample(map, p);
    return baseline_sample(map, p, method, analytic_gradient);
}

ReconstructionSample sample_direction(const HermiteCubemap& map, const Vec3& d, Reconstruction method,
                                      bool analytic_gradient) {
    return sample(map, direction_to_face_uv(d), method, analytic_gradient);
}

ReconstructionSample bilinear_tap(const HermiteCubemap& map, const FacePoint& p) {
    return baseline_sample(map, p, Reconstruction::Bilinear);
}

double rendered_radius(const RadialSurface& surface, double r) {
    return radius_transform(surface, r).R;
}

NormalSample analytic_normal(const RadialSurface& surface, const HermiteCubemap& map, const Vec3& d,
                             Reconstruction method) {
    const FacePoint p = direction_to_face_uv(d);
    const ReconstructionSample smp = sample(map, p, method, true);
    if (!smp.has_derivatives) throw std::invalid_argument("method has no analytic derivatives");
    const RadiusSample rs = radius_transform(surface, smp.value);
    const double k = surface.signed_abs ? surface.scale * rs.sign : surface.scale;
    const SphericalGradient g = spherical_gradient(tangent_frame(p), k * smp.ru, k * smp.rv);
    return {radial_normal(d, rs.R, g.vec), rs.R, smp.cost};
}

NormalSample fd_normal(const RadialSurface& surface, const HermiteCubemap& map, const Vec3& d,
                       Reconstruction method, double step) {
    const FacePoint p = direction_to_face_uv(d);
    if (step <= 0.0) step = kFdStepTexels * map.texel_spacing();
    const ReconstructionSample center = sample(map, p, method);
    FetchCounter cost = center.cost;
    auto tap = [&](double du, double dv) {
        FacePoint o{p.face, p.u + du, p.v + dv};
        if (o.u < 0.0 || o.u > 1.0 || o.v < 0.0 || o.v > 1.0) {
            o = direction_to_face_uv(face_uv_to_direction(o));
        }
        const ReconstructionSample s = bilinear_tap(map, o);
        cost += {s.cost.tex_ops, s.cost.scalars, 1};
        return rendered_radius(surface, s.value);
    };
    const double Ru = (tap(step, 0) - tap(-step, 0)) / (2.0 * step);
    const double Rv = (tap(0, step) - tap(0, -step)) / (2.0 * step);
    const double R = rendered_radius(surface, center.value);
    const SphericalGradient g = spherical_gradient(tangent_frame(p), Ru, Rv);
    return {radial_normal(d, R, g.vec), R, cost};
}

}  // namespace sphermite
