#include "sphermite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sphermite/baker.hpp"
#include "sphermite/parallel.hpp"

namespace sphermite {

PsnrReport make_psnr(double mse, double peak, std::size_t n) {
    PsnrReport r;
    r.mse = mse;
    r.peak = peak;
    r.n_samples = n;
    r.psnr_db = mse > 0.0 ? 10.0 * std::log10(peak * peak / mse) : kPsnrInfinite;
    return r;
}

std::vector<Vec3> uniform_directions(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * unit();
        const double phi = 2.0 * M_PI * unit();
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return out;
}

PsnrReport psnr_values(const SphericalField& field, const ValueFn& reconstruct, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("psnr_values needs n >= 1");
    const std::vector<Vec3> dirs = uniform_directions(n, seed);
    std::vector<double> truth(n);
    std::vector<double> sq(n);
    parallel_for(n, [&](std::size_t k) {
        truth[k] = field.eval(dirs[k]);
        const double e = reconstruct(dirs[k]) - truth[k];
        sq[k] = e * e;
    });
    const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
    const double mse = std::accumulate(sq.begin(), sq.end(), 0.0) / static_cast<double>(n);
    return make_psnr(mse, *hi - *lo, n);
}

PsnrReport psnr_values(const SphericalField& field, const HermiteCubemap& map, Reconstruction method, std::size_t n,
                       std::uint64_t seed) {
    return psnr_values(
        field, [&](const Vec3& d) { return sample_direction(map, d, method).value; }, n, seed);
}

PsnrReport psnr_images(const RenderImage& a, const RenderImage& b) {
    if (a.width != b.width || a.height != b.height || a.rgb.size() != b.rgb.size()) {
        throw std::invalid_argument("image dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double e = static_cast<double>(a.rgb[i]) - static_cast<double>(b.rgb[i]);
        sum += e * e;
    }
    return make_psnr(a.rgb.empty() ? 0.0 : sum / static_cast<double>(a.rgb.size()), 1.0, a.rgb.size());
}

NormalErrorReport summarize_angles(std::vector<double> angles) {
    if (angles.empty()) throw std::invalid_argument("no samples for normal error");
    std::sort(angles.begin(), angles.end());
    NormalErrorReport r;
    r.n_pixels = angles.size();
    r.mean_deg = std::accumulate(angles.begin(), angles.end(), 0.0) / static_cast<double>(angles.size());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(angles.size())));
    r.p95_deg = angles[std::max<std::size_t>(rank, 1) - 1];
    r.max_deg = angles.back();
    return r;
}

NormalErrorReport normal_error(const RenderImage& a, const RenderImage& b) {
    if (a.width != b.width || a.height != b.height) throw std::invalid_argument("image dimension mismatch");
    std::vector<double> angles;
    for (std::size_t p = 0; p < a.pixels(); ++p) {
        if (!a.mask[p] || !b.mask[p]) continue;
        const Vec3 na{a.normals[3 * p], a.normals[3 * p + 1], a.normals[3 * p + 2]};
        const Vec3 nb{b.normals[3 * p], b.normals[3 * p + 1], b.normals[3 * p + 2]};
        angles.push_back(std::acos(std::clamp(dot(na, nb), -1.0, 1.0)) * (180.0 / M_PI));
    }
    if (angles.empty()) throw std::invalid_argument("empty intersection mask");
    return summarize_angles(std::move(angles));
}

std::string_view cost_method_name(CostMethod m) {
    switch (m) {
        case CostMethod::BilinearHw: return "Bilinear (HW)";
        case CostMethod::BilinearFd: return "Bilinear + FD";
        case CostMethod::Bicubic16: return "Bicubic (16 pt)";
        case CostMethod::Bicubic16Fd: return "Bicubic + FD";
        case CostMethod::Bicubic16Analytic: return "Bicubic + analytic grad";
        case CostMethod::FastBicubic: return "Fast Bicubic (4 bilin)";
        case CostMethod::FastBicubicFd: return "Fast Bicubic + FD";
        case CostMethod::Hermite: return "Hermite";
    }
    return "unknown";
}

FetchCounter cost_report(CostMethod method) {
    const ConstantField field(1.0);
    const RadialSurface surface = make_radial_surface(std::make_shared<ConstantField>(1.0));
    const Vec3 d = face_uv_to_direction({Face::PosX, 0.37, 0.61});
    switch (method) {
        case CostMethod::Hermite: {
            const HermiteCubemap map = bake(field, 8, BakeMode::CentralDiff);
            return analytic_normal(surface, map, d, Reconstruction::Hermite).cost;
        }
        default: break;
    }
    BakeOptions opt;
    opt.gutter = 2;
    const HermiteCubemap map = bake_value_only(field, 8, opt);
    switch (method) {
        case CostMethod::BilinearHw: return sample_direction(map, d, Reconstruction::Bilinear).cost;
        case CostMethod::BilinearFd: return fd_normal(surface, map, d, Reconstruction::Bilinear).cost;
        case CostMethod::Bicubic16: return sample_direction(map, d, Reconstruction::Bicubic16).cost;
        case CostMethod::Bicubic16Fd: return fd_normal(surface, map, d, Reconstruction::Bicubic16).cost;
        case CostMethod::Bicubic16Analytic: return analytic_normal(surface, map, d, Reconstruction::Bicubic16).cost;
        case CostMethod::FastBicubic: return sample_direction(map, d, Reconstruction::FastBicubic).cost;
        case CostMethod::FastBicubicFd: return fd_normal(surface, map, d, Reconstruction::FastBicubic).cost;
        case CostMethod::Hermite: break;
    }
    return {};
}

std::string format_db(double db) {
    if (db == kPsnrInfinite) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", db);
    return buf;
}

}  // namespace sphermite
