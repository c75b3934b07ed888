#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sphermite/field.hpp"
#include "sphermite/hermite_map.hpp"
#include "sphermite/renderer.hpp"
#include "sphermite/sampler.hpp"

namespace sphermite {

/// PSNR of identical signals; reports print it as "inf".
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

struct PsnrReport {
    double psnr_db = 0.0;
    double mse = 0.0;
    double peak = 0.0;
    std::size_t n_samples = 0;

    bool infinite() const { return psnr_db == kPsnrInfinite; }
};

/// 10 log10(peak² / mse), or kPsnrInfinite when mse == 0.
PsnrReport make_psnr(double mse, double peak, std::size_t n);

/// n uniform unit directions: z = 1 - 2a, φ = 2πb with a, b the top 53 bits
/// of consecutive mt19937_64 outputs seeded with `seed`.
std::vector<Vec3> uniform_directions(std::size_t n, std::uint64_t seed);

using ValueFn = std::function<double(const Vec3&)>;

/// MSE of `reconstruct` against the field's r over n uniform directions;
/// peak is the range of the ground-truth values on that set.
PsnrReport psnr_values(const SphericalField& field, const ValueFn& reconstruct, std::size_t n, std::uint64_t seed);
PsnrReport psnr_values(const SphericalField& field, const HermiteCubemap& map, Reconstruction method, std::size_t n,
                       std::uint64_t seed);

/// MSE over all linear RGB values (background included); peak 1. Throws
/// std::invalid_argument on a dimension mismatch.
PsnrReport psnr_images(const RenderImage& a, const RenderImage& b);

struct NormalErrorReport {
    double mean_deg = 0.0;
    double p95_deg = 0.0;
    double max_deg = 0.0;
    std::size_t n_pixels = 0;
};

/// Angular error statistics over a set of angles in degrees (p95 by the
/// nearest-rank rule). Throws std::invalid_argument on an empty set.
NormalErrorReport summarize_angles(std::vector<double> angles);

/// Per-pixel angle between normal buffers, over pixels hit in both images.
/// Throws std::invalid_argument on mismatched sizes or an empty intersection.
NormalErrorReport normal_error(const RenderImage& a, const RenderImage& b);

/// Rows of the cost table.
enum class CostMethod { BilinearHw, BilinearFd, Bicubic16, Bicubic16Fd, Bicubic16Analytic, FastBicubic, FastBicubicFd,
                        Hermite };

inline constexpr CostMethod kCostTableRows[] = {CostMethod::BilinearHw,  CostMethod::BilinearFd,
                                                CostMethod::Bicubic16,   CostMethod::FastBicubic,
                                                CostMethod::FastBicubicFd, CostMethod::Hermite};

std::string_view cost_method_name(CostMethod m);

/// Counters of one shading query, measured by running it on small maps
/// (value-only g=2 for baselines, 4-channel for Hermite).
FetchCounter cost_report(CostMethod method);

std::string format_db(double db);

}  // namespace sphermite
