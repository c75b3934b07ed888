#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "sphermite/field.hpp"
#include "sphermite/hermite_map.hpp"

namespace sphermite {

/// Texture cost of one or more queries: instructions issued and scalars read.
/// A fetch reads every channel of each texel it touches. `samples` counts
/// texels in value footprints plus one per finite-difference tap.
struct FetchCounter {
    std::uint64_t tex_ops = 0;
    std::uint64_t scalars = 0;
    std::uint64_t samples = 0;

    FetchCounter& operator+=(const FetchCounter& o) {
        tex_ops += o.tex_ops;
        scalars += o.scalars;
        samples += o.samples;
        return *this;
    }
    bool operator==(const FetchCounter&) const = default;
};

/// Query needs texels beyond the stored gutter.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Value reconstruction from a cubemap.
enum class Reconstruction { Nearest, Bilinear, Bicubic16, FastBicubic, Hermite };

std::string_view reconstruction_name(Reconstruction r);

struct ReconstructionSample {
    double value = 0.0;
    /// Chart derivatives ∂r/∂u, ∂r/∂v; valid only when has_derivatives.
    double ru = 0.0;
    double rv = 0.0;
    bool has_derivatives = false;
    FetchCounter cost;
};

/// Cubic Hermite basis and its derivative at s.
struct HermiteBasisEval {
    double h0, h1, h0d, h1d;
    double dh0, dh1, dh0d, dh1d;
};

HermiteBasisEval hermite_basis(double s);

/// Tensor-product Hermite reconstruction over the 2×2 cell; four RGBA fetches.
/// Throws std::invalid_argument on maps without 4 channels.
ReconstructionSample hermite_sample(const HermiteCubemap& map, const FacePoint& p);

/// Channel-0 reconstruction: nearest texel, bilinear (one emulated hardware
/// fetch), 16-tap Catmull-Rom, or B-spline bicubic from four bilinear fetches.
/// With `analytic_gradient`, Bicubic16 also differentiates its polynomial.
/// Throws SamplingError("insufficient gutter") when the footprint leaves the
/// stored grid (4×4 footprints need g >= 2 near face edges).
ReconstructionSample baseline_sample(const HermiteCubemap& map, const FacePoint& p, Reconstruction method,
                                     bool analytic_gradient = false);

/// Dispatches to hermite_sample or baseline_sample.
ReconstructionSample sample(const HermiteCubemap& map, const FacePoint& p, Reconstruction method,
                            bool analytic_gradient = false);

/// Sample at a direction, evaluated on its owning face.
ReconstructionSample sample_direction(const HermiteCubemap& map, const Vec3& d, Reconstruction method,
                                      bool analytic_gradient = false);

/// One emulated hardware-bilinear fetch of channel 0 at a chart point.
ReconstructionSample bilinear_tap(const HermiteCubemap& map, const FacePoint& p);

/// Shading result: unit normal, rendered radius R at the query direction and
/// the texture cost of producing both.
struct NormalSample {
    Vec3 normal;
    double radius = 0.0;
    FetchCounter cost;
};

/// Normal from chart derivatives of the same query that produced the value:
/// (R_u, R_v) = s·sign(r)·(r_u, r_v) are transported through the metric to the
/// tangent-plane gradient. Uses `method`'s own derivatives (Hermite, or
/// Bicubic16 with its analytic gradient); no extra fetches.
NormalSample analytic_normal(const RadialSurface& surface, const HermiteCubemap& map, const Vec3& d,
                             Reconstruction method = Reconstruction::Hermite);

/// Default finite-difference step for fd_normal, in units of the texel spacing.
inline constexpr double kFdStepTexels = 0.5;

/// Value via `method`, gradient from central differences of four
/// hardware-bilinear taps at ±step along u and v (step <= 0 selects h/2).
/// Offsets that leave the face are re-projected onto their owning face.
NormalSample fd_normal(const RadialSurface& surface, const HermiteCubemap& map, const Vec3& d,
                       Reconstruction method, double step = 0.0);

/// Rendered radius from a reconstructed r (applies scale and |r|).
double rendered_radius(const RadialSurface& surface, double r);

}  // namespace sphermite
