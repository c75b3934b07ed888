#pragma once

#include <memory>
#include <optional>

#include "sphermite/cube_geometry.hpp"
#include "sphermite/sh_basis.hpp"
#include "sphermite/vec3.hpp"

namespace sphermite {

/// A scalar function r(ω) on the unit sphere.
///
/// Implementations are immutable after construction and must be safe to
/// evaluate concurrently.
class SphericalField {
public:
    virtual ~SphericalField() = default;

    virtual double eval(const Vec3& d) const = 0;

    /// Evaluation at a chart point. Defaults to eval() of the chart direction;
    /// chart-defined test fields override it to avoid the direction round trip.
    virtual double eval_chart(const FacePoint& p) const { return eval(face_uv_to_direction(p)); }

    /// Exact chart derivatives, when the field has them.
    virtual std::optional<ChartDerivatives> chart_derivatives(const FacePoint&) const {
        return std::nullopt;
    }

    virtual bool has_chart_derivatives() const { return false; }

    /// Tangent-plane gradient at d. The default differentiates eval_chart on
    /// the owning face with a small central-difference step.
    virtual Vec3 gradient(const Vec3& d, double* value = nullptr) const;
};

using FieldPtr = std::shared_ptr<const SphericalField>;

/// Step used by the default dense finite-difference gradient (chart units).
inline constexpr double kDenseFdStep = 1e-5;

/// Chart derivatives by central differences of eval_chart with kDenseFdStep.
ChartDerivatives dense_chart_derivatives(const SphericalField& f, const FacePoint& p);

/// SH expansion with analytic derivatives.
class ShField final : public SphericalField {
public:
    explicit ShField(ShCoefficients c) : coeffs_(std::move(c)) {}

    double eval(const Vec3& d) const override { return sh_eval(coeffs_, d); }
    std::optional<ChartDerivatives> chart_derivatives(const FacePoint& p) const override {
        return sh_chart_derivatives(coeffs_, p);
    }
    bool has_chart_derivatives() const override { return true; }
    Vec3 gradient(const Vec3& d, double* value) const override {
        return sh_gradient(coeffs_, d, value);
    }
    const ShCoefficients& coefficients() const { return coeffs_; }

private:
    ShCoefficients coeffs_;
};

FieldPtr sh_field(ShCoefficients c);

/// Field that is constant everywhere.
class ConstantField final : public SphericalField {
public:
    explicit ConstantField(double value) : value_(value) {}
    double eval(const Vec3&) const override { return value_; }
    std::optional<ChartDerivatives> chart_derivatives(const FacePoint&) const override {
        return ChartDerivatives{value_, 0.0, 0.0};
    }
    bool has_chart_derivatives() const override { return true; }
    Vec3 gradient(const Vec3&, double* value) const override {
        if (value != nullptr) *value = value_;
        return {};
    }

private:
    double value_;
};

/// Wraps a field and reports dense_chart_derivatives as its chart
/// derivatives, so derivative-less fields can be baked in Analytic mode.
FieldPtr with_dense_derivatives(FieldPtr field);

/// Star-shaped surface x(ω) = c + R(ω) ω with R = s·r or s·|r|.
struct RadialSurface {
    Vec3 center;
    double scale = 1.0;
    bool signed_abs = false;
    FieldPtr field;
    /// Sweep maximum of r (or |r|) times a safety factor; world bound is scale * r_max.
    double r_max = 0.0;

    double bound_radius() const { return scale * r_max; }
};

inline constexpr int kDefaultMaxSweep = 100000;
inline constexpr double kMaxSafetyFactor = 1.02;

/// Builds a surface and caches r_max from a Fibonacci-sphere sweep. Throws
/// std::invalid_argument when s <= 0 or, without signed_abs, when r < 0
/// somewhere on the sweep.
RadialSurface make_radial_surface(FieldPtr field, Vec3 center = {}, double scale = 1.0,
                                  bool signed_abs = false, int sweep = kDefaultMaxSweep);

/// Rendered radius and the sign of r (sign(0) = +1).
struct RadiusSample {
    double R = 0.0;
    double sign = 1.0;
};

RadiusSample radius_transform(const RadialSurface& s, double r);
RadiusSample radius_transform(const RadialSurface& s, const Vec3& d);

/// Normal of c + R(ω)ω from R and its tangent-plane gradient.
Vec3 radial_normal(const Vec3& omega, double radius, const Vec3& grad_radius);

/// Ground-truth normal of the surface at direction d.
Vec3 surface_normal(const RadialSurface& s, const Vec3& d);

/// Low-discrepancy unit directions (Fibonacci lattice).
Vec3 fibonacci_direction(int i, int n);

}  // namespace sphermite
