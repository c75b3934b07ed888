#pragma once

#include <string>
#include <vector>

#include "sphermite/cube_geometry.hpp"
#include "sphermite/vec3.hpp"

namespace sphermite {

/// Real spherical-harmonic basis conventions:
///  - orthonormal over S², no Condon-Shortley phase;
///  - Y_l^m = K_l^m P_l^m(cos θ) * {√2 cos(mφ) for m>0, 1 for m=0, √2 sin(|m|φ) for m<0};
///  - flat index l*l + l + m, i.e. l = 0..L, then m = -l..l.
///  - θ is the polar angle from +Z, φ = atan2(y, x).
constexpr int sh_index(int l, int m) { return l * l + l + m; }
constexpr int sh_count(int degree) { return (degree + 1) * (degree + 1); }

struct SphericalAngles {
    double theta = 0.0;
    double phi = 0.0;
};

SphericalAngles to_angles(const Vec3& d);
Vec3 from_angles(const SphericalAngles& a);

/// Basis values and derivatives at one direction. `dphi_over_sin` holds
/// (1/sin θ) ∂Y/∂φ evaluated without dividing by sin θ, so it stays finite at
/// the poles.
struct ShBasisEval {
    int degree = 0;
    std::vector<double> values;
    std::vector<double> dtheta;
    std::vector<double> dphi;
    std::vector<double> dphi_over_sin;
};

ShBasisEval eval_basis(int degree, const SphericalAngles& a);

/// Coefficients c_l^m in sh_index order.
class ShCoefficients {
public:
    ShCoefficients() = default;
    /// Throws std::invalid_argument if the size is not a perfect square or an
    /// entry is non-finite.
    explicit ShCoefficients(std::vector<double> coeffs);
    ShCoefficients(int degree, std::vector<double> coeffs);

    int degree() const { return degree_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

private:
    int degree_ = 0;
    std::vector<double> coeffs_{0.0};
};

/// JSON document {"degree": L, "coeffs": [...]} with (L + 1)² entries in
/// sh_index order. Throws std::invalid_argument on malformed input.
ShCoefficients sh_coefficients_from_json(const std::string& text);
std::string sh_coefficients_to_json(const ShCoefficients& c);

double sh_eval(const ShCoefficients& c, const Vec3& d);

/// Value plus chart derivatives of a function on one face chart.
struct ChartDerivatives {
    double r = 0.0;
    double ru = 0.0;
    double rv = 0.0;
};

/// Tangent-plane gradient of the SH expansion at d (analytic).
Vec3 sh_gradient(const ShCoefficients& c, const Vec3& d, double* value = nullptr);

ChartDerivatives sh_chart_derivatives(const ShCoefficients& c, const FacePoint& p);

}  // namespace sphermite
