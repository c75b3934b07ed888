#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sphermite/cube_geometry.hpp"
#include "sphermite/field.hpp"
#include "sphermite/sh_basis.hpp"

namespace testutil {

using namespace sphermite;

inline Vec3 random_direction(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const Vec3 v{n(g), n(g), n(g)};
        const double len = length(v);
        if (len > 1e-6) return v / len;
    }
}

inline ShCoefficients random_sh(int degree, std::uint64_t seed, double c0 = 0.0) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(static_cast<std::size_t>((degree + 1) * (degree + 1)));
    for (auto& x : c) x = u(g);
    if (c0 != 0.0) c[0] = c0;
    return ShCoefficients(std::move(c));
}

// Field defined directly on chart coordinates of every face.
class ChartField final : public SphericalField {
public:
    using Fn = std::function<double(Face, double, double)>;
    explicit ChartField(Fn f) : f_(std::move(f)) {}
    double eval(const Vec3& d) const override {
        const FacePoint p = direction_to_face_uv(d);
        return f_(p.face, p.u, p.v);
    }
    double eval_chart(const FacePoint& p) const override { return f_(p.face, p.u, p.v); }

private:
    Fn f_;
};

// Independent real SH oracle: explicit Legendre polynomial sums and factorials.
inline double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

inline double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// P_l^m(x) without the Condon-Shortley phase, via the m-th derivative of the
// explicit Legendre sum.
inline double assoc_legendre(int l, int m, double x) {
    double deriv = 0.0;
    for (int k = 0; 2 * k <= l; ++k) {
        const int p = l - 2 * k;
        if (p < m) continue;
        double c = std::pow(-1.0, k) * binom(l, k) * binom(2 * l - 2 * k, l) / std::pow(2.0, l);
        for (int q = 0; q < m; ++q) c *= (p - q);
        deriv += c * std::pow(x, p - m);
    }
    return std::pow(1.0 - x * x, 0.5 * m) * deriv;
}

inline double sh_oracle_basis(int l, int m, double theta, double phi) {
    const int am = std::abs(m);
    const double k = std::sqrt((2 * l + 1) / (4 * M_PI) * factorial(l - am) / factorial(l + am));
    const double p = assoc_legendre(l, am, std::cos(theta));
    if (m == 0) return k * p;
    if (m > 0) return std::sqrt(2.0) * k * std::cos(m * phi) * p;
    return std::sqrt(2.0) * k * std::sin(am * phi) * p;
}

inline double sh_oracle(const ShCoefficients& c, const Vec3& d) {
    const double theta = std::atan2(std::hypot(d.x, d.y), d.z);
    const double phi = std::atan2(d.y, d.x);
    double sum = 0.0;
    for (int l = 0; l <= c.degree(); ++l) {
        for (int m = -l; m <= l; ++m) sum += c[l * l + l + m] * sh_oracle_basis(l, m, theta, phi);
    }
    return sum;
}

inline double rel_err(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace testutil
