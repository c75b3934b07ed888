#include "sphermite/sh_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace sphermite {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sqrt((2l+1)/(4π) * (l-m)!/(l+m)!)
double normalization_direct(int l, int m) {
    double ratio = 1.0;
    for (int k = l - m + 1; k <= l + m; ++k) ratio /= static_cast<double>(k);
    return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

constexpr int kCachedDegree = 32;

double normalization(int l, int m) {
    static const std::vector<double> table = [] {
        std::vector<double> t(static_cast<std::size_t>(sh_count(kCachedDegree)));
        for (int l2 = 0; l2 <= kCachedDegree; ++l2) {
            for (int m2 = 0; m2 <= l2; ++m2) {
                t[static_cast<std::size_t>(sh_index(l2, m2))] = normalization_direct(l2, m2);
            }
        }
        return t;
    }();
    if (l > kCachedDegree) return normalization_direct(l, m);
    return table[static_cast<std::size_t>(sh_index(l, m))];
}

// Associated Legendre table (no Condon-Shortley phase) for m in 0..l+1.
// `over_sin` selects P (s^m seeds) or P/sinθ (s^(m-1) seeds, m >= 1).
void legendre_table(int degree, double x, double s, bool over_sin, std::vector<double>& out) {
    const int stride = degree + 2;
    out.assign(static_cast<std::size_t>((degree + 1) * stride), 0.0);
    auto at = [&](int l, int m) -> double& { return out[static_cast<std::size_t>(l * stride + m)]; };
    double pmm = over_sin ? 0.0 : 1.0;  // running (2m-1)!! s^m  (or s^(m-1))
    for (int m = 0; m <= degree; ++m) {
        if (m == 0) {
            pmm = over_sin ? 0.0 : 1.0;
        } else if (m == 1) {
            pmm = over_sin ? 1.0 : s;
        } else {
            pmm *= (2.0 * m - 1.0) * s;
        }
        at(m, m) = pmm;
        if (m + 1 <= degree) at(m + 1, m) = (2.0 * m + 1.0) * x * pmm;
        for (int l = m + 2; l <= degree; ++l) {
            at(l, m) = ((2.0 * l - 1.0) * x * at(l - 1, m) - (l + m - 1.0) * at(l - 2, m)) / (l - m);
        }
    }
}

}  // namespace

SphericalAngles to_angles(const Vec3& d) {
    return {std::atan2(std::sqrt(d.x * d.x + d.y * d.y), d.z), std::atan2(d.y, d.x)};
}

Vec3 from_angles(const SphericalAngles& a) {
    const double st = std::sin(a.theta);
    return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

namespace {

// Fills `out` (sized to the degree) reusing its storage.
void fill_basis(int degree, const SphericalAngles& a, ShBasisEval& out, std::vector<double>& p,
                std::vector<double>& q) {
    const double x = std::cos(a.theta);
    const double s = std::sin(a.theta);
    const int stride = degree + 2;
    legendre_table(degree, x, s, false, p);
    legendre_table(degree, x, s, true, q);
    auto P = [&](int l, int m) { return m > l ? 0.0 : p[static_cast<std::size_t>(l * stride + m)]; };
    auto Q = [&](int l, int m) { return q[static_cast<std::size_t>(l * stride + m)]; };

    out.degree = degree;
    const auto n = static_cast<std::size_t>(sh_count(degree));
    out.values.assign(n, 0.0);
    out.dtheta.assign(n, 0.0);
    out.dphi.assign(n, 0.0);
    out.dphi_over_sin.assign(n, 0.0);

    const double sqrt2 = std::sqrt(2.0);
    const double c1 = std::cos(a.phi);
    const double s1 = std::sin(a.phi);
    double cm = 1.0;  // cos(m φ), sin(m φ) by angle addition
    double sm = 0.0;
    for (int m = 0; m <= degree; ++m) {
        if (m > 0) {
            const double cn = cm * c1 - sm * s1;
            sm = sm * c1 + cm * s1;
            cm = cn;
        }
        for (int l = m; l <= degree; ++l) {
            const double k = normalization(l, m);
            const double dp = m == 0 ? -P(l, 1)
                                     : 0.5 * ((l + m) * (l - m + 1.0) * P(l, m - 1) - P(l, m + 1));
            if (m == 0) {
                const auto i = static_cast<std::size_t>(sh_index(l, 0));
                out.values[i] = k * P(l, 0);
                out.dtheta[i] = k * dp;
                continue;
            }
            const auto ip = static_cast<std::size_t>(sh_index(l, m));
            const auto in = static_cast<std::size_t>(sh_index(l, -m));
            const double kk = sqrt2 * k;
            out.values[ip] = kk * P(l, m) * cm;
            out.values[in] = kk * P(l, m) * sm;
            out.dtheta[ip] = kk * dp * cm;
            out.dtheta[in] = kk * dp * sm;
            out.dphi[ip] = -kk * P(l, m) * m * sm;
            out.dphi[in] = kk * P(l, m) * m * cm;
            out.dphi_over_sin[ip] = -kk * Q(l, m) * m * sm;
            out.dphi_over_sin[in] = kk * Q(l, m) * m * cm;
        }
    }
}

struct Workspace {
    ShBasisEval basis;
    std::vector<double> p;
    std::vector<double> q;
};

const ShBasisEval& basis_scratch(int degree, const SphericalAngles& a) {
    thread_local Workspace ws;
    fill_basis(degree, a, ws.basis, ws.p, ws.q);
    return ws.basis;
}

}  // namespace

ShBasisEval eval_basis(int degree, const SphericalAngles& a) {
    if (degree < 0) throw std::invalid_argument("SH degree must be non-negative");
    return basis_scratch(degree, a);
}

ShCoefficients::ShCoefficients(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    const auto n = coeffs_.size();
    int l = 0;
    while (static_cast<std::size_t>(sh_count(l)) < n) ++l;
    if (n == 0 || static_cast<std::size_t>(sh_count(l)) != n) {
        throw std::invalid_argument("SH coefficient count " + std::to_string(n) +
                                    " is not (L+1)^2");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("SH coefficient is not finite");
    }
    degree_ = l;
}

ShCoefficients::ShCoefficients(int degree, std::vector<double> coeffs)
    : ShCoefficients(std::move(coeffs)) {
    if (degree != degree_) {
        throw std::invalid_argument("SH degree " + std::to_string(degree) +
                                    " does not match coefficient count");
    }
}

double sh_eval(const ShCoefficients& c, const Vec3& d) {
    const ShBasisEval& b = basis_scratch(c.degree(), to_angles(d));
    double sum = 0.0;
    for (std::size_t i = 0; i < b.values.size(); ++i) sum += c.coeffs()[i] * b.values[i];
    return sum;
}

Vec3 sh_gradient(const ShCoefficients& c, const Vec3& d, double* value) {
    const SphericalAngles a = to_angles(d);
    const ShBasisEval& b = basis_scratch(c.degree(), a);
    double r = 0.0;
    double rt = 0.0;
    double rp = 0.0;
    for (std::size_t i = 0; i < b.values.size(); ++i) {
        r += c.coeffs()[i] * b.values[i];
        rt += c.coeffs()[i] * b.dtheta[i];
        rp += c.coeffs()[i] * b.dphi_over_sin[i];
    }
    if (value != nullptr) *value = r;
    const double ct = std::cos(a.theta);
    const double st = std::sin(a.theta);
    const double cp = std::cos(a.phi);
    const double sp = std::sin(a.phi);
    const Vec3 e_theta{ct * cp, ct * sp, -st};
    const Vec3 e_phi{-sp, cp, 0.0};
    return e_theta * rt + e_phi * rp;
}

ChartDerivatives sh_chart_derivatives(const ShCoefficients& c, const FacePoint& p) {
    const Vec3 d = face_uv_to_direction(p);
    const TangentFrame f = tangent_frame(p);
    ChartDerivatives out;
    const Vec3 g = sh_gradient(c, d, &out.r);
    out.ru = dot(g, f.e1);
    out.rv = dot(g, f.e2);
    return out;
}

ShCoefficients sh_coefficients_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        const int degree = j.at("degree").get<int>();
        return ShCoefficients(degree, j.at("coeffs").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad SH coefficient JSON: ") + e.what());
    }
}

std::string sh_coefficients_to_json(const ShCoefficients& c) {
    nlohmann::ordered_json j;
    j["degree"] = c.degree();
    j["coeffs"] = c.coeffs();
    return j.dump(2) + "\n";
}

}  // namespace sphermite
