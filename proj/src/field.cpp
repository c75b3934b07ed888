#include "sphermite/field.hpp"

#include <cmath>
#include <stdexcept>

namespace sphermite {

ChartDerivatives dense_chart_derivatives(const SphericalField& f, const FacePoint& p) {
    const double h = kDenseFdStep;
    auto at = [&](double du, double dv) { return f.eval_chart({p.face, p.u + du, p.v + dv}); };
    return {f.eval_chart(p), (at(h, 0) - at(-h, 0)) / (2.0 * h), (at(0, h) - at(0, -h)) / (2.0 * h)};
}

namespace {

class DenseDerivativeField final : public SphericalField {
public:
    explicit DenseDerivativeField(FieldPtr f) : f_(std::move(f)) {}
    double eval(const Vec3& d) const override { return f_->eval(d); }
    double eval_chart(const FacePoint& p) const override { return f_->eval_chart(p); }
    std::optional<ChartDerivatives> chart_derivatives(const FacePoint& p) const override {
        return dense_chart_derivatives(*f_, p);
    }
    bool has_chart_derivatives() const override { return true; }
    Vec3 gradient(const Vec3& d, double* value) const override { return f_->gradient(d, value); }

private:
    FieldPtr f_;
};

}  // namespace

FieldPtr with_dense_derivatives(FieldPtr field) { return std::make_shared<DenseDerivativeField>(std::move(field)); }

Vec3 SphericalField::gradient(const Vec3& d, double* value) const {
    const FacePoint p = direction_to_face_uv(d);
    const ChartDerivatives c = dense_chart_derivatives(*this, p);
    if (value != nullptr) *value = eval(d);
    return spherical_gradient(tangent_frame(p), c.ru, c.rv).vec;
}

FieldPtr sh_field(ShCoefficients c) { return std::make_shared<ShField>(std::move(c)); }

Vec3 fibonacci_direction(int i, int n) {
    const double golden = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    return {rho * std::cos(phi), rho * std::sin(phi), z};
}

RadialSurface make_radial_surface(FieldPtr field, Vec3 center, double scale, bool signed_abs,
                                  int sweep) {
    if (!field) throw std::invalid_argument("radial surface needs a field");
    if (!(scale > 0.0)) throw std::invalid_argument("radial surface scale must be positive");
    double rmax = 0.0;
    for (int i = 0; i < sweep; ++i) {
        const double r = field->eval(fibonacci_direction(i, sweep));
        if (!std::isfinite(r)) throw std::invalid_argument("field is not finite on the sweep");
        if (!signed_abs && r < 0.0) {
            throw std::invalid_argument("field is negative on the sweep; enable signed_abs");
        }
        rmax = std::max(rmax, std::abs(r));
    }
    RadialSurface s;
    s.center = center;
    s.scale = scale;
    s.signed_abs = signed_abs;
    s.field = std::move(field);
    s.r_max = rmax * kMaxSafetyFactor;
    return s;
}

RadiusSample radius_transform(const RadialSurface& s, double r) {
    const double sign = r < 0.0 ? -1.0 : 1.0;
    if (s.signed_abs) return {s.scale * std::abs(r), sign};
    return {s.scale * r, sign};
}

RadiusSample radius_transform(const RadialSurface& s, const Vec3& d) {
    return radius_transform(s, s.field->eval(d));
}

Vec3 radial_normal(const Vec3& omega, double radius, const Vec3& grad_radius) {
    return normalize(omega * radius - grad_radius);
}

Vec3 surface_normal(const RadialSurface& s, const Vec3& d) {
    double r = 0.0;
    const Vec3 g = s.field->gradient(d, &r);
    const RadiusSample rs = radius_transform(s, r);
    // Without signed_abs R = s·r, so the sign factor only applies with |r|.
    const double k = s.signed_abs ? s.scale * rs.sign : s.scale;
    return radial_normal(d, rs.R, g * k);
}

}  // namespace sphermite
