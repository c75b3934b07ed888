#include "sphermite/baker.hpp"

#include <cmath>
#include <string>

#include "sphermite/parallel.hpp"

namespace sphermite {

namespace {

void check_resolution(int n) {
    if (n < 2) throw std::invalid_argument("invalid resolution");
}

double checked(double v, Face f, int i, int j) {
    if (!std::isfinite(v)) {
        throw BakeError("non-finite field value on face " + std::string(face_name(f)) + " at texel (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return v;
}

// Square grid of doubles with an index offset, so stored index i lives at i + pad.
struct Grid {
    int size = 0;
    int pad = 0;
    std::vector<double> v;
    Grid(int s, int p) : size(s), pad(p), v(static_cast<std::size_t>(s) * static_cast<std::size_t>(s)) {}
    double& operator()(int i, int j) {
        return v[static_cast<std::size_t>(j + pad) * static_cast<std::size_t>(size) + static_cast<std::size_t>(i + pad)];
    }
};

}  // namespace

HermiteCubemap bake(const SphericalField& field, int n, BakeMode mode, const BakeOptions& opt) {
    check_resolution(n);
    if (mode == BakeMode::Analytic && !field.has_chart_derivatives()) {
        throw std::invalid_argument("analytic bake requires a field with chart derivatives");
    }
    HermiteCubemap map(n, opt.gutter, 4, opt.scale, opt.signed_abs);
    const int s = map.stored_size();
    const int m = s + 2;  // one extra ring on each side

    parallel_for(6, [&](std::size_t fi) {
        const Face face = kAllFaces[fi];
        if (mode == BakeMode::CentralDiff) {
            Grid f(m, 1);
            for (int j = -1; j <= s; ++j) {
                for (int i = -1; i <= s; ++i) {
                    f(i, j) = checked(field.eval_chart({face, map.texel_center(i), map.texel_center(j)}), face, i, j);
                }
            }
            for (int j = 0; j < s; ++j) {
                for (int i = 0; i < s; ++i) {
                    HermiteTexel t;
                    t.r = f(i, j);
                    t.ru_h = 0.5 * (f(i + 1, j) - f(i - 1, j));
                    t.rv_h = 0.5 * (f(i, j + 1) - f(i, j - 1));
                    t.ruv_h2 = 0.25 * (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1));
                    map.set_texel(face, i, j, t);
                }
            }
            return;
        }
        // Analytic: r_u needed one row beyond the stored grid in v.
        const double h = map.texel_spacing();
        Grid ru(m, 1);
        Grid rv(m, 1);
        for (int j = -1; j <= s; ++j) {
            for (int i = 0; i < s; ++i) {
                const auto d = *field.chart_derivatives({face, map.texel_center(i), map.texel_center(j)});
                ru(i, j) = checked(d.ru, face, i, j);
                rv(i, j) = checked(d.rv, face, i, j);
            }
        }
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                HermiteTexel t;
                t.r = checked(field.eval_chart({face, map.texel_center(i), map.texel_center(j)}), face, i, j);
                t.ru_h = ru(i, j) * h;
                t.rv_h = rv(i, j) * h;
                t.ruv_h2 = 0.5 * (ru(i, j + 1) - ru(i, j - 1)) * h;
                map.set_texel(face, i, j, t);
            }
        }
    });
    return map;
}

HermiteCubemap bake_value_only(const SphericalField& field, int n, const BakeOptions& opt) {
    check_resolution(n);
    HermiteCubemap map(n, opt.gutter, 1, opt.scale, opt.signed_abs);
    const int s = map.stored_size();
    parallel_for(6, [&](std::size_t fi) {
        const Face face = kAllFaces[fi];
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                map.at(face, i, j) =
                    checked(field.eval_chart({face, map.texel_center(i), map.texel_center(j)}), face, i, j);
            }
        }
    });
    return map;
}

namespace {

// Parent channel value at stored (p, q), linearly extrapolated per axis
// outside the stored grid.
double parent_value(const HermiteCubemap& parent, Face f, int p, int q, int c) {
    const int s = parent.stored_size();
    auto along_u = [&](int row) {
        if (p < 0) {
            const double a = parent.at(f, 0, row, c);
            return a + p * (parent.at(f, 1, row, c) - a);
        }
        if (p >= s) {
            const double a = parent.at(f, s - 1, row, c);
            return a + (p - s + 1) * (a - parent.at(f, s - 2, row, c));
        }
        return parent.at(f, p, row, c);
    };
    if (q < 0) {
        const double a = along_u(0);
        return a + q * (along_u(1) - a);
    }
    if (q >= s) {
        const double a = along_u(s - 1);
        return a + (q - s + 1) * (a - along_u(s - 2));
    }
    return along_u(q);
}

// First difference scaled by the step: central inside, second-order one-sided
// on the outer ring. `get(k)` reads the k-th sample of a line of length s.
template <class Get>
double scaled_derivative(Get get, int k, int s) {
    if (k == 0) return 0.5 * (-3.0 * get(0) + 4.0 * get(1) - get(2));
    if (k == s - 1) return 0.5 * (3.0 * get(s - 1) - 4.0 * get(s - 2) + get(s - 3));
    return 0.5 * (get(k + 1) - get(k - 1));
}

HermiteCubemap downsample(const HermiteCubemap& parent, MipMode mode) {
    const int g = parent.gutter();
    HermiteCubemap child(parent.resolution() / 2, g, parent.channels(), parent.scale(), parent.signed_abs());
    const int s = child.stored_size();
    const int filtered = mode == MipMode::Naive ? parent.channels() : 1;
    for (Face f : kAllFaces) {
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                const int p = 2 * i - g;
                const int q = 2 * j - g;
                for (int c = 0; c < filtered; ++c) {
                    child.at(f, i, j, c) = 0.25 * (parent_value(parent, f, p, q, c) + parent_value(parent, f, p + 1, q, c) +
                                                   parent_value(parent, f, p, q + 1, c) +
                                                   parent_value(parent, f, p + 1, q + 1, c));
                }
            }
        }
        if (mode == MipMode::Naive || child.channels() == 1) continue;
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                child.at(f, i, j, 1) = scaled_derivative([&](int k) { return child.at(f, k, j, 0); }, i, s);
                child.at(f, i, j, 2) = scaled_derivative([&](int k) { return child.at(f, i, k, 0); }, j, s);
            }
        }
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                child.at(f, i, j, 3) = scaled_derivative([&](int k) { return child.at(f, i, k, 1); }, j, s);
            }
        }
    }
    return child;
}

void check_mip_resolution(int n) {
    if (n < 4 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("mip chains need a power-of-two resolution >= 4");
    }
}

}  // namespace

std::vector<HermiteCubemap> build_mip_chain(const HermiteCubemap& map, MipMode mode) {
    check_mip_resolution(map.resolution());
    std::vector<HermiteCubemap> chain{map};
    while (chain.back().resolution() > 4) chain.push_back(downsample(chain.back(), mode));
    return chain;
}

std::vector<HermiteCubemap> rebake_mip_chain(const SphericalField& field, int n, BakeMode mode,
                                             const BakeOptions& opt) {
    check_mip_resolution(n);
    std::vector<HermiteCubemap> chain;
    for (int level = n; level >= 4; level /= 2) chain.push_back(bake(field, level, mode, opt));
    return chain;
}

}  // namespace sphermite
