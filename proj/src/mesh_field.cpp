#include "sphermite/mesh_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sphermite {

std::optional<double> intersect_triangle(const Triangle& tri, const Vec3& origin, const Vec3& dir,
                                         double t_min) {
    constexpr double kEps = 1e-14;
    const Vec3 e1 = tri.b - tri.a;
    const Vec3 e2 = tri.c - tri.a;
    const Vec3 p = cross(dir, e2);
    const double det = dot(e1, p);
    if (std::abs(det) < kEps) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 s = origin - tri.a;
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 q = cross(s, e1);
    const double v = dot(dir, q) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = dot(e2, q) * inv;
    if (t <= t_min) return std::nullopt;
    return t;
}

namespace {

Vec3 vmin(const Vec3& a, const Vec3& b) { return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)}; }
Vec3 vmax(const Vec3& a, const Vec3& b) { return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}; }

// Exit parameter of the ray through the box, or -inf when it misses.
double box_exit(const Vec3& lo, const Vec3& hi, const Vec3& o, const Vec3& inv_d) {
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        double a = (lo[k] - o[k]) * inv_d[k];
        double b = (hi[k] - o[k]) * inv_d[k];
        if (std::isnan(a) || std::isnan(b)) {
            // Ray parallel to and on a slab boundary: treat as inside.
            if (o[k] < lo[k] || o[k] > hi[k]) return -std::numeric_limits<double>::infinity();
            continue;
        }
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    return t0 <= t1 ? t1 : -std::numeric_limits<double>::infinity();
}

}  // namespace

MeshRadialField::MeshRadialField(TriangleSoup mesh, Vec3 center)
    : tris_(std::move(mesh)), center_(center) {
    if (tris_.empty()) throw std::invalid_argument("mesh radial field needs a non-empty mesh");
    nodes_.reserve(2 * tris_.size());
    build(0, static_cast<std::uint32_t>(tris_.size()));
}

std::uint32_t MeshRadialField::build(std::uint32_t begin, std::uint32_t end) {
    constexpr std::uint32_t kLeafSize = 4;
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -lo;
    Vec3 clo = lo;
    Vec3 chi = hi;
    for (std::uint32_t i = begin; i < end; ++i) {
        const Triangle& t = tris_[i];
        lo = vmin(lo, vmin(t.a, vmin(t.b, t.c)));
        hi = vmax(hi, vmax(t.a, vmax(t.b, t.c)));
        const Vec3 c = (t.a + t.b + t.c) / 3.0;
        clo = vmin(clo, c);
        chi = vmax(chi, c);
    }
    nodes_[index].lo = lo;
    nodes_[index].hi = hi;
    if (end - begin <= kLeafSize) {
        nodes_[index].first = begin;
        nodes_[index].count = end - begin;
        return index;
    }
    const Vec3 ext = chi - clo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(tris_.begin() + begin, tris_.begin() + mid, tris_.begin() + end,
                     [axis](const Triangle& a, const Triangle& b) {
                         return (a.a[axis] + a.b[axis] + a.c[axis]) < (b.a[axis] + b.b[axis] + b.c[axis]);
                     });
    build(begin, mid);  // left child lands at index + 1
    const std::uint32_t right = build(mid, end);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
}

double MeshRadialField::eval(const Vec3& d) const {
    const Vec3 inv{1.0 / d.x, 1.0 / d.y, 1.0 / d.z};
    double best = -1.0;
    std::array<std::uint32_t, 128> stack{};
    std::size_t top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const std::uint32_t idx = stack[--top];
        const Node& n = nodes_[idx];
        const double exit = box_exit(n.lo, n.hi, center_, inv);
        if (exit < 0.0 || exit <= best) continue;
        if (n.count > 0) {
            for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
                if (auto t = intersect_triangle(tris_[i], center_, d)) best = std::max(best, *t);
            }
            continue;
        }
        stack[top++] = n.first;
        stack[top++] = idx + 1;
    }
    if (best < 0.0) {
        misses_.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return best;
}

FieldPtr mesh_radial_field(TriangleSoup mesh, Vec3 center) {
    return std::make_shared<MeshRadialField>(std::move(mesh), center);
}

namespace {

struct IndexedMesh {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
};

IndexedMesh icosphere_indexed(int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    IndexedMesh m;
    m.verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
               {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : m.verts) v = normalize(v);
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
               {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> cache;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = cache.find(key); it != cache.end()) return it->second;
            m.verts.push_back(normalize(m.verts[static_cast<std::size_t>(a)] + m.verts[static_cast<std::size_t>(b)]));
            const int idx = static_cast<int>(m.verts.size()) - 1;
            cache.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.faces.size() * 4);
        for (const auto& f : m.faces) {
            const int ab = midpoint(f[0], f[1]);
            const int bc = midpoint(f[1], f[2]);
            const int ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.faces = std::move(next);
    }
    return m;
}

TriangleSoup to_soup(const IndexedMesh& m) {
    TriangleSoup out;
    out.reserve(m.faces.size());
    for (const auto& f : m.faces) {
        out.push_back({m.verts[static_cast<std::size_t>(f[0])], m.verts[static_cast<std::size_t>(f[1])],
                       m.verts[static_cast<std::size_t>(f[2])]});
    }
    return out;
}

}  // namespace

TriangleSoup make_icosphere(int subdivisions) { return to_soup(icosphere_indexed(subdivisions)); }

TriangleSoup make_box(double e) {
    const std::array<Vec3, 8> v = {{{-e, -e, -e}, {e, -e, -e}, {e, e, -e}, {-e, e, -e},
                                    {-e, -e, e},  {e, -e, e},  {e, e, e},  {-e, e, e}}};
    const std::array<std::array<int, 3>, 12> f = {{{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                                                   {0, 1, 5}, {0, 5, 4}, {2, 3, 7}, {2, 7, 6},
                                                   {1, 2, 6}, {1, 6, 5}, {0, 4, 7}, {0, 7, 3}}};
    TriangleSoup out;
    for (const auto& t : f) out.push_back({v[static_cast<std::size_t>(t[0])], v[static_cast<std::size_t>(t[1])], v[static_cast<std::size_t>(t[2])]});
    return out;
}

TriangleSoup tessellate_field(const SphericalField& field, int subdivisions) {
    IndexedMesh m = icosphere_indexed(subdivisions);
    for (auto& v : m.verts) v = v * field.eval(v);
    return to_soup(m);
}

}  // namespace sphermite
