#include "sphermite/terrain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace sphermite {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GradientNoise::GradientNoise(std::uint64_t seed) {
    std::array<std::uint8_t, 256> p{};
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    std::uint64_t state = seed;
    for (int i = 255; i > 0; --i) {
        const auto j = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(i + 1));
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
}

namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double t, double a, double b) { return a + t * (b - a); }

double grad(int hash, double x, double y, double z) {
    const int h = hash & 15;
    const double u = h < 8 ? x : y;
    const double v = h < 4 ? y : (h == 12 || h == 14 ? x : z);
    return ((h & 1) != 0 ? -u : u) + ((h & 2) != 0 ? -v : v);
}

// (1 - x²)² on [0,1), zero beyond: C1 at x = 1.
double bump(double x) {
    if (x >= 1.0) return 0.0;
    const double a = 1.0 - x * x;
    return a * a;
}

double chord_of_angle(double angle) { return 2.0 * std::sin(0.5 * angle); }

}  // namespace

double GradientNoise::operator()(const Vec3& p) const {
    const double fx = std::floor(p.x);
    const double fy = std::floor(p.y);
    const double fz = std::floor(p.z);
    const int X = static_cast<int>(fx) & 255;
    const int Y = static_cast<int>(fy) & 255;
    const int Z = static_cast<int>(fz) & 255;
    const double x = p.x - fx;
    const double y = p.y - fy;
    const double z = p.z - fz;
    const double u = fade(x);
    const double v = fade(y);
    const double w = fade(z);
    auto P = [&](int i) { return static_cast<int>(perm_[static_cast<std::size_t>(i)]); };
    const int A = P(X) + Y;
    const int AA = P(A) + Z;
    const int AB = P(A + 1) + Z;
    const int B = P(X + 1) + Y;
    const int BA = P(B) + Z;
    const int BB = P(B + 1) + Z;
    return lerp(w,
                lerp(v, lerp(u, grad(P(AA), x, y, z), grad(P(BA), x - 1, y, z)),
                     lerp(u, grad(P(AB), x, y - 1, z), grad(P(BB), x - 1, y - 1, z))),
                lerp(v, lerp(u, grad(P(AA + 1), x, y, z - 1), grad(P(BA + 1), x - 1, y, z - 1)),
                     lerp(u, grad(P(AB + 1), x, y - 1, z - 1),
                          grad(P(BB + 1), x - 1, y - 1, z - 1))));
}

TerrainField::TerrainField(TerrainParams params) : params_(std::move(params)), noise_(params_.seed) {
    if (params_.octaves < 1) throw std::invalid_argument("terrain octaves must be >= 1");
    if (params_.amplitude < 0.0) throw std::invalid_argument("terrain amplitude must be >= 0");
    if (!(params_.base_radius > 0.0)) throw std::invalid_argument("terrain base radius must be > 0");
    std::uint64_t state = params_.seed ^ 0x5bd1e995ULL;
    auto unit = [&] { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; };
    for (int o = 0; o < params_.octaves; ++o) {
        octave_offsets_.push_back({unit() * 256.0, unit() * 256.0, unit() * 256.0});
    }
    for (auto& c : params_.craters) c.center = normalize(c.center);
    for (auto& b : params_.boulders) b.center = normalize(b.center);
    for (auto& r : params_.ridges) {
        r.axis = normalize(r.axis);
        r.center = normalize(r.center);
    }
    constexpr int kSweep = 20000;
    for (int i = 0; i < kSweep; ++i) {
        const double r = eval(fibonacci_direction(i, kSweep));
        if (!(r > 0.0)) throw std::invalid_argument("terrain radius is not positive everywhere");
    }
}

double TerrainField::octave_term(int octave, const Vec3& d) const {
    const double f = params_.frequency * std::pow(params_.lacunarity, octave);
    return params_.amplitude * noise_(d * f + octave_offsets_[static_cast<std::size_t>(octave)]);
}

double TerrainField::fbm(const Vec3& d) const {
    double sum = 0.0;
    double weight = 1.0;
    for (int o = 0; o < params_.octaves; ++o) {
        sum += weight * octave_term(o, d);
        weight *= params_.gain;
    }
    return sum;
}

double TerrainField::features(const Vec3& d) const {
    double h = 0.0;
    for (const Crater& c : params_.craters) {
        const double x = length(d - c.center) / chord_of_angle(c.radius);
        if (x >= 1.0) continue;
        const double a = 1.0 - x * x;
        h += c.depth * (-a * a + c.rim * 16.0 * x * x * x * x * a * a);
    }
    for (const Boulder& b : params_.boulders) {
        h += b.height * bump(length(d - b.center) / chord_of_angle(b.radius));
    }
    for (const Ridge& r : params_.ridges) {
        const double across = std::abs(dot(d, r.axis)) / std::sin(r.width);
        if (across >= 1.0) continue;
        h += r.height * bump(across) * bump(length(d - r.center) / chord_of_angle(r.half_length));
    }
    return h;
}

double TerrainField::eval(const Vec3& d) const { return params_.base_radius + fbm(d) + features(d); }

FieldPtr fbm_terrain_field(TerrainParams params) {
    return std::make_shared<TerrainField>(std::move(params));
}

namespace {

using nlohmann::json;

Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
json vec_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

TerrainParams terrain_params_from_json(const std::string& text) {
    const json j = json::parse(text);
    TerrainParams p;
    p.base_radius = j.value("base_radius", p.base_radius);
    p.octaves = j.value("octaves", p.octaves);
    p.frequency = j.value("frequency", p.frequency);
    p.lacunarity = j.value("lacunarity", p.lacunarity);
    p.gain = j.value("gain", p.gain);
    p.amplitude = j.value("amplitude", p.amplitude);
    p.seed = j.value("seed", p.seed);
    for (const auto& c : j.value("craters", json::array())) {
        p.craters.push_back({vec_from(c.at("center")), c.value("radius", 0.1), c.value("depth", 0.02),
                             c.value("rim", 0.3)});
    }
    for (const auto& r : j.value("ridges", json::array())) {
        p.ridges.push_back({vec_from(r.at("axis")), vec_from(r.at("center")),
                            r.value("half_length", 0.5), r.value("width", 0.05),
                            r.value("height", 0.02)});
    }
    for (const auto& b : j.value("boulders", json::array())) {
        p.boulders.push_back({vec_from(b.at("center")), b.value("radius", 0.03), b.value("height", 0.01)});
    }
    return p;
}

std::string terrain_params_to_json(const TerrainParams& p) {
    json j;
    j["base_radius"] = p.base_radius;
    j["octaves"] = p.octaves;
    j["frequency"] = p.frequency;
    j["lacunarity"] = p.lacunarity;
    j["gain"] = p.gain;
    j["amplitude"] = p.amplitude;
    j["seed"] = p.seed;
    j["craters"] = json::array();
    for (const auto& c : p.craters) {
        j["craters"].push_back({{"center", vec_to(c.center)}, {"radius", c.radius}, {"depth", c.depth}, {"rim", c.rim}});
    }
    j["ridges"] = json::array();
    for (const auto& r : p.ridges) {
        j["ridges"].push_back({{"axis", vec_to(r.axis)}, {"center", vec_to(r.center)},
                               {"half_length", r.half_length}, {"width", r.width}, {"height", r.height}});
    }
    j["boulders"] = json::array();
    for (const auto& b : p.boulders) {
        j["boulders"].push_back({{"center", vec_to(b.center)}, {"radius", b.radius}, {"height", b.height}});
    }
    return j.dump(2);
}

}  // namespace sphermite
