#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sphermite/field.hpp"

namespace sphermite {

/// SplitMix64 step; used for every seeded stream in the library.
std::uint64_t splitmix64(std::uint64_t& state);

/// Improved 3D gradient noise (quintic fade, 12 edge gradients) over a
/// 256-entry permutation shuffled by SplitMix64 from `seed`. Output is
/// roughly in [-1, 1] and C2 in its argument.
class GradientNoise {
public:
    explicit GradientNoise(std::uint64_t seed = 0);
    double operator()(const Vec3& p) const;

private:
    std::array<std::uint8_t, 512> perm_{};
};

/// Bowl-shaped depression with a raised rim. Radii are angular (radians).
struct Crater {
    Vec3 center;
    double radius = 0.1;
    double depth = 0.02;
    double rim = 0.3;  // rim height as a fraction of depth
};

/// Ridge along a great-circle arc: `axis` is the circle normal, `center` a
/// point on the circle; the ridge fades out beyond `half_length` from center.
struct Ridge {
    Vec3 axis{0, 0, 1};
    Vec3 center{1, 0, 0};
    double half_length = 0.5;
    double width = 0.05;
    double height = 0.02;
};

/// Rounded bump.
struct Boulder {
    Vec3 center;
    double radius = 0.03;
    double height = 0.01;
};

struct TerrainParams {
    double base_radius = 1.0;
    int octaves = 5;
    double frequency = 2.0;
    double lacunarity = 2.0;
    double gain = 0.5;
    double amplitude = 0.05;
    std::uint64_t seed = 1;
    std::vector<Crater> craters;
    std::vector<Ridge> ridges;
    std::vector<Boulder> boulders;
};

/// R(ω) = R0 + h(ω): fBm over gradient noise plus analytic features. All
/// feature profiles are C1 so ground-truth normals exist everywhere.
class TerrainField final : public SphericalField {
public:
    /// Throws std::invalid_argument for invalid parameters or when a sweep
    /// finds R <= 0.
    explicit TerrainField(TerrainParams params);

    double eval(const Vec3& d) const override;

    /// amplitude * noise_o(ω) without the gain^o weight.
    double octave_term(int octave, const Vec3& d) const;
    double fbm(const Vec3& d) const;
    double features(const Vec3& d) const;

    const TerrainParams& params() const { return params_; }

private:
    TerrainParams params_;
    GradientNoise noise_;
    std::vector<Vec3> octave_offsets_;
};

FieldPtr fbm_terrain_field(TerrainParams params);

/// Terrain parameters to and from the JSON document format.
TerrainParams terrain_params_from_json(const std::string& text);
std::string terrain_params_to_json(const TerrainParams& p);

}  // namespace sphermite
