#pragma once

#include <cstdint>

#include "sphermite/baker.hpp"
#include "sphermite/renderer.hpp"
#include "sphermite/terrain.hpp"

namespace sphermite {

/// Seeded real-SH coefficients up to `degree` with amplitudes falling as 1/l.
/// The l = 0 term is chosen so the minimum of r over a sweep equals 0.35 times
/// the range of the non-constant part, keeping the glyph strictly positive.
ShCoefficients glyph_coefficients(int degree, std::uint64_t seed);

/// Cratered, ridged, boulder-strewn asteroid: 69 craters (6 large, 18 medium,
/// 45 small), 8 ridges, 30 boulders and 5 fBm octaves.
TerrainParams asteroid_params(std::uint64_t seed);

/// Planet terrain: low-frequency continents, a few mountain ridges and craters
/// over 6 fBm octaves.
TerrainParams planet_params(std::uint64_t seed);

struct SceneBuild {
    int resolution = 32;
    BakeMode mode = BakeMode::CentralDiff;
    /// Gutter of the 4-channel map; the value-only map always uses 2.
    int hermite_gutter = 1;
    /// Resolution of the value-only map (0 means `resolution`).
    int value_resolution = 0;
    bool with_values = true;
};

/// Single-object scene with its maps baked from the surface's field.
Scene make_scene(const RadialSurface& surface, const SceneBuild& build);

/// Surface rendered from a map alone: scale and signed_abs from the header,
/// r_max from the stored interior values (times the usual safety factor).
RadialSurface surface_from_map(const HermiteCubemap& map, Vec3 center = {});

/// Camera on +z (tilted slightly) framing the bounding sphere.
Camera framing_camera(const RadialSurface& surface, int width, int height);

}  // namespace sphermite
