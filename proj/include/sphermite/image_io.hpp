#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sphermite/renderer.hpp"

namespace sphermite {

/// 8-bit encode of a linear value: clamp to [0, 1], gamma 1/2.2, round.
std::uint8_t encode_gamma(float linear);

/// Binary PPM (P6) of the RGB buffer, gamma encoded.
std::vector<std::uint8_t> encode_ppm(const RenderImage& img);
void write_ppm(const std::filesystem::path& path, const RenderImage& img);

/// Float dump: u32 width, u32 height (little-endian), then three float32
/// planes (R, G, B). The same layout is used for the normal buffer (x, y, z).
std::vector<std::uint8_t> encode_float_raw(int width, int height, const std::vector<float>& interleaved3);
void write_float_raw(const std::filesystem::path& path, int width, int height, const std::vector<float>& interleaved3);

/// Reads a float dump back into an interleaved buffer. Throws std::runtime_error
/// on truncated or inconsistent files.
std::vector<float> read_float_raw(const std::filesystem::path& path, int* width, int* height);

/// Images placed left to right on a shared height (shorter ones padded black).
RenderImage side_by_side(const std::vector<RenderImage>& images);

}  // namespace sphermite
