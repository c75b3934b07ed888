#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "sphermite/cube_geometry.hpp"

namespace sphermite {

/// One 4-channel texel: value and chart derivatives pre-scaled by h and h².
struct HermiteTexel {
    double r = 0.0;
    double ru_h = 0.0;
    double rv_h = 0.0;
    double ruv_h2 = 0.0;
};

/// Six padded cubemap faces.
///
/// Each face stores (N + 2g)² texels, rows along v, columns along u, channels
/// interleaved. Stored index i maps to chart coordinate u = (i - g + 0.5) / N,
/// so interior texels are i in [g, g + N). `channels` is 4 for Hermite maps and
/// 1 for value-only maps. Values are kept in double precision in memory; the
/// file format narrows them to float32.
class HermiteCubemap {
public:
    HermiteCubemap() = default;
    /// Throws std::invalid_argument for N < 1, g < 1 or channels not in {1, 4}.
    HermiteCubemap(int resolution, int gutter, int channels, double scale = 1.0,
                   bool signed_abs = false);

    int resolution() const { return n_; }
    int gutter() const { return g_; }
    int channels() const { return channels_; }
    int stored_size() const { return n_ + 2 * g_; }
    double texel_spacing() const { return 1.0 / n_; }
    double scale() const { return scale_; }
    bool signed_abs() const { return signed_abs_; }
    void set_surface_params(double scale, bool signed_abs) {
        scale_ = scale;
        signed_abs_ = signed_abs;
    }

    /// Chart coordinate of stored index i (same formula for v).
    double texel_center(int i) const { return (i - g_ + 0.5) / n_; }

    std::size_t texel_offset(Face f, int i, int j) const {
        const auto s = static_cast<std::size_t>(stored_size());
        return ((static_cast<std::size_t>(face_index(f)) * s + static_cast<std::size_t>(j)) * s +
                static_cast<std::size_t>(i)) *
               static_cast<std::size_t>(channels_);
    }
    double at(Face f, int i, int j, int c = 0) const { return data_[texel_offset(f, i, j) + static_cast<std::size_t>(c)]; }
    double& at(Face f, int i, int j, int c = 0) { return data_[texel_offset(f, i, j) + static_cast<std::size_t>(c)]; }
    std::span<const double> texel(Face f, int i, int j) const {
        return {data_.data() + texel_offset(f, i, j), static_cast<std::size_t>(channels_)};
    }
    HermiteTexel hermite_texel(Face f, int i, int j) const;
    void set_texel(Face f, int i, int j, const HermiteTexel& t);

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Interior scalars per face: N² * channels.
    std::size_t interior_scalars_per_face() const {
        return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(channels_);
    }

    /// Value-only copy (channel 0) with the same N and gutter.
    HermiteCubemap value_channel() const;

    bool operator==(const HermiteCubemap&) const = default;

private:
    int n_ = 0;
    int g_ = 1;
    int channels_ = 4;
    double scale_ = 1.0;
    bool signed_abs_ = false;
    std::vector<double> data_;
};

/// 2×2 stored-texel cell containing a chart point.
struct CellQuery {
    Face face = Face::PosX;
    int i0 = 0;
    int j0 = 0;
    double s = 0.0;
    double t = 0.0;
};

/// x = u N + g - 0.5, i0 = floor(x), s = x - i0 (same along v). Throws
/// std::out_of_range when u or v is outside [0, 1] (with 1e-9 slack for
/// rounding).
CellQuery locate_cell(const HermiteCubemap& map, const FacePoint& p);

/// Malformed SHM1 data.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kShmVersion = 1;

/// SHM1 encoding; see docs/format.md.
std::vector<std::uint8_t> serialize(const HermiteCubemap& map);
HermiteCubemap deserialize(std::span<const std::uint8_t> bytes);

void save_map(const std::filesystem::path& path, const HermiteCubemap& map);
HermiteCubemap load_map(const std::filesystem::path& path);

}  // namespace sphermite
