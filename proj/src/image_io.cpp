#include "sphermite/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace sphermite {

namespace {

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::uint8_t encode_gamma(float linear) {
    const double c = std::clamp(static_cast<double>(linear), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * std::pow(c, 1.0 / 2.2)));
}

std::vector<std::uint8_t> encode_ppm(const RenderImage& img) {
    const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.rgb.size());
    for (float v : img.rgb) out.push_back(encode_gamma(v));
    return out;
}

void write_ppm(const std::filesystem::path& path, const RenderImage& img) { write_bytes(path, encode_ppm(img)); }

std::vector<std::uint8_t> encode_float_raw(int width, int height, const std::vector<float>& interleaved3) {
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (interleaved3.size() != 3 * n) throw std::invalid_argument("buffer size does not match dimensions");
    std::vector<std::uint8_t> out;
    out.reserve(8 + 12 * n);
    put_u32(out, static_cast<std::uint32_t>(width));
    put_u32(out, static_cast<std::uint32_t>(height));
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) put_u32(out, std::bit_cast<std::uint32_t>(interleaved3[3 * i + c]));
    }
    return out;
}

void write_float_raw(const std::filesystem::path& path, int width, int height, const std::vector<float>& interleaved3) {
    write_bytes(path, encode_float_raw(width, height, interleaved3));
}

std::vector<float> read_float_raw(const std::filesystem::path& path, int* width, int* height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::vector<std::uint8_t> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (b.size() < 8) throw std::runtime_error("truncated float dump");
    const std::uint32_t w = get_u32(b.data());
    const std::uint32_t h = get_u32(b.data() + 4);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (b.size() != 8 + 12 * n) throw std::runtime_error("float dump size mismatch");
    std::vector<float> out(3 * n);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            out[3 * i + c] = std::bit_cast<float>(get_u32(b.data() + 8 + 4 * (c * n + i)));
        }
    }
    *width = static_cast<int>(w);
    *height = static_cast<int>(h);
    return out;
}

RenderImage side_by_side(const std::vector<RenderImage>& images) {
    int w = 0;
    int h = 0;
    for (const auto& im : images) {
        w += im.width;
        h = std::max(h, im.height);
    }
    RenderImage out(w, h);
    int x0 = 0;
    for (const auto& im : images) {
        for (int y = 0; y < im.height; ++y) {
            for (int x = 0; x < im.width; ++x) {
                const std::size_t src = static_cast<std::size_t>(y) * im.width + x;
                const std::size_t dst = static_cast<std::size_t>(y) * w + x0 + x;
                for (int c = 0; c < 3; ++c) {
                    out.rgb[3 * dst + c] = im.rgb[3 * src + c];
                    out.normals[3 * dst + c] = im.normals[3 * src + c];
                }
                out.mask[dst] = im.mask[src];
            }
        }
        x0 += im.width;
    }
    return out;
}

}  // namespace sphermite
