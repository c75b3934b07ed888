#include "sphermite/hermite_map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace sphermite {

HermiteCubemap::HermiteCubemap(int resolution, int gutter, int channels, double scale, bool signed_abs)
    : n_(resolution), g_(gutter), channels_(channels), scale_(scale), signed_abs_(signed_abs) {
    if (resolution < 1) throw std::invalid_argument("invalid resolution");
    if (gutter < 1) throw std::invalid_argument("invalid gutter");
    if (channels != 1 && channels != 4) throw std::invalid_argument("invalid channel count");
    const auto s = static_cast<std::size_t>(stored_size());
    data_.assign(6 * s * s * static_cast<std::size_t>(channels_), 0.0);
}

HermiteTexel HermiteCubemap::hermite_texel(Face f, int i, int j) const {
    const double* p = data_.data() + texel_offset(f, i, j);
    if (channels_ == 1) return {p[0], 0.0, 0.0, 0.0};
    return {p[0], p[1], p[2], p[3]};
}

void HermiteCubemap::set_texel(Face f, int i, int j, const HermiteTexel& t) {
    double* p = data_.data() + texel_offset(f, i, j);
    p[0] = t.r;
    if (channels_ == 4) {
        p[1] = t.ru_h;
        p[2] = t.rv_h;
        p[3] = t.ruv_h2;
    }
}

HermiteCubemap HermiteCubemap::value_channel() const {
    HermiteCubemap out(n_, g_, 1, scale_, signed_abs_);
    const std::size_t count = out.data_.size();
    for (std::size_t k = 0; k < count; ++k) out.data_[k] = data_[k * static_cast<std::size_t>(channels_)];
    return out;
}

CellQuery locate_cell(const HermiteCubemap& map, const FacePoint& p) {
    constexpr double kSlack = 1e-9;
    if (!(p.u >= -kSlack && p.u <= 1.0 + kSlack && p.v >= -kSlack && p.v <= 1.0 + kSlack)) {
        throw std::out_of_range("chart coordinate outside [0,1]");
    }
    const double u = std::clamp(p.u, 0.0, 1.0);
    const double v = std::clamp(p.v, 0.0, 1.0);
    const int n = map.resolution();
    const int g = map.gutter();
    const double x = u * n + g - 0.5;
    const double y = v * n + g - 0.5;
    CellQuery q;
    q.face = p.face;
    q.i0 = static_cast<int>(std::floor(x));
    q.j0 = static_cast<int>(std::floor(y));
    q.s = x - q.i0;
    q.t = y - q.j0;
    return q;
}

namespace {

constexpr char kMagic[4] = {'S', 'H', 'M', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 * 4 + 4 + 1 + 3;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(k)]) << (8 * k);
    return v;
}

}  // namespace

std::vector<std::uint8_t> serialize(const HermiteCubemap& map) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + map.data().size() * 4);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, kShmVersion);
    put_u32(out, static_cast<std::uint32_t>(map.resolution()));
    put_u32(out, static_cast<std::uint32_t>(map.gutter()));
    put_u32(out, static_cast<std::uint32_t>(map.channels()));
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(map.scale())));
    out.push_back(map.signed_abs() ? 1 : 0);
    out.insert(out.end(), 3, 0);
    for (double v : map.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

HermiteCubemap deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw FormatError("unexpected end of data");
    if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                    [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
        throw FormatError("bad magic");
    }
    const std::uint32_t version = get_u32(bytes, 4);
    if (version != kShmVersion) throw FormatError("unsupported version " + std::to_string(version));
    const std::uint32_t n = get_u32(bytes, 8);
    const std::uint32_t g = get_u32(bytes, 12);
    const std::uint32_t channels = get_u32(bytes, 16);
    if (n == 0 || n > 65536) throw FormatError("invalid resolution");
    if (g == 0 || g > 64) throw FormatError("invalid gutter");
    if (channels != 1 && channels != 4) throw FormatError("invalid channel count");
    const float scale = std::bit_cast<float>(get_u32(bytes, 20));
    const std::uint8_t flag = bytes[24];
    if (flag > 1) throw FormatError("invalid signed_abs flag");

    HermiteCubemap map(static_cast<int>(n), static_cast<int>(g), static_cast<int>(channels), scale, flag == 1);
    const std::size_t count = map.data().size();
    const std::size_t need = kHeaderSize + count * 4;
    if (bytes.size() < need) throw FormatError("unexpected end of data");
    if (bytes.size() > need) throw FormatError("size mismatch: trailing data");
    for (std::size_t k = 0; k < count; ++k) {
        map.data()[k] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * k));
    }
    return map;
}

void save_map(const std::filesystem::path& path, const HermiteCubemap& map) {
    const auto bytes = serialize(map);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write map: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

HermiteCubemap load_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open map: " + path.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return deserialize(bytes);
}

}  // namespace sphermite
