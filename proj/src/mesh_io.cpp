#include "sphermite/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphermite {

namespace {

std::vector<char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

float read_f32(const char* p) {
    float f;
    std::memcpy(&f, p, 4);
    return f;
}

TriangleSoup parse_binary_stl(const std::vector<char>& data) {
    std::uint32_t count;
    std::memcpy(&count, data.data() + 80, 4);
    if (data.size() < 84 + static_cast<std::size_t>(count) * 50) {
        throw std::runtime_error("binary STL is truncated");
    }
    TriangleSoup out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const char* p = data.data() + 84 + static_cast<std::size_t>(i) * 50 + 12;
        auto v = [&](int k) {
            return Vec3{read_f32(p + 12 * k), read_f32(p + 12 * k + 4), read_f32(p + 12 * k + 8)};
        };
        out.push_back({v(0), v(1), v(2)});
    }
    return out;
}

TriangleSoup parse_ascii_stl(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<Vec3> verts;
    while (in >> tok) {
        if (tok == "vertex") {
            Vec3 v;
            in >> v.x >> v.y >> v.z;
            if (!in) throw std::runtime_error("malformed ASCII STL vertex");
            verts.push_back(v);
        }
    }
    if (verts.size() % 3 != 0) throw std::runtime_error("ASCII STL vertex count is not a multiple of 3");
    TriangleSoup out;
    for (std::size_t i = 0; i < verts.size(); i += 3) out.push_back({verts[i], verts[i + 1], verts[i + 2]});
    return out;
}

}  // namespace

TriangleSoup load_stl(const std::filesystem::path& path) {
    const std::vector<char> data = read_all(path);
    // Binary files may also start with "solid"; trust the size field when it matches.
    if (data.size() >= 84) {
        std::uint32_t count;
        std::memcpy(&count, data.data() + 80, 4);
        if (data.size() == 84 + static_cast<std::size_t>(count) * 50) return parse_binary_stl(data);
    }
    const std::string text(data.begin(), data.end());
    if (text.rfind("solid", 0) == 0) return parse_ascii_stl(text);
    if (data.size() >= 84) return parse_binary_stl(data);
    throw std::runtime_error("unrecognized STL file: " + path.string());
}

TriangleSoup load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path.string());
    std::vector<Vec3> verts;
    TriangleSoup out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x >> v.y >> v.z;
            verts.push_back(v);
        } else if (tag == "f") {
            std::vector<std::size_t> idx;
            std::string item;
            while (ls >> item) {
                const long i = std::stol(item.substr(0, item.find('/')));
                const long resolved = i < 0 ? static_cast<long>(verts.size()) + i : i - 1;
                if (resolved < 0 || static_cast<std::size_t>(resolved) >= verts.size()) {
                    throw std::runtime_error("OBJ face index out of range");
                }
                idx.push_back(static_cast<std::size_t>(resolved));
            }
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
                out.push_back({verts[idx[0]], verts[idx[k]], verts[idx[k + 1]]});
            }
        }
    }
    return out;
}

TriangleSoup load_mesh(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".stl") return load_stl(path);
    if (ext == ".obj") return load_obj(path);
    throw std::runtime_error("unsupported mesh format: " + path.string());
}

void save_stl_binary(const std::filesystem::path& path, const TriangleSoup& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mesh file: " + path.string());
    char header[80] = "sphermite binary stl";
    out.write(header, 80);
    const auto count = static_cast<std::uint32_t>(mesh.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    auto put = [&](const Vec3& v) {
        const float f[3] = {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
        out.write(reinterpret_cast<const char*>(f), 12);
    };
    for (const Triangle& t : mesh) {
        put(normalize(cross(t.b - t.a, t.c - t.a)));
        put(t.a);
        put(t.b);
        put(t.c);
        const std::uint16_t attr = 0;
        out.write(reinterpret_cast<const char*>(&attr), 2);
    }
}

Vec3 mesh_centroid(const TriangleSoup& mesh) {
    // Area-weighted surface centroid.
    Vec3 sum;
    double area = 0.0;
    for (const Triangle& t : mesh) {
        const double a = 0.5 * length(cross(t.b - t.a, t.c - t.a));
        sum += (t.a + t.b + t.c) * (a / 3.0);
        area += a;
    }
    return area > 0.0 ? sum / area : Vec3{};
}

}  // namespace sphermite
