// sphermite: bake spherical functions into Hermite cubemaps, render them,
// and run the benchmark suites.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphermite/baker.hpp"
#include "sphermite/bench.hpp"
#include "sphermite/image_io.hpp"
#include "sphermite/mesh_field.hpp"
#include "sphermite/mesh_io.hpp"
#include "sphermite/renderer.hpp"
#include "sphermite/scenes.hpp"
#include "sphermite/terrain.hpp"

namespace fs = std::filesystem;
using namespace sphermite;

namespace {

// JSON config files: nested objects name subcommands, leaves are option values.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return dump(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file: ") + e.what());
        }
        std::vector<CLI::ConfigItem> out;
        flatten(j, {}, out);
        return out;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const nlohmann::json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, v] : j.items()) {
            if (v.is_null()) continue;
            if (v.is_object()) {
                auto p = parents;
                p.push_back(key);
                flatten(v, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (v.is_array()) {
                for (const auto& e : v) item.inputs.push_back(scalar(e));
            } else {
                item.inputs.push_back(scalar(v));
            }
            out.push_back(item);
        }
    }

    // Default strings as typed JSON: numbers and lists parse, empty means unset.
    static nlohmann::ordered_json typed(const std::string& text, bool flag) {
        if (text.empty()) return flag ? nlohmann::ordered_json(false) : nlohmann::ordered_json();
        if (text == "{}") return nlohmann::ordered_json::array();
        if (text == "true" || text == "false") return text == "true";
        auto v = nlohmann::ordered_json::parse(text, nullptr, false);
        if (!v.is_discarded() && (v.is_number() || v.is_array())) return v;
        return text;
    }

    static nlohmann::ordered_json dump(const CLI::App* app, bool default_also) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() && opt->get_name(true).empty()) continue;
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "config" || name == "print-config") continue;
            const bool flag = opt->get_type_size() == 0;
            if (opt->count() > 0) {
                const auto& res = opt->results();
                if (opt->get_expected_max() > 1) {
                    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                    for (const auto& r : res) arr.push_back(typed(r, false));
                    j[name] = arr;
                } else {
                    j[name] = flag ? nlohmann::ordered_json(true) : typed(res.back(), false);
                }
            } else if (default_also) {
                j[name] = typed(opt->get_default_str(), flag);
            }
        }
        for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
            j[sub->get_name()] = dump(sub, default_also);
        }
        return j;
    }
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Vec3 to_vec(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

struct Source {
    std::string sh;
    std::string sh_inline;
    std::string terrain;
    std::string mesh;

    bool empty() const { return sh.empty() && sh_inline.empty() && terrain.empty() && mesh.empty(); }
};

void add_source_options(CLI::App* cmd, Source& s, const std::string& sh_flag) {
    auto* a = cmd->add_option(sh_flag, s.sh, "SH coefficient JSON file");
    auto* b = cmd->add_option("--sh-inline", s.sh_inline, "SH coefficients as a comma-separated list");
    auto* c = cmd->add_option("--terrain", s.terrain, "terrain parameter JSON file");
    auto* d = cmd->add_option("--mesh", s.mesh, "STL or OBJ mesh (radial depth from its centroid)");
    a->excludes(b, c, d);
    b->excludes(c, d);
    c->excludes(d);
}

// Field from a source; `center` receives the surface center (mesh centroid).
FieldPtr load_source(const Source& s, Vec3* center) {
    *center = {};
    if (!s.sh.empty()) return sh_field(sh_coefficients_from_json(read_text(s.sh)));
    if (!s.sh_inline.empty()) {
        std::vector<double> c;
        std::stringstream ss(s.sh_inline);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
        return sh_field(ShCoefficients(std::move(c)));
    }
    if (!s.terrain.empty()) return fbm_terrain_field(terrain_params_from_json(read_text(s.terrain)));
    if (!s.mesh.empty()) {
        TriangleSoup mesh = load_mesh(s.mesh);
        *center = mesh_centroid(mesh);
        return mesh_radial_field(std::move(mesh), *center);
    }
    return nullptr;
}

struct BakeArgs {
    Source src;
    int n = 32;
    std::string mode = "auto";
    int gutter = 1;
    double scale = 1.0;
    bool signed_abs = false;
    std::string output;
};

int cmd_bake(const BakeArgs& a) {
    Vec3 center;
    const FieldPtr field = load_source(a.src, &center);
    if (!field) throw std::invalid_argument("bake needs --sh, --sh-inline, --terrain or --mesh");
    if (a.n < 2) throw std::invalid_argument("invalid resolution");
    BakeMode mode = field->has_chart_derivatives() ? BakeMode::Analytic : BakeMode::CentralDiff;
    if (a.mode == "central") mode = BakeMode::CentralDiff;
    if (a.mode == "analytic" || a.mode == "dense") mode = BakeMode::Analytic;
    const FieldPtr source = a.mode == "dense" ? with_dense_derivatives(field) : field;
    const HermiteCubemap map = bake(*source, a.n, mode, {a.gutter, a.scale, a.signed_abs});
    save_map(a.output, map);

    double lo = map.at(Face::PosX, 0, 0);
    double hi = lo;
    for (Face f : kAllFaces) {
        for (int j = 0; j < map.stored_size(); ++j) {
            for (int i = 0; i < map.stored_size(); ++i) {
                lo = std::min(lo, map.at(f, i, j));
                hi = std::max(hi, map.at(f, i, j));
            }
        }
    }
    const int s = map.stored_size();
    std::printf("wrote %s\n", a.output.c_str());
    std::printf("mode      %s\n", a.mode == "dense" ? "dense" : (mode == BakeMode::Analytic ? "analytic" : "central"));
    std::printf("layout    6 x %d x %d x %d (N=%d, gutter=%d)\n", s, s, map.channels(), a.n, a.gutter);
    std::printf("texels    %d\n", 6 * s * s);
    std::printf("r range   [%.9g, %.9g]\n", lo, hi);
    return 0;
}

struct RenderArgs {
    std::string map;
    std::string values;
    Source truth;
    std::string method = "hermite";
    int width = 512;
    int height = 512;
    double fov = 0.0;
    std::vector<double> eye;
    std::vector<double> target;
    std::vector<double> light{0.5, 0.6, 0.8};
    std::vector<double> albedo{0.8, 0.8, 0.8};
    double scale = 1.0;
    bool signed_abs = false;
    std::string output = "render.ppm";
};

void write_outputs(const fs::path& ppm, const RenderImage& img) {
    write_ppm(ppm, img);
    fs::path base = ppm;
    base.replace_extension();
    write_float_raw(base.string() + ".rgb.f32", img.width, img.height, img.rgb);
    write_float_raw(base.string() + ".normals.f32", img.width, img.height, img.normals);
}

int cmd_render(const RenderArgs& a) {
    SceneObject obj;
    if (!a.map.empty()) obj.hermite = std::make_shared<HermiteCubemap>(load_map(a.map));
    if (!a.values.empty()) obj.values = std::make_shared<HermiteCubemap>(load_map(a.values));
    if (obj.hermite && obj.hermite->channels() != 4) {
        obj.values = obj.values ? obj.values : obj.hermite;
        obj.hermite = nullptr;
    }
    const HermiteCubemap* any = obj.hermite ? obj.hermite.get() : obj.values.get();

    Vec3 center;
    const FieldPtr field = load_source(a.truth, &center);
    if (field) {
        const double scale = any ? any->scale() : a.scale;
        const bool sa = any ? any->signed_abs() : a.signed_abs;
        obj.surface = make_radial_surface(field, center, scale, sa);
    } else if (any) {
        obj.surface = surface_from_map(*any);
    } else {
        throw std::invalid_argument("missing map: give a map file or a ground-truth source");
    }

    Scene scene;
    scene.objects.push_back(obj);
    scene.light.direction = normalize(to_vec(a.light));
    scene.material.albedo = to_vec(a.albedo);
    Camera cam = framing_camera(obj.surface, a.width, a.height);
    if (!a.eye.empty()) cam.eye = to_vec(a.eye);
    if (!a.target.empty()) cam.target = to_vec(a.target);
    if (a.fov > 0.0) cam.fov_y = a.fov;

    std::vector<RenderMethod> methods;
    if (a.method == "all") {
        for (RenderMethod m : kAllRenderMethods) {
            if (m == RenderMethod::GroundTruth && !field) continue;
            if (m == RenderMethod::Hermite && !obj.hermite) continue;
            if (m != RenderMethod::GroundTruth && m != RenderMethod::Hermite && !any) continue;
            const bool bicubic = m == RenderMethod::Bicubic16Fd || m == RenderMethod::Bicubic16Analytic ||
                                 m == RenderMethod::FastBicubicFd;
            if (bicubic && any && method_map(obj, m).gutter() < 2) {
                std::printf("skipping %s: needs a map with gutter >= 2 (--values)\n",
                            std::string(render_method_name(m)).c_str());
                continue;
            }
            methods.push_back(m);
        }
    } else {
        methods.push_back(parse_render_method(a.method));
    }

    std::vector<RenderImage> images;
    const fs::path out(a.output);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    for (RenderMethod m : methods) {
        RenderStats stats;
        images.push_back(render(scene, cam, m, {}, &stats));
        fs::path path = out;
        if (methods.size() > 1) {
            path = out.parent_path() / (out.stem().string() + "_" + std::string(render_method_name(m)) + ".ppm");
        }
        write_outputs(path, images.back());
        std::printf("%-20s %s  hits=%llu  tex_ops/query=%.2f\n", std::string(render_method_name(m)).c_str(),
                    path.string().c_str(), static_cast<unsigned long long>(stats.hits),
                    stats.hits ? static_cast<double>(stats.shading.tex_ops) / static_cast<double>(stats.hits) : 0.0);
    }
    if (methods.size() > 1) {
        const fs::path strip = out.parent_path() / (out.stem().string() + "_strip.ppm");
        write_ppm(strip, side_by_side(images));
        std::printf("strip                %s\n", strip.string().c_str());
    }
    return 0;
}

struct BenchArgs {
    std::string suite;
    std::string out = "bench_out";
    BenchConfig cfg;
};

int cmd_bench(BenchArgs& a) {
    std::vector<std::string> suites;
    if (a.suite == "all") {
        suites.assign(std::begin(kBenchSuites), std::end(kBenchSuites));
    } else {
        suites.push_back(a.suite);
    }
    bool ok = true;
    for (const auto& s : suites) {
        const BenchResult r = run_bench(s, a.cfg);
        write_bench(a.out, s, r);
        std::cout << "== " << s << " ==\n" << r.table;
        for (const auto& f : r.failures) std::cout << "FAIL: " << f << "\n";
        ok = ok && r.failures.empty();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical Hermite map baker, renderer and benchmarks"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file (flags override it)");
    app.option_defaults()->always_capture_default();
    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    BakeArgs bake_args;
    auto* bake_cmd = app.add_subcommand("bake", "bake a field into an SHM1 map");
    add_source_options(bake_cmd, bake_args.src, "--sh");
    bake_cmd->add_option("--n", bake_args.n, "face resolution N");
    bake_cmd->add_option("--mode", bake_args.mode,
                         "derivatives: auto, central (step h), analytic, dense (fine central differences)")
        ->check(CLI::IsMember({"auto", "central", "analytic", "dense"}));
    bake_cmd->add_option("--gutter", bake_args.gutter, "gutter width in texels");
    bake_cmd->add_option("--scale", bake_args.scale, "radial scale s");
    bake_cmd->add_flag("--signed-abs", bake_args.signed_abs, "render R = s|r|");
    bake_cmd->add_option("-o,--output", bake_args.output, "output .shm path");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "ray-cast a map or a ground-truth field");
    render_cmd->add_option("map", render_args.map, "SHM1 map (4-channel, or value-only)");
    render_cmd->add_option("--values", render_args.values, "value-only map for the baselines");
    add_source_options(render_cmd, render_args.truth, "--ground-truth");
    render_cmd->add_option("--method", render_args.method, "render method or 'all'");
    render_cmd->add_option("--width", render_args.width, "image width");
    render_cmd->add_option("--height", render_args.height, "image height");
    render_cmd->add_option("--fov", render_args.fov, "vertical field of view in radians (0 frames the bound)");
    render_cmd->add_option("--eye", render_args.eye, "camera position x y z")->expected(3);
    render_cmd->add_option("--target", render_args.target, "look-at point x y z")->expected(3);
    render_cmd->add_option("--light", render_args.light, "direction towards the light")->expected(3);
    render_cmd->add_option("--albedo", render_args.albedo, "surface albedo rgb")->expected(3);
    render_cmd->add_option("--scale", render_args.scale, "radial scale when no map is given");
    render_cmd->add_flag("--signed-abs", render_args.signed_abs, "R = s|r| when no map is given");
    render_cmd->add_option("-o,--output", render_args.output, "output .ppm path");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    bench_cmd->add_option("suite", bench_args.suite, "psnr-vs-n, cost, mips, asteroid, planet, equal-storage or all");
    bench_cmd->add_option("--seed", bench_args.cfg.seed, "scene seed");
    bench_cmd->add_option("--out", bench_args.out, "output directory");
    bench_cmd->add_option("--image-size", bench_args.cfg.image_size, "rendered image size");
    bench_cmd->add_option("--samples", bench_args.cfg.value_samples, "value PSNR sample count");
    bench_cmd->add_option("--normal-samples", bench_args.cfg.normal_samples, "mip normal-error sample count");
    bench_cmd->add_option("--resolutions", bench_args.cfg.resolutions, "psnr-vs-n resolutions");
    bench_cmd->add_option("--sh-degree", bench_args.cfg.sh_degree, "glyph SH degree");
    bench_cmd->add_option("--scene-n", bench_args.cfg.scene_resolution, "asteroid/planet LUT resolution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (print_config) {
            std::cout << app.config_to_str(true, false);
            return 0;
        }
        if (bake_cmd->parsed()) {
            if (bake_args.output.empty()) throw std::invalid_argument("bake needs -o");
            return cmd_bake(bake_args);
        }
        if (render_cmd->parsed()) return cmd_render(render_args);
        if (bench_cmd->parsed()) {
            if (bench_args.suite.empty()) throw std::invalid_argument("bench needs a suite name");
            return cmd_bench(bench_args);
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
