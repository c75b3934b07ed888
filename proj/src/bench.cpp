#include "sphermite/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sphermite/baker.hpp"
#include "sphermite/metrics.hpp"
#include "sphermite/renderer.hpp"
#include "sphermite/scenes.hpp"

namespace sphermite {

namespace {

using nlohmann::ordered_json;

ordered_json db_json(double db) {
    if (db == kPsnrInfinite) return "inf";
    return db;
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string text() const {
        std::vector<std::size_t> w(header.size(), 0);
        auto widen = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
        };
        widen(header);
        for (const auto& r : rows) widen(r);
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c) {
                os << (c == 0 ? "" : "  ");
                if (c == 0) {
                    os << r[c] << std::string(w[c] - r[c].size(), ' ');
                } else {
                    os << std::string(w[c] - r[c].size(), ' ') << r[c];
                }
            }
            os << '\n';
        };
        line(header);
        std::size_t total = 0;
        for (std::size_t c = 0; c < w.size(); ++c) total += w[c] + (c == 0 ? 0 : 2);
        os << std::string(total, '-') << '\n';
        for (const auto& r : rows) line(r);
        return os.str();
    }

    std::string csv() const {
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c) os << (c == 0 ? "" : ",") << r[c];
            os << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return os.str();
    }
};

void finish(BenchResult& r, const Table& t) {
    r.table = t.text();
    r.csv = t.csv();
    r.json["failures"] = r.failures;
    r.json["ok"] = r.failures.empty();
}

RadialSurface glyph_surface(const BenchConfig& cfg) {
    return make_radial_surface(sh_field(glyph_coefficients(cfg.sh_degree, cfg.seed)));
}

Scene truth_scene(const RadialSurface& surface) {
    Scene s;
    s.objects.push_back({surface, nullptr, nullptr});
    return s;
}

BenchResult bench_psnr_vs_n(const BenchConfig& cfg) {
    BenchResult res;
    const RadialSurface surface = glyph_surface(cfg);
    const Camera cam = framing_camera(surface, cfg.image_size, cfg.image_size);
    const RenderImage truth = render(truth_scene(surface), cam, RenderMethod::GroundTruth);

    const std::pair<const char*, Reconstruction> value_methods[] = {{"nearest", Reconstruction::Nearest},
                                                                    {"bilinear", Reconstruction::Bilinear},
                                                                    {"bicubic16", Reconstruction::Bicubic16},
                                                                    {"fast_bicubic", Reconstruction::FastBicubic},
                                                                    {"hermite", Reconstruction::Hermite}};
    const RenderMethod image_methods[] = {RenderMethod::BilinearFd, RenderMethod::Bicubic16Fd, RenderMethod::Hermite};

    Table t{{"N", "value nearest", "value bilinear", "value bicubic16", "value fast_bicubic", "value hermite",
             "image bilinear_fd", "image bicubic16_fd", "image hermite"},
            {}};
    res.json["suite"] = "psnr-vs-n";
    res.json["seed"] = cfg.seed;
    res.json["sh_degree"] = cfg.sh_degree;
    res.json["value_samples"] = cfg.value_samples;
    res.json["image_size"] = cfg.image_size;
    std::map<int, std::map<std::string, double>> value_db;
    std::map<int, std::map<std::string, double>> image_db;
    for (int n : cfg.resolutions) {
        const Scene scene = make_scene(surface, {n, BakeMode::Analytic, 1, 0, true});
        const SceneObject& obj = scene.objects[0];
        ordered_json row;
        row["N"] = n;
        std::vector<std::string> cells{std::to_string(n)};
        for (const auto& [name, rec] : value_methods) {
            const HermiteCubemap& map = rec == Reconstruction::Hermite ? *obj.hermite : *obj.values;
            const PsnrReport p = psnr_values(*surface.field, map, rec, cfg.value_samples, cfg.seed);
            value_db[n][name] = p.psnr_db;
            row["value_psnr_db"][name] = db_json(p.psnr_db);
            cells.push_back(format_db(p.psnr_db));
        }
        for (RenderMethod m : image_methods) {
            const RenderImage img = render(scene, cam, m);
            const PsnrReport p = psnr_images(img, truth);
            const std::string name(render_method_name(m));
            image_db[n][name] = p.psnr_db;
            row["image_psnr_db"][name] = db_json(p.psnr_db);
            cells.push_back(format_db(p.psnr_db));
        }
        res.json["rows"].push_back(row);
        t.rows.push_back(cells);
    }

    int prev = -1;
    for (int n : cfg.resolutions) {
        auto& v = value_db[n];
        if (!(v["hermite"] > v["bicubic16"] && v["bicubic16"] > v["bilinear"])) {
            res.failures.push_back("value PSNR ordering hermite > bicubic16 > bilinear fails at N=" + std::to_string(n));
        }
        if (prev > 0 && !(image_db[n]["hermite"] > image_db[prev]["hermite"])) {
            res.failures.push_back("hermite image PSNR not increasing at N=" + std::to_string(n));
        }
        prev = n;
    }
    if (image_db.count(16) && image_db.count(64)) {
        const double change = std::abs(image_db[64]["bilinear_fd"] - image_db[16]["bilinear_fd"]);
        res.json["bilinear_image_change_16_64_db"] = change;
        if (!(change < 6.0)) {
            res.failures.push_back("bilinear image PSNR changes by " + fixed(change) + " dB between N=16 and N=64");
        }
    }
    finish(res, t);
    return res;
}

struct CostExpectation {
    CostMethod method;
    std::uint64_t tex_ops;
    std::uint64_t scalars;
};

BenchResult bench_cost(const BenchConfig&) {
    BenchResult res;
    const CostExpectation expected[] = {{CostMethod::BilinearHw, 1, 4},     {CostMethod::BilinearFd, 5, 20},
                                        {CostMethod::Bicubic16, 16, 16},    {CostMethod::FastBicubic, 4, 16},
                                        {CostMethod::FastBicubicFd, 8, 32}, {CostMethod::Hermite, 4, 16}};
    const CostMethod extra[] = {CostMethod::Bicubic16Fd, CostMethod::Bicubic16Analytic};
    Table t{{"Method", "Tex ops", "Scalars", "Samples"}, {}};
    res.json["suite"] = "cost";
    auto add = [&](CostMethod m) {
        const FetchCounter c = cost_report(m);
        res.json["rows"].push_back({{"method", std::string(cost_method_name(m))},
                                    {"tex_ops", c.tex_ops},
                                    {"scalars", c.scalars},
                                    {"samples", c.samples}});
        t.rows.push_back({std::string(cost_method_name(m)), std::to_string(c.tex_ops), std::to_string(c.scalars),
                          std::to_string(c.samples)});
        return c;
    };
    for (const auto& e : expected) {
        const FetchCounter c = add(e.method);
        if (c.tex_ops != e.tex_ops || c.scalars != e.scalars) {
            res.failures.push_back(std::string(cost_method_name(e.method)) + " counters differ from the table");
        }
    }
    for (CostMethod m : extra) add(m);
    finish(res, t);
    return res;
}

double mean_normal_error(const RadialSurface& surface, const HermiteCubemap& map, const std::vector<Vec3>& dirs,
                         const std::vector<Vec3>& truth) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dirs.size(); ++k) sum += angle_deg(analytic_normal(surface, map, dirs[k]).normal, truth[k]);
    return sum / static_cast<double>(dirs.size());
}

BenchResult bench_mips(const BenchConfig& cfg) {
    BenchResult res;
    const RadialSurface surface = glyph_surface(cfg);
    const int n = 32;
    const HermiteCubemap base = bake(*surface.field, n, BakeMode::Analytic);
    const auto consistent = build_mip_chain(base, MipMode::Consistent);
    const auto naive = build_mip_chain(base, MipMode::Naive);
    const auto rebaked = rebake_mip_chain(*surface.field, n, BakeMode::Analytic);
    const std::vector<Vec3> dirs = uniform_directions(cfg.normal_samples, cfg.seed);
    std::vector<Vec3> truth;
    truth.reserve(dirs.size());
    for (const Vec3& d : dirs) truth.push_back(surface_normal(surface, d));

    Table t{{"Level", "N", "Consistent", "Naive", "Rebaked", "Naive/Consistent"}, {}};
    res.json["suite"] = "mips";
    res.json["seed"] = cfg.seed;
    res.json["base_resolution"] = n;
    std::vector<double> ce;
    std::vector<double> ne;
    for (std::size_t level = 0; level < consistent.size(); ++level) {
        const double c = mean_normal_error(surface, consistent[level], dirs, truth);
        const double v = mean_normal_error(surface, naive[level], dirs, truth);
        const double r = mean_normal_error(surface, rebaked[level], dirs, truth);
        ce.push_back(c);
        ne.push_back(v);
        const int ln = consistent[level].resolution();
        res.json["rows"].push_back({{"level", level},
                                    {"N", ln},
                                    {"consistent_mean_deg", c},
                                    {"naive_mean_deg", v},
                                    {"rebaked_mean_deg", r}});
        t.rows.push_back({std::to_string(level), std::to_string(ln), fixed(c, 3), fixed(v, 3), fixed(r, 3),
                          fixed(c > 0 ? v / c : 0.0, 2)});
    }
    if (!(consistent[0] == naive[0])) res.failures.push_back("level 0 differs between modes");
    if (ce.size() > 1 && !(ne[1] >= 2.0 * ce[1])) {
        res.failures.push_back("naive level-1 error is below 2x the consistent error");
    }
    finish(res, t);
    return res;
}

BenchResult bench_normals(const BenchConfig& cfg, const char* suite, const TerrainParams& params) {
    BenchResult res;
    const RadialSurface surface = make_radial_surface(with_dense_derivatives(fbm_terrain_field(params)));
    const Scene scene = make_scene(surface, {cfg.scene_resolution, BakeMode::Analytic, 1, 0, true});
    const Camera cam = framing_camera(surface, cfg.image_size, cfg.image_size);
    const RenderImage truth = render(scene, cam, RenderMethod::GroundTruth);
    const RenderMethod methods[] = {RenderMethod::BilinearFd, RenderMethod::Bicubic16Fd,
                                    RenderMethod::Bicubic16Analytic, RenderMethod::Hermite};
    Table t{{"Method", "Samples", "Tex ops", "PSNR", "Mean Err", "95th %ile", "Improv"}, {}};
    res.json["suite"] = suite;
    res.json["seed"] = cfg.seed;
    res.json["N"] = cfg.scene_resolution;
    res.json["image_size"] = cfg.image_size;
    std::map<RenderMethod, double> mean;
    std::map<RenderMethod, std::uint64_t> samples;
    for (RenderMethod m : methods) {
        RenderStats stats;
        const RenderImage img = render(scene, cam, m, {}, &stats);
        const PsnrReport p = psnr_images(img, truth);
        const NormalErrorReport e = normal_error(img, truth);
        const std::uint64_t per_query_samples = stats.hits ? stats.shading.samples / stats.hits : 0;
        const std::uint64_t per_query_ops = stats.hits ? stats.shading.tex_ops / stats.hits : 0;
        mean[m] = e.mean_deg;
        samples[m] = per_query_samples;
        const double improv = 100.0 * (mean[RenderMethod::BilinearFd] - e.mean_deg) / mean[RenderMethod::BilinearFd];
        res.json["rows"].push_back({{"method", std::string(render_method_name(m))},
                                    {"samples", per_query_samples},
                                    {"tex_ops", per_query_ops},
                                    {"psnr_db", db_json(p.psnr_db)},
                                    {"mean_deg", e.mean_deg},
                                    {"p95_deg", e.p95_deg},
                                    {"max_deg", e.max_deg},
                                    {"n_pixels", e.n_pixels},
                                    {"improvement_pct", improv}});
        t.rows.push_back({std::string(render_method_name(m)), std::to_string(per_query_samples),
                          std::to_string(per_query_ops), format_db(p.psnr_db) + " dB", fixed(e.mean_deg),
                          fixed(e.p95_deg), m == RenderMethod::BilinearFd ? "---" : fixed(improv, 1) + "%"});
    }
    if (!(mean[RenderMethod::Hermite] < mean[RenderMethod::BilinearFd])) {
        res.failures.push_back("hermite mean normal error is not below bilinear_fd");
    }
    if (!(mean[RenderMethod::Hermite] < mean[RenderMethod::Bicubic16Fd])) {
        res.failures.push_back("hermite mean normal error is not below bicubic16_fd");
    }
    if (samples[RenderMethod::Hermite] != 4 || samples[RenderMethod::BilinearFd] != 8 ||
        samples[RenderMethod::Bicubic16Fd] != 20) {
        res.failures.push_back("per-query sample counts differ from 4 / 8 / 20");
    }
    finish(res, t);
    return res;
}

BenchResult bench_equal_storage(const BenchConfig& cfg) {
    BenchResult res;
    const RadialSurface surface = glyph_surface(cfg);
    const Camera cam = framing_camera(surface, cfg.image_size, cfg.image_size);
    const RenderImage truth = render(truth_scene(surface), cam, RenderMethod::GroundTruth);
    Table t{{"Hermite N", "Value N", "Scalars/face", "hermite", "bilinear_fd", "bicubic16_fd", "Delta vs bilinear",
             "Tex ops h/bl/bc"},
            {}};
    res.json["suite"] = "equal-storage";
    res.json["seed"] = cfg.seed;
    res.json["image_size"] = cfg.image_size;
    for (int n : {8, 16}) {
        const Scene scene = make_scene(surface, {n, BakeMode::Analytic, 1, 2 * n, true});
        std::map<RenderMethod, double> db;
        std::map<RenderMethod, std::uint64_t> ops;
        for (RenderMethod m : {RenderMethod::Hermite, RenderMethod::BilinearFd, RenderMethod::Bicubic16Fd}) {
            RenderStats stats;
            db[m] = psnr_images(render(scene, cam, m, {}, &stats), truth).psnr_db;
            ops[m] = stats.hits ? stats.shading.tex_ops / stats.hits : 0;
        }
        const double delta = db[RenderMethod::Hermite] - db[RenderMethod::BilinearFd];
        res.json["rows"].push_back({{"hermite_N", n},
                                    {"value_N", 2 * n},
                                    {"scalars_per_face", 4 * n * n},
                                    {"hermite_psnr_db", db_json(db[RenderMethod::Hermite])},
                                    {"bilinear_fd_psnr_db", db_json(db[RenderMethod::BilinearFd])},
                                    {"bicubic16_fd_psnr_db", db_json(db[RenderMethod::Bicubic16Fd])},
                                    {"delta_vs_bilinear_db", delta},
                                    {"hermite_tex_ops", ops[RenderMethod::Hermite]},
                                    {"bilinear_fd_tex_ops", ops[RenderMethod::BilinearFd]},
                                    {"bicubic16_fd_tex_ops", ops[RenderMethod::Bicubic16Fd]}});
        t.rows.push_back({std::to_string(n), std::to_string(2 * n), std::to_string(4 * n * n),
                          format_db(db[RenderMethod::Hermite]), format_db(db[RenderMethod::BilinearFd]),
                          format_db(db[RenderMethod::Bicubic16Fd]), fixed(delta),
                          std::to_string(ops[RenderMethod::Hermite]) + "/" +
                              std::to_string(ops[RenderMethod::BilinearFd]) + "/" +
                              std::to_string(ops[RenderMethod::Bicubic16Fd])});
        if (!(delta >= 3.0)) {
            res.failures.push_back("hermite at N=" + std::to_string(n) + " is less than 3 dB above bilinear at 2N");
        }
    }
    finish(res, t);
    return res;
}

}  // namespace

BenchResult run_bench(std::string_view suite, const BenchConfig& cfg) {
    if (suite == "psnr-vs-n") return bench_psnr_vs_n(cfg);
    if (suite == "cost") return bench_cost(cfg);
    if (suite == "mips") return bench_mips(cfg);
    if (suite == "asteroid") return bench_normals(cfg, "asteroid", asteroid_params(cfg.seed));
    if (suite == "planet") return bench_normals(cfg, "planet", planet_params(cfg.seed));
    if (suite == "equal-storage") return bench_equal_storage(cfg);
    throw std::invalid_argument("unknown suite: " + std::string(suite));
}

void write_bench(const std::filesystem::path& dir, std::string_view suite, const BenchResult& r) {
    std::filesystem::create_directories(dir);
    const std::string base(suite);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    put(base + ".json", r.json.dump(2) + "\n");
    put(base + ".csv", r.csv);
    put(base + ".txt", r.table);
}

}  // namespace sphermite
