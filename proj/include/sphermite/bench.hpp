#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sphermite {

struct BenchConfig {
    std::uint64_t seed = 7;
    int image_size = 256;
    std::size_t value_samples = 100000;
    std::vector<int> resolutions{8, 12, 16, 24, 32, 48, 64};
    int sh_degree = 8;
    /// LUT resolution of the asteroid and planet suites.
    int scene_resolution = 48;
    /// Directions used for mip normal errors.
    std::size_t normal_samples = 20000;
};

inline constexpr std::string_view kBenchSuites[] = {"psnr-vs-n", "cost", "mips", "asteroid", "planet",
                                                    "equal-storage"};

struct BenchResult {
    nlohmann::ordered_json json;
    /// Aligned text table.
    std::string table;
    /// CSV with one row per table row.
    std::string csv;
    /// Suite-internal assertions that failed (empty means success).
    std::vector<std::string> failures;
};

/// Runs one suite. Throws std::invalid_argument("unknown suite: ...").
BenchResult run_bench(std::string_view suite, const BenchConfig& cfg);

/// Writes <suite>.json, <suite>.csv and <suite>.txt into `dir`.
void write_bench(const std::filesystem::path& dir, std::string_view suite, const BenchResult& r);

}  // namespace sphermite
