#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zetacorr/moments.hpp"

namespace zetacorr {

using json = nlohmann::json;

enum class RunKind { sieve, sample, classify, moment, predict, curve, verify };

RunKind parse_kind(const std::string& name);
std::string kind_name(RunKind kind);

// One experiment. `params` holds the kind-specific record exactly as read from
// the config file, with CLI flags merged over it; validate() checks it before any
// computation starts.
struct ExperimentConfig {
    RunKind kind = RunKind::predict;
    json params = json::object();
    std::uint64_t seed = 1;
    std::vector<std::filesystem::path> output_paths;  // report, then CSV / SVG / grid
    std::optional<std::filesystem::path> cache_dir;   // ZETACORR_CACHE_DIR
};

// Reads a JSON config file into params. Malformed JSON is a ConfigError.
json load_config_file(const std::filesystem::path& path);

// Throws ConfigError if a required key is missing or has the wrong type.
void validate(const ExperimentConfig& config);

struct CacheUse {
    std::string path;
    std::uint32_t version = 0;
    std::uint64_t samples = 0;
    bool built = false;  // timing-like: kept out of the payload
};

struct RunReport {
    json config;
    json results = json::object();
    std::vector<std::string> warnings;
    std::vector<CacheUse> caches;
    double wall_seconds = 0.0;

    void warn(const std::string& w);  // each distinct warning recorded once
};

RunReport run(const ExperimentConfig& config);

// Deterministic JSON text of a report (config echo, results, warnings, cache
// versions). Wall time and cache build flags go to the sidecar only.
std::string report_payload(const RunReport& report);
std::string report_sidecar(const RunReport& report);

// Writes the payload to `path` and the sidecar to `path` + ".timing.json".
void write_report(const RunReport& report, const std::filesystem::path& path);

// Alpha values from a config: an array of numbers or formula strings, or
// {"formula": "<expr>"} / {"formula": ["<expr>", ...]}, evaluated at T.
std::vector<double> resolve_alpha(const json& alpha, double T);

// Lemma verification suites, `trials` random instances from `seed`.
// Each returns {"suite", "trials", "seed", "violations", ...}.
json verify_suite(const std::string& suite, std::size_t trials, std::uint64_t seed);

// Curve CSV with columns delta, moment, prediction, ratio, nsw_F, step_halving_delta.
std::string curve_csv(const std::vector<CurveRow>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

// Self-contained SVG: moment and ratio against delta, log-scaled y. Every point
// carries its exact values in data-* attributes.
std::string plot_svg(const std::vector<CurveRow>& rows);
void emit_plot(const std::vector<CurveRow>& rows, const std::filesystem::path& path);

// Small deterministic generator used by the verify suites (splitmix64), so the
// instances do not depend on the standard library's distributions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

}  // namespace zetacorr
