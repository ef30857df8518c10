#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lerw {

enum class ExperimentKind {
    oracle_check,
    es,
    es_mn,
    hat_es,
    moments,
    tails,
    growth,
    separation,
    mu_convergence,
    mk,
    wilson,
    green_checks,
};

const char* kind_name(ExperimentKind k);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

// Declarative description of a reproducible experiment.  Every estimate is a
// deterministic function of (manifest, seed); workers affect wall time only.
struct ExperimentManifest {
    ExperimentKind kind = ExperimentKind::es;
    std::uint64_t seed = 1;
    std::int64_t trials = 10000;
    int workers = 0;  // 0: use LERWLAB_WORKERS or hardware count
    std::string out_dir;

    std::int32_t n = 16;
    std::int32_t m = 0;
    std::int32_t outer_n = 0;     // the capital-N of the mk experiment
    std::int32_t l = 1;           // mu-convergence truncation radius
    std::int32_t k_max = 6;       // moments
    int outer_factor = 4;         // hat-es / hat-moments truncation factor
    std::int32_t x_off = 0;       // mk: x = (m, x_off)
    std::string k_set = "origin";  // mk: none | origin | rm-boundary
    std::vector<std::int32_t> radii;
    std::vector<double> lambda_grid;

    // bounded-ratio brackets for the "up to constants" assertions, recorded
    // here so summary.json shows exactly what was checked
    double growth_slope_lo = 1.20;
    double growth_slope_hi = 1.30;
    double hat_es_ratio_lo = 0.5;
    double hat_es_ratio_hi = 2.0;
    double moment_ratio_root_max = 5.0;
    double upper_tail_min_r2 = 0.95;
    double lower_tail_max_corr = -0.9;
    double oracle_tv_bound = 0.0;  // 0: pick by radius (B_1: 0.005, else 0.02)

    std::string to_json() const;
    static ExperimentManifest from_json(const std::string& text);

    // precondition violations; empty means runnable
    std::vector<std::string> validate() const;
};

}  // namespace lerw
