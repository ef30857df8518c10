#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lerw/manifest.hpp"

namespace lerw {

struct CsvRow {
    std::string name;
    double value = 0.0;
    std::optional<double> se;  // empty: printed as "exact"
    std::int64_t trials = 0;
    std::string extra;
};

struct Assertion {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    std::string bound;
};

struct ExperimentResult {
    std::vector<CsvRow> rows;
    std::vector<Assertion> assertions;
    double wall_seconds = 0.0;

    bool pass() const {
        for (const auto& a : assertions)
            if (!a.pass) return false;
        return true;
    }
};

// runs the experiment; throws std::invalid_argument on a manifest violation
ExperimentResult run_experiment(const ExperimentManifest& m);

// serialized artifacts, byte-stable for a fixed (manifest, seed)
std::string render_csv(const ExperimentResult& r);
std::string render_summary_json(const ExperimentManifest& m, const ExperimentResult& r);
std::optional<std::string> render_plot_svg(const ExperimentManifest& m,
                                           const ExperimentResult& r);

// writes results.csv, summary.json and plot.svg (curve kinds) into out_dir;
// returns the process exit status: 0 iff all assertions pass
int run_and_write(const ExperimentManifest& m);

}  // namespace lerw
