#include "lerw/manifest.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "lerw/conditioned.hpp"

namespace lerw {

namespace {

constexpr const char* kKindNames[] = {
    "oracle-check", "es",         "es-mn",          "hat-es",
    "moments",      "tails",      "growth",         "separation",
    "mu-convergence", "mk",       "wilson",         "green-checks",
};

}  // namespace

const char* kind_name(ExperimentKind k) {
    return kKindNames[std::size_t(k)];
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) {
    for (std::size_t i = 0; i < std::size(kKindNames); ++i)
        if (name == kKindNames[i]) return ExperimentKind(i);
    return std::nullopt;
}

std::string ExperimentManifest::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    j["seed"] = seed;
    j["trials"] = trials;
    j["workers"] = workers;
    j["out"] = out_dir;
    j["n"] = n;
    j["m"] = m;
    j["N"] = outer_n;
    j["l"] = l;
    j["k_max"] = k_max;
    j["outer_factor"] = outer_factor;
    j["x_off"] = x_off;
    j["k_set"] = k_set;
    j["radii"] = radii;
    j["lambda_grid"] = lambda_grid;
    j["brackets"] = {
        {"growth_slope_lo", growth_slope_lo},
        {"growth_slope_hi", growth_slope_hi},
        {"hat_es_ratio_lo", hat_es_ratio_lo},
        {"hat_es_ratio_hi", hat_es_ratio_hi},
        {"moment_ratio_root_max", moment_ratio_root_max},
        {"upper_tail_min_r2", upper_tail_min_r2},
        {"lower_tail_max_corr", lower_tail_max_corr},
        {"oracle_tv_bound", oracle_tv_bound},
    };
    return j.dump(2);
}

ExperimentManifest ExperimentManifest::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentManifest m;
    if (j.contains("kind")) {
        auto k = kind_from_name(j["kind"].get<std::string>());
        if (!k) throw std::invalid_argument("manifest: unknown kind '" +
                                            j["kind"].get<std::string>() + "'");
        m.kind = *k;
    }
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("seed", m.seed);
    get("trials", m.trials);
    get("workers", m.workers);
    get("out", m.out_dir);
    get("n", m.n);
    get("m", m.m);
    get("N", m.outer_n);
    get("l", m.l);
    get("k_max", m.k_max);
    get("outer_factor", m.outer_factor);
    get("x_off", m.x_off);
    get("k_set", m.k_set);
    get("radii", m.radii);
    get("lambda_grid", m.lambda_grid);
    if (j.contains("brackets")) {
        const auto& b = j["brackets"];
        auto getb = [&](const char* key, double& field) {
            if (b.contains(key)) field = b[key].get<double>();
        };
        getb("growth_slope_lo", m.growth_slope_lo);
        getb("growth_slope_hi", m.growth_slope_hi);
        getb("hat_es_ratio_lo", m.hat_es_ratio_lo);
        getb("hat_es_ratio_hi", m.hat_es_ratio_hi);
        getb("moment_ratio_root_max", m.moment_ratio_root_max);
        getb("upper_tail_min_r2", m.upper_tail_min_r2);
        getb("lower_tail_max_corr", m.lower_tail_max_corr);
        getb("oracle_tv_bound", m.oracle_tv_bound);
    }
    return m;
}

std::vector<std::string> ExperimentManifest::validate() const {
    std::vector<std::string> v;
    auto need_trials = [&](std::int64_t least = 1) {
        if (trials < least)
            v.push_back("trials must be >= " + std::to_string(least));
    };
    switch (kind) {
        case ExperimentKind::oracle_check:
            if (n < 1 || n > 2) v.push_back("oracle-check: n must be 1 or 2");
            // empirical-vs-exact TV has a sampling noise floor ~ sqrt(S)/sqrt(T);
            // below these counts the bound cannot be met even by a perfect sampler
            if (n == 1 && trials < 400000)
                v.push_back("oracle-check: n=1 needs >= 400000 trials for the 0.005 TV bound");
            if (n == 2 && trials < 30000)
                v.push_back("oracle-check: n=2 needs >= 30000 trials for the 0.02 TV bound");
            need_trials();
            break;
        case ExperimentKind::es:
            if (n < 0) v.push_back("es: n must be >= 0");
            if (n > 0) need_trials();  // Es(0) = 1 without sampling
            break;
        case ExperimentKind::es_mn:
            if (m < 0) v.push_back("es-mn: m must be >= 0");
            if (m > n) v.push_back("es-mn: m <= n required");
            need_trials();
            break;
        case ExperimentKind::hat_es:
            if (n < 1) v.push_back("hat-es: n must be >= 1");
            if (outer_factor < 2) v.push_back("hat-es: outer_factor must be >= 2");
            need_trials();
            break;
        case ExperimentKind::moments:
            if (n < 1) v.push_back("moments: n must be >= 1");
            if (k_max < 1 || k_max > 12) v.push_back("moments: k_max in [1,12]");
            need_trials(2);
            break;
        case ExperimentKind::tails: {
            if (n < 1) v.push_back("tails: n must be >= 1");
            need_trials();
            if (lambda_grid.empty() || lambda_grid.front() < 1.0)
                v.push_back("tails: lambda grid must start at 1");
            for (std::size_t i = 1; i < lambda_grid.size(); ++i)
                if (lambda_grid[i] <= lambda_grid[i - 1]) {
                    v.push_back("tails: lambda grid must be increasing");
                    break;
                }
            break;
        }
        case ExperimentKind::growth:
            if (radii.size() < 3) v.push_back("growth: need at least 3 radii");
            for (auto r : radii)
                if (r < 1) v.push_back("growth: radii must be >= 1");
            need_trials();
            break;
        case ExperimentKind::separation:
            if (n < 8) v.push_back("separation: n must be >= 8");
            need_trials();
            break;
        case ExperimentKind::mu_convergence:
            if (l < 1 || l > 2) v.push_back("mu-convergence: l must be 1 or 2");
            if (radii.size() < 2) v.push_back("mu-convergence: need >= 2 scale multipliers");
            need_trials();
            break;
        case ExperimentKind::mk: {
            MkParams p;
            p.m = m;
            p.n = n;
            p.outer_n = outer_n;
            p.x = {m, x_off};
            if (k_set != "none" && k_set != "origin" && k_set != "rm-boundary")
                v.push_back("mk: k_set must be none|origin|rm-boundary");
            for (const auto& s : p.violations()) v.push_back("mk: " + s);
            need_trials();
            break;
        }
        case ExperimentKind::wilson:
            if (n < 0) v.push_back("wilson: n must be >= 0");
            need_trials();
            break;
        case ExperimentKind::green_checks:
            if (n < 8) v.push_back("green-checks: n must be >= 8");
            break;
    }
    return v;
}

}  // namespace lerw
