// lerwlab: batch experiments for planar loop-erased random walk.
//
// One subcommand per experiment kind; every flag can also come from a JSON
// manifest (--manifest), with command-line flags taking precedence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lerw/experiment.hpp"
#include "lerw/manifest.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CLI::ValidationError("--manifest", "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

constexpr const char* kCsvHelp = R"(Output files (per run, in --out):
  results.csv   columns: name,value,se,trials,extra
                one record per estimate or per lambda point; se is a number
                or the word "exact" for values computed without sampling
  summary.json  manifest echo, estimates, assertion outcomes, wall time
  plot.svg      for curve experiments (tails, growth, mu-convergence)

Exit status: 0 if every enabled assertion passed, 1 otherwise, 2 on usage
errors.  LERWLAB_WORKERS overrides the default worker count.)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lerwlab: Monte Carlo and exact-oracle experiments for planar "
                 "loop-erased random walk"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);

    struct Flags {
        std::string manifest_path;
        bool validate_only = false;
        lerw::ExperimentManifest m;
        // presence trackers so flags override the manifest file only when given
        CLI::App* cmd = nullptr;
    };

    std::vector<std::unique_ptr<Flags>> all;

    for (std::size_t k = 0; k < 12; ++k) {
        auto kind = lerw::ExperimentKind(k);
        auto fl = std::make_unique<Flags>();
        fl->m.kind = kind;
        CLI::App* sub = app.add_subcommand(lerw::kind_name(kind),
                                           std::string("run the ") +
                                               lerw::kind_name(kind) + " experiment");
        fl->cmd = sub;
        sub->add_option("--manifest", fl->manifest_path, "JSON manifest; flags override");
        sub->add_flag("--validate-only", fl->validate_only,
                      "check preconditions and exit without sampling");
        sub->add_option("--seed", fl->m.seed, "master seed");
        sub->add_option("--trials", fl->m.trials, "trial count");
        sub->add_option("--workers", fl->m.workers, "worker threads (0 = auto)");
        sub->add_option("--out", fl->m.out_dir, "output directory");
        sub->add_option("--n", fl->m.n, "primary radius / size");
        sub->add_option("--m", fl->m.m, "inner radius (es-mn, mk)");
        sub->add_option("--N", fl->m.outer_n, "outer radius (mk)");
        sub->add_option("--l", fl->m.l, "truncation radius (mu-convergence)");
        sub->add_option("--k", fl->m.k_max, "max moment order (moments)");
        sub->add_option("--outer-factor", fl->m.outer_factor,
                        "outer stopping factor (hat-es, growth)");
        sub->add_option("--x-off", fl->m.x_off, "mk: x = (m, x-off)");
        sub->add_option("--K", fl->m.k_set, "mk: none|origin|rm-boundary");
        sub->add_option("--radii", fl->m.radii, "radius list (growth, mu-convergence)");
        sub->add_option("--lambda-grid", fl->m.lambda_grid, "lambda grid (tails)");
        all.push_back(std::move(fl));
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& fl : all) {
        if (!fl->cmd->parsed()) continue;
        lerw::ExperimentManifest m = fl->m;
        if (!fl->manifest_path.empty()) {
            // file first, then re-apply any flags given on the command line
            m = lerw::ExperimentManifest::from_json(read_file(fl->manifest_path));
            m.kind = fl->m.kind;
            for (const CLI::Option* opt : fl->cmd->get_options()) {
                if (opt->count() == 0) continue;
                const std::string& name = opt->get_name();
                if (name == "--seed") m.seed = fl->m.seed;
                else if (name == "--trials") m.trials = fl->m.trials;
                else if (name == "--workers") m.workers = fl->m.workers;
                else if (name == "--out") m.out_dir = fl->m.out_dir;
                else if (name == "--n") m.n = fl->m.n;
                else if (name == "--m") m.m = fl->m.m;
                else if (name == "--N") m.outer_n = fl->m.outer_n;
                else if (name == "--l") m.l = fl->m.l;
                else if (name == "--k") m.k_max = fl->m.k_max;
                else if (name == "--outer-factor") m.outer_factor = fl->m.outer_factor;
                else if (name == "--x-off") m.x_off = fl->m.x_off;
                else if (name == "--K") m.k_set = fl->m.k_set;
                else if (name == "--radii") m.radii = fl->m.radii;
                else if (name == "--lambda-grid") m.lambda_grid = fl->m.lambda_grid;
            }
        }

        auto violations = m.validate();
        if (fl->validate_only) {
            if (violations.empty()) {
                std::puts("manifest ok");
                return 0;
            }
            for (const auto& v : violations)
                std::fprintf(stderr, "violation: %s\n", v.c_str());
            return 1;
        }
        if (!violations.empty()) {
            for (const auto& v : violations)
                std::fprintf(stderr, "usage error: %s\n", v.c_str());
            return 2;
        }
        try {
            return lerw::run_and_write(m);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
    }
    return 2;
}
