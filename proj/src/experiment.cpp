#include "lerw/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lerw/conditioned.hpp"
#include "lerw/estimators.hpp"
#include "lerw/oracle.hpp"
#include "lerw/parallel.hpp"
#include "lerw/potential.hpp"
#include "lerw/svg.hpp"
#include "lerw/wilson.hpp"

namespace lerw {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvRow row_from(const EstimatorSummary& s) {
    CsvRow r;
    r.name = s.name;
    r.value = s.mean;
    if (!s.exact) r.se = s.se;
    r.trials = s.trials;
    return r;
}

void assert_that(ExperimentResult& res, std::string name, bool pass, double observed,
                 std::string bound) {
    res.assertions.push_back({std::move(name), pass, observed, std::move(bound)});
}

int pick_workers(const ExperimentManifest& m) {
    return m.workers > 0 ? m.workers : default_worker_count();
}

// empirical LERW exit-path pmf on B_n as a PathDistribution
PathDistribution sample_lerw_pmf(std::int32_t n, std::int64_t trials,
                                 std::uint64_t seed, int workers) {
    auto paths = run_trials<Path, LoopEraser>(
        trials, workers,
        [&] { return LoopEraser(Rect{-(n + 2), -(n + 2), n + 2, n + 2}); },
        [&](std::int64_t i, LoopEraser& eraser) {
            RngStream rng(seed, std::uint64_t(i));
            lerw_to_ball_exit(n, rng, eraser);
            return eraser.path();
        });
    PathDistribution pmf;
    for (const auto& p : paths) pmf.add(p, 1.0 / double(trials));
    return pmf;
}

void run_oracle_check(const ExperimentManifest& m, ExperimentResult& res) {
    const int workers = pick_workers(m);
    Domain d = Domain::ball({0, 0}, m.n);
    PathDistribution dist = lerw_exact_laplacian(d, {0, 0});
    GreenProductOracle gp(d);

    double cross = 0.0;
    for (const auto& [p, q] : dist.entries())
        cross = std::max(cross, std::abs(gp.prob(p) - q));
    double mass = dist.total_mass();

    PathDistribution mc = sample_lerw_pmf(m.n, m.trials, m.seed, workers);
    double tv = PathDistribution::tv_distance(dist, mc);

    res.rows.push_back({"oracle_support", double(dist.support_size()), {}, 0, ""});
    res.rows.push_back({"oracle_mass", mass, {}, 0, ""});
    res.rows.push_back({"cross_oracle_residual", cross, {}, 0, ""});
    res.rows.push_back({"mc_tv", tv, std::nullopt, m.trials, ""});

    double tv_bound = m.oracle_tv_bound > 0 ? m.oracle_tv_bound : (m.n == 1 ? 0.005 : 0.02);
    assert_that(res, "cross_oracle_residual", cross <= 1e-10, cross, "<= 1e-10");
    assert_that(res, "oracle_mass", std::abs(mass - 1.0) <= 1e-12, mass, "|mass-1| <= 1e-12");
    assert_that(res, "mc_tv", tv <= tv_bound, tv, "<= " + fmt(tv_bound));
}

void run_es(const ExperimentManifest& m, ExperimentResult& res) {
    res.rows.push_back(row_from(estimate_es(m.n, m.trials, m.seed, pick_workers(m))));
}

void run_es_mn(const ExperimentManifest& m, ExperimentResult& res) {
    res.rows.push_back(
        row_from(estimate_es_mn(m.m, m.n, m.trials, m.seed, pick_workers(m))));
}

void run_hat_es(const ExperimentManifest& m, ExperimentResult& res) {
    const int workers = pick_workers(m);
    HatEsResult hat = estimate_hat_es(m.n, m.trials, m.seed, m.outer_factor, workers);
    EstimatorSummary es = estimate_es(m.n, m.trials, m.seed + 1, workers);
    res.rows.push_back(row_from(hat.hat_es));
    res.rows.push_back(row_from(hat.hat_es_wide));
    res.rows.push_back(row_from(hat.paired_diff));
    res.rows.push_back(row_from(es));

    double ratio = hat.hat_es.mean / es.mean;
    res.rows.push_back({"hat_es_over_es", ratio, std::nullopt, m.trials, ""});
    assert_that(res, "hat_es_ratio",
                ratio >= m.hat_es_ratio_lo && ratio <= m.hat_es_ratio_hi, ratio,
                "[" + fmt(m.hat_es_ratio_lo) + ", " + fmt(m.hat_es_ratio_hi) + "]");
    // enlarging the outer factor moves the estimate by < 3 SE + 0.02
    double drift = std::abs(hat.paired_diff.mean);
    double tol = 3.0 * hat.paired_diff.se + 0.02;
    assert_that(res, "outer_factor_stability", drift <= tol, drift, "<= " + fmt(tol));
}

void run_moments(const ExperimentManifest& m, ExperimentResult& res) {
    auto samples = sample_mn_ball(m.n, m.trials, m.seed, pick_workers(m));
    std::vector<double> vals(samples.begin(), samples.end());
    res.rows.push_back(row_from(summarize("mean_M_" + std::to_string(m.n), vals, m.seed)));

    auto ratios = moment_ratios(vals, m.k_max, m.seed);
    double worst_root = 0.0;
    for (const auto& r : ratios) {
        res.rows.push_back(row_from(r));
        int k = int(&r - ratios.data()) + 1;
        worst_root = std::max(worst_root, std::pow(r.mean, 1.0 / double(k)));
    }
    assert_that(res, "moment_ratio_root", worst_root <= m.moment_ratio_root_max,
                worst_root, "<= " + fmt(m.moment_ratio_root_max));
}

void run_tails(const ExperimentManifest& m, ExperimentResult& res) {
    auto samples = sample_mn_ball(m.n, m.trials, m.seed, pick_workers(m));
    std::vector<double> grid = m.lambda_grid;
    if (grid.empty())
        grid = {1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0};
    TailCurve tc = tail_curves_from_samples(samples, grid, m.seed);

    res.rows.push_back({"mean_M", tc.mean, tc.mean_se, tc.trials, ""});
    std::int64_t min_sample = samples.empty() ? 0 : *std::min_element(samples.begin(), samples.end());
    res.rows.push_back({"min_M", double(min_sample), {}, tc.trials, ""});

    std::vector<double> up_x, up_y, lo_x, lo_y;
    for (const auto& p : tc.upper) {
        res.rows.push_back({"upper_surv@" + fmt(p.lambda), p.survival, p.se, tc.trials,
                            p.low_confidence ? "low_confidence=1" : ""});
        if (p.lambda <= 2.5 + 1e-9 && p.count > 0) {
            up_x.push_back(p.lambda);
            up_y.push_back(std::log(p.survival));
        }
    }
    for (const auto& p : tc.lower) {
        res.rows.push_back({"lower_surv@" + fmt(p.lambda), p.survival, p.se, tc.trials,
                            p.low_confidence ? "low_confidence=1" : ""});
        if (p.lambda >= 1.5 - 1e-9 && p.lambda <= 4.0 + 1e-9 && p.count > 0) {
            lo_x.push_back(std::pow(p.lambda, 0.8));
            lo_y.push_back(std::log(p.survival));
        }
    }

    if (up_x.size() >= 3) {
        LinearFit f = linear_fit(up_x, up_y);
        res.rows.push_back({"upper_fit_slope", f.slope, {}, tc.trials, ""});
        res.rows.push_back({"upper_fit_r2", f.r2, {}, tc.trials, ""});
        assert_that(res, "upper_tail_linear",
                    f.r2 >= m.upper_tail_min_r2 && f.slope < 0.0, f.r2,
                    "r2 >= " + fmt(m.upper_tail_min_r2) + ", slope < 0");
    } else {
        assert_that(res, "upper_tail_linear", false, double(up_x.size()),
                    ">= 3 usable grid points");
    }
    if (lo_x.size() >= 3) {
        LinearFit f = linear_fit(lo_x, lo_y);
        res.rows.push_back({"lower_fit_corr", f.corr, {}, tc.trials, ""});
        assert_that(res, "lower_tail_stretched", f.corr <= m.lower_tail_max_corr, f.corr,
                    "corr <= " + fmt(m.lower_tail_max_corr));
    } else {
        assert_that(res, "lower_tail_stretched", false, double(lo_x.size()),
                    ">= 3 usable grid points");
    }
    assert_that(res, "hard_floor_M_ge_n", min_sample >= m.n, double(min_sample),
                ">= " + std::to_string(m.n));
}

void run_growth(const ExperimentManifest& m, ExperimentResult& res) {
    const int workers = pick_workers(m);
    std::vector<std::int32_t> radii = m.radii;
    if (radii.empty()) radii = {64, 128, 256, 512};
    GrowthFit fit = growth_exponent_fit(radii, m.trials, m.seed, workers);

    double ratio_lo = 0.0, ratio_hi = 0.0, hat_lo = 0.0, hat_hi = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        res.rows.push_back(row_from(fit.means[i]));
        EstimatorSummary es =
            estimate_es(radii[i], m.trials, m.seed + 0x5e5e * (i + 1), workers);
        res.rows.push_back(row_from(es));
        double comp = fit.means[i].mean / (double(radii[i]) * radii[i] * es.mean);
        res.rows.push_back({"mean_over_n2Es_" + std::to_string(radii[i]), comp,
                            std::nullopt, m.trials, ""});
        ratio_lo = i == 0 ? comp : std::min(ratio_lo, comp);
        ratio_hi = i == 0 ? comp : std::max(ratio_hi, comp);

        auto hat = sample_mn_hat(radii[i], m.trials, m.seed + 0x7a7a * (i + 1),
                                 m.outer_factor, workers);
        std::vector<double> hv(hat.begin(), hat.end());
        EstimatorSummary hs =
            summarize("mean_hatM_" + std::to_string(radii[i]), hv, m.seed);
        res.rows.push_back(row_from(hs));
        double hr = hs.mean / fit.means[i].mean;
        res.rows.push_back({"hatM_over_M_" + std::to_string(radii[i]), hr, std::nullopt,
                            m.trials, ""});
        hat_lo = i == 0 ? hr : std::min(hat_lo, hr);
        hat_hi = i == 0 ? hr : std::max(hat_hi, hr);
    }
    res.rows.push_back({"growth_slope", fit.slope.slope, {}, m.trials,
                        "ci=[" + fmt(fit.slope.lo) + "," + fmt(fit.slope.hi) + "]"});

    assert_that(res, "growth_slope",
                fit.slope.slope >= m.growth_slope_lo && fit.slope.slope <= m.growth_slope_hi,
                fit.slope.slope,
                "[" + fmt(m.growth_slope_lo) + ", " + fmt(m.growth_slope_hi) + "]");
    assert_that(res, "mean_comparability", ratio_hi <= 2.0 * ratio_lo,
                ratio_hi / ratio_lo, "max/min <= 2");
    assert_that(res, "hat_mean_comparability", hat_lo >= 0.5 && hat_hi <= 2.0,
                hat_hi, "each ratio in [0.5, 2]");
}

void run_separation(const ExperimentManifest& m, ExperimentResult& res) {
    SeparationResult r = separation_probe(m.n, m.trials, m.seed, pick_workers(m));
    res.rows.push_back({"separation_successes", double(r.successes), {}, r.trials, ""});
    if (r.successes > 0) {
        res.rows.push_back(row_from(r.conditional));
        res.rows.push_back(row_from(r.conditional_half));
    }
    assert_that(res, "enough_successes", r.enough, double(r.successes), ">= 100");
    if (r.successes > 0) {
        assert_that(res, "separation_positive", r.conditional.mean > 0.0,
                    r.conditional.mean, "> 0");
        assert_that(res, "threshold_halving_monotone",
                    r.conditional_half.mean >= r.conditional.mean, r.conditional_half.mean,
                    ">= full-threshold estimate");
    }
}

void run_mu_convergence(const ExperimentManifest& m, ExperimentResult& res) {
    std::vector<std::int32_t> mult = m.radii;
    if (mult.empty()) mult = {4, 8, 16};
    MuConvergenceResult r =
        mu_convergence_probe(m.l, mult, m.trials, m.seed, pick_workers(m));
    for (std::size_t i = 0; i < r.tv_consecutive.size(); ++i)
        res.rows.push_back({"tv_" + std::to_string(r.outer_radii[i]) + "_to_" +
                                std::to_string(r.outer_radii[i + 1]),
                            r.tv_consecutive[i], std::nullopt, m.trials, ""});
    if (m.l == 1) {
        res.rows.push_back({"max_symmetry_dev_in_se", r.max_symmetry_deviation_in_se,
                            {}, m.trials, ""});
        // within-orbit uniformity is exact; 4 SE covers the max over outcomes
        assert_that(res, "orbit_symmetry", r.max_symmetry_deviation_in_se <= 4.0,
                    r.max_symmetry_deviation_in_se, "<= 4 SE");
    }

    double final_tv = r.tv_consecutive.back();
    assert_that(res, "final_tv", final_tv < 0.05, final_tv, "< 0.05");
    // TV noise floor ~ sqrt(support / trials); allow it when asserting decrease
    double support = double(r.pmfs.back().size());
    double slack = 3.0 * std::sqrt(support / (4.0 * double(m.trials)));
    bool nonincreasing = true;
    for (std::size_t i = 1; i < r.tv_consecutive.size(); ++i)
        if (r.tv_consecutive[i] > r.tv_consecutive[i - 1] + slack) nonincreasing = false;
    assert_that(res, "tv_nonincreasing", nonincreasing, final_tv,
                "within noise slack " + fmt(slack));
}

std::vector<Point> mk_k_points(const ExperimentManifest& m) {
    if (m.k_set == "none") return {};
    if (m.k_set == "origin") return {Point{0, 0}};
    // rm-boundary: inner boundary of the square R_m, minus the right side
    // where the start x lives (x in K would null the conditioning)
    std::vector<Point> pts;
    for (std::int32_t y = -m.m; y <= m.m; ++y)
        for (std::int32_t x = -m.m; x <= m.m; ++x)
            if ((std::abs(x) == m.m || std::abs(y) == m.m) && x < m.m)
                pts.push_back({x, y});
    return pts;
}

void run_mk(const ExperimentManifest& m, ExperimentResult& res) {
    MkParams p;
    p.m = m.m;
    p.n = m.n;
    p.outer_n = m.outer_n;
    p.x = {m.m, m.x_off};
    p.k = mk_k_points(m);

    auto [first, second] = estimate_mk_moments(p, m.trials, m.seed, pick_workers(m));
    res.rows.push_back(row_from(first));
    res.rows.push_back(row_from(second));

    double ratio = second.mean / (first.mean * first.mean);
    res.rows.push_back({"second_over_first_sq", ratio, std::nullopt, m.trials, ""});
    double logs = std::log(double(m.outer_n) / double(m.n));
    double bound = 10.0 * logs * logs;
    assert_that(res, "second_moment_ratio", ratio <= bound, ratio, "<= " + fmt(bound));
}

void run_wilson(const ExperimentManifest& m, ExperimentResult& res) {
    const int workers = pick_workers(m);
    Domain d = Domain::ball({0, 0}, m.n);
    const bool check_each = d.size() <= 100;

    auto branches = run_trials<Path, int>(
        m.trials, workers, [] { return 0; },
        [&](std::int64_t i, int&) {
            RngStream rng(m.seed, std::uint64_t(i));
            WiredTree t = wilson_ust(d, rng);
            if (check_each && !t.is_spanning_and_acyclic())
                throw std::logic_error("wilson: sampled tree not spanning/acyclic");
            return t.branch({0, 0});
        });

    std::vector<double> lengths;
    lengths.reserve(branches.size());
    for (const auto& b : branches) lengths.push_back(double(b.size()));  // edges incl. root
    res.rows.push_back(row_from(summarize("branch_edges_" + std::to_string(m.n),
                                          lengths, m.seed)));

    if (m.n <= 2) {
        // Pemantle: the branch matches the LERW law with the boundary contracted
        PathDistribution oracle = lerw_exact_laplacian(d, {0, 0});
        PathDistribution contracted;
        for (const auto& [p, q] : oracle.entries())
            contracted.add(Path(p.begin(), p.end() - 1), q);
        PathDistribution emp;
        for (const auto& b : branches) emp.add(b, 1.0 / double(m.trials));
        double tv = PathDistribution::tv_distance(contracted, emp);
        res.rows.push_back({"branch_tv", tv, std::nullopt, m.trials, ""});
        assert_that(res, "branch_tv", tv < 0.02, tv, "< 0.02");
    }
}

void run_green_checks(const ExperimentManifest& m, ExperimentResult& res) {
    // symmetry / positivity / diagonal on a mid-sized ball
    {
        Domain d = Domain::ball({0, 0}, 6);
        GreenOperator g(d);
        double sym = 0.0, neg = 0.0, diag_min = 1e300;
        const auto& sites = d.sites();
        for (std::size_t i = 0; i < sites.size(); i += 7) {
            const auto& ci = g.column(sites[i]);
            for (std::size_t j = 0; j < sites.size(); j += 5)
                sym = std::max(sym, std::abs(ci[j] - g.green(sites[i], sites[j])));
            for (double v : ci) neg = std::min(neg, v);
            diag_min = std::min(diag_min, g.green(sites[i], sites[i]));
        }
        res.rows.push_back({"green_min_entry", neg, {}, 0, ""});
        res.rows.push_back({"green_min_diag", diag_min, {}, 0, ""});
        double ident = g.max_identity_residual(8);
        res.rows.push_back({"green_identity_residual", ident, {}, 0, ""});
        assert_that(res, "green_positivity", neg >= -1e-12, neg, ">= -1e-12");
        assert_that(res, "green_diag_ge_1", diag_min >= 1.0 - 1e-12, diag_min, ">= 1");
        assert_that(res, "green_identity", ident <= 1e-10, ident, "<= 1e-10");
        assert_that(res, "green_symmetry", sym <= 1e-10, sym, "<= 1e-10");
    }

    // G_n(0,0) against (2/pi) ln n
    {
        std::vector<double> lx, ly;
        for (std::int32_t n : {8, 16, 32, 64, 128}) {
            if (n > m.n) break;
            GreenOperator g(Domain::ball({0, 0}, n));
            double v = g.green({0, 0}, {0, 0});
            res.rows.push_back({"green_diag_B" + std::to_string(n), v, {}, 0, ""});
            lx.push_back(std::log(double(n)));
            ly.push_back(v);
        }
        if (lx.size() >= 3) {
            LinearFit f = linear_fit(lx, ly);
            res.rows.push_back({"green_log_slope", f.slope, {}, 0, ""});
            double target = 2.0 / 3.14159265358979323846;
            assert_that(res, "green_log_slope",
                        std::abs(f.slope - target) <= 0.1 * target, f.slope,
                        "within 10% of 2/pi");
        }
    }

    // annulus hitting formula (ln n - ln|z|) / (ln n - ln m) at (8, 64, |z|=23)
    if (m.n >= 64) {
        PointSet k;
        for (Point p : Domain::ball({0, 0}, 8).sites()) k.insert(p);
        Domain bn = Domain::ball({0, 0}, 64);
        Domain interior = bn.without(k);
        PointMap<double> data;
        for (Point p : k) data[p] = 1.0;
        HittingField h = HittingField::with_boundary_data(interior, data, 0.0);
        double exact = h.value({23, 0});
        double formula = (std::log(64.0) - std::log(23.0)) / (std::log(64.0) - std::log(8.0));
        res.rows.push_back({"annulus_exact", exact, {}, 0, ""});
        res.rows.push_back({"annulus_formula", formula, {}, 0, ""});
        assert_that(res, "annulus_formula", std::abs(exact - formula) <= 0.05,
                    std::abs(exact - formula), "<= 0.05");
    }

    // reflection inequality on randomized admissible instances
    {
        RngStream rng(m.seed, 0x5ef1ec7);
        int violations = 0, instances = 0;
        while (instances < 100) {
            std::int32_t r = 5 + std::int32_t(rng.next_below(4));
            Domain d = Domain::ball({0, 0}, r);
            PointSet k;
            int nk = 1 + int(rng.next_below(6));
            for (int t = 0; t < nk; ++t) {
                std::int32_t kx = -std::int32_t(1 + rng.next_below(std::uint32_t(r - 1)));
                std::int32_t ky = std::int32_t(rng.next_below(std::uint32_t(r))) -
                                  std::int32_t(r / 2);
                Point p{kx, ky};
                if (!d.contains(p)) continue;
                k.insert(p);
                if (rng.next_below(3) == 0 && d.contains({-kx, ky})) k.insert({-kx, ky});
            }
            if (k.empty()) continue;
            Point z{-std::int32_t(1 + rng.next_below(std::uint32_t(r - 2))),
                    std::int32_t(rng.next_below(std::uint32_t(r))) - std::int32_t(r / 2)};
            if (!d.contains(z) || k.count(z)) continue;
            ++instances;
            if (!reflection_inequality_check(d, k, z)) ++violations;
        }
        res.rows.push_back({"reflection_violations", double(violations), {}, 100, ""});
        assert_that(res, "reflection_inequality", violations == 0, double(violations),
                    "== 0");
    }

    // last-exit and conditioned-Green identities
    {
        IdentityReport rep = verify_green_hitting_identities(
            Domain::ball({0, 0}, 3), PointSet{{-2, 0}}, PointSet{{2, 0}});
        res.rows.push_back({"identity_last_exit_B3", rep.last_exit_residual, {}, 0, ""});
        res.rows.push_back(
            {"identity_cond_green_B3", rep.conditioned_green_residual, {}, 0, ""});
        assert_that(res, "identities_B3", rep.pass,
                    std::max(rep.last_exit_residual, rep.conditioned_green_residual),
                    "<= 1e-8");
    }

    // conditional quarter-arc exit probability with K in the left half-plane
    {
        double worst = 1.0;
        for (std::int32_t n : {8, 16, 32}) {
            if (n > m.n) break;
            PointSet k;
            for (std::int32_t x = -n / 2; x <= -1; ++x) k.insert({x, 0});
            worst = std::min(worst, quarter_arc_exit_probability(n, k));
        }
        res.rows.push_back({"quarter_arc_min", worst, {}, 0, ""});
        assert_that(res, "quarter_arc_positive", worst >= 0.05, worst, ">= 0.05");
    }

    // Harnack ratio stability across scales
    {
        std::vector<double> ratios;
        for (std::int32_t n : {8, 16, 32}) {
            if (n > m.n) break;
            Domain bn = Domain::ball({0, 0}, 2 * n);
            Point mass{2 * n + 1, 0};
            PointMap<double> data{{mass, 1.0}};
            HittingField h = HittingField::with_boundary_data(bn, data, 0.0);
            std::vector<Point> probe;
            for (Point p : Domain::ball({0, 0}, n).sites())
                if (norm2(p) >= std::int64_t(n) * n / 4) probe.push_back(p);
            double ratio = harnack_ratio_probe(h, probe);
            ratios.push_back(ratio);
            res.rows.push_back({"harnack_ratio_" + std::to_string(n), ratio, {}, 0, ""});
        }
        if (ratios.size() >= 2) {
            double lo = *std::min_element(ratios.begin(), ratios.end());
            double hi = *std::max_element(ratios.begin(), ratios.end());
            assert_that(res, "harnack_stable", hi <= 1.5 * lo, hi / lo, "max/min <= 1.5");
        }
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentManifest& m) {
    auto violations = m.validate();
    if (!violations.empty()) {
        std::string msg = "invalid manifest:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::invalid_argument(msg);
    }

    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    switch (m.kind) {
        case ExperimentKind::oracle_check: run_oracle_check(m, res); break;
        case ExperimentKind::es: run_es(m, res); break;
        case ExperimentKind::es_mn: run_es_mn(m, res); break;
        case ExperimentKind::hat_es: run_hat_es(m, res); break;
        case ExperimentKind::moments: run_moments(m, res); break;
        case ExperimentKind::tails: run_tails(m, res); break;
        case ExperimentKind::growth: run_growth(m, res); break;
        case ExperimentKind::separation: run_separation(m, res); break;
        case ExperimentKind::mu_convergence: run_mu_convergence(m, res); break;
        case ExperimentKind::mk: run_mk(m, res); break;
        case ExperimentKind::wilson: run_wilson(m, res); break;
        case ExperimentKind::green_checks: run_green_checks(m, res); break;
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string render_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "name,value,se,trials,extra\n";
    for (const auto& row : r.rows) {
        os << row.name << "," << fmt(row.value) << ",";
        if (row.se)
            os << fmt(*row.se);
        else
            os << "exact";
        os << "," << row.trials << "," << row.extra << "\n";
    }
    return os.str();
}

std::string render_summary_json(const ExperimentManifest& m, const ExperimentResult& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["manifest"] = nlohmann::json::parse(m.to_json());
    j["wall_seconds"] = r.wall_seconds;
    j["pass"] = r.pass();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json e;
        e["name"] = row.name;
        e["value"] = row.value;
        if (row.se)
            e["se"] = *row.se;
        else
            e["se"] = "exact";
        e["trials"] = row.trials;
        if (!row.extra.empty()) e["extra"] = row.extra;
        rows.push_back(std::move(e));
    }
    j["estimates"] = std::move(rows);
    nlohmann::json asserts = nlohmann::json::array();
    for (const auto& a : r.assertions) {
        nlohmann::json e;
        e["name"] = a.name;
        e["pass"] = a.pass;
        e["observed"] = a.observed;
        e["bound"] = a.bound;
        asserts.push_back(std::move(e));
    }
    j["assertions"] = std::move(asserts);
    return j.dump(2) + "\n";
}

std::optional<std::string> render_plot_svg(const ExperimentManifest& m,
                                           const ExperimentResult& r) {
    auto collect = [&](const std::string& prefix) {
        std::vector<double> xs, ys;
        for (const auto& row : r.rows)
            if (row.name.rfind(prefix, 0) == 0 && row.value > 0) {
                xs.push_back(std::atof(row.name.c_str() + prefix.size()));
                ys.push_back(std::log10(row.value));
            }
        return std::make_pair(xs, ys);
    };
    if (m.kind == ExperimentKind::tails) {
        SvgPlot plot("tail survival, n=" + std::to_string(m.n), "lambda",
                     "log10 survival");
        auto [ux, uy] = collect("upper_surv@");
        auto [lx, ly] = collect("lower_surv@");
        if (!ux.empty()) plot.add_series("P{M > lambda E}", ux, uy);
        if (!lx.empty()) plot.add_series("P{M < E/lambda}", lx, ly);
        return plot.render();
    }
    if (m.kind == ExperimentKind::growth) {
        SvgPlot plot("LERW length growth", "log10 n", "log10 mean M_n");
        std::vector<double> xs, ys;
        double slope = 0.0;
        for (const auto& row : r.rows) {
            if (row.name.rfind("mean_M_", 0) == 0) {
                xs.push_back(std::log10(std::atof(row.name.c_str() + 7)));
                ys.push_back(std::log10(row.value));
            }
            if (row.name == "growth_slope") slope = row.value;
        }
        if (xs.empty()) return std::nullopt;
        plot.add_series("mean M_n", xs, ys, false);
        std::vector<double> fx = {xs.front(), xs.back()};
        double b = ys.front() - slope * xs.front();
        std::vector<double> fy = {slope * fx[0] + b, slope * fx[1] + b};
        plot.add_series("slope " + fmt(slope), fx, fy);
        return plot.render();
    }
    if (m.kind == ExperimentKind::mu_convergence) {
        SvgPlot plot("truncated-law convergence, l=" + std::to_string(m.l),
                     "scale index", "TV to next scale");
        std::vector<double> xs, ys;
        for (const auto& row : r.rows)
            if (row.name.rfind("tv_", 0) == 0) {
                xs.push_back(double(xs.size()));
                ys.push_back(row.value);
            }
        if (xs.empty()) return std::nullopt;
        plot.add_series("TV", xs, ys);
        return plot.render();
    }
    return std::nullopt;
}

int run_and_write(const ExperimentManifest& m) {
    ExperimentResult res = run_experiment(m);

    std::filesystem::path out = m.out_dir.empty()
                                    ? std::filesystem::path("out-" + std::string(kind_name(m.kind)))
                                    : std::filesystem::path(m.out_dir);
    std::filesystem::create_directories(out);
    {
        std::ofstream f(out / "results.csv", std::ios::binary);
        f << render_csv(res);
    }
    {
        std::ofstream f(out / "summary.json", std::ios::binary);
        f << render_summary_json(m, res);
    }
    if (auto svg = render_plot_svg(m, res)) {
        std::ofstream f(out / "plot.svg", std::ios::binary);
        f << *svg;
    }
    return res.pass() ? 0 : 1;
}

}  // namespace lerw
