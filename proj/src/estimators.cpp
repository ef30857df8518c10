#include "lerw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "lerw/parallel.hpp"

namespace lerw {

int default_worker_count() {
    if (const char* env = std::getenv("LERWLAB_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void lerw_to_ball_exit(std::int32_t n, RngStream& rng, LoopEraser& eraser) {
    const std::int64_t r2 = std::int64_t(n) * n;
    eraser.reset({0, 0});
    Point z{0, 0};
    while (norm2(z) <= r2) {
        z = z + kSteps[rng.next_step()];
        eraser.step(z);
    }
}

namespace {

Rect ball_box(std::int32_t n) {
    return Rect{-(n + 2), -(n + 2), n + 2, n + 2};
}

struct PairCtx {
    PairCtx(std::int32_t n) : eraser(ball_box(n)), marker(ball_box(n)) {}
    LoopEraser eraser;
    PointMarker marker;
};

// S[1, sigma_n] disjoint from the marked set?  (positive times only; the
// stopping vertex is tested before the exit check so shared exit points count)
bool walk_avoids_marks(std::int32_t n, const PointMarker& marker, RngStream& rng) {
    const std::int64_t r2 = std::int64_t(n) * n;
    Point z{0, 0};
    for (;;) {
        z = z + kSteps[rng.next_step()];
        if (marker.marked(z)) return false;
        if (norm2(z) > r2) return true;
    }
}

}  // namespace

EstimatorSummary estimate_es(std::int32_t n, std::int64_t trials, std::uint64_t seed,
                             int workers) {
    if (n < 0) throw std::invalid_argument("estimate_es: n >= 0");
    if (n == 0) return exact_value("es_0", 1.0);  // Es(0) = 1, no sampling
    if (trials < 1) throw std::invalid_argument("estimate_es: trials >= 1");

    auto wins = run_trials<std::uint8_t, PairCtx>(
        trials, workers, [&] { return PairCtx(n); },
        [&](std::int64_t i, PairCtx& ctx) -> std::uint8_t {
            RngStream rng(seed, std::uint64_t(i));
            lerw_to_ball_exit(n, rng, ctx.eraser);
            ctx.marker.clear();
            for (Point v : ctx.eraser.path()) ctx.marker.mark(v);
            return walk_avoids_marks(n, ctx.marker, rng) ? 1 : 0;
        });
    std::int64_t hits = 0;
    for (auto w : wins) hits += w;
    return summarize_binomial("es_" + std::to_string(n), hits, trials, seed);
}

EstimatorSummary estimate_es_mn(std::int32_t m, std::int32_t n, std::int64_t trials,
                                std::uint64_t seed, int workers) {
    if (m > n) throw std::invalid_argument("estimate_es_mn: m <= n required");
    if (m < 0) throw std::invalid_argument("estimate_es_mn: m >= 0");
    if (trials < 1) throw std::invalid_argument("estimate_es_mn: trials >= 1");
    const std::int64_t m2 = std::int64_t(m) * m;

    auto wins = run_trials<std::uint8_t, PairCtx>(
        trials, workers, [&] { return PairCtx(n); },
        [&](std::int64_t i, PairCtx& ctx) -> std::uint8_t {
            RngStream rng(seed, std::uint64_t(i));
            lerw_to_ball_exit(n, rng, ctx.eraser);
            const Path& eta = ctx.eraser.path();
            // last entrance to B_m at a positive index; m = 0 keeps everything
            std::size_t k0 = 0;
            for (std::size_t j = 1; j < eta.size(); ++j)
                if (norm2(eta[j]) <= m2) k0 = j;
            ctx.marker.clear();
            for (std::size_t j = k0; j < eta.size(); ++j) ctx.marker.mark(eta[j]);
            return walk_avoids_marks(n, ctx.marker, rng) ? 1 : 0;
        });
    std::int64_t hits = 0;
    for (auto w : wins) hits += w;
    return summarize_binomial("es_" + std::to_string(m) + "_" + std::to_string(n),
                              hits, trials, seed);
}

namespace {

struct HatCtx {
    HatCtx(std::int32_t n, std::int32_t walk_radius)
        : eraser(ball_box(walk_radius)), near_marker(ball_box(n)), wide_marker(ball_box(n)) {}
    LoopEraser eraser;
    PointMarker near_marker;
    PointMarker wide_marker;
};

// mark the eraser stack truncated at its first exit of B_n
void mark_truncated(const Path& eta, std::int32_t n, PointMarker& marker) {
    const std::int64_t r2 = std::int64_t(n) * n;
    marker.clear();
    for (Point v : eta) {
        marker.mark(v);
        if (norm2(v) > r2) break;
    }
}

}  // namespace

HatEsResult estimate_hat_es(std::int32_t n, std::int64_t trials, std::uint64_t seed,
                            int outer_factor, int workers, bool with_factor_check) {
    if (n < 1) throw std::invalid_argument("estimate_hat_es: n >= 1");
    if (outer_factor < 2) throw std::invalid_argument("estimate_hat_es: factor >= 2");
    if (trials < 1) throw std::invalid_argument("estimate_hat_es: trials >= 1");
    const std::int64_t mid_r2 = std::int64_t(outer_factor) * n * outer_factor * n;
    const std::int64_t out_r2 = with_factor_check ? 4 * mid_r2 : mid_r2;

    struct Outcome {
        std::uint8_t base;
        std::uint8_t wide;
    };
    const std::int32_t walk_radius =
        (with_factor_check ? 2 : 1) * outer_factor * n;
    auto outcomes = run_trials<Outcome, HatCtx>(
        trials, workers, [&] { return HatCtx(n, walk_radius); },
        [&](std::int64_t i, HatCtx& ctx) -> Outcome {
            RngStream rng(seed, std::uint64_t(i));
            // one walk to sigma_{2fn}; snapshot the erasure when it first
            // leaves B_{fn} (the stack is L of that prefix)
            ctx.eraser.reset({0, 0});
            Point z{0, 0};
            bool snapped = false;
            for (;;) {
                std::int64_t r2 = norm2(z);
                if (!snapped && r2 > mid_r2) {
                    mark_truncated(ctx.eraser.path(), n, ctx.near_marker);
                    snapped = true;
                }
                if (r2 > out_r2) break;
                z = z + kSteps[rng.next_step()];
                ctx.eraser.step(z);
            }
            if (!snapped) mark_truncated(ctx.eraser.path(), n, ctx.near_marker);
            if (with_factor_check)
                mark_truncated(ctx.eraser.path(), n, ctx.wide_marker);

            // one S walk against both targets
            const std::int64_t n2 = std::int64_t(n) * n;
            Point w{0, 0};
            bool base_ok = true, wide_ok = with_factor_check;
            for (;;) {
                w = w + kSteps[rng.next_step()];
                if (base_ok && ctx.near_marker.marked(w)) base_ok = false;
                if (wide_ok && ctx.wide_marker.marked(w)) wide_ok = false;
                if ((!base_ok && !wide_ok) || norm2(w) > n2) break;
            }
            return Outcome{std::uint8_t(base_ok), std::uint8_t(wide_ok)};
        });

    std::int64_t base_hits = 0, wide_hits = 0;
    std::vector<double> diffs(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        base_hits += outcomes[i].base;
        wide_hits += outcomes[i].wide;
        diffs[i] = double(outcomes[i].base) - double(outcomes[i].wide);
    }
    HatEsResult r;
    r.has_wide = with_factor_check;
    r.hat_es = summarize_binomial("hat_es_" + std::to_string(n), base_hits, trials, seed);
    if (with_factor_check) {
        r.hat_es_wide = summarize_binomial("hat_es_wide_" + std::to_string(n),
                                           wide_hits, trials, seed);
        r.paired_diff = summarize("hat_es_paired_diff", diffs, seed);
    }
    return r;
}

std::vector<std::int64_t> sample_mn_ball(std::int32_t n, std::int64_t trials,
                                         std::uint64_t seed, int workers) {
    if (n < 1) throw std::invalid_argument("sample_mn_ball: n >= 1");
    auto samples = run_trials<std::int64_t, LoopEraser>(
        trials, workers, [&] { return LoopEraser(ball_box(n)); },
        [&](std::int64_t i, LoopEraser& eraser) {
            RngStream rng(seed, std::uint64_t(i));
            lerw_to_ball_exit(n, rng, eraser);
            std::int64_t m = path_length(eraser.path());
            if (m < n)
                throw std::logic_error("sample_mn_ball: M < n, impossible exit path");
            return m;
        });
    return samples;
}

std::vector<std::int64_t> sample_mn(const Domain& d, std::int64_t trials,
                                    std::uint64_t seed, int workers) {
    if (!d.contains({0, 0}))
        throw std::invalid_argument("sample_mn: domain must contain the origin");
    return run_trials<std::int64_t, LoopEraser>(
        trials, workers, [&] { return LoopEraser(d.bounding_box()); },
        [&](std::int64_t i, LoopEraser& eraser) {
            RngStream rng(seed, std::uint64_t(i));
            eraser.reset({0, 0});
            Point z{0, 0};
            while (d.contains(z)) {
                z = z + kSteps[rng.next_step()];
                eraser.step(z);
            }
            return path_length(eraser.path());
        });
}

std::vector<std::int64_t> sample_mn_hat(std::int32_t n, std::int64_t trials,
                                        std::uint64_t seed, int outer_factor,
                                        int workers) {
    if (n < 1) throw std::invalid_argument("sample_mn_hat: n >= 1");
    const std::int64_t out_r2 =
        std::int64_t(outer_factor) * n * outer_factor * n;
    const std::int64_t n2 = std::int64_t(n) * n;
    return run_trials<std::int64_t, LoopEraser>(
        trials, workers, [&] { return LoopEraser(ball_box(outer_factor * n)); },
        [&](std::int64_t i, LoopEraser& eraser) {
            RngStream rng(seed, std::uint64_t(i));
            eraser.reset({0, 0});
            Point z{0, 0};
            while (norm2(z) <= out_r2) {
                z = z + kSteps[rng.next_step()];
                eraser.step(z);
            }
            std::int64_t steps = 0;
            for (Point v : eraser.path()) {
                if (norm2(v) > n2) break;
                ++steps;
            }
            return steps;  // vertices up to the exit == steps of the truncation
        });
}

TailCurve tail_curves_from_samples(const std::vector<std::int64_t>& samples,
                                   const std::vector<double>& lambda_grid,
                                   std::uint64_t /*seed*/) {
    if (lambda_grid.empty() || lambda_grid.front() < 1.0)
        throw std::invalid_argument("tail_curves: lambda grid must start at 1");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (lambda_grid[i] <= lambda_grid[i - 1])
            throw std::invalid_argument("tail_curves: lambda grid must increase");

    TailCurve out;
    out.trials = std::int64_t(samples.size());
    long double sum = 0.0L;
    for (auto m : samples) sum += (long double)m;
    out.mean = double(sum / (long double)samples.size());
    long double ss = 0.0L;
    for (auto m : samples) ss += ((long double)m - out.mean) * ((long double)m - out.mean);
    out.mean_se = std::sqrt(double(ss) / double(samples.size())) /
                  std::sqrt(double(samples.size()));

    for (double lam : lambda_grid) {
        TailPoint up, lo;
        up.lambda = lo.lambda = lam;
        double upper_cut = lam * out.mean;
        double lower_cut = out.mean / lam;
        for (auto m : samples) {
            if (double(m) > upper_cut) ++up.count;
            if (double(m) < lower_cut) ++lo.count;
        }
        for (TailPoint* p : {&up, &lo}) {
            p->survival = double(p->count) / double(samples.size());
            p->se = std::sqrt(p->survival * (1.0 - p->survival) / double(samples.size()));
            p->low_confidence = p->count < 10;
        }
        out.upper.push_back(up);
        out.lower.push_back(lo);
    }
    return out;
}

TailCurve tail_curves(std::int32_t n, const std::vector<double>& lambda_grid,
                      std::int64_t trials, std::uint64_t seed, int workers) {
    return tail_curves_from_samples(sample_mn_ball(n, trials, seed, workers),
                                    lambda_grid, seed);
}

GrowthFit growth_exponent_fit(const std::vector<std::int32_t>& radii,
                              std::int64_t trials, std::uint64_t seed, int workers) {
    if (radii.size() < 3)
        throw std::invalid_argument("growth_exponent_fit: need >= 3 radii");
    GrowthFit fit;
    fit.radii = radii;
    std::vector<double> xs;
    std::vector<std::vector<double>> samples_per_radius;
    for (std::size_t r = 0; r < radii.size(); ++r) {
        auto samples =
            sample_mn_ball(radii[r], trials, seed + 0x9e37 * (r + 1), workers);
        std::vector<double> vals(samples.begin(), samples.end());
        fit.means.push_back(
            summarize("mean_M_" + std::to_string(radii[r]), vals, seed));
        xs.push_back(double(radii[r]));
        samples_per_radius.push_back(std::move(vals));
    }
    fit.slope = bootstrap_loglog_slope(xs, samples_per_radius, 200, seed);
    return fit;
}

SeparationResult separation_probe(std::int32_t n, std::int64_t trials,
                                  std::uint64_t seed, int workers) {
    if (n < 8) throw std::invalid_argument("separation_probe: n >= 8");
    if (trials < 1) throw std::invalid_argument("separation_probe: trials >= 1");
    const std::int64_t r2 = std::int64_t(n) * n;

    struct Ctx {
        Ctx(std::int32_t n_) : pair(n_) {}
        PairCtx pair;
        std::vector<Point> s_path;
    };
    // outcome: -1 = intersected, else d_n^2 (min over the two cross distances)
    auto outcomes = run_trials<std::int64_t, Ctx>(
        trials, workers, [&] { return Ctx(n); },
        [&](std::int64_t i, Ctx& ctx) -> std::int64_t {
            RngStream rng(seed, std::uint64_t(i));
            lerw_to_ball_exit(n, rng, ctx.pair.eraser);
            const Path& eta = ctx.pair.eraser.path();
            ctx.pair.marker.clear();
            for (Point v : eta) ctx.pair.marker.mark(v);

            ctx.s_path.assign(1, Point{0, 0});
            Point z{0, 0};
            for (;;) {
                z = z + kSteps[rng.next_step()];
                if (ctx.pair.marker.marked(z)) return -1;
                ctx.s_path.push_back(z);
                if (norm2(z) > r2) break;
            }
            std::int64_t d1 = std::numeric_limits<std::int64_t>::max();
            for (Point v : eta) d1 = std::min(d1, norm2(ctx.s_path.back() - v));
            std::int64_t d2 = std::numeric_limits<std::int64_t>::max();
            for (Point v : ctx.s_path) d2 = std::min(d2, norm2(eta.back() - v));
            return std::min(d1, d2);
        });

    SeparationResult res;
    res.trials = trials;
    const double thr = double(n) / 10.0, thr_half = double(n) / 20.0;
    std::vector<double> sep, sep_half;
    for (auto o : outcomes) {
        if (o < 0) continue;
        ++res.successes;
        double d = std::sqrt(double(o));
        sep.push_back(d >= thr ? 1.0 : 0.0);
        sep_half.push_back(d >= thr_half ? 1.0 : 0.0);
    }
    res.enough = res.successes >= 100;
    if (res.successes > 0) {
        res.conditional = summarize("separation_" + std::to_string(n), sep, seed);
        res.conditional_half =
            summarize("separation_half_" + std::to_string(n), sep_half, seed);
    }
    return res;
}

MuConvergenceResult mu_convergence_probe(std::int32_t l,
                                         const std::vector<std::int32_t>& multipliers,
                                         std::int64_t trials, std::uint64_t seed,
                                         int workers) {
    if (l < 1 || l > 2)
        throw std::invalid_argument("mu_convergence_probe: l must be 1 or 2");
    if (multipliers.size() < 2)
        throw std::invalid_argument("mu_convergence_probe: need >= 2 scales");
    const std::int64_t l2 = std::int64_t(l) * l;

    MuConvergenceResult res;
    res.l = l;
    for (std::size_t s = 0; s < multipliers.size(); ++s) {
        std::int32_t outer = multipliers[s] * l;
        res.outer_radii.push_back(outer);
        auto paths = run_trials<Path, LoopEraser>(
            trials, workers, [&] { return LoopEraser(ball_box(outer)); },
            [&](std::int64_t i, LoopEraser& eraser) {
                RngStream rng(seed, std::uint64_t(s) << 40 | std::uint64_t(i));
                lerw_to_ball_exit(outer, rng, eraser);
                Path out;
                for (Point v : eraser.path()) {
                    out.push_back(v);
                    if (norm2(v) > l2) break;
                }
                return out;
            });
        std::map<Path, double> pmf;
        for (const auto& p : paths) pmf[p] += 1.0 / double(trials);
        res.pmfs.push_back(std::move(pmf));
    }
    for (std::size_t s = 1; s < res.pmfs.size(); ++s) {
        long double acc = 0.0L;
        auto ia = res.pmfs[s - 1].begin();
        auto ib = res.pmfs[s].begin();
        while (ia != res.pmfs[s - 1].end() || ib != res.pmfs[s].end()) {
            if (ib == res.pmfs[s].end() ||
                (ia != res.pmfs[s - 1].end() && ia->first < ib->first)) {
                acc += ia->second;
                ++ia;
            } else if (ia == res.pmfs[s - 1].end() || ib->first < ia->first) {
                acc += ib->second;
                ++ib;
            } else {
                acc += std::abs(ia->second - ib->second);
                ++ia;
                ++ib;
            }
        }
        res.tv_consecutive.push_back(double(acc / 2.0L));
    }
    if (l == 1) {
        // lattice symmetry makes outcomes within a dihedral orbit (straight
        // continuations vs turns) exactly equiprobable; the two orbits are
        // genuinely different (the erasure favors straight exits)
        double se = std::sqrt((1.0 / 12.0) * (11.0 / 12.0) / double(trials));
        double worst = 0.0;
        for (const auto& pmf : res.pmfs) {
            double orbit_sum[2] = {0.0, 0.0};
            int orbit_cnt[2] = {0, 0};
            auto orbit_of = [](const Path& p) {
                Point w = p.back(), v = p[1];
                return (w.x == 2 * v.x && w.y == 2 * v.y) ? 0 : 1;
            };
            for (const auto& [p, q] : pmf) {
                int o = orbit_of(p);
                orbit_sum[o] += q;
                ++orbit_cnt[o];
            }
            for (const auto& [p, q] : pmf) {
                int o = orbit_of(p);
                double mean = orbit_sum[o] / double(orbit_cnt[o]);
                worst = std::max(worst, std::abs(q - mean) / se);
            }
        }
        res.max_symmetry_deviation_in_se = worst;
    }
    return res;
}

}  // namespace lerw
