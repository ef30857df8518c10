#include "lerw/conditioned.hpp"

#include <cmath>
#include <stdexcept>

#include "lerw/parallel.hpp"

namespace lerw {

HTransformChain::HTransformChain(HittingField h) : field_(std::move(h)) {}

Point HTransformChain::step(Point from, RngStream& rng) const {
    double w[4];
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        w[k] = h(from + kSteps[k]);
        total += w[k];
    }
    if (total <= 0.0)
        throw std::runtime_error("HTransformChain::step: no allowed transition");
    double u = rng.next_double() * total;
    for (int k = 0; k < 3; ++k) {
        u -= w[k];
        if (u < 0.0) return from + kSteps[k];
    }
    return from + kSteps[3];
}

double HTransformChain::transition_probability(Point from, Point to) const {
    double total = 0.0;
    for (Point s : kSteps) total += h(from + s);
    if (total <= 0.0) return 0.0;
    return h(to) / total;
}

Trajectory sample_conditioned(Point start, const HTransformChain& chain,
                              const StoppingRule& rule, RngStream& rng,
                              std::int64_t step_cap) {
    if (chain.h(start) <= 0.0)
        throw std::invalid_argument(
            "sample_conditioned: h(start) = 0, conditioning on a null event");
    Trajectory t;
    t.vertices.push_back(start);
    Point z = start;
    for (std::int64_t j = 1; j <= step_cap; ++j) {
        z = chain.step(z, rng);
        t.vertices.push_back(z);
        int reason = rule.fired(z);
        if (reason >= 0) {
            t.stop_reason = reason;
            t.stop_time = j;
            return t;
        }
    }
    throw std::runtime_error("sample_conditioned: step cap exceeded");
}

double path_weight_identity_residual(const HTransformChain& chain, const Path& w) {
    if (w.size() < 2) return 0.0;
    long double logp = 0.0L;
    for (std::size_t i = 1; i < w.size(); ++i) {
        double q = chain.transition_probability(w[i - 1], w[i]);
        if (q <= 0.0)
            throw std::invalid_argument("path_weight_identity: zero-probability step");
        logp += std::log((long double)q);
    }
    long double want = std::log((long double)chain.h(w.back())) -
                       std::log((long double)chain.h(w.front())) -
                       (long double)(w.size() - 1) * std::log(4.0L);
    // relative error of the product itself
    return double(std::fabs(std::expm1(logp - want)));
}

std::vector<std::string> MkParams::violations() const {
    std::vector<std::string> v;
    if (m < 0) v.push_back("m must be >= 0");
    if (n < 1) v.push_back("n must be >= 1");
    // sqrt(2) m + n <= N, checked exactly: 2 m^2 <= (N - n)^2
    if (outer_n < n || 2 * std::int64_t(m) * m > std::int64_t(outer_n - n) * (outer_n - n))
        v.push_back("sqrt(2) m + n <= N violated");
    if (x.x != m || std::abs(x.y) > m)
        v.push_back("x must be (m, y) with |y| <= m");
    for (Point p : k)
        if (std::abs(p.x) > m || std::abs(p.y) > m) {
            v.push_back("K must be a subset of the square R_m");
            break;
        }
    return v;
}

MkSampler::MkSampler(MkParams params)
    : params_(std::move(params)),
      chain_([&] {
          auto viol = params_.violations();
          if (!viol.empty())
              throw std::invalid_argument("MkSampler: " + viol.front());
          Domain bn = Domain::ball({0, 0}, params_.outer_n);
          PointSet kset(params_.k.begin(), params_.k.end());
          return HTransformChain(HittingField::exit_before_hit(bn, kset));
      }()),
      annulus_{params_.x, params_.n} {
    if (chain_.h(params_.x) <= 0.0)
        throw std::invalid_argument(
            "MkSampler: conditioning event is null (x enclosed by K)");
}

LoopEraser MkSampler::make_eraser() const {
    std::int32_t r = params_.outer_n + 2;
    return LoopEraser(Rect{-r, -r, r, r});
}

Path MkSampler::sample_alpha(RngStream& rng, LoopEraser& eraser) const {
    const std::int64_t big_r2 = std::int64_t(params_.outer_n) * params_.outer_n;
    const std::int64_t small_r2 = std::int64_t(params_.n) * params_.n;

    eraser.reset(params_.x);
    Point z = params_.x;
    while (norm2(z) <= big_r2) {
        z = chain_.step(z, rng);
        eraser.step(z);
    }
    const Path& eta = eraser.path();

    Path alpha;
    for (const Point v : eta) {
        alpha.push_back(v);
        if (norm2(v - params_.x) > small_r2) break;  // first exit of B_n(x)
    }
    return alpha;
}

ConditionedStatistic MkSampler::sample(RngStream& rng, LoopEraser& eraser) const {
    Path alpha = sample_alpha(rng, eraser);
    ConditionedStatistic out;
    out.alpha_steps = path_length(alpha);
    for (const Point v : alpha)
        if (annulus_.contains(v)) ++out.value;
    return out;
}

ConditionedStatistic MkSampler::sample(RngStream& rng) const {
    LoopEraser eraser = make_eraser();
    return sample(rng, eraser);
}

double MkSampler::exact_mean_value() const {
    Domain bn = Domain::ball({0, 0}, params_.outer_n);
    SequentialLawOptions opt;
    opt.forbidden = PointSet(params_.k.begin(), params_.k.end());
    opt.truncate = {{params_.x, params_.n}};
    PathDistribution alpha_law = lerw_sequential_law(bn, params_.x, opt);

    long double mean = 0.0L;
    for (const auto& [p, q] : alpha_law.entries()) {
        std::int64_t cnt = 0;
        for (Point v : p)
            if (annulus_.contains(v)) ++cnt;
        mean += (long double)q * (long double)cnt;
    }
    return double(mean);
}

std::pair<EstimatorSummary, EstimatorSummary> estimate_mk_moments(
    const MkParams& params, std::int64_t trials, std::uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("estimate_mk_moments: trials >= 1");
    MkSampler sampler(params);

    struct Ctx {
        LoopEraser eraser;
    };
    auto values = run_trials<double, Ctx>(
        trials, workers, [&] { return Ctx{sampler.make_eraser()}; },
        [&](std::int64_t i, Ctx& ctx) {
            RngStream rng(seed, std::uint64_t(i));
            return double(sampler.sample(rng, ctx.eraser).value);
        });

    std::vector<double> squares(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) squares[i] = values[i] * values[i];
    return {summarize("mk_first_moment", values, seed),
            summarize("mk_second_moment", squares, seed)};
}

}  // namespace lerw
