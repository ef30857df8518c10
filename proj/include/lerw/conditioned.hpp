#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/loop_erase.hpp"
#include "lerw/oracle.hpp"
#include "lerw/point.hpp"
#include "lerw/potential.hpp"
#include "lerw/rng.hpp"
#include "lerw/stats.hpp"
#include "lerw/walk.hpp"

namespace lerw {

// Doob h-transform of SRW: from x, step to neighbor y with probability
// (1/4) h(y)/h(x); realizes conditioning on hitting K1 before K2.
// Immutable and shared; sampling is concurrent per trial.
class HTransformChain {
public:
    explicit HTransformChain(HittingField h);

    // h values below 1e-300 count as 0 (unreachable under the conditioning)
    double h(Point z) const {
        double v = field_.value(z);
        return v < 1e-300 ? 0.0 : v;
    }

    Point step(Point from, RngStream& rng) const;
    double transition_probability(Point from, Point to) const;

    const HittingField& field() const { return field_; }

private:
    HittingField field_;
};

// trajectory law = SRW conditioned on { xi_K1 < xi_K2 }; requires h(start) > 0
Trajectory sample_conditioned(Point start, const HTransformChain& chain,
                              const StoppingRule& rule, RngStream& rng,
                              std::int64_t step_cap = kDefaultStepCap);

// product of transition probabilities along a trajectory minus the telescoped
// (h(end)/h(start)) 4^{-|w|}, as a relative error
double path_weight_identity_residual(const HTransformChain& chain, const Path& w);

struct MkParams {
    std::int32_t m = 0;
    std::int32_t n = 1;
    std::int32_t outer_n = 4;  // the enclosing ball radius N
    Point x{0, 0};
    std::vector<Point> k;      // subset of R_m

    // sqrt(2) m + n <= outer_n, x = (m, y) with |y| <= m, K inside R_m
    std::vector<std::string> violations() const;
};

struct ConditionedStatistic {
    std::int64_t value = 0;        // vertices of alpha in A_n(x)
    std::int64_t alpha_steps = 0;  // |alpha|
};

// Sampler for the conditioned LERW statistic: SRW from x conditioned to leave
// B_N before hitting K; loop-erase X[0, sigma_N]; truncate at the first exit
// of B_n(x); count vertices in the cone annulus A_n(x).
class MkSampler {
public:
    explicit MkSampler(MkParams params);

    const MkParams& params() const { return params_; }
    const HTransformChain& chain() const { return chain_; }

    LoopEraser make_eraser() const;

    // alpha: the loop erasure of the conditioned walk, truncated at its first
    // exit of B_n(x)
    Path sample_alpha(RngStream& rng, LoopEraser& eraser) const;

    ConditionedStatistic sample(RngStream& rng, LoopEraser& eraser) const;
    ConditionedStatistic sample(RngStream& rng) const;

    // exact E[value] by exhaustive enumeration (small n only)
    double exact_mean_value() const;

private:
    MkParams params_;
    HTransformChain chain_;
    ConeAnnulus annulus_;
};

// first- and second-moment summaries of the statistic
std::pair<EstimatorSummary, EstimatorSummary> estimate_mk_moments(
    const MkParams& params, std::int64_t trials, std::uint64_t seed, int workers = 1);

}  // namespace lerw
