#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/loop_erase.hpp"
#include "lerw/point.hpp"
#include "lerw/rng.hpp"
#include "lerw/stats.hpp"

namespace lerw {

// walk from 0 until exiting B_n, loop-erased on the fly; the eraser holds
// L(S[0, sigma_n]) afterwards
void lerw_to_ball_exit(std::int32_t n, RngStream& rng, LoopEraser& eraser);

// Es(n) = P{ S[1,sigma_n] and L(S'[0,sigma_n]) disjoint }; Es(0) = 1 exactly
EstimatorSummary estimate_es(std::int32_t n, std::int64_t trials, std::uint64_t seed,
                             int workers = 1);

// Es(m,n): only the terminal segment of the loop erasure past its last visit
// to B_m is tested; m = 0 keeps the whole path
EstimatorSummary estimate_es_mn(std::int32_t m, std::int32_t n, std::int64_t trials,
                                std::uint64_t seed, int workers = 1);

struct HatEsResult {
    EstimatorSummary hat_es;       // outer stopping ball factor f
    EstimatorSummary hat_es_wide;  // factor 2f, same trials (paired)
    EstimatorSummary paired_diff;  // per-trial difference of the two indicators
    bool has_wide = false;
};

// hat-Es(n): the infinite-LERW factor approximated by L(S'[0,sigma_{f n}])
// truncated at the first exit of B_n.  with_factor_check also evaluates the
// 2f-stopped version on the same walks (4x the steps).
HatEsResult estimate_hat_es(std::int32_t n, std::int64_t trials, std::uint64_t seed,
                            int outer_factor = 4, int workers = 1,
                            bool with_factor_check = true);

// per-trial M_D = steps of L(S[0,sigma_D]); ball version asserts M >= n
std::vector<std::int64_t> sample_mn(const Domain& d, std::int64_t trials,
                                    std::uint64_t seed, int workers = 1);
std::vector<std::int64_t> sample_mn_ball(std::int32_t n, std::int64_t trials,
                                         std::uint64_t seed, int workers = 1);
// hat version: L(S[0,sigma_{f n}]) truncated at the first exit of B_n
std::vector<std::int64_t> sample_mn_hat(std::int32_t n, std::int64_t trials,
                                        std::uint64_t seed, int outer_factor = 4,
                                        int workers = 1);

struct TailPoint {
    double lambda = 0.0;
    std::int64_t count = 0;
    double survival = 0.0;
    double se = 0.0;
    bool low_confidence = false;  // fewer than 10 hits
};

struct TailCurve {
    double mean = 0.0;  // same-run sample mean Ehat
    double mean_se = 0.0;
    std::int64_t trials = 0;
    std::vector<TailPoint> upper;  // P{ M > lambda Ehat }
    std::vector<TailPoint> lower;  // P{ M < Ehat / lambda }
};

// lambda grid must start at 1 and be increasing
TailCurve tail_curves(std::int32_t n, const std::vector<double>& lambda_grid,
                      std::int64_t trials, std::uint64_t seed, int workers = 1);
TailCurve tail_curves_from_samples(const std::vector<std::int64_t>& samples,
                                   const std::vector<double>& lambda_grid,
                                   std::uint64_t seed);

struct GrowthFit {
    std::vector<std::int32_t> radii;
    std::vector<EstimatorSummary> means;
    SlopeCI slope;  // of log Ehat[M_n] vs log n, bootstrap CI
};

GrowthFit growth_exponent_fit(const std::vector<std::int32_t>& radii,
                              std::int64_t trials, std::uint64_t seed, int workers = 1);

struct SeparationResult {
    std::int64_t trials = 0;
    std::int64_t successes = 0;           // non-intersecting pairs
    bool enough = false;                  // >= 100 successes
    EstimatorSummary conditional;         // P{ d_n >= n/10 | disjoint }
    EstimatorSummary conditional_half;    // threshold n/20, same samples
};

SeparationResult separation_probe(std::int32_t n, std::int64_t trials,
                                  std::uint64_t seed, int workers = 1);

struct MuConvergenceResult {
    std::int32_t l = 1;
    std::vector<std::int32_t> outer_radii;       // n*l per scale
    std::vector<std::map<Path, double>> pmfs;    // truncated-outcome pmfs
    std::vector<double> tv_consecutive;
    // l = 1 only: max |p_i - 1/12| in units of the binomial SE
    double max_symmetry_deviation_in_se = 0.0;
};

// pmf of the B_l-truncated loop erasure under D = B_{multiplier * l}
MuConvergenceResult mu_convergence_probe(std::int32_t l,
                                         const std::vector<std::int32_t>& multipliers,
                                         std::int64_t trials, std::uint64_t seed,
                                         int workers = 1);

}  // namespace lerw
