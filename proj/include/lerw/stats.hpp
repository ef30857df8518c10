#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lerw {

struct EstimatorSummary {
    std::string name;
    std::int64_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;       // population variance of the samples
    double se = 0.0;             // sqrt(variance / trials)
    double ci_lo = 0.0;          // mean -/+ 1.96 se
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    bool exact = false;          // no sampling involved
};

EstimatorSummary summarize(std::string name, const std::vector<double>& samples,
                           std::uint64_t seed);
EstimatorSummary summarize_binomial(std::string name, std::int64_t successes,
                                    std::int64_t trials, std::uint64_t seed);
EstimatorSummary exact_value(std::string name, double value);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double corr = 0.0;
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// upper quantile via the Wilson-Hilferty approximation
double chi_square_quantile(double dof, double p);

struct SlopeCI {
    double slope = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// least-squares slope of log(mean of samples) vs log x, with a bootstrap CI
// over trial resampling
SlopeCI bootstrap_loglog_slope(const std::vector<double>& xs,
                               const std::vector<std::vector<double>>& samples_per_x,
                               int resamples, std::uint64_t seed);

// r_k = E[M^k] / (k! E[M]^k) for k = 1..k_max, with jackknife standard errors
std::vector<EstimatorSummary> moment_ratios(const std::vector<double>& samples,
                                            int k_max, std::uint64_t seed);

}  // namespace lerw
