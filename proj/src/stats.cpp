#include "lerw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lerw/rng.hpp"

namespace lerw {

EstimatorSummary summarize(std::string name, const std::vector<double>& samples,
                           std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("summarize: no samples");
    long double sum = 0.0L;
    for (double v : samples) sum += v;
    double mean = double(sum / samples.size());
    long double ss = 0.0L;
    for (double v : samples) ss += (long double)(v - mean) * (v - mean);
    EstimatorSummary s;
    s.name = std::move(name);
    s.trials = std::int64_t(samples.size());
    s.mean = mean;
    s.variance = double(ss / samples.size());
    s.se = std::sqrt(s.variance / double(samples.size()));
    s.ci_lo = s.mean - 1.96 * s.se;
    s.ci_hi = s.mean + 1.96 * s.se;
    s.seed = seed;
    return s;
}

EstimatorSummary summarize_binomial(std::string name, std::int64_t successes,
                                    std::int64_t trials, std::uint64_t seed) {
    if (trials <= 0) throw std::invalid_argument("summarize_binomial: no trials");
    double p = double(successes) / double(trials);
    EstimatorSummary s;
    s.name = std::move(name);
    s.trials = trials;
    s.mean = p;
    s.variance = p * (1.0 - p);
    s.se = std::sqrt(s.variance / double(trials));
    s.ci_lo = p - 1.96 * s.se;
    s.ci_hi = p + 1.96 * s.se;
    s.seed = seed;
    return s;
}

EstimatorSummary exact_value(std::string name, double value) {
    EstimatorSummary s;
    s.name = std::move(name);
    s.trials = 0;
    s.mean = value;
    s.ci_lo = s.ci_hi = value;
    s.exact = true;
    return s;
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 points");
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    double cov = sxy - sx * sy / n;
    double vx = sxx - sx * sx / n;
    double vy = syy - sy * sy / n;
    LinearFit f;
    f.slope = cov / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.corr = (vx > 0 && vy > 0) ? cov / std::sqrt(vx * vy) : 0.0;
    f.r2 = f.corr * f.corr;
    return f;
}

double chi_square_quantile(double dof, double p) {
    // Wilson-Hilferty: X ~ chi2(k)  =>  (X/k)^{1/3} approx N(1 - 2/(9k), 2/(9k))
    // inverse normal via Acklam-style rational approximation
    auto inv_norm = [](double q) {
        static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
        static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
        static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
        static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
        const double plow = 0.02425, phigh = 1 - plow;
        if (q < plow) {
            double r = std::sqrt(-2 * std::log(q));
            return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
                   ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1);
        }
        if (q > phigh) {
            double r = std::sqrt(-2 * std::log(1 - q));
            return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
                   ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1);
        }
        double r = q - 0.5, s = r * r;
        return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
               (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1);
    };
    double z = inv_norm(p);
    double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
    return dof * t * t * t;
}

SlopeCI bootstrap_loglog_slope(const std::vector<double>& xs,
                               const std::vector<std::vector<double>>& samples_per_x,
                               int resamples, std::uint64_t seed) {
    if (xs.size() != samples_per_x.size() || xs.size() < 3)
        throw std::invalid_argument("bootstrap_loglog_slope: need >= 3 abscissae");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        long double sum = 0.0L;
        for (double v : samples_per_x[i]) sum += v;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(double(sum / samples_per_x[i].size())));
    }
    SlopeCI out;
    out.slope = linear_fit(lx, ly).slope;

    std::vector<double> slopes;
    slopes.reserve(std::size_t(resamples));
    RngStream rng(seed, 0x626f6f74);
    for (int b = 0; b < resamples; ++b) {
        std::vector<double> byy;
        for (const auto& samples : samples_per_x) {
            long double sum = 0.0L;
            std::uint32_t n = std::uint32_t(samples.size());
            for (std::uint32_t j = 0; j < n; ++j) sum += samples[rng.next_below(n)];
            byy.push_back(std::log(double(sum / n)));
        }
        slopes.push_back(linear_fit(lx, byy).slope);
    }
    std::sort(slopes.begin(), slopes.end());
    out.lo = slopes[std::size_t(0.025 * double(resamples))];
    out.hi = slopes[std::min(slopes.size() - 1, std::size_t(0.975 * double(resamples)))];
    return out;
}

std::vector<EstimatorSummary> moment_ratios(const std::vector<double>& samples,
                                            int k_max, std::uint64_t seed) {
    const std::size_t t = samples.size();
    if (t < 2) throw std::invalid_argument("moment_ratios: need >= 2 samples");
    std::vector<long double> sums(std::size_t(k_max) + 1, 0.0L);
    for (double v : samples) {
        long double pw = 1.0L;
        for (int k = 1; k <= k_max; ++k) {
            pw *= v;
            sums[std::size_t(k)] += pw;
        }
    }
    auto ratio = [&](int k, long double s1, long double sk, long double cnt) {
        long double mean = s1 / cnt;
        long double mk = sk / cnt;
        long double fact = 1.0L;
        for (int j = 2; j <= k; ++j) fact *= j;
        return double(mk / (fact * std::pow(mean, (long double)k)));
    };

    std::vector<EstimatorSummary> out;
    for (int k = 1; k <= k_max; ++k) {
        double full = ratio(k, sums[1], sums[std::size_t(k)], (long double)t);
        // jackknife over left-out trials
        long double jsum = 0.0L, jss = 0.0L;
        for (double v : samples) {
            long double pw = 1.0L;
            for (int j = 0; j < k; ++j) pw *= v;
            double r = ratio(k, sums[1] - v, sums[std::size_t(k)] - pw, (long double)(t - 1));
            jsum += r;
            jss += (long double)r * r;
        }
        long double jmean = jsum / (long double)t;
        long double jvar = jss / (long double)t - jmean * jmean;
        EstimatorSummary s;
        s.name = "moment_ratio_k" + std::to_string(k);
        s.trials = std::int64_t(t);
        s.mean = full;
        s.variance = double(jvar) * double(t - 1);
        s.se = std::sqrt(std::max(0.0, double(jvar) * double(t - 1)));
        s.ci_lo = s.mean - 1.96 * s.se;
        s.ci_hi = s.mean + 1.96 * s.se;
        s.seed = seed;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace lerw
