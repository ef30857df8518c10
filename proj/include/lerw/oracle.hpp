#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/point.hpp"

namespace lerw {

// Exact finite law over self-avoiding exit paths, used as ground truth for
// every statistical test.
class PathDistribution {
public:
    void add(Path p, double prob);

    double prob(const Path& p) const;
    double total_mass() const;
    std::size_t support_size() const { return entries_.size(); }
    const std::map<Path, double>& entries() const& { return entries_; }
    // rvalue overload keeps iteration over a temporary's entries valid
    std::map<Path, double> entries() && { return std::move(entries_); }

    static double tv_distance(const PathDistribution& a, const PathDistribution& b);

    // rows: dash-separated "x,y" vertices, probability
    void write_csv(std::ostream& os) const;

private:
    std::map<Path, double> entries_;
};

struct SequentialLawOptions {
    PointSet forbidden;  // extension and escape solves avoid these sites
    // stop once the tip leaves the ball |z - center| <= radius
    std::optional<std::pair<Point, std::int32_t>> truncate;
    std::size_t max_enumeration_sites = 26;
};

// Exact law of the loop-erased walk grown site by site: a partial path with
// tip t extends to a neighbor y with probability proportional to
// (1/4) P^y{ sigma_D < xi_{gamma u forbidden} }, boundary moves terminal.
// This is the one-step consequence of the domain Markov property.
PathDistribution lerw_sequential_law(const Domain& d, Point start,
                                     const SequentialLawOptions& opt = {});

// full LERW exit law on a tiny domain (refuses > 15 sites)
PathDistribution lerw_exact_laplacian(const Domain& d, Point start);

// Independent oracle: P(L = omega) as the product of Green diagonals on
// shrinking domains.  Memoizes solves across calls.
class GreenProductOracle {
public:
    explicit GreenProductOracle(const Domain& d);
    double prob(const Path& omega) const;

private:
    const Domain& dom_;
    mutable std::map<std::pair<std::uint32_t, std::int32_t>, double> memo_;
};

double lerw_exact_green_product(const Domain& d, const Path& omega);

// pushforward under truncation at the first exit of B_l (origin-centered)
PathDistribution truncate_distribution(const PathDistribution& dist, std::int32_t l);

// pushforward under the step count |.|
std::map<std::int64_t, double> exact_length_pmf(const PathDistribution& dist);

// TV distance between the exact conditional continuation law given a prefix
// and the law grown from a walk conditioned to exit before hitting the prefix
double domain_markov_check(const Domain& d, const Path& prefix);

}  // namespace lerw
