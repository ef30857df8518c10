#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lerw/oracle.hpp"
#include "lerw/rng.hpp"

using namespace lerw;

namespace {

Point rot90(Point p) { return {-p.y, p.x}; }
Point mirror(Point p) { return {-p.x, p.y}; }

Path apply(Point (*f)(Point), const Path& p) {
    Path out;
    for (Point v : p) out.push_back(f(v));
    return out;
}

}  // namespace

TEST_CASE("singleton domain: four exit paths, each 1/4") {
    Domain d = Domain::from_points({{0, 0}});
    PathDistribution dist = lerw_exact_laplacian(d, {0, 0});
    CHECK(dist.support_size() == 4);
    CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    for (Point s : kSteps)
        CHECK(dist.prob({{0, 0}, s}) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("B_1: twelve exit paths, each 1/12") {
    PathDistribution dist = lerw_exact_laplacian(Domain::ball({0, 0}, 1), {0, 0});
    CHECK(dist.support_size() == 12);
    CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
    for (const auto& [p, q] : dist.entries()) {
        CHECK(p.size() == 3);
        CHECK(q == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    }
}

TEST_CASE("B_2: full law normalizes") {
    PathDistribution dist = lerw_exact_laplacian(Domain::ball({0, 0}, 2), {0, 0});
    CHECK(std::abs(dist.total_mass() - 1.0) < 1e-12);
    CHECK(dist.support_size() == 148);
}

TEST_CASE("Green-product values on tiny domains") {
    Domain d0 = Domain::from_points({{0, 0}});
    CHECK(lerw_exact_green_product(d0, {{0, 0}, {1, 0}}) ==
          doctest::Approx(0.25).epsilon(1e-14));

    // 4^{-2} * G_{B_1}(0,0) * G_{B_1 \ {0}}((1,0),(1,0)) = (1/16)(4/3)(1)
    Domain b1 = Domain::ball({0, 0}, 1);
    CHECK(lerw_exact_green_product(b1, {{0, 0}, {1, 0}, {2, 0}}) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-13));

    CHECK_THROWS_AS((void)lerw_exact_green_product(b1, {{0, 0}, {1, 0}}),
                    std::invalid_argument);  // does not exit
    CHECK_THROWS_AS((void)lerw_exact_green_product(b1, {{0, 0}, {1, 1}}),
                    std::invalid_argument);  // not a lattice path
}

TEST_CASE("cross-oracle agreement on every exit path") {
    for (std::int32_t r : {1, 2}) {
        Domain d = Domain::ball({0, 0}, r);
        PathDistribution dist = lerw_exact_laplacian(d, {0, 0});
        GreenProductOracle gp(d);
        double worst = 0.0;
        for (const auto& [p, q] : dist.entries())
            worst = std::max(worst, std::abs(gp.prob(p) - q));
        CAPTURE(r);
        CHECK(worst < 1e-10);
    }

    // irregular 11-site domain, start off-center
    Domain blob = Domain::from_points({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1},
                                       {-1, 0}, {0, -1}, {1, -1}, {2, 1},
                                       {-1, 1}, {0, 2}});
    PathDistribution dist = lerw_exact_laplacian(blob, {1, 0});
    CHECK(std::abs(dist.total_mass() - 1.0) < 1e-12);
    GreenProductOracle gp(blob);
    double worst = 0.0;
    for (const auto& [p, q] : dist.entries())
        worst = std::max(worst, std::abs(gp.prob(p) - q));
    CHECK(worst < 1e-10);
}

TEST_CASE("oracle refuses oversized domains") {
    CHECK_THROWS_AS((void)lerw_exact_laplacian(Domain::ball({0, 0}, 3), {0, 0}),
                    std::invalid_argument);
}

TEST_CASE("truncation pushforward") {
    Domain b2 = Domain::ball({0, 0}, 2);
    PathDistribution dist = lerw_exact_laplacian(b2, {0, 0});

    // l = domain radius: identity
    PathDistribution same = truncate_distribution(dist, 2);
    CHECK(PathDistribution::tv_distance(dist, same) == 0.0);

    // l = 1: the 12-outcome pmf, mass preserved
    PathDistribution mu = truncate_distribution(dist, 1);
    CHECK(mu.support_size() == 12);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [p, q] : mu.entries()) CHECK(p.size() == 3);
}

TEST_CASE("exact length pmf") {
    Domain d0 = Domain::from_points({{0, 0}});
    auto pmf0 = exact_length_pmf(lerw_exact_laplacian(d0, {0, 0}));
    REQUIRE(pmf0.size() == 1);
    CHECK(pmf0.at(1) == doctest::Approx(1.0).epsilon(1e-14));

    auto pmf1 = exact_length_pmf(lerw_exact_laplacian(Domain::ball({0, 0}, 1), {0, 0}));
    REQUIRE(pmf1.size() == 1);
    CHECK(pmf1.at(2) == doctest::Approx(1.0).epsilon(1e-13));

    auto pmf2 = exact_length_pmf(lerw_exact_laplacian(Domain::ball({0, 0}, 2), {0, 0}));
    CHECK(pmf2.size() > 1);
    double mass = 0.0, mean = 0.0;
    for (auto [len, q] : pmf2) {
        mass += q;
        mean += double(len) * q;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    // frozen from the exact solve; the Monte Carlo suite leans on this number
    CHECK(mean == doctest::Approx(3.228796844).epsilon(1e-8));
}

TEST_CASE("domain Markov property, exactly") {
    Domain b2 = Domain::ball({0, 0}, 2);
    CHECK(domain_markov_check(b2, {}) == 0.0);
    CHECK(domain_markov_check(b2, {{0, 0}}) < 1e-10);
    double worst = 0.0;
    for (Point v : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}})
        worst = std::max(worst, domain_markov_check(b2, {{0, 0}, v}));
    CHECK(worst < 1e-10);

    Path absurd = {{0, 0}, {1, 0}, {0, 0}};  // not self-avoiding: never a prefix
    CHECK_THROWS_AS((void)domain_markov_check(b2, absurd), std::invalid_argument);
}

TEST_CASE("exact law is invariant under the eight lattice symmetries") {
    PathDistribution dist = lerw_exact_laplacian(Domain::ball({0, 0}, 2), {0, 0});
    double worst = 0.0;
    for (const auto& [p, q] : dist.entries()) {
        worst = std::max(worst, std::abs(dist.prob(apply(rot90, p)) - q));
        worst = std::max(worst, std::abs(dist.prob(apply(mirror, p)) - q));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("distribution CSV export") {
    PathDistribution dist = lerw_exact_laplacian(Domain::from_points({{0, 0}}), {0, 0});
    std::ostringstream os;
    dist.write_csv(os);
    std::string text = os.str();
    CHECK(text.find("path,probability\n") == 0);
    CHECK(text.find("0,0-1,0,0.25") != std::string::npos);
}

TEST_CASE("conditioned sequential law: forbidden set and truncation") {
    // forbidding one neighbor of the start redistributes its mass
    Domain b1 = Domain::ball({0, 0}, 1);
    SequentialLawOptions opt;
    opt.forbidden.insert({1, 0});
    PathDistribution dist = lerw_sequential_law(b1, {0, 0}, opt);
    CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [p, q] : dist.entries())
        for (Point v : p) CHECK(v != Point{1, 0});

    // truncated law from a larger ball: stays normalized, support of 3-vertex
    // prefixes
    SequentialLawOptions trunc;
    trunc.truncate = {{Point{0, 0}, 1}};
    PathDistribution mu = lerw_sequential_law(Domain::ball({0, 0}, 4), {0, 0}, trunc);
    CHECK(mu.support_size() == 12);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}
