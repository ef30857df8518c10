#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "lerw/conditioned.hpp"
#include "lerw/estimators.hpp"

using namespace lerw;

namespace {

// B_2 instance conditioned to exit through the right arc of the boundary
struct ArcInstance {
    Domain d = Domain::ball({0, 0}, 2);
    PointSet k1, k2;
    ArcInstance() {
        for (Point p : d.outer_boundary())
            (p.x >= 2 ? k1 : k2).insert(p);
    }
};

// coarse trajectory fingerprint: (exit vertex, banded length); fine enough to
// expose a wrong sampler, coarse enough that empirical TV noise stays small
using Fingerprint = std::pair<Point, int>;
Fingerprint fingerprint(const Path& w) {
    int band = int(std::min<std::size_t>((w.size() - 1 + 1) / 2, 10));
    return {w.back(), band};
}

double tv(const std::map<Fingerprint, double>& a, const std::map<Fingerprint, double>& b) {
    double acc = 0.0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        acc += std::abs(v - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : b)
        if (!a.count(k)) acc += v;
    return acc / 2.0;
}

}  // namespace

TEST_CASE("constant h reproduces the simple random walk") {
    HTransformChain chain(HittingField::exit_before_hit(Domain::ball({0, 0}, 3), {}));
    for (Point p : Domain::ball({0, 0}, 2).sites())
        for (Point s : kSteps)
            CHECK(chain.transition_probability(p, p + s) ==
                  doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("transition rows sum to one and respect h ratios") {
    ArcInstance inst;
    HTransformChain chain(
        HittingField::hitting_probability(inst.k1, inst.k2, inst.d));
    for (Point p : inst.d.sites()) {
        if (chain.h(p) <= 0.0) continue;
        double row = 0.0;
        for (Point s : kSteps) row += chain.transition_probability(p, p + s);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
        // normalized weights equal (1/4) h(y)/h(x) by harmonicity
        for (Point s : kSteps)
            CHECK(chain.transition_probability(p, p + s) ==
                  doctest::Approx(0.25 * chain.h(p + s) / chain.h(p)).epsilon(1e-9));
    }
}

TEST_CASE("conditioned sampler matches rejection sampling on a B_2 arc instance") {
    ArcInstance inst;
    HittingField h = HittingField::hitting_probability(inst.k1, inst.k2, inst.d);
    HTransformChain chain(h);
    StoppingRule stop = StoppingRule::exit(inst.d);

    const std::int64_t trials = 30000;
    std::map<Fingerprint, double> cond, rej;

    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng(501, std::uint64_t(i));
        Trajectory t = sample_conditioned({0, 0}, chain, stop, rng);
        CHECK(inst.k1.count(t.vertices.back()) == 1);  // never lands in K2
        cond[fingerprint(t.vertices)] += 1.0 / double(trials);
        // path-weight identity on every sampled trajectory
        CHECK(path_weight_identity_residual(chain, t.vertices) < 1e-10);
    }

    std::int64_t got = 0;
    for (std::uint64_t i = 0; got < trials; ++i) {
        RngStream rng(502, i);
        Trajectory t = run_until({0, 0}, stop, rng);
        if (!inst.k1.count(t.vertices.back())) continue;  // rejected
        rej[fingerprint(t.vertices)] += 1.0 / double(trials);
        ++got;
    }

    CHECK(tv(cond, rej) < 0.04);
}

TEST_CASE("conditioned Green identity holds empirically: visits to the start") {
    ArcInstance inst;
    HTransformChain chain(
        HittingField::hitting_probability(inst.k1, inst.k2, inst.d));
    StoppingRule stop = StoppingRule::exit(inst.d);

    const std::int64_t trials = 50000;
    std::vector<double> visits;
    visits.reserve(trials);
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng(503, std::uint64_t(i));
        Trajectory t = sample_conditioned({0, 0}, chain, stop, rng);
        double v = 0;
        for (std::size_t j = 0; j + 1 < t.vertices.size(); ++j)
            if (t.vertices[j] == Point{0, 0}) v += 1;
        visits.push_back(v);
    }
    EstimatorSummary s = summarize("visits", visits, 503);
    GreenOperator g(inst.d);
    CHECK(std::abs(s.mean - g.green({0, 0}, {0, 0})) < 3 * s.se);
}

TEST_CASE("null conditioning is rejected") {
    ArcInstance inst;
    HTransformChain chain(
        HittingField::hitting_probability(inst.k1, inst.k2, inst.d));
    StoppingRule stop = StoppingRule::exit(inst.d);
    RngStream rng(1, 1);
    // (-3,0) lies in K2 itself: h = 0
    CHECK_THROWS_AS((void)sample_conditioned({-3, 0}, chain, stop, rng),
                    std::invalid_argument);
}

TEST_CASE("mk parameter validation") {
    MkParams bad;
    bad.m = 10;
    bad.n = 10;
    bad.outer_n = 20;
    bad.x = {10, 0};
    CHECK(!bad.violations().empty());  // sqrt(2)*10 + 10 > 20

    MkParams good;
    good.m = 1;
    good.n = 2;
    good.outer_n = 5;
    good.x = {1, 0};
    good.k = {{0, 0}};
    CHECK(good.violations().empty());

    MkParams enclosed;  // x surrounded by K: conditioning event null
    enclosed.m = 1;
    enclosed.n = 2;
    enclosed.outer_n = 8;
    enclosed.x = {1, 0};
    enclosed.k = {{0, 0}, {1, 1}, {1, -1}};  // (2,0) still open, so fine
    CHECK(enclosed.violations().empty());
    CHECK_NOTHROW(MkSampler{enclosed});
}

TEST_CASE("alpha geometry: all vertices except the last stay inside B_n(x)") {
    MkParams p;
    p.m = 1;
    p.n = 2;
    p.outer_n = 8;
    p.x = {1, 0};
    p.k = {{0, 0}};
    MkSampler sampler(p);
    LoopEraser eraser = sampler.make_eraser();
    for (int i = 0; i < 2000; ++i) {
        RngStream rng(600, std::uint64_t(i));
        Path alpha = sampler.sample_alpha(rng, eraser);
        REQUIRE(alpha.size() >= 2);
        REQUIRE(alpha.front() == p.x);
        for (std::size_t j = 0; j + 1 < alpha.size(); ++j)
            REQUIRE(norm2(alpha[j] - p.x) <= std::int64_t(p.n) * p.n);
        REQUIRE(norm2(alpha.back() - p.x) > std::int64_t(p.n) * p.n);
        REQUIRE(is_self_avoiding(alpha));
    }
}

TEST_CASE("mk with K = {0}: Monte Carlo mean matches the exact oracle") {
    MkParams p;
    p.m = 1;
    p.n = 2;
    p.outer_n = 5;
    p.x = {1, 0};
    p.k = {{0, 0}};
    MkSampler sampler(p);

    double exact = sampler.exact_mean_value();
    CHECK(exact > 0.0);

    const std::int64_t trials = 100000;
    LoopEraser eraser = sampler.make_eraser();
    std::vector<double> vals;
    std::int64_t zeros = 0;
    vals.reserve(trials);
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng(601, std::uint64_t(i));
        auto s = sampler.sample(rng, eraser);
        vals.push_back(double(s.value));
        if (s.value == 0) ++zeros;
    }
    EstimatorSummary s = summarize("mk", vals, 601);
    CHECK(std::abs(s.mean - exact) < 3 * s.se);
    // alpha can exit B_n(x) without touching the annulus
    CHECK(zeros > 0);
}

TEST_CASE("mk with K empty and m = 0 reduces to the truncated LERW") {
    MkParams p;
    p.m = 0;
    p.n = 1;
    p.outer_n = 4;
    p.x = {0, 0};
    MkSampler sampler(p);

    const std::int64_t trials = 30000;
    std::map<Path, double> a, b;
    LoopEraser eraser = sampler.make_eraser();
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng(602, std::uint64_t(i));
        a[sampler.sample_alpha(rng, eraser)] += 1.0 / double(trials);
    }
    LoopEraser plain(Rect{-6, -6, 6, 6});
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng(603, std::uint64_t(i));
        lerw_to_ball_exit(4, rng, plain);
        Path alpha;
        for (Point v : plain.path()) {
            alpha.push_back(v);
            if (norm2(v) > 1) break;
        }
        b[alpha] += 1.0 / double(trials);
    }
    double acc = 0.0;
    for (const auto& [k, v] : a) acc += std::abs(v - (b.count(k) ? b.at(k) : 0.0));
    for (const auto& [k, v] : b)
        if (!a.count(k)) acc += v;
    CHECK(acc / 2.0 < 0.02);
}

TEST_CASE("mk moment estimates: scaling and the second-moment guard") {
    MkParams p;
    p.m = 8;
    p.n = 16;
    p.outer_n = 256;
    p.x = {8, 0};
    // inner boundary of R_8 minus the right side (which contains x)
    for (std::int32_t y = -8; y <= 8; ++y)
        for (std::int32_t x = -8; x <= 8; ++x)
            if ((std::abs(x) == 8 || std::abs(y) == 8) && x < 8) p.k.push_back({x, y});

    auto [m1, m2] = estimate_mk_moments(p, 2000, 604, 2);
    CHECK(m1.mean > 0.0);
    double ratio = m2.mean / (m1.mean * m1.mean);
    double logs = std::log(256.0 / 16.0);
    CHECK(ratio <= 10.0 * logs * logs);

    // doubling trials roughly halves the variance of the mean
    auto [m1b, m2b] = estimate_mk_moments(p, 4000, 604, 2);
    double var_ratio = (m1.se * m1.se) / (m1b.se * m1b.se);
    CHECK(var_ratio > 1.6);
    CHECK(var_ratio < 2.4);
}
