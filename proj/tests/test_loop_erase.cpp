#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>

#include "lerw/loop_erase.hpp"
#include "lerw/rng.hpp"

using namespace lerw;

namespace {

// brute-force oracle: delete each cycle at the moment it closes
Path erase_cycles_as_they_close(const Path& lambda) {
    Path out;
    for (Point v : lambda) {
        auto it = std::find(out.begin(), out.end(), v);
        if (it != out.end())
            out.erase(it + 1, out.end());
        else
            out.push_back(v);
    }
    return out;
}

Path random_walk_path(RngStream& rng, int len) {
    Path p{{0, 0}};
    for (int i = 0; i < len; ++i) p.push_back(p.back() + kSteps[rng.next_step()]);
    return p;
}

}  // namespace

TEST_CASE("loop erasure of hand-traced paths") {
    Path self_avoiding = {{0, 0}, {1, 0}, {2, 0}, {2, 1}};
    CHECK(loop_erase(self_avoiding) == self_avoiding);

    Path small = {{0, 0}, {1, 0}, {0, 0}, {0, 1}};
    CHECK(loop_erase(small) == Path{{0, 0}, {0, 1}});

    Path square_loop = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {0, 1}};
    CHECK(loop_erase(square_loop) == Path{{0, 0}, {0, 1}});
}

TEST_CASE("loop erasure equals the cycle-deletion oracle on random walks") {
    RngStream rng(101, 0);
    for (int trial = 0; trial < 3000; ++trial) {
        Path lambda = random_walk_path(rng, 1 + int(rng.next_below(60)));
        Path got = loop_erase(lambda);
        Path want = erase_cycles_as_they_close(lambda);
        REQUIRE(got == want);
    }
}

TEST_CASE("output properties: self-avoiding, endpoints, subset, idempotent") {
    RngStream rng(102, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        Path lambda = random_walk_path(rng, 1 + int(rng.next_below(80)));
        Path erased = loop_erase(lambda);
        REQUIRE(is_self_avoiding(erased));
        REQUIRE(is_nearest_neighbor_path(erased));
        REQUIRE(erased.front() == lambda.front());
        REQUIRE(erased.back() == lambda.back());
        PointSet support(lambda.begin(), lambda.end());
        for (Point v : erased) REQUIRE(support.count(v) == 1);
        REQUIRE(loop_erase(erased) == erased);
    }
}

TEST_CASE("streaming eraser matches the batch function") {
    RngStream rng(103, 0);
    LoopEraser eraser(Rect{-100, -100, 100, 100});
    for (int trial = 0; trial < 2000; ++trial) {
        Path lambda = random_walk_path(rng, 1 + int(rng.next_below(90)));
        eraser.reset(lambda[0]);
        for (std::size_t i = 1; i < lambda.size(); ++i) eraser.step(lambda[i]);
        REQUIRE(eraser.path() == loop_erase(lambda));
    }
}

TEST_CASE("reverse loop erasure") {
    Path self_avoiding = {{0, 0}, {1, 0}, {1, 1}};
    CHECK(reverse_loop_erase(self_avoiding) == self_avoiding);

    Path small = {{0, 0}, {1, 0}, {0, 0}, {0, 1}};
    CHECK(reverse_loop_erase(small) == Path{{0, 0}, {0, 1}});

    // brute-force search for a path where forward and backward erasure differ
    RngStream rng(104, 0);
    bool found = false;
    Path witness;
    for (int trial = 0; trial < 20000 && !found; ++trial) {
        Path lambda = random_walk_path(rng, 2 + int(rng.next_below(7)));
        if (loop_erase(lambda) != reverse_loop_erase(lambda)) {
            found = true;
            witness = lambda;
        }
    }
    REQUIRE(found);
    Path rev(witness.rbegin(), witness.rend());
    Path expect = loop_erase(rev);
    std::reverse(expect.begin(), expect.end());
    CHECK(reverse_loop_erase(witness) == expect);
}

TEST_CASE("count_steps conventions") {
    Path gamma = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    CHECK(count_steps(gamma) == 4);  // 5 vertices, 4 edges

    Domain b1 = Domain::ball({0, 0}, 1);
    Path inside = {{0, 0}, {1, 0}, {2, 0}};
    CHECK(count_steps(inside, &b1) == 2);  // vertices 0 and (1,0)

    Domain big = Domain::ball({0, 0}, 10);
    CHECK(count_steps(gamma, &big) == 5);  // whole path inside: vertex count
}

TEST_CASE("empty path is rejected") {
    CHECK_THROWS_AS((void)loop_erase(Path{}), std::invalid_argument);
}

TEST_CASE("erasure stays within a small multiple of a plain pass") {
    // coarse linearity check; WARN only, timing is machine-dependent
    RngStream rng(105, 0);
    Path lambda = random_walk_path(rng, 2000000);

    auto t0 = std::chrono::steady_clock::now();
    long double checksum = 0;
    for (Point v : lambda) checksum += v.x + v.y;
    auto t1 = std::chrono::steady_clock::now();
    Path erased = loop_erase(lambda);
    auto t2 = std::chrono::steady_clock::now();

    double plain = std::chrono::duration<double>(t1 - t0).count();
    double erase = std::chrono::duration<double>(t2 - t1).count();
    CHECK(checksum != 12345.6789);  // keep the plain pass alive
    CHECK(erased.size() <= lambda.size());
    WARN_LE(erase, 60.0 * plain);  // hash-table constant factors, not growth
    // growth check: double the input, expect at most ~3x the time
    Path lambda2 = random_walk_path(rng, 4000000);
    auto t3 = std::chrono::steady_clock::now();
    Path erased2 = loop_erase(lambda2);
    auto t4 = std::chrono::steady_clock::now();
    double erase2 = std::chrono::duration<double>(t4 - t3).count();
    CHECK(erased2.size() <= lambda2.size());
    WARN_LE(erase2, 3.5 * erase + 0.05);
}
