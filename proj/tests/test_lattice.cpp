#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lerw/domain.hpp"

using namespace lerw;

namespace {

// independent count of |B_n| via per-row integer square roots
std::int64_t ball_count_by_rows(std::int32_t n) {
    std::int64_t total = 0;
    for (std::int32_t x = -n; x <= n; ++x) {
        std::int64_t rem = std::int64_t(n) * n - std::int64_t(x) * x;
        std::int64_t y = std::int64_t(std::sqrt(double(rem)));
        while (y * y > rem) --y;
        while ((y + 1) * (y + 1) <= rem) ++y;
        total += 2 * y + 1;
    }
    return total;
}

}  // namespace

TEST_CASE("adjacency is the four-neighbor relation") {
    CHECK(adjacent({0, 0}, {1, 0}));
    CHECK(adjacent({3, -2}, {3, -3}));
    CHECK_FALSE(adjacent({0, 0}, {1, 1}));
    CHECK_FALSE(adjacent({0, 0}, {0, 0}));
    CHECK_FALSE(adjacent({0, 0}, {2, 0}));
}

TEST_CASE("ball sizes") {
    CHECK(Domain::ball({0, 0}, 0).size() == 1);
    CHECK(Domain::ball({0, 0}, 1).size() == 5);
    CHECK(Domain::ball({0, 0}, 2).size() == 13);
    for (std::int32_t n : {3, 5, 11, 17, 33, 64})
        CHECK(std::int64_t(Domain::ball({0, 0}, n).size()) == ball_count_by_rows(n));
}

TEST_CASE("square sizes") {
    CHECK(Domain::square(0).size() == 1);
    CHECK(Domain::square(1).size() == 9);
    CHECK(Domain::square(2).size() == 25);
}

TEST_CASE("boundaries") {
    Domain origin = Domain::from_points({{0, 0}});
    auto ob = origin.outer_boundary();
    CHECK(ob.size() == 4);

    Domain b1 = Domain::ball({0, 0}, 1);
    CHECK(b1.outer_boundary().size() == 8);
    auto ib = b1.inner_boundary();
    CHECK(ib.size() == 4);
    for (Point p : ib) CHECK(norm2(p) == 1);  // origin excluded

    // membership invariants on assorted domains
    for (const Domain& d : {Domain::ball({2, -3}, 4), Domain::square(3)}) {
        for (Point p : d.outer_boundary()) CHECK_FALSE(d.contains(p));
        for (Point p : d.inner_boundary()) CHECK(d.contains(p));
    }

    CHECK(Domain().outer_boundary().empty());
    CHECK(Domain().inner_boundary().empty());
}

TEST_CASE("simple connectivity") {
    for (std::int32_t n = 0; n <= 64; ++n) {
        CAPTURE(n);
        CHECK(is_simply_connected(Domain::ball({0, 0}, n)));
        if (n <= 32) CHECK(is_simply_connected(Domain::square(n)));
    }

    // annulus: the complement has a finite component
    PointSet hole;
    for (Point p : Domain::ball({0, 0}, 1).sites()) hole.insert(p);
    Domain annulus = Domain::ball({0, 0}, 3).without(hole);
    CHECK_FALSE(is_simply_connected(annulus));

    // two squares touching only diagonally are not 4-connected
    Domain diag = Domain::from_points({{0, 0}, {1, 1}});
    CHECK_FALSE(is_simply_connected(diag));
}

TEST_CASE("cone annulus membership") {
    ConeAnnulus a{{1, 0}, 2};
    CHECK(a.contains({2, 0}));       // |d| = 1 in [0.5, 1.5], arg 0
    CHECK(a.contains({2, 1}));       // |d| = sqrt2 <= 1.5, arg = pi/4 inclusive
    CHECK_FALSE(a.contains({1, 2})); // arg = pi/2
    CHECK_FALSE(a.contains({1, 0})); // center itself: |d| = 0 < n/4

    for (std::int32_t n : {1, 2, 5, 12, 40}) {
        ConeAnnulus an{{3, -1}, n};
        for (Point z : an.points()) {
            CHECK(norm2(z - an.center) <= std::int64_t(n) * n);  // inside B_n(x)
            CHECK(z != an.center);
        }
        CHECK_FALSE(an.contains(an.center));
    }
}

TEST_CASE("serialization round trips") {
    Domain b = Domain::ball({2, 1}, 3);
    Domain b2 = Domain::from_descriptor(b.descriptor());
    CHECK(b2.size() == b.size());
    for (Point p : b.sites()) CHECK(b2.contains(p));

    Domain custom = Domain::from_points({{0, 0}, {1, 0}, {5, 5}});
    Domain c2 = Domain::from_descriptor(custom.descriptor());
    CHECK(c2.size() == 3);
    CHECK(c2.contains({5, 5}));

    std::ostringstream os;
    custom.write_sites(os);
    CHECK(os.str() == "0,0\n1,0\n5,5\n");
}
