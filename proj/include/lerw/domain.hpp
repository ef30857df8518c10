#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lerw/point.hpp"

namespace lerw {

// Finite subset of Z^2 with O(1) membership via an occupancy/index grid.
// Immutable after construction; safe to share across threads.
class Domain {
public:
    Domain() = default;

    // B_n(center) = { z : |z - center| <= n }, Euclidean norm
    static Domain ball(Point center, std::int32_t n);
    // R_n = { (x,y) : -n <= x,y <= n }
    static Domain square(std::int32_t n);
    static Domain from_points(std::vector<Point> pts);

    // this domain with the given sites removed
    Domain without(const PointSet& removed) const;

    bool contains(Point p) const {
        return index_.covers(p) && index_.at(p) >= 0;
    }
    // dense site index in [0, size()), or -1
    std::int32_t index_of(Point p) const {
        return index_.covers(p) ? index_.at(p) : -1;
    }

    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    const std::vector<Point>& sites() const& { return sites_; }
    // rvalue overload so iterating sites of a temporary stays valid
    std::vector<Point> sites() && { return std::move(sites_); }
    Rect bounding_box() const { return bbox_; }

    // outer boundary: non-sites adjacent to a site
    std::vector<Point> outer_boundary() const;
    // inner boundary: sites adjacent to a non-site
    std::vector<Point> inner_boundary() const;

    // descriptor round-trips ball/square exactly; custom domains carry sites
    std::string descriptor() const;
    static Domain from_descriptor(const std::string& json_text);
    void write_sites(std::ostream& os) const;

private:
    void build_index();

    std::vector<Point> sites_;
    Rect bbox_;
    Grid<std::int32_t> index_;
    std::string kind_ = "custom";
    std::int32_t param_n_ = 0;
    Point param_center_{0, 0};

    friend Domain make_parametric(std::string kind, Point c, std::int32_t n,
                                  std::vector<Point> pts);
};

// connected (4-adjacency) and every component of the complement is infinite,
// decided by flood fill on the bounding box extended by 2
bool is_simply_connected(const Domain& d);

// A_n(x) = { z : n/4 <= |z-x| <= 3n/4, |arg(z-x)| <= pi/4 }, boundaries inclusive
struct ConeAnnulus {
    Point center;
    std::int32_t n = 1;

    bool contains(Point z) const {
        Point d = z - center;
        std::int64_t r2 = norm2(d);
        // exact integer tests: (n/4)^2 <= r2 <= (3n/4)^2 and |arg d| <= pi/4
        std::int64_t nn = std::int64_t(n) * n;
        if (16 * r2 < nn || 16 * r2 > 9 * nn) return false;
        return d.x >= std::abs(d.y) && d.x > 0;
    }

    std::vector<Point> points() const;
};

}  // namespace lerw
