#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <unordered_set>
#include <unordered_map>
#include <vector>

namespace lerw {

struct Point {
    std::int32_t x = 0;
    std::int32_t y = 0;

    friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Point a, Point b) { return !(a == b); }
    friend bool operator<(Point a, Point b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline std::int64_t norm2(Point p) {
    return std::int64_t(p.x) * p.x + std::int64_t(p.y) * p.y;
}

// nearest-neighbor adjacency: |a-b| == 1
inline bool adjacent(Point a, Point b) {
    return norm2(a - b) == 1;
}

inline constexpr Point kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

inline std::uint64_t pack(Point p) {
    return (std::uint64_t(std::uint32_t(p.x)) << 32) | std::uint32_t(p.y);
}

inline Point unpack(std::uint64_t k) {
    return {std::int32_t(std::uint32_t(k >> 32)), std::int32_t(std::uint32_t(k))};
}

struct PointHash {
    std::size_t operator()(Point p) const {
        std::uint64_t z = pack(p) + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return std::size_t(z ^ (z >> 31));
    }
};

using PointSet = std::unordered_set<Point, PointHash>;
template <class V>
using PointMap = std::unordered_map<Point, V, PointHash>;

// a walk/path is an ordered vertex sequence; length |w| counts edges
using Path = std::vector<Point>;

inline std::int64_t path_length(const Path& p) {
    return std::int64_t(p.size()) - 1;
}

inline bool is_nearest_neighbor_path(const Path& p) {
    for (std::size_t i = 1; i < p.size(); ++i)
        if (!adjacent(p[i - 1], p[i])) return false;
    return true;
}

inline bool is_self_avoiding(const Path& p) {
    PointSet seen;
    for (Point v : p)
        if (!seen.insert(v).second) return false;
    return true;
}

// inclusive integer rectangle with flat storage helpers
struct Rect {
    std::int32_t x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    std::int64_t width() const { return std::int64_t(x1) - x0 + 1; }
    std::int64_t height() const { return std::int64_t(y1) - y0 + 1; }
    std::int64_t area() const { return width() * height(); }
    bool contains(Point p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    Rect expanded(std::int32_t m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
};

template <class T>
class Grid {
public:
    Grid() = default;
    Grid(Rect r, T fill) : rect_(r), w_(r.width()), data_(std::size_t(r.area()), fill) {}

    const Rect& rect() const { return rect_; }
    bool covers(Point p) const { return rect_.contains(p); }

    T& at(Point p) { return data_[index(p)]; }
    const T& at(Point p) const { return data_[index(p)]; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

private:
    std::size_t index(Point p) const {
        return std::size_t(p.y - rect_.y0) * std::size_t(w_) + std::size_t(p.x - rect_.x0);
    }
    Rect rect_;
    std::int64_t w_ = 0;
    std::vector<T> data_;
};

}  // namespace lerw
