#include "lerw/domain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace lerw {

namespace {

Rect bounding_box_of(const std::vector<Point>& pts) {
    Rect r;
    if (pts.empty()) return r;
    r = {pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (Point p : pts) {
        r.x0 = std::min(r.x0, p.x);
        r.x1 = std::max(r.x1, p.x);
        r.y0 = std::min(r.y0, p.y);
        r.y1 = std::max(r.y1, p.y);
    }
    return r;
}

}  // namespace

void Domain::build_index() {
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    bbox_ = bounding_box_of(sites_);
    if (sites_.empty()) return;
    index_ = Grid<std::int32_t>(bbox_, -1);
    for (std::size_t i = 0; i < sites_.size(); ++i)
        index_.at(sites_[i]) = std::int32_t(i);
}

Domain make_parametric(std::string kind, Point c, std::int32_t n, std::vector<Point> pts) {
    Domain d;
    d.sites_ = std::move(pts);
    d.kind_ = std::move(kind);
    d.param_center_ = c;
    d.param_n_ = n;
    d.build_index();
    return d;
}

Domain Domain::ball(Point center, std::int32_t n) {
    if (n < 0) throw std::invalid_argument("Domain::ball: negative radius");
    std::vector<Point> pts;
    std::int64_t n2 = std::int64_t(n) * n;
    for (std::int32_t dy = -n; dy <= n; ++dy)
        for (std::int32_t dx = -n; dx <= n; ++dx)
            if (std::int64_t(dx) * dx + std::int64_t(dy) * dy <= n2)
                pts.push_back({center.x + dx, center.y + dy});
    return make_parametric("ball", center, n, std::move(pts));
}

Domain Domain::square(std::int32_t n) {
    if (n < 0) throw std::invalid_argument("Domain::square: negative half-side");
    std::vector<Point> pts;
    pts.reserve((2 * std::size_t(n) + 1) * (2 * std::size_t(n) + 1));
    for (std::int32_t y = -n; y <= n; ++y)
        for (std::int32_t x = -n; x <= n; ++x) pts.push_back({x, y});
    return make_parametric("square", {0, 0}, n, std::move(pts));
}

Domain Domain::from_points(std::vector<Point> pts) {
    return make_parametric("custom", {0, 0}, 0, std::move(pts));
}

Domain Domain::without(const PointSet& removed) const {
    std::vector<Point> pts;
    pts.reserve(sites_.size());
    for (Point p : sites_)
        if (!removed.count(p)) pts.push_back(p);
    return from_points(std::move(pts));
}

std::vector<Point> Domain::outer_boundary() const {
    PointSet out;
    for (Point p : sites_)
        for (Point s : kSteps) {
            Point q = p + s;
            if (!contains(q)) out.insert(q);
        }
    std::vector<Point> v(out.begin(), out.end());
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Point> Domain::inner_boundary() const {
    std::vector<Point> v;
    for (Point p : sites_)
        for (Point s : kSteps)
            if (!contains(p + s)) {
                v.push_back(p);
                break;
            }
    return v;
}

std::string Domain::descriptor() const {
    nlohmann::json j;
    j["kind"] = kind_;
    if (kind_ == "ball") {
        j["center"] = {param_center_.x, param_center_.y};
        j["radius"] = param_n_;
    } else if (kind_ == "square") {
        j["n"] = param_n_;
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (Point p : sites_) arr.push_back({p.x, p.y});
        j["sites"] = std::move(arr);
    }
    return j.dump();
}

Domain Domain::from_descriptor(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") {
        auto c = j.at("center");
        return ball({c.at(0).get<std::int32_t>(), c.at(1).get<std::int32_t>()},
                    j.at("radius").get<std::int32_t>());
    }
    if (kind == "square") return square(j.at("n").get<std::int32_t>());
    if (kind == "custom") {
        std::vector<Point> pts;
        for (const auto& e : j.at("sites"))
            pts.push_back({e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>()});
        return from_points(std::move(pts));
    }
    throw std::invalid_argument("Domain::from_descriptor: unknown kind '" + kind + "'");
}

void Domain::write_sites(std::ostream& os) const {
    for (Point p : sites_) os << p.x << "," << p.y << "\n";
}

bool is_simply_connected(const Domain& d) {
    if (d.empty()) return true;

    // connectivity of D itself
    Rect box = d.bounding_box().expanded(2);
    Grid<std::uint8_t> seen(box, 0);
    std::vector<Point> stack{d.sites().front()};
    seen.at(stack.back()) = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        Point p = stack.back();
        stack.pop_back();
        ++reached;
        for (Point s : kSteps) {
            Point q = p + s;
            if (d.contains(q) && !seen.at(q)) {
                seen.at(q) = 1;
                stack.push_back(q);
            }
        }
    }
    if (reached != d.size()) return false;

    // complement components within the extended box: any component not
    // touching the box frame is finite
    seen.fill(0);
    for (std::int32_t y = box.y0; y <= box.y1; ++y)
        for (std::int32_t x = box.x0; x <= box.x1; ++x) {
            Point p{x, y};
            if (d.contains(p) || seen.at(p)) continue;
            bool touches_frame = false;
            stack.assign(1, p);
            seen.at(p) = 1;
            while (!stack.empty()) {
                Point q = stack.back();
                stack.pop_back();
                if (q.x == box.x0 || q.x == box.x1 || q.y == box.y0 || q.y == box.y1)
                    touches_frame = true;
                for (Point s : kSteps) {
                    Point r = q + s;
                    if (!box.contains(r) || d.contains(r) || seen.at(r)) continue;
                    seen.at(r) = 1;
                    stack.push_back(r);
                }
            }
            if (!touches_frame) return false;
        }
    return true;
}

std::vector<Point> ConeAnnulus::points() const {
    std::vector<Point> v;
    std::int32_t r = (3 * n) / 4 + 1;
    for (std::int32_t dy = -r; dy <= r; ++dy)
        for (std::int32_t dx = 0; dx <= r; ++dx) {
            Point z{center.x + dx, center.y + dy};
            if (contains(z)) v.push_back(z);
        }
    return v;
}

}  // namespace lerw
