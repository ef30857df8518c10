#include "lerw/wilson.hpp"

#include <ostream>
#include <stdexcept>

#include "lerw/loop_erase.hpp"

namespace lerw {

WiredTree::WiredTree(const Domain& d, std::vector<std::int32_t> parent)
    : dom_(&d), parent_(std::move(parent)) {}

bool WiredTree::parent_is_root(Point v) const {
    std::int32_t i = dom_->index_of(v);
    if (i < 0) throw std::invalid_argument("WiredTree: vertex not in domain");
    return parent_[std::size_t(i)] < 0;
}

Path WiredTree::branch(Point v) const {
    std::int32_t i = dom_->index_of(v);
    if (i < 0) throw std::invalid_argument("WiredTree::branch: vertex not in domain");
    Path p;
    while (i >= 0) {
        p.push_back(dom_->sites()[std::size_t(i)]);
        i = parent_[std::size_t(i)];
    }
    return p;
}

bool WiredTree::is_spanning_and_acyclic() const {
    const std::size_t n = parent_.size();
    // every site reaches the root without revisiting; depth-bounded chase
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t hops = 0;
        std::int32_t i = std::int32_t(s);
        while (i >= 0) {
            if (++hops > n) return false;  // cycle
            i = parent_[std::size_t(i)];
        }
    }
    return true;
}

void WiredTree::dump(std::ostream& os) const {
    const auto& sites = dom_->sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        os << sites[i].x << "," << sites[i].y << " -> ";
        std::int32_t p = parent_[i];
        if (p < 0)
            os << "ROOT\n";
        else
            os << sites[std::size_t(p)].x << "," << sites[std::size_t(p)].y << "\n";
    }
}

WiredTree wilson_ust(const Domain& d, RngStream& rng,
                     const std::vector<Point>& scan_order) {
    if (d.empty()) throw std::invalid_argument("wilson_ust: empty domain");
    std::vector<std::int32_t> parent(d.size(), -2);  // -2 = unattached, -1 = root edge

    LoopEraser eraser(d.bounding_box());
    auto in_tree = [&](Point p) {
        std::int32_t i = d.index_of(p);
        return i < 0 || parent[std::size_t(i)] != -2;  // boundary is wired
    };

    for (Point v : scan_order) {
        std::int32_t vi = d.index_of(v);
        if (vi < 0) throw std::invalid_argument("wilson_ust: scan point not in domain");
        if (parent[std::size_t(vi)] != -2) continue;

        eraser.reset(v);
        Point z = v;
        while (!in_tree(z)) {
            z = z + kSteps[rng.next_step()];
            eraser.step(z);
        }
        const Path& path = eraser.path();
        for (std::size_t j = 0; j + 1 < path.size(); ++j) {
            std::int32_t a = d.index_of(path[j]);
            std::int32_t b = d.index_of(path[j + 1]);
            parent[std::size_t(a)] = b;  // b == -1 exactly when the walk left D
        }
    }
    return WiredTree(d, std::move(parent));
}

WiredTree wilson_ust(const Domain& d, RngStream& rng) {
    return wilson_ust(d, rng, d.sites());
}

Path ust_branch(const WiredTree& tree, Point v) {
    return tree.branch(v);
}

}  // namespace lerw
