#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/point.hpp"
#include "lerw/rng.hpp"

namespace lerw {

// Uniform spanning tree of a finite domain with the whole outer boundary
// contracted ("wired") to a single root.
class WiredTree {
public:
    WiredTree(const Domain& d, std::vector<std::int32_t> parent);

    const Domain& domain() const { return *dom_; }

    // parent site index, or -1 for the root
    std::int32_t parent_index(std::size_t site) const { return parent_[site]; }
    bool parent_is_root(Point v) const;

    // parent-chain from v to the root; last vertex is v's last in-domain site,
    // the contracted root itself is implicit
    Path branch(Point v) const;

    std::size_t edge_count() const { return parent_.size(); }
    bool is_spanning_and_acyclic() const;

    // "x,y -> px,py" per line, root printed as ROOT
    void dump(std::ostream& os) const;

private:
    const Domain* dom_;
    std::vector<std::int32_t> parent_;
};

// Wilson's algorithm: iterate sites in scan order; from each unattached site
// run SRW until it hits the current tree (initially just the wired boundary),
// loop-erase, attach.
WiredTree wilson_ust(const Domain& d, RngStream& rng);
// same, visiting sites in a caller-chosen order (law is order-independent)
WiredTree wilson_ust(const Domain& d, RngStream& rng,
                     const std::vector<Point>& scan_order);

Path ust_branch(const WiredTree& tree, Point v);

}  // namespace lerw
