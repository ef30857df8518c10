#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/point.hpp"

namespace lerw {

// Chronological loop-erasure via the last-visit recursion:
//   s_0 = sup{ j : lambda(j) = lambda(0) },
//   s_i = sup{ j : lambda(j) = lambda(s_{i-1}+1) },  stop at s_i = |lambda|.
// Linear time with a last-occurrence index table.
Path loop_erase(const Path& lambda);

// L^R(lambda) = reverse(L(reverse(lambda)))
Path reverse_loop_erase(const Path& lambda);

// unrestricted: |gamma| (edge count); restricted: vertices of gamma in D'
std::int64_t count_steps(const Path& gamma,
                         const Domain* restrict_to = nullptr);

// Streaming eraser: feed walk steps one at a time; the stack is always the
// chronological loop-erasure of the fed prefix.  Grid-backed when the walk
// is confined to a known box, so multi-million-step walks never need full
// storage; entries are invalidated by epoch, not by clearing.
class LoopEraser {
public:
    explicit LoopEraser(Rect box)
        : grid_(box.expanded(1), Cell{}) {}

    void reset(Point start) {
        ++epoch_;
        if (epoch_ == 0) {  // wrapped: flush stale cells
            grid_.fill(Cell{});
            epoch_ = 1;
        }
        stack_.clear();
        push_new(start);
    }

    void step(Point z) {
        Cell& c = grid_.at(z);
        if (c.epoch == epoch_) {
            // loop closed: pop back to the earlier visit
            for (std::size_t i = c.pos + 1; i < stack_.size(); ++i)
                grid_.at(stack_[i]).epoch = 0;
            stack_.resize(c.pos + 1);
        } else {
            c.epoch = epoch_;
            c.pos = std::uint32_t(stack_.size());
            stack_.push_back(z);
        }
    }

    const Path& path() const { return stack_; }
    Path take_path() { return std::move(stack_); }

private:
    struct Cell {
        std::uint32_t epoch = 0;
        std::uint32_t pos = 0;
    };

    void push_new(Point z) {
        Cell& c = grid_.at(z);
        c.epoch = epoch_;
        c.pos = 0;
        stack_.push_back(z);
    }

    Grid<Cell> grid_;
    Path stack_;
    std::uint32_t epoch_ = 0;
};

// Epoch-stamped membership grid for non-intersection tests.
class PointMarker {
public:
    explicit PointMarker(Rect box) : grid_(box.expanded(1), 0) {}

    void clear() {
        ++epoch_;
        if (epoch_ == 0) {
            grid_.fill(0);
            epoch_ = 1;
        }
    }
    void mark(Point z) { grid_.at(z) = epoch_; }
    bool marked(Point z) const {
        return grid_.covers(z) && grid_.at(z) == epoch_;
    }

private:
    Grid<std::uint32_t> grid_;
    std::uint32_t epoch_ = 0;
};

}  // namespace lerw
