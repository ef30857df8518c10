#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/point.hpp"
#include "lerw/rng.hpp"

namespace lerw {

// Composable stopping rules, evaluated at positive times only:
// exit(D) fires at min{ j >= 1 : X_j not in D } (sigma_D),
// hit(K)  fires at min{ j >= 1 : X_j in K }     (xi_K).
// A rule list fires at the first time any member holds; ties resolve to the
// lowest index.  Referenced domains/sets must outlive the rule.
class StoppingRule {
public:
    struct ExitDomain { const Domain* domain; };
    struct ExitBall { Point center; std::int64_t r2; };
    struct HitSet { const PointSet* set; };
    using Primitive = std::variant<ExitDomain, ExitBall, HitSet>;

    static StoppingRule exit(const Domain& d) {
        StoppingRule r;
        r.prims_.push_back(ExitDomain{&d});
        return r;
    }
    static StoppingRule exit_ball(Point center, std::int32_t n) {
        StoppingRule r;
        r.prims_.push_back(ExitBall{center, std::int64_t(n) * n});
        return r;
    }
    static StoppingRule hit(const PointSet& k) {
        StoppingRule r;
        r.prims_.push_back(HitSet{&k});
        return r;
    }
    static StoppingRule first_of(std::initializer_list<StoppingRule> rules) {
        StoppingRule r;
        for (const auto& sub : rules)
            for (const auto& p : sub.prims_) r.prims_.push_back(p);
        return r;
    }

    // index of the first primitive satisfied at z, or -1
    int fired(Point z) const {
        for (std::size_t i = 0; i < prims_.size(); ++i) {
            bool f = std::visit(
                [&](const auto& p) -> bool {
                    using T = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<T, ExitDomain>)
                        return !p.domain->contains(z);
                    else if constexpr (std::is_same_v<T, ExitBall>)
                        return norm2(z - p.center) > p.r2;
                    else
                        return p.set->count(z) != 0;
                },
                prims_[i]);
            if (f) return int(i);
        }
        return -1;
    }

    std::size_t arity() const { return prims_.size(); }

private:
    std::vector<Primitive> prims_;
};

struct Trajectory {
    Path vertices;         // vertices[0..stop_time], stopping vertex included
    int stop_reason = -1;  // index of the rule that fired
    std::int64_t stop_time = 0;
};

inline constexpr std::int64_t kDefaultStepCap = 1'000'000'000;

// simple random walk from start until the rule fires; throws on step-cap hit
Trajectory run_until(Point start, const StoppingRule& rule, RngStream& rng,
                     std::int64_t step_cap = kDefaultStepCap);

// streaming variant: visit(z, j) for every positive time j up to and
// including the stopping step; returns (stop vertex, reason, stop time)
template <class Visitor>
Trajectory walk_until(Point start, const StoppingRule& rule, RngStream& rng,
                      Visitor&& visit, std::int64_t step_cap = kDefaultStepCap) {
    Point z = start;
    for (std::int64_t j = 1; j <= step_cap; ++j) {
        z = z + kSteps[rng.next_step()];
        visit(z, j);
        int reason = rule.fired(z);
        if (reason >= 0) return Trajectory{{}, reason, j};
    }
    throw std::runtime_error(
        "walk step cap exceeded: stopping rule looks almost-surely infinite "
        "or the cap is too small");
}

// distinct vertices visited at indices >= from_index
PointSet trajectory_vertex_set(const Trajectory& t, std::int64_t from_index);

// debug dump: one "x,y" line per vertex
void dump_trajectory(std::ostream& os, const Trajectory& t);

}  // namespace lerw
