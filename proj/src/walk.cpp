#include "lerw/walk.hpp"

#include <ostream>
#include <stdexcept>

namespace lerw {

Trajectory run_until(Point start, const StoppingRule& rule, RngStream& rng,
                     std::int64_t step_cap) {
    Trajectory t;
    t.vertices.push_back(start);
    Point z = start;
    for (std::int64_t j = 1; j <= step_cap; ++j) {
        z = z + kSteps[rng.next_step()];
        t.vertices.push_back(z);
        int reason = rule.fired(z);
        if (reason >= 0) {
            t.stop_reason = reason;
            t.stop_time = j;
            return t;
        }
    }
    throw std::runtime_error(
        "run_until: step cap exceeded; stopping rule looks almost-surely "
        "infinite or the cap is too small");
}

void dump_trajectory(std::ostream& os, const Trajectory& t) {
    for (Point p : t.vertices) os << p.x << "," << p.y << "\n";
}

PointSet trajectory_vertex_set(const Trajectory& t, std::int64_t from_index) {
    if (from_index < 0 || from_index > t.stop_time)
        throw std::out_of_range("trajectory_vertex_set: from_index out of range");
    PointSet s;
    for (std::size_t i = std::size_t(from_index); i < t.vertices.size(); ++i)
        s.insert(t.vertices[i]);
    return s;
}

}  // namespace lerw
