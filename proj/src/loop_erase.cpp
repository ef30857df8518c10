#include "lerw/loop_erase.hpp"

#include <stdexcept>

namespace lerw {

Path loop_erase(const Path& lambda) {
    if (lambda.empty())
        throw std::invalid_argument("loop_erase: empty path");

    PointMap<std::size_t> last;  // last occurrence index of each vertex
    last.reserve(lambda.size() * 2);
    for (std::size_t j = 0; j < lambda.size(); ++j) last[lambda[j]] = j;

    const std::size_t m = lambda.size() - 1;
    Path out;
    std::size_t s = last[lambda[0]];
    out.push_back(lambda[s]);
    while (s < m) {
        s = last[lambda[s + 1]];
        out.push_back(lambda[s]);
    }
    return out;
}

Path reverse_loop_erase(const Path& lambda) {
    Path rev(lambda.rbegin(), lambda.rend());
    Path erased = loop_erase(rev);
    return Path(erased.rbegin(), erased.rend());
}

std::int64_t count_steps(const Path& gamma, const Domain* restrict_to) {
    if (!restrict_to) return path_length(gamma);
    std::int64_t c = 0;
    for (Point v : gamma)
        if (restrict_to->contains(v)) ++c;
    return c;
}

}  // namespace lerw
