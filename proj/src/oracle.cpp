#include "lerw/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "lerw/potential.hpp"

namespace lerw {

void PathDistribution::add(Path p, double prob) {
    entries_[std::move(p)] += prob;
}

double PathDistribution::prob(const Path& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? 0.0 : it->second;
}

double PathDistribution::total_mass() const {
    long double m = 0.0L;
    for (const auto& [p, q] : entries_) m += q;
    return double(m);
}

double PathDistribution::tv_distance(const PathDistribution& a, const PathDistribution& b) {
    long double acc = 0.0L;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
        if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
            acc += std::abs(ia->second);
            ++ia;
        } else if (ia == a.entries_.end() || ib->first < ia->first) {
            acc += std::abs(ib->second);
            ++ib;
        } else {
            acc += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return double(acc / 2.0L);
}

void PathDistribution::write_csv(std::ostream& os) const {
    os << "path,probability\n";
    for (const auto& [p, q] : entries_) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) os << "-";
            os << p[i].x << "," << p[i].y;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", q);
        os << "," << buf << "\n";
    }
}

namespace {

// Escape-probability solver for the sequential law.  Solves
// f(z) = P^z{ sigma_D < xi_B } for a blocking set B given as a bitmask over
// a small "active" site list; results are memoized per mask.
class EscapeSolver {
public:
    EscapeSolver(const Domain& d, const PointSet& fixed_forbidden,
                 std::vector<Point> active_sites)
        : dom_(d), fixed_(fixed_forbidden), active_(std::move(active_sites)) {
        for (std::size_t i = 0; i < active_.size(); ++i)
            active_index_[active_[i]] = std::int32_t(i);
    }

    std::int32_t active_index(Point p) const {
        auto it = active_index_.find(p);
        return it == active_index_.end() ? -1 : it->second;
    }

    // escape probability from y with the masked active sites blocked
    double escape(Point y, std::uint32_t mask) {
        auto it = fields_.find(mask);
        if (it == fields_.end()) it = fields_.emplace(mask, solve(mask)).first;
        std::int32_t i = dom_.index_of(y);
        return i < 0 ? 1.0 : it->second[std::size_t(i)];
    }

private:
    std::vector<double> solve(std::uint32_t mask) const {
        const auto& sites = dom_.sites();
        const int n = int(sites.size());
        auto blocked = [&](Point p) {
            if (fixed_.count(p)) return true;
            std::int32_t a = active_index(p);
            return a >= 0 && (mask >> a) & 1u;
        };
        // f = 1 outside D, 0 on blocked sites, harmonic elsewhere
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            if (blocked(sites[std::size_t(i)])) continue;  // row stays f_i = 0, b = 0
            for (Point s : kSteps) {
                Point q = sites[std::size_t(i)] + s;
                std::int32_t j = dom_.index_of(q);
                if (j < 0)
                    b[i] += 0.25;
                else if (!blocked(q))
                    a(i, j) -= 0.25;
            }
        }
        // blocked rows: a is identity, b is zero => f = 0 there
        Eigen::VectorXd f = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
        return std::vector<double>(f.data(), f.data() + f.size());
    }

    const Domain& dom_;
    const PointSet& fixed_;
    std::vector<Point> active_;
    PointMap<std::int32_t> active_index_;
    std::unordered_map<std::uint32_t, std::vector<double>> fields_;
};

struct DpState {
    const Domain* dom;
    const SequentialLawOptions* opt;
    EscapeSolver* solver;
    PathDistribution* out;
};

bool truncated_out(const SequentialLawOptions& opt, Point y) {
    if (!opt.truncate) return false;
    auto [c, r] = *opt.truncate;
    return norm2(y - c) > std::int64_t(r) * r;
}

void grow(DpState& st, Path& cur, std::uint32_t mask, long double prob) {
    Point tip = cur.back();
    double w[4];
    Point nxt[4];
    long double total = 0.0L;
    for (int k = 0; k < 4; ++k) {
        Point y = tip + kSteps[k];
        nxt[k] = y;
        if (st.opt->forbidden.count(y)) {
            w[k] = 0.0;
            continue;
        }
        std::int32_t a = st.solver->active_index(y);
        if (a >= 0 && (mask >> a) & 1u) {
            w[k] = 0.0;  // already on the path
            continue;
        }
        w[k] = st.dom->contains(y) ? st.solver->escape(y, mask) : 1.0;
        total += w[k];
    }
    if (total <= 0.0L)
        return;  // unreachable prefix: conditioning event has probability zero

    for (int k = 0; k < 4; ++k) {
        if (w[k] <= 0.0) continue;
        Point y = nxt[k];
        long double p = prob * (long double)(w[k]) / total;
        cur.push_back(y);
        if (!st.dom->contains(y) || truncated_out(*st.opt, y)) {
            st.out->add(cur, double(p));
        } else {
            std::int32_t a = st.solver->active_index(y);
            if (a < 0)
                throw std::logic_error("lerw_sequential_law: tip left the active set");
            grow(st, cur, mask | (1u << a), p);
        }
        cur.pop_back();
    }
}

}  // namespace

PathDistribution lerw_sequential_law(const Domain& d, Point start,
                                     const SequentialLawOptions& opt) {
    if (!d.contains(start))
        throw std::invalid_argument("lerw_sequential_law: start outside domain");

    // active sites: where the growing path can live; the start is always
    // active (it may also be forbidden as a revisit, e.g. a prefix tip)
    std::vector<Point> active;
    for (Point p : d.sites()) {
        if (p == start) {
            active.push_back(p);
            continue;
        }
        if (opt.forbidden.count(p)) continue;
        if (opt.truncate && truncated_out(opt, p)) continue;
        active.push_back(p);
    }
    if (active.size() > opt.max_enumeration_sites || active.size() > 31)
        throw std::invalid_argument(
            "lerw_sequential_law: enumeration region has " + std::to_string(active.size()) +
            " sites; enumeration is exponential and refused above " +
            std::to_string(std::min<std::size_t>(opt.max_enumeration_sites, 31)));

    EscapeSolver solver(d, opt.forbidden, active);
    PathDistribution out;
    DpState st{&d, &opt, &solver, &out};
    Path cur{start};
    std::int32_t a0 = solver.active_index(start);
    if (a0 < 0) throw std::logic_error("lerw_sequential_law: start not active");
    grow(st, cur, 1u << a0, 1.0L);
    return out;
}

PathDistribution lerw_exact_laplacian(const Domain& d, Point start) {
    if (d.size() > 15)
        throw std::invalid_argument(
            "lerw_exact_laplacian: domain has " + std::to_string(d.size()) +
            " sites; exact enumeration is refused above 15");
    SequentialLawOptions opt;
    opt.max_enumeration_sites = 15;
    return lerw_sequential_law(d, start, opt);
}

GreenProductOracle::GreenProductOracle(const Domain& d) : dom_(d) {
    if (d.size() > 31)
        throw std::invalid_argument("GreenProductOracle: domain too large (>31 sites)");
}

double GreenProductOracle::prob(const Path& omega) const {
    if (omega.size() < 2 || !is_nearest_neighbor_path(omega) || !is_self_avoiding(omega))
        throw std::invalid_argument("GreenProductOracle: not a self-avoiding lattice path");
    for (std::size_t i = 0; i + 1 < omega.size(); ++i)
        if (!dom_.contains(omega[i]))
            throw std::invalid_argument("GreenProductOracle: interior vertex not in domain");
    if (dom_.contains(omega.back()))
        throw std::invalid_argument("GreenProductOracle: path does not exit the domain");

    long double p = 1.0L;
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
        std::int32_t idx = dom_.index_of(omega[i]);
        auto key = std::make_pair(mask, idx);
        auto it = memo_.find(key);
        if (it == memo_.end()) {
            PointSet removed;
            for (std::size_t j = 0; j < i; ++j) removed.insert(omega[j]);
            GreenOperator g(dom_.without(removed));
            it = memo_.emplace(key, g.green(omega[i], omega[i])).first;
        }
        p *= 0.25L * (long double)(it->second);
        mask |= 1u << std::uint32_t(idx);
    }
    return double(p);
}

double lerw_exact_green_product(const Domain& d, const Path& omega) {
    return GreenProductOracle(d).prob(omega);
}

PathDistribution truncate_distribution(const PathDistribution& dist, std::int32_t l) {
    std::int64_t l2 = std::int64_t(l) * l;
    PathDistribution out;
    for (const auto& [p, q] : dist.entries()) {
        std::size_t cut = p.size() - 1;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (norm2(p[i]) > l2) {
                cut = i;
                break;
            }
        out.add(Path(p.begin(), p.begin() + std::ptrdiff_t(cut) + 1), q);
    }
    return out;
}

std::map<std::int64_t, double> exact_length_pmf(const PathDistribution& dist) {
    std::map<std::int64_t, double> pmf;
    for (const auto& [p, q] : dist.entries()) pmf[path_length(p)] += q;
    return pmf;
}

double domain_markov_check(const Domain& d, const Path& prefix) {
    // conditioning on nothing: both sides are the full law
    if (prefix.empty()) return 0.0;

    PathDistribution full = lerw_exact_laplacian(d, prefix[0]);

    // conditional law of the continuation (vertices after the prefix)
    PathDistribution conditional;
    long double mass = 0.0L;
    for (const auto& [p, q] : full.entries()) {
        if (p.size() < prefix.size()) continue;
        if (!std::equal(prefix.begin(), prefix.end(), p.begin())) continue;
        mass += q;
    }
    if (mass <= 0.0L)
        throw std::invalid_argument("domain_markov_check: prefix has zero probability");
    for (const auto& [p, q] : full.entries()) {
        if (p.size() < prefix.size()) continue;
        if (!std::equal(prefix.begin(), prefix.end(), p.begin())) continue;
        conditional.add(Path(p.begin() + std::ptrdiff_t(prefix.size()), p.end()),
                        double((long double)q / mass));
    }

    // law of L(Y[0,sigma_D]) for Y started at the tip and conditioned to exit
    // D before hitting the prefix, with the leading tip stripped
    SequentialLawOptions opt;
    opt.forbidden = PointSet(prefix.begin(), prefix.end());
    opt.max_enumeration_sites = 15;
    PathDistribution grown = lerw_sequential_law(d, prefix.back(), opt);
    PathDistribution continuation;
    for (const auto& [p, q] : grown.entries())
        continuation.add(Path(p.begin() + 1, p.end()), q);

    return PathDistribution::tv_distance(conditional, continuation);
}

}  // namespace lerw
