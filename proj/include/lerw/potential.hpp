#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "lerw/domain.hpp"
#include "lerw/point.hpp"

namespace lerw {

// G_D(x,y): expected visits to y strictly before sigma_D for SRW from x.
// Dense Cholesky below kDenseSiteLimit sites, diagonally preconditioned CG
// above; solved columns are cached.  Immutable after construction; column
// queries are serialized internally and may be issued from several threads.
class GreenOperator {
public:
    static constexpr std::size_t kDenseSiteLimit = 4000;
    static constexpr double kSolveTolerance = 1e-12;

    explicit GreenOperator(const Domain& d);
    ~GreenOperator();
    GreenOperator(const GreenOperator&) = delete;
    GreenOperator& operator=(const GreenOperator&) = delete;

    const Domain& domain() const { return dom_; }

    double green(Point x, Point y) const;
    // G(., y) indexed by the domain's site order
    const std::vector<double>& column(Point y) const;

    // max |(I-P)G - I| over the given number of sampled columns
    double max_identity_residual(int sample_columns) const;

    // (row, col, value) triplets of I - P_D, one per line
    void dump_matrix(std::ostream& os) const;

private:
    struct Solver;
    Domain dom_;
    std::unique_ptr<Solver> solver_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::int32_t, std::vector<double>> columns_;
};

// Discrete-harmonic field with prescribed boundary data, stored on a grid so
// samplers can read it with plain lookups.
class HittingField {
public:
    // solve on `interior`; value at a non-interior point is data[p] if given,
    // else `default_value` (also used beyond the grid)
    static HittingField with_boundary_data(const Domain& interior,
                                           const PointMap<double>& data,
                                           double default_value);

    // h(z) = P^z{ xi_K1 < xi_K2 }, absorbed as K2 outside the region
    static HittingField hitting_probability(const PointSet& k1, const PointSet& k2,
                                            const Domain& region);

    // h(z) = P^z{ sigma_D < xi_K }
    static HittingField exit_before_hit(const Domain& d, const PointSet& k);

    double value(Point z) const {
        return grid_.covers(z) ? grid_.at(z) : outside_;
    }

    // mean of the four neighbor values: the chance of the event starting AT z
    // when z itself is an absorbing point of this solve
    double one_step_value(Point z) const {
        double v = 0.0;
        for (Point s : kSteps) v += 0.25 * value(z + s);
        return v;
    }

    const Domain& interior() const { return interior_; }

    // max over interior sites of |h(z) - mean of neighbor values|
    double max_harmonic_residual() const;

    double min_interior_value() const;
    double max_interior_value() const;

private:
    Domain interior_;
    Grid<double> grid_;
    double outside_ = 0.0;
};

struct IdentityReport {
    double last_exit_residual = 0.0;
    double conditioned_green_residual = 0.0;
    bool pass = false;
    std::string detail;
};

// Last-exit decomposition of P^x{ xi_K1 < xi_K2 }, verified exactly for the
// walk absorbed outside `frame` (absorption counts as K2):
//   h(x) = G(x,x; F\(K1 u K2)) / G(x,x; F\K1)
//          * sum_{y in inner bdry K1} P^y{ xi_x < xi_K2 | xi_x < xi_K1 } P^x{ S(xi_K1)=y }
double last_exit_identity_residual(const Domain& frame, const PointSet& k1,
                                   const PointSet& k2, Point x);

// G^X_D(x,y) = (h(y)/h(x)) G_D(x,y) for X the walk conditioned to hit K1
// before K2; returns the max absolute residual over D x D
double conditioned_green_identity_residual(const Domain& frame, const PointSet& k1,
                                           const PointSet& k2, const Domain& d);

// both checks bundled; pass iff every residual <= 1e-8
IdentityReport verify_green_hitting_identities(const Domain& frame,
                                               const PointSet& k1,
                                               const PointSet& k2);

// P^z{ sigma_D < xi_K } <= P^{zbar}{ sigma_D < xi_K } for z in D_-, where
// zbar reflects across the y-axis and D_+ c reflect(D_-), K_+ c reflect(K_-).
// Throws if a hypothesis fails, naming the violated inclusion.
bool reflection_inequality_check(const Domain& d, const PointSet& k, Point z,
                                 double slack = 1e-12);

// max h(x)/h(y) over the given points (h > 0 required)
double harnack_ratio_probe(const HittingField& h, const std::vector<Point>& pts);

// P{ arg(S(sigma_n)) in [-pi/4, pi/4] | sigma_n < xi_K }, two Dirichlet solves
double quarter_arc_exit_probability(std::int32_t n, const PointSet& k);

}  // namespace lerw
