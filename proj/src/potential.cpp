#include "lerw/potential.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lerw {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;

// I - P_D over the domain's site indexing
SparseMat killed_laplacian(const Domain& d) {
    const auto& sites = d.sites();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sites.size() * 5);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        trip.emplace_back(int(i), int(i), 1.0);
        for (Point s : kSteps) {
            std::int32_t j = d.index_of(sites[i] + s);
            if (j >= 0) trip.emplace_back(int(i), j, -0.25);
        }
    }
    SparseMat a(int(sites.size()), int(sites.size()));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

}  // namespace

struct GreenOperator::Solver {
    bool dense = false;
    Eigen::LLT<Eigen::MatrixXd> llt;
    SparseMat sparse;
    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg;
};

GreenOperator::GreenOperator(const Domain& d) : dom_(d), solver_(new Solver) {
    if (dom_.empty())
        throw std::invalid_argument("GreenOperator: empty domain");
    SparseMat a = killed_laplacian(dom_);
    if (dom_.size() <= kDenseSiteLimit) {
        solver_->dense = true;
        Eigen::MatrixXd dense = Eigen::MatrixXd(a);
        solver_->llt.compute(dense);
        if (solver_->llt.info() != Eigen::Success)
            throw std::runtime_error("GreenOperator: dense factorization failed");
    } else {
        solver_->sparse = std::move(a);
        solver_->cg.setTolerance(kSolveTolerance);
        solver_->cg.setMaxIterations(Eigen::Index(64) * Eigen::Index(dom_.size()));
        solver_->cg.compute(solver_->sparse);
        if (solver_->cg.info() != Eigen::Success)
            throw std::runtime_error("GreenOperator: sparse setup failed");
    }
}

GreenOperator::~GreenOperator() = default;

const std::vector<double>& GreenOperator::column(Point y) const {
    std::int32_t j = dom_.index_of(y);
    if (j < 0)
        throw std::invalid_argument("GreenOperator::column: point not in domain");
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = columns_.find(j);
    if (it != columns_.end()) return it->second;

    Eigen::VectorXd b = Eigen::VectorXd::Zero(Eigen::Index(dom_.size()));
    b[j] = 1.0;
    Eigen::VectorXd g;
    if (solver_->dense) {
        g = solver_->llt.solve(b);
    } else {
        g = solver_->cg.solve(b);
        if (solver_->cg.info() != Eigen::Success)
            throw std::runtime_error("GreenOperator: CG did not converge");
    }
    std::vector<double> col(g.data(), g.data() + g.size());
    return columns_.emplace(j, std::move(col)).first->second;
}

double GreenOperator::green(Point x, Point y) const {
    std::int32_t i = dom_.index_of(x);
    if (i < 0)
        throw std::invalid_argument("GreenOperator::green: point not in domain");
    return column(y)[std::size_t(i)];
}

double GreenOperator::max_identity_residual(int sample_columns) const {
    const auto& sites = dom_.sites();
    double worst = 0.0;
    std::size_t stride = std::max<std::size_t>(1, sites.size() / std::size_t(sample_columns));
    for (std::size_t j = 0; j < sites.size(); j += stride) {
        const auto& g = column(sites[j]);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            double v = g[i];
            for (Point s : kSteps) {
                std::int32_t k = dom_.index_of(sites[i] + s);
                if (k >= 0) v -= 0.25 * g[std::size_t(k)];
            }
            double want = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(v - want));
        }
    }
    return worst;
}

void GreenOperator::dump_matrix(std::ostream& os) const {
    const auto& sites = dom_.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        os << i << " " << i << " 1\n";
        for (Point s : kSteps) {
            std::int32_t j = dom_.index_of(sites[i] + s);
            if (j >= 0) os << i << " " << j << " -0.25\n";
        }
    }
}

HittingField HittingField::with_boundary_data(const Domain& interior,
                                              const PointMap<double>& data,
                                              double default_value) {
    HittingField f;
    f.interior_ = interior;
    f.outside_ = default_value;

    Rect box = interior.empty() ? Rect{0, 0, 0, 0} : interior.bounding_box();
    for (const auto& [p, v] : data) {
        (void)v;
        box.x0 = std::min(box.x0, p.x);
        box.x1 = std::max(box.x1, p.x);
        box.y0 = std::min(box.y0, p.y);
        box.y1 = std::max(box.y1, p.y);
    }
    f.grid_ = Grid<double>(box.expanded(1), default_value);
    for (const auto& [p, v] : data) f.grid_.at(p) = v;

    if (interior.empty()) return f;

    auto boundary_value = [&](Point p) {
        auto it = data.find(p);
        return it != data.end() ? it->second : default_value;
    };

    const auto& sites = interior.sites();
    SparseMat a = killed_laplacian(interior);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(Eigen::Index(sites.size()));
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (Point s : kSteps) {
            Point q = sites[i] + s;
            if (!interior.contains(q)) b[Eigen::Index(i)] += 0.25 * boundary_value(q);
        }

    Eigen::VectorXd h;
    if (sites.size() <= GreenOperator::kDenseSiteLimit) {
        h = Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(a)).solve(b);
    } else {
        Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(GreenOperator::kSolveTolerance);
        cg.setMaxIterations(Eigen::Index(64) * Eigen::Index(sites.size()));
        cg.compute(a);
        h = cg.solve(b);
        if (cg.info() != Eigen::Success)
            throw std::runtime_error("HittingField: CG did not converge");
    }
    for (std::size_t i = 0; i < sites.size(); ++i) f.grid_.at(sites[i]) = h[Eigen::Index(i)];
    return f;
}

HittingField HittingField::hitting_probability(const PointSet& k1, const PointSet& k2,
                                               const Domain& region) {
    for (Point p : k1)
        if (k2.count(p))
            throw std::invalid_argument("hitting_probability: K1 and K2 overlap");
    PointSet removed = k1;
    removed.insert(k2.begin(), k2.end());
    Domain interior = region.without(removed);
    PointMap<double> data;
    for (Point p : k1) data[p] = 1.0;
    for (Point p : k2) data[p] = 0.0;
    return with_boundary_data(interior, data, 0.0);
}

HittingField HittingField::exit_before_hit(const Domain& d, const PointSet& k) {
    if (k.empty()) {
        // xi_emptyset never fires: h == 1 identically
        HittingField f;
        f.interior_ = d;
        f.outside_ = 1.0;
        f.grid_ = Grid<double>(d.bounding_box().expanded(1), 1.0);
        return f;
    }
    Domain interior = d.without(k);
    PointMap<double> data;
    for (Point p : k) data[p] = 0.0;
    return with_boundary_data(interior, data, 1.0);
}

double HittingField::max_harmonic_residual() const {
    double worst = 0.0;
    for (Point p : interior_.sites()) {
        double avg = 0.0;
        for (Point s : kSteps) avg += 0.25 * value(p + s);
        worst = std::max(worst, std::abs(value(p) - avg));
    }
    return worst;
}

double HittingField::min_interior_value() const {
    double m = 1.0;
    for (Point p : interior_.sites()) m = std::min(m, value(p));
    return m;
}

double HittingField::max_interior_value() const {
    double m = 0.0;
    for (Point p : interior_.sites()) m = std::max(m, value(p));
    return m;
}

double last_exit_identity_residual(const Domain& frame, const PointSet& k1,
                                   const PointSet& k2, Point x) {
    if (k1.empty()) throw std::invalid_argument("last_exit_identity: empty K1");
    for (Point p : k1)
        if (k2.count(p)) throw std::invalid_argument("last_exit_identity: K1, K2 overlap");
    if (k1.count(x) || k2.count(x) || !frame.contains(x))
        throw std::invalid_argument("last_exit_identity: x must lie in frame \\ (K1 u K2)");

    PointSet k12 = k1;
    k12.insert(k2.begin(), k2.end());

    // lhs: h(x) with absorption outside the frame counting as K2
    HittingField h = HittingField::hitting_probability(k1, k2, frame);
    double lhs = h.value(x);

    Domain d_no_k12 = frame.without(k12);
    Domain d_no_k1 = frame.without(k1);
    GreenOperator g12(d_no_k12);
    GreenOperator g1(d_no_k1);

    // P^x{ S(xi_K1) = y } for the frame-absorbed walk, via one Green column
    const auto& gcol = g1.column(x);
    PointMap<double> hit_dist;
    for (Point y : k1) {
        double p = 0.0;
        for (Point s : kSteps) {
            std::int32_t i = d_no_k1.index_of(y + s);
            if (i >= 0) p += 0.25 * gcol[std::size_t(i)];
        }
        if (p > 0.0) hit_dist[y] = p;
    }

    // P^y{ xi_x < xi_K1 } and P^y{ xi_x < xi_{K1 u K2} }, both absorbed at frame;
    // y lies in K1, so evaluate with a first step off the absorbing set
    PointMap<double> one{{x, 1.0}};
    Domain int1 = frame.without([&] {
        PointSet s = k1;
        s.insert(x);
        return s;
    }());
    Domain int12 = frame.without([&] {
        PointSet s = k12;
        s.insert(x);
        return s;
    }());
    HittingField f1 = HittingField::with_boundary_data(int1, one, 0.0);
    HittingField f12 = HittingField::with_boundary_data(int12, one, 0.0);

    double sum = 0.0;
    for (const auto& [y, py] : hit_dist) {
        double denom = f1.one_step_value(y);
        if (denom <= 0.0) continue;
        sum += (f12.one_step_value(y) / denom) * py;
    }
    double rhs = g12.green(x, x) / g1.green(x, x) * sum;
    return std::abs(lhs - rhs);
}

double conditioned_green_identity_residual(const Domain& frame, const PointSet& k1,
                                           const PointSet& k2, const Domain& d) {
    if (d.size() > 500)
        throw std::invalid_argument("conditioned_green_identity: domain too large (>500 sites)");
    for (Point p : d.sites())
        if (k1.count(p) || k2.count(p))
            throw std::invalid_argument("conditioned_green_identity: D meets K1 u K2");

    HittingField h = HittingField::hitting_probability(k1, k2, frame);
    const auto& sites = d.sites();
    const int n = int(sites.size());
    for (Point p : sites)
        if (h.value(p) <= 0.0)
            throw std::invalid_argument("conditioned_green_identity: h vanishes on D");

    // I - P^X on D, with p^X(x,y) = (1/4) h(y)/h(x)
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (Point s : kSteps) {
            std::int32_t j = d.index_of(sites[std::size_t(i)] + s);
            if (j >= 0)
                a(i, j) -= 0.25 * h.value(sites[std::size_t(j)]) / h.value(sites[std::size_t(i)]);
        }
    Eigen::MatrixXd gx = Eigen::PartialPivLU<Eigen::MatrixXd>(a)
                             .solve(Eigen::MatrixXd::Identity(n, n));

    GreenOperator g(d);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto& col = g.column(sites[std::size_t(j)]);
        for (int i = 0; i < n; ++i) {
            double want = h.value(sites[std::size_t(j)]) / h.value(sites[std::size_t(i)]) *
                          col[std::size_t(i)];
            worst = std::max(worst, std::abs(gx(i, j) - want));
        }
    }
    return worst;
}

IdentityReport verify_green_hitting_identities(const Domain& frame, const PointSet& k1,
                                               const PointSet& k2) {
    if (frame.size() > 500)
        throw std::invalid_argument("verify_green_hitting_identities: frame too large (>500 sites)");
    IdentityReport rep;

    PointSet k12 = k1;
    k12.insert(k2.begin(), k2.end());
    Domain free = frame.without(k12);

    double worst_le = 0.0;
    for (Point x : free.sites())
        worst_le = std::max(worst_le, last_exit_identity_residual(frame, k1, k2, x));
    rep.last_exit_residual = worst_le;

    // the conditioned chain lives where h > 0; h = 0 pockets (cut off from K1)
    // are outside its state space
    HittingField h = HittingField::hitting_probability(k1, k2, frame);
    std::vector<Point> alive;
    for (Point p : free.sites())
        if (h.value(p) > 0.0) alive.push_back(p);
    rep.conditioned_green_residual = conditioned_green_identity_residual(
        frame, k1, k2, Domain::from_points(alive));

    rep.pass = rep.last_exit_residual <= 1e-8 && rep.conditioned_green_residual <= 1e-8;
    rep.detail = "last_exit=" + std::to_string(rep.last_exit_residual) +
                 " conditioned_green=" + std::to_string(rep.conditioned_green_residual);
    return rep;
}

bool reflection_inequality_check(const Domain& d, const PointSet& k, Point z,
                                 double slack) {
    for (Point p : k)
        if (!d.contains(p))
            throw std::invalid_argument("reflection_inequality: K not contained in D");
    for (Point p : d.sites())
        if (p.x > 0 && !d.contains({-p.x, p.y}))
            throw std::invalid_argument(
                "reflection_inequality: D_+ not contained in the reflection of D_-");
    for (Point p : k)
        if (p.x > 0 && !k.count({-p.x, p.y}))
            throw std::invalid_argument(
                "reflection_inequality: K_+ not contained in the reflection of K_-");
    // z on the axis is allowed: z == zbar and the inequality is an equality
    if (z.x > 0 || !d.contains(z))
        throw std::invalid_argument("reflection_inequality: z must lie in D_- or on the axis");

    HittingField h = HittingField::exit_before_hit(d, k);
    Point zbar{-z.x, z.y};
    return h.value(z) <= h.value(zbar) + slack;
}

double harnack_ratio_probe(const HittingField& h, const std::vector<Point>& pts) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Point p : pts) {
        double v = h.value(p);
        if (v <= 0.0)
            throw std::invalid_argument("harnack_ratio_probe: nonpositive value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (pts.empty()) return 1.0;
    return hi / lo;
}

double quarter_arc_exit_probability(std::int32_t n, const PointSet& k) {
    Domain bn = Domain::ball({0, 0}, n);
    Domain interior = bn.without(k);

    PointMap<double> arc_data;
    for (Point p : k) arc_data[p] = 0.0;
    for (Point p : bn.outer_boundary())
        if (p.x >= std::abs(p.y)) arc_data[p] = 1.0;
    HittingField num = HittingField::with_boundary_data(interior, arc_data, 0.0);

    PointMap<double> all_data;
    for (Point p : k) all_data[p] = 0.0;
    HittingField den = HittingField::with_boundary_data(interior, all_data, 1.0);

    double d = den.value({0, 0});
    if (d <= 0.0)
        throw std::invalid_argument("quarter_arc_exit_probability: conditioning event null");
    return num.value({0, 0}) / d;
}

}  // namespace lerw
