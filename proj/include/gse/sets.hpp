#ifndef GSE_SETS_HPP_
#define GSE_SETS_HPP_

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "gse/interval.hpp"

namespace gse {

/// Z = { c + G xi | xi in [-1,1]^r }. r = 0 represents a point.
struct Zonotope {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;

    Zonotope() = default;
    Zonotope(Eigen::VectorXd center, Eigen::MatrixXd gens)
        : c(std::move(center)), G(std::move(gens)) {
        if (G.size() > 0 && G.rows() != c.size())
            throw dimension_error("Zonotope: generator rows != dim");
        if (G.size() == 0) G.resize(c.size(), 0);
    }
    static Zonotope from_box(const IntervalVector& box) {
        return {box.mid(), Eigen::MatrixXd(box.rad().asDiagonal())};
    }
    static Zonotope point(const Eigen::VectorXd& p) { return {p, Eigen::MatrixXd(p.size(), 0)}; }

    Eigen::Index dim() const { return c.size(); }
    Eigen::Index num_generators() const { return G.cols(); }
    double order() const { return dim() == 0 ? 0.0 : double(G.cols()) / double(dim()); }
};

/// { x | (x-a)^T P^{-1} (x-a) <= 1 }, P symmetric positive definite.
struct Ellipsoid {
    Eigen::VectorXd a;
    Eigen::MatrixXd P;

    Ellipsoid() = default;
    Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape)
        : a(std::move(center)), P(std::move(shape)) {
        if (P.rows() != a.size() || P.cols() != a.size())
            throw dimension_error("Ellipsoid: shape matrix size mismatch");
    }
    Eigen::Index dim() const { return a.size(); }
};

/// CZ = { c + G xi | xi in [-1,1]^r, A xi = b }.
struct ConstrainedZonotope {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::MatrixXd A;  // q x r
    Eigen::VectorXd b;  // q

    ConstrainedZonotope() = default;
    ConstrainedZonotope(Eigen::VectorXd center, Eigen::MatrixXd gens, Eigen::MatrixXd con,
                        Eigen::VectorXd off)
        : c(std::move(center)), G(std::move(gens)), A(std::move(con)), b(std::move(off)) {
        if (G.size() == 0) G.resize(c.size(), 0);
        if (A.size() == 0) A.resize(0, G.cols());
        if (G.rows() != c.size() || A.cols() != G.cols() || A.rows() != b.size())
            throw dimension_error("ConstrainedZonotope: inconsistent shapes");
    }
    static ConstrainedZonotope from_zonotope(const Zonotope& z) {
        return {z.c, z.G, Eigen::MatrixXd(0, z.G.cols()), Eigen::VectorXd(0)};
    }
    static ConstrainedZonotope from_box(const IntervalVector& box) {
        return from_zonotope(Zonotope::from_box(box));
    }

    Eigen::Index dim() const { return c.size(); }
    Eigen::Index num_generators() const { return G.cols(); }
    Eigen::Index num_constraints() const { return A.rows(); }
    double order() const { return dim() == 0 ? 0.0 : double(G.cols()) / double(dim()); }
};

/// Intersection of its members; all members share dimension n.
struct ZonotopeBundle {
    std::vector<Zonotope> members;

    ZonotopeBundle() = default;
    explicit ZonotopeBundle(std::vector<Zonotope> m) : members(std::move(m)) {
        if (members.empty()) throw std::invalid_argument("ZonotopeBundle: no members");
        for (const auto& z : members)
            if (z.dim() != members.front().dim())
                throw dimension_error("ZonotopeBundle: mixed dimensions");
    }
    Eigen::Index dim() const { return members.front().dim(); }
};

/// Measurement strip { x | normal * x - offset in noise }.
struct Strip {
    Eigen::RowVectorXd normal;
    double offset = 0.0;
    Interval noise{0.0, 0.0};

    Eigen::Index dim() const { return normal.size(); }
    double mid_level() const { return offset + noise.mid(); }
    double half_width() const { return noise.rad(); }
};

/// Result marker for infeasible intersections.
struct EmptySet {
    Eigen::Index n = 0;
};

using SetValue =
    std::variant<IntervalVector, Ellipsoid, Zonotope, ConstrainedZonotope, ZonotopeBundle, EmptySet>;

Eigen::Index set_dim(const SetValue& s);
bool is_empty_marker(const SetValue& s);

// --- basic operations (Minkowski sum, linear map, intersection) ------------

SetValue minkowski_sum(const SetValue& x, const SetValue& w);
SetValue linear_map(const Eigen::MatrixXd& m, const SetValue& x);

/// { x in X | C x in Y }. Exact constrained zonotope for zonotope/CZ inputs;
/// returns EmptySet when the result is infeasible.
SetValue generalized_intersection(const SetValue& x, const Eigen::MatrixXd& c, const SetValue& y);

// --- strip intersection family ---------------------------------------------

/// Over-approximation of Z ∩ strip, valid for every gain lambda.
Zonotope strip_intersection_gain(const Zonotope& z, const Strip& strip,
                                 const Eigen::VectorXd& lambda);
/// Gain minimizing the Frobenius norm of the resulting generator matrix.
Eigen::VectorXd frobenius_gain(const Zonotope& z, const Strip& strip);
/// Gain minimizing the interval-hull volume, golden-section search on
/// [0, 2 * frobenius_gain].
Eigen::VectorXd volume_gain(const Zonotope& z, const Strip& strip);

// --- hull, support, membership ----------------------------------------------

IntervalVector interval_hull(const SetValue& x);
/// rho(X, d) = max_{x in X} d^T x. Requires |d| = 1 within 1e-6.
double support(const SetValue& x, const Eigen::VectorXd& d);
/// Same, without the unit-norm requirement (library internal workhorse).
double support_raw(const SetValue& x, const Eigen::VectorXd& d);
bool contains_point(const SetValue& x, const Eigen::VectorXd& p, double tol = 1e-9);

/// LP feasibility of the constrained generator domain.
bool cz_feasible(const ConstrainedZonotope& cz);

// --- reduction and enclosure -------------------------------------------------

enum class ReductionMethod { PCA, Girard };

Zonotope reduce_zonotope(const Zonotope& z, double max_order,
                         ReductionMethod method = ReductionMethod::Girard);
ConstrainedZonotope reduce_constraints(const ConstrainedZonotope& cz, Eigen::Index max_constraints,
                                       double max_order);
/// Recenter generator coefficients to the ranges implied by the constraints;
/// sound tightening that leaves the represented set unchanged.
ConstrainedZonotope rescale(const ConstrainedZonotope& cz);
/// Axis-aligned ellipsoid a = mid, P = n * diag(rad^2), flat axes regularized
/// with eps = 1e-12.
Ellipsoid enclose_ellipsoid(const IntervalVector& box);

/// Minimal-trace outer ellipsoid of the Minkowski sum of two ellipsoids.
Ellipsoid ellipsoid_sum(const Ellipsoid& e1, const Ellipsoid& e2);

}  // namespace gse

#endif  // GSE_SETS_HPP_
