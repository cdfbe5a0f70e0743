#ifndef GSE_RANGEBOUND_HPP_
#define GSE_RANGEBOUND_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "gse/expr.hpp"
#include "gse/interval.hpp"
#include "gse/sets.hpp"

namespace gse {

/// Natural inclusion function: result encloses { f(x,u) : x in X, u in U }.
IntervalVector interval_eval(const SymbolicDynamics& f, const IntervalVector& X,
                             const IntervalVector& U);
IntervalVector interval_eval(const SymbolicDynamics& f, const IntervalVector& X,
                             const Eigen::VectorXd& u);

/// Entry (i,j) encloses df_i/dx_j over X x U.
IntervalMatrix jacobian_interval(const SymbolicDynamics& f, const IntervalVector& X,
                                 const IntervalVector& U);
IntervalMatrix jacobian_interval(const SymbolicDynamics& f, const IntervalVector& X,
                                 const Eigen::VectorXd& u);
Eigen::MatrixXd jacobian_point(const SymbolicDynamics& f, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u);

/// Interval enclosure of the Hessian of component i over X x U.
IntervalMatrix hessian_interval(const SymbolicDynamics& f, int component, const IntervalVector& X,
                                const Eigen::VectorXd& u);

/// f(c) + grad f(hull(X)) * (X - c), realized in generator form: the interval
/// Jacobian splits into midpoint map plus radius box term. Result contains
/// f(X). X must be a box, zonotope, or constrained zonotope.
SetValue mean_value_extension(const SymbolicDynamics& f, const SetValue& X,
                              const Eigen::VectorXd& c, const Eigen::VectorXd& u);

struct Linearization {
    Eigen::MatrixXd A;          // point Jacobian at c
    Eigen::VectorXd affine;     // f(c, u)
    IntervalVector remainder;   // f(x) in affine + A (x - c) + remainder on X
};

/// Second-order remainder: R_i = 1/2 (X-c)^T H_i(hull X) (X-c) in interval
/// arithmetic.
Linearization conservative_linearization(const SymbolicDynamics& f, const SetValue& X,
                                         const Eigen::VectorXd& c, const Eigen::VectorXd& u);

// --- difference-of-convex bounds ---------------------------------------------

/// f = g - h with every component of g and h convex on the declared domain.
struct DCSplit {
    SymbolicDynamics g;
    SymbolicDynamics h;
    IntervalVector domain;
};

/// Sampled identity (g - h == f, 10^3 points, tol 1e-8) and midpoint convexity
/// (10^3 segment tests per side). Throws std::invalid_argument on failure.
void validate_dc_split(const SymbolicDynamics& f, const DCSplit& split, std::uint64_t seed = 7);

/// Adds (rho/2)|x|^2 to both sides, rho from a Gershgorin lower bound of the
/// interval Hessians over the domain, making each component certifiably convex.
DCSplit make_dc_split_regularized(const SymbolicDynamics& g, const SymbolicDynamics& h,
                                  const IntervalVector& domain);

struct AffineBound {
    Eigen::RowVectorXd slope;
    double intercept = 0.0;
    double at(const Eigen::VectorXd& x) const { return slope.dot(x) + intercept; }
};

struct DcBoundPair {
    std::vector<AffineBound> lower;  // one per component
    std::vector<AffineBound> upper;
};

/// Supporting tangent of the convex side minus a vertex-interpolated affine
/// overestimator of the other side. The overestimator enumerates the 2^n box
/// vertices; refuses n > 20. Empty tangentPoints defaults to the box center.
DcBoundPair dc_bounds(const DCSplit& split, const IntervalVector& X,
                      const std::vector<Eigen::VectorXd>& tangentPoints = {},
                      const Eigen::VectorXd& u = Eigen::VectorXd(0));

// --- mixed-monotone decomposition --------------------------------------------

/// d(x, xhat): increasing in x, decreasing in xhat, d(x,x) = f(x).
struct DecompositionFunction {
    IntervalVector domain;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> d;
};

/// Jacobian-sign remainder construction over the given domain; valid for any
/// smooth f with bounded interval Jacobian there.
DecompositionFunction make_decomposition(const SymbolicDynamics& f, const IntervalVector& domain,
                                         const Eigen::VectorXd& u);

/// [d(lower,upper), d(upper,lower)] componentwise; encloses f over the box.
IntervalVector mixed_monotone_bounds(const DecompositionFunction& d, const IntervalVector& box);

}  // namespace gse

#endif  // GSE_RANGEBOUND_HPP_
