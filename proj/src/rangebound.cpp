#include "gse/rangebound.hpp"

#include <cmath>
#include <stdexcept>

#include "gse/rng.hpp"

namespace gse {

namespace {

IntervalVector point_box(const Eigen::VectorXd& u) { return IntervalVector::point(u); }

std::vector<ExprPtr> jacobian_row(const SymbolicDynamics& f, int i) {
    std::vector<ExprPtr> row;
    row.reserve(size_t(f.n_states));
    for (int j = 0; j < f.n_states; ++j) row.push_back(diff_x(f.comps[size_t(i)], j));
    return row;
}

}  // namespace

IntervalVector interval_eval(const SymbolicDynamics& f, const IntervalVector& X,
                             const IntervalVector& U) {
    Eigen::VectorXd lo(f.dim_out()), hi(f.dim_out());
    for (Eigen::Index i = 0; i < f.dim_out(); ++i) {
        const Interval r = eval(f.comps[size_t(i)], X, U);
        lo[i] = r.lo;
        hi[i] = r.hi;
    }
    return {lo, hi};
}

IntervalVector interval_eval(const SymbolicDynamics& f, const IntervalVector& X,
                             const Eigen::VectorXd& u) {
    return interval_eval(f, X, point_box(u));
}

IntervalMatrix jacobian_interval(const SymbolicDynamics& f, const IntervalVector& X,
                                 const IntervalVector& U) {
    Eigen::MatrixXd lo(f.dim_out(), f.n_states), hi(f.dim_out(), f.n_states);
    for (Eigen::Index i = 0; i < f.dim_out(); ++i) {
        for (int j = 0; j < f.n_states; ++j) {
            const Interval r = eval(diff_x(f.comps[size_t(i)], j), X, U);
            lo(i, j) = r.lo;
            hi(i, j) = r.hi;
        }
    }
    return {lo, hi};
}

IntervalMatrix jacobian_interval(const SymbolicDynamics& f, const IntervalVector& X,
                                 const Eigen::VectorXd& u) {
    return jacobian_interval(f, X, point_box(u));
}

Eigen::MatrixXd jacobian_point(const SymbolicDynamics& f, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) {
    Eigen::MatrixXd J(f.dim_out(), f.n_states);
    for (Eigen::Index i = 0; i < f.dim_out(); ++i)
        for (int j = 0; j < f.n_states; ++j) J(i, j) = eval(diff_x(f.comps[size_t(i)], j), x, u);
    return J;
}

IntervalMatrix hessian_interval(const SymbolicDynamics& f, int component, const IntervalVector& X,
                                const Eigen::VectorXd& u) {
    const int n = f.n_states;
    Eigen::MatrixXd lo(n, n), hi(n, n);
    const IntervalVector U = point_box(u);
    for (int j = 0; j < n; ++j) {
        const ExprPtr dj = diff_x(f.comps[size_t(component)], j);
        for (int k = j; k < n; ++k) {
            const Interval r = eval(diff_x(dj, k), X, U);
            lo(j, k) = lo(k, j) = r.lo;
            hi(j, k) = hi(k, j) = r.hi;
        }
    }
    return {lo, hi};
}

SetValue mean_value_extension(const SymbolicDynamics& f, const SetValue& X,
                              const Eigen::VectorXd& c, const Eigen::VectorXd& u) {
    const IntervalVector hullX = interval_hull(X);
    if (!hullX.contains(c, 1e-9))
        throw std::invalid_argument("mean_value_extension: expansion point outside hull");
    const IntervalMatrix J = jacobian_interval(f, hullX, u);
    const Eigen::MatrixXd M = J.mid();
    const Eigen::MatrixXd R = J.rad();
    // componentwise magnitude of hull(X) - c
    Eigen::VectorXd mag(hullX.dim());
    for (Eigen::Index j = 0; j < hullX.dim(); ++j)
        mag[j] = std::max(std::abs(hullX.lo[j] - c[j]), std::abs(hullX.hi[j] - c[j]));
    const Eigen::VectorXd rvec = R * mag;
    const Eigen::VectorXd fc = f.eval_point(c, u);

    const auto assemble = [&](const Eigen::VectorXd& xc, const Eigen::MatrixXd& xg) {
        Eigen::VectorXd center = fc + M * (xc - c);
        Eigen::MatrixXd G(f.dim_out(), xg.cols() + f.dim_out());
        G << M * xg, Eigen::MatrixXd(rvec.asDiagonal());
        return std::pair{center, G};
    };

    if (const auto* box = std::get_if<IntervalVector>(&X)) {
        const Zonotope z = Zonotope::from_box(*box);
        auto [center, G] = assemble(z.c, z.G);
        return Zonotope{center, G};
    }
    if (const auto* z = std::get_if<Zonotope>(&X)) {
        auto [center, G] = assemble(z->c, z->G);
        return Zonotope{center, G};
    }
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&X)) {
        auto [center, G] = assemble(cz->c, cz->G);
        Eigen::MatrixXd A(cz->A.rows(), G.cols());
        A << cz->A, Eigen::MatrixXd::Zero(cz->A.rows(), f.dim_out());
        return ConstrainedZonotope{center, G, A, cz->b};
    }
    throw std::invalid_argument("mean_value_extension: unsupported set representation");
}

Linearization conservative_linearization(const SymbolicDynamics& f, const SetValue& X,
                                         const Eigen::VectorXd& c, const Eigen::VectorXd& u) {
    const IntervalVector hullX = interval_hull(X);
    Linearization lin;
    lin.A = jacobian_point(f, c, u);
    lin.affine = f.eval_point(c, u);
    Eigen::VectorXd rlo(f.dim_out()), rhi(f.dim_out());
    std::vector<Interval> delta(size_t(hullX.dim()));
    for (Eigen::Index j = 0; j < hullX.dim(); ++j)
        delta[size_t(j)] = Interval{hullX.lo[j] - c[j], hullX.hi[j] - c[j]};
    for (Eigen::Index i = 0; i < f.dim_out(); ++i) {
        const IntervalMatrix H = hessian_interval(f, int(i), hullX, u);
        Interval acc{0.0, 0.0};
        for (Eigen::Index j = 0; j < hullX.dim(); ++j) {
            // diagonal uses the even-power tightening of delta_j^2
            acc = acc + H(j, j) * ipow(delta[size_t(j)], 2);
            for (Eigen::Index k = j + 1; k < hullX.dim(); ++k)
                acc = acc + 2.0 * (H(j, k) * (delta[size_t(j)] * delta[size_t(k)]));
        }
        rlo[i] = 0.5 * acc.lo;
        rhi[i] = 0.5 * acc.hi;
    }
    lin.remainder = IntervalVector{rlo, rhi};
    return lin;
}

// --- DC bounds ----------------------------------------------------------------

void validate_dc_split(const SymbolicDynamics& f, const DCSplit& split, std::uint64_t seed) {
    if (split.g.comps.size() != f.comps.size() || split.h.comps.size() != f.comps.size())
        throw std::invalid_argument("dc split: component count mismatch");
    if (split.domain.dim() != f.n_states)
        throw std::invalid_argument("dc split: domain dimension mismatch");
    Rng rng(seed);
    const auto sample = [&] {
        Eigen::VectorXd x(split.domain.dim());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = rng.uniform(split.domain.lo[i], split.domain.hi[i]);
        return x;
    };
    const auto sample_u = [&] {
        Eigen::VectorXd u(f.n_inputs);
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.uniform(0.0, 1.0);
        return u;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd x = sample();
        const Eigen::VectorXd u = sample_u();
        const Eigen::VectorXd fv = f.eval_point(x, u);
        const Eigen::VectorXd gv = split.g.eval_point(x, u);
        const Eigen::VectorXd hv = split.h.eval_point(x, u);
        const double err = (gv - hv - fv).lpNorm<Eigen::Infinity>();
        if (err > 1e-8 * (1.0 + fv.lpNorm<Eigen::Infinity>()))
            throw std::invalid_argument("dc split: g - h deviates from f on the domain");
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd a = sample();
        const Eigen::VectorXd b = sample();
        const Eigen::VectorXd u = sample_u();
        const Eigen::VectorXd m = 0.5 * (a + b);
        for (const auto* part : {&split.g, &split.h}) {
            const Eigen::VectorXd va = part->eval_point(a, u);
            const Eigen::VectorXd vb = part->eval_point(b, u);
            const Eigen::VectorXd vm = part->eval_point(m, u);
            const double scale = 1.0 + va.lpNorm<Eigen::Infinity>() + vb.lpNorm<Eigen::Infinity>();
            if ((vm - 0.5 * (va + vb)).maxCoeff() > 1e-9 * scale)
                throw std::invalid_argument("dc split: midpoint convexity check failed");
        }
    }
}

DCSplit make_dc_split_regularized(const SymbolicDynamics& g, const SymbolicDynamics& h,
                                  const IntervalVector& domain) {
    if (g.comps.size() != h.comps.size())
        throw std::invalid_argument("dc regularization: component count mismatch");
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(g.n_inputs);
    DCSplit out;
    out.g.n_states = g.n_states;
    out.g.n_inputs = g.n_inputs;
    out.h.n_states = h.n_states;
    out.h.n_inputs = h.n_inputs;
    out.domain = domain;

    // Per-row Gershgorin deficit of the Hessian over the domain: adding
    // diag(rho) with rho_j >= -row_j restores diagonal dominance, hence PSD.
    const auto row_deficit = [&](const SymbolicDynamics& part, int i) {
        const IntervalMatrix H = hessian_interval(part, i, domain, u0);
        Eigen::VectorXd deficit(H.rows());
        for (Eigen::Index j = 0; j < H.rows(); ++j) {
            double row = H.lo(j, j);
            for (Eigen::Index k = 0; k < H.cols(); ++k)
                if (k != j) row -= std::max(std::abs(H.lo(j, k)), std::abs(H.hi(j, k)));
            deficit[j] = std::max(0.0, -row);
        }
        return deficit;
    };

    for (size_t i = 0; i < g.comps.size(); ++i) {
        const Eigen::VectorXd rho =
            row_deficit(g, int(i)).cwiseMax(row_deficit(h, int(i)));
        if (rho.maxCoeff() == 0.0) {
            out.g.comps.push_back(g.comps[i]);
            out.h.comps.push_back(h.comps[i]);
            continue;
        }
        ExprPtr pad = constant(0.0);
        for (int j = 0; j < g.n_states; ++j)
            if (rho[j] > 0.0)
                pad = add(pad, mul(constant(0.5 * rho[j]), pow_int(var_x(j), 2)));
        out.g.comps.push_back(add(g.comps[i], pad));
        out.h.comps.push_back(add(h.comps[i], pad));
    }
    return out;
}

namespace {

/// Affine overestimator of a convex function over a box: the interpolant of
/// vertex-average slopes, lifted until it dominates every vertex. Convexity
/// makes vertex domination imply domination over the whole box.
struct VertexTable {
    std::vector<Eigen::VectorXd> g_vals;  // per vertex, all components of g
    std::vector<Eigen::VectorXd> h_vals;
    std::vector<Eigen::VectorXd> verts;
};

AffineBound overestimate(const std::vector<Eigen::VectorXd>& vals,
                         const std::vector<Eigen::VectorXd>& verts, int comp,
                         const IntervalVector& X) {
    const Eigen::Index n = X.dim();
    const size_t nv = verts.size();
    Eigen::RowVectorXd beta = Eigen::RowVectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double w = X.hi[j] - X.lo[j];
        if (w <= 0.0) continue;
        double acc = 0.0;
        for (size_t v = 0; v < nv; ++v)
            acc += (verts[v][j] == X.hi[j] ? 1.0 : -1.0) * vals[v][comp];
        beta[j] = acc / (double(nv) / 2.0 * w);
    }
    double alpha = -std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < nv; ++v)
        alpha = std::max(alpha, vals[v][comp] - beta.dot(verts[v]));
    return {beta, alpha};
}

}  // namespace

DcBoundPair dc_bounds(const DCSplit& split, const IntervalVector& X,
                      const std::vector<Eigen::VectorXd>& tangentPoints,
                      const Eigen::VectorXd& u) {
    const Eigen::Index n = X.dim();
    if (n > 20)
        throw std::invalid_argument(
            "dc_bounds: vertex enumeration refused beyond 20 dimensions");
    if (!split.domain.contains(X, 1e-9))
        throw domain_error("dc_bounds: query box leaves the declared dc domain");
    const Eigen::VectorXd uu = u.size() == split.g.n_inputs
                                   ? u
                                   : Eigen::VectorXd::Zero(split.g.n_inputs);

    // tabulate both sides at every box vertex
    VertexTable tab;
    const size_t nv = size_t(1) << size_t(n);
    tab.verts.reserve(nv);
    for (size_t mask = 0; mask < nv; ++mask) {
        Eigen::VectorXd v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = (mask >> j) & 1 ? X.hi[j] : X.lo[j];
        tab.g_vals.push_back(split.g.eval_point(v, uu));
        tab.h_vals.push_back(split.h.eval_point(v, uu));
        tab.verts.push_back(std::move(v));
    }

    const size_t nc = split.g.comps.size();
    DcBoundPair out;
    out.lower.resize(nc);
    out.upper.resize(nc);
    const Eigen::VectorXd center = X.mid();
    const Eigen::MatrixXd Jg_all =
        tangentPoints.empty() ? jacobian_point(split.g, center, uu) : Eigen::MatrixXd();
    const Eigen::MatrixXd Jh_all =
        tangentPoints.empty() ? jacobian_point(split.h, center, uu) : Eigen::MatrixXd();

    for (size_t i = 0; i < nc; ++i) {
        Eigen::VectorXd t = center;
        if (!tangentPoints.empty())
            t = tangentPoints.size() == 1 ? tangentPoints[0] : tangentPoints[i];
        Eigen::RowVectorXd grad_g, grad_h;
        double g_t, h_t;
        if (tangentPoints.empty()) {
            grad_g = Jg_all.row(Eigen::Index(i));
            grad_h = Jh_all.row(Eigen::Index(i));
            g_t = eval(split.g.comps[i], center, uu);
            h_t = eval(split.h.comps[i], center, uu);
        } else {
            grad_g.resize(n);
            grad_h.resize(n);
            for (int j = 0; j < int(n); ++j) {
                grad_g[j] = eval(diff_x(split.g.comps[i], j), t, uu);
                grad_h[j] = eval(diff_x(split.h.comps[i], j), t, uu);
            }
            g_t = eval(split.g.comps[i], t, uu);
            h_t = eval(split.h.comps[i], t, uu);
        }
        const AffineBound over_h = overestimate(tab.h_vals, tab.verts, int(i), X);
        const AffineBound over_g = overestimate(tab.g_vals, tab.verts, int(i), X);
        // lower: tangent of g minus overestimator of h
        out.lower[i] = {grad_g - over_h.slope, g_t - grad_g.dot(t) - over_h.intercept};
        // upper: overestimator of g minus tangent of h
        out.upper[i] = {over_g.slope - grad_h, over_g.intercept - h_t + grad_h.dot(t)};
    }
    return out;
}

// --- mixed-monotone decomposition --------------------------------------------

DecompositionFunction make_decomposition(const SymbolicDynamics& f, const IntervalVector& domain,
                                         const Eigen::VectorXd& u) {
    const IntervalMatrix J = jacobian_interval(f, domain, u);
    const Eigen::Index nout = f.dim_out();
    const Eigen::Index n = f.n_states;
    // sign(i,j): +1 increasing, -1 decreasing, 0 mixed (with slope shift)
    Eigen::MatrixXi sign(nout, n);
    Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(nout, n);
    for (Eigen::Index i = 0; i < nout; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (J.lo(i, j) >= 0.0)
                sign(i, j) = 1;
            else if (J.hi(i, j) <= 0.0)
                sign(i, j) = -1;
            else {
                sign(i, j) = 0;
                shift(i, j) = -J.lo(i, j);
            }
        }
    }
    DecompositionFunction d;
    d.domain = domain;
    auto comps = f.comps;
    d.d = [comps, u, sign, shift, n, nout](const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& xhat) {
        Eigen::VectorXd out(nout);
        Eigen::VectorXd zeta(n);
        for (Eigen::Index i = 0; i < nout; ++i) {
            double extra = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                zeta[j] = sign(i, j) == -1 ? xhat[j] : x[j];
                if (sign(i, j) == 0) extra += shift(i, j) * (x[j] - xhat[j]);
            }
            out[i] = eval(comps[size_t(i)], zeta, u) + extra;
        }
        return out;
    };
    return d;
}

IntervalVector mixed_monotone_bounds(const DecompositionFunction& d, const IntervalVector& box) {
    if (!d.domain.contains(box, 1e-9))
        throw domain_error("mixed_monotone_bounds: box leaves the decomposition domain");
    const Eigen::VectorXd lo = d.d(box.lo, box.hi);
    const Eigen::VectorXd hi = d.d(box.hi, box.lo);
    return {lo.cwiseMin(hi), hi.cwiseMax(lo)};
}

}  // namespace gse
