#include "gse/observers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gse {

namespace {

struct MethodInfo {
    ObserverMethod method;
    const char* name;
    MethodCategory category;
};

const MethodInfo kMethods[] = {
    {ObserverMethod::ESOE, "ESO-E", MethodCategory::Propagation},
    {ObserverMethod::FRadA, "FRad-A", MethodCategory::Intersection},
    {ObserverMethod::FRadB, "FRad-B", MethodCategory::Intersection},
    {ObserverMethod::VolMinA, "VolMin-A", MethodCategory::Intersection},
    {ObserverMethod::VolMinB, "VolMin-B", MethodCategory::Intersection},
    {ObserverMethod::ZDC, "ZDC", MethodCategory::Intersection},
    {ObserverMethod::CZDC, "CZDC", MethodCategory::Intersection},
    {ObserverMethod::CZNA, "CZN-A", MethodCategory::Intersection},
    {ObserverMethod::CZNB, "CZN-B", MethodCategory::Intersection},
    {ObserverMethod::CZMV, "CZMV", MethodCategory::Intersection},
    {ObserverMethod::FRadC, "FRad-C", MethodCategory::Propagation},
    {ObserverMethod::PDTDI, "pDTDI", MethodCategory::IntervalBased},
    {ObserverMethod::CZKH, "CZKH", MethodCategory::IntervalBased},
    {ObserverMethod::ZBKH, "ZBKH", MethodCategory::IntervalBased},
};

Eigen::VectorXd center_of(const SetValue& X) {
    if (const auto* b = std::get_if<IntervalVector>(&X)) return b->mid();
    if (const auto* z = std::get_if<Zonotope>(&X)) return z->c;
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&X)) return cz->c;
    if (const auto* e = std::get_if<Ellipsoid>(&X)) return e->a;
    throw std::invalid_argument("center_of: unsupported representation");
}

// Constrained-zonotope centers may lie outside the feasible set, so expand
// around the hull midpoint instead.
Eigen::VectorXd expansion_point(const SetValue& X) {
    if (std::holds_alternative<ConstrainedZonotope>(X)) return interval_hull(X).mid();
    return center_of(X);
}

Zonotope as_zonotope(const SetValue& X) {
    if (const auto* b = std::get_if<IntervalVector>(&X)) return Zonotope::from_box(*b);
    if (const auto* z = std::get_if<Zonotope>(&X)) return *z;
    throw std::invalid_argument("expected a zonotope-representable set");
}

ConstrainedZonotope as_cz(const SetValue& X) {
    if (const auto* b = std::get_if<IntervalVector>(&X)) return ConstrainedZonotope::from_box(*b);
    if (const auto* z = std::get_if<Zonotope>(&X)) return ConstrainedZonotope::from_zonotope(*z);
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&X)) return *cz;
    throw std::invalid_argument("expected a constrained-zonotope-representable set");
}

}  // namespace

std::string method_name(ObserverMethod m) {
    for (const auto& info : kMethods)
        if (info.method == m) return info.name;
    throw std::logic_error("method_name: unknown method");
}

std::optional<ObserverMethod> method_from_name(const std::string& name) {
    for (const auto& info : kMethods)
        if (name == info.name) return info.method;
    return std::nullopt;
}

MethodCategory method_category(ObserverMethod m) {
    for (const auto& info : kMethods)
        if (info.method == m) return info.category;
    throw std::logic_error("method_category: unknown method");
}

std::string category_name(MethodCategory c) {
    switch (c) {
        case MethodCategory::Intersection: return "intersection";
        case MethodCategory::Propagation: return "propagation";
        case MethodCategory::IntervalBased: return "interval";
    }
    throw std::logic_error("category_name: unknown category");
}

const std::vector<ObserverMethod>& all_methods() {
    static const std::vector<ObserverMethod> v = [] {
        std::vector<ObserverMethod> out;
        for (const auto& info : kMethods) out.push_back(info.method);
        return out;
    }();
    return v;
}

std::vector<Strip> measurement_strips(const Eigen::MatrixXd& C, const Eigen::VectorXd& y,
                                      const IntervalVector& V) {
    if (C.rows() != y.size() || V.dim() != y.size())
        throw dimension_error("measurement_strips: shape mismatch");
    std::vector<Strip> strips;
    strips.reserve(size_t(C.rows()));
    for (Eigen::Index j = 0; j < C.rows(); ++j) {
        Strip s;
        s.normal = C.row(j);
        s.offset = y[j];
        s.noise = Interval{-V.hi[j], -V.lo[j]};
        strips.push_back(std::move(s));
    }
    return strips;
}

// --- prediction ---------------------------------------------------------------

SetValue predict_mve(const SetValue& X, const NonlinearDiscreteSystem& sys,
                     const Eigen::VectorXd& u) {
    SetValue img = mean_value_extension(sys.f, X, expansion_point(X), u);
    return minkowski_sum(img, SetValue{sys.W});
}

SetValue predict_linremainder(const SetValue& X, const NonlinearDiscreteSystem& sys,
                              const Eigen::VectorXd& u) {
    if (const auto* e = std::get_if<Ellipsoid>(&X)) {
        const Linearization lin = conservative_linearization(sys.f, X, e->a, u);
        Eigen::MatrixXd P1 = lin.A * e->P * lin.A.transpose();
        P1 += 1e-12 * Eigen::MatrixXd::Identity(P1.rows(), P1.cols());
        const IntervalVector extra = lin.remainder + sys.W;
        if (extra.rad().maxCoeff() <= 1e-12)
            return Ellipsoid{lin.affine + extra.mid(), P1};
        return ellipsoid_sum(Ellipsoid{lin.affine, P1}, enclose_ellipsoid(extra));
    }
    const Eigen::VectorXd c = expansion_point(X);
    const Linearization lin = conservative_linearization(sys.f, X, c, u);
    SetValue base;
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&X))
        base = ConstrainedZonotope{lin.affine + lin.A * (cz->c - c), lin.A * cz->G, cz->A, cz->b};
    else {
        const Zonotope z = as_zonotope(X);
        base = Zonotope{lin.affine + lin.A * (z.c - c), lin.A * z.G};
    }
    base = minkowski_sum(base, SetValue{lin.remainder});
    return minkowski_sum(base, SetValue{sys.W});
}

SetValue predict_dc(const SetValue& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const DCSplit& split) {
    const IntervalVector hull = interval_hull(X);
    const DcBoundPair bounds = dc_bounds(split, hull, {}, u);
    const Eigen::Index n = sys.n();
    // midline affine map plus the residual range of the tangent/envelope gap
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rlo(n), rhi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::RowVectorXd half =
            0.5 * (bounds.upper[size_t(i)].slope - bounds.lower[size_t(i)].slope);
        M.row(i) = 0.5 * (bounds.upper[size_t(i)].slope + bounds.lower[size_t(i)].slope);
        const double spread = support_raw(X, half.transpose());
        rlo[i] = bounds.lower[size_t(i)].intercept - spread;
        rhi[i] = bounds.upper[size_t(i)].intercept + spread;
        if (rhi[i] < rlo[i]) rhi[i] = rlo[i];  // LP tolerance on a flat set
    }
    SetValue base;
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&X))
        base = ConstrainedZonotope{M * cz->c, M * cz->G, cz->A, cz->b};
    else {
        const Zonotope z = as_zonotope(X);
        base = Zonotope{M * z.c, M * z.G};
    }
    base = minkowski_sum(base, SetValue{IntervalVector{rlo, rhi}});
    return minkowski_sum(base, SetValue{sys.W});
}

// --- correction ---------------------------------------------------------------

namespace {

ConstrainedZonotope append_strip_constraint(const ConstrainedZonotope& cz, const Strip& s) {
    const Eigen::Index r = cz.num_generators();
    const Eigen::Index q = cz.num_constraints();
    const double rad = s.half_width();
    Eigen::MatrixXd G(cz.dim(), r + 1);
    G << cz.G, Eigen::VectorXd::Zero(cz.dim());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(q + 1, r + 1);
    A.topLeftCorner(q, r) = cz.A;
    A.block(q, 0, 1, r) = s.normal * cz.G;
    A(q, r) = -rad;
    Eigen::VectorXd b(q + 1);
    b << cz.b, s.mid_level() - s.normal.dot(cz.c);
    return {cz.c, std::move(G), std::move(A), std::move(b)};
}

/// One propagation pass of { normal x in offset + noise } over a box.
bool clip_box_with_strip(IntervalVector& box, const Strip& s) {
    const Interval rhs = Interval{s.offset, s.offset} + s.noise;
    for (Eigen::Index j = 0; j < box.dim(); ++j) {
        const double nj = s.normal[j];
        if (nj == 0.0) continue;
        Interval rest{0.0, 0.0};
        for (Eigen::Index k = 0; k < box.dim(); ++k)
            if (k != j) rest = rest + s.normal[k] * box[k];
        const Interval target = (rhs - rest) / Interval::point(nj);
        const Interval cur = box[j];
        if (!cur.intersects(target)) return false;
        box.set(j, Interval{std::max(cur.lo, target.lo), std::min(cur.hi, target.hi)});
    }
    return true;
}

}  // namespace

SetValue correct_strip(const SetValue& predicted, const std::vector<Strip>& strips,
                       GainRule rule) {
    if (rule == GainRule::CzStrip) {
        ConstrainedZonotope cz = as_cz(predicted);
        for (const auto& s : strips) cz = append_strip_constraint(cz, s);
        if (!strips.empty() && !cz_feasible(cz)) return EmptySet{cz.dim()};
        return cz;
    }
    Zonotope z = as_zonotope(predicted);
    for (const auto& s : strips) {
        const Eigen::VectorXd lambda =
            rule == GainRule::Frobenius ? frobenius_gain(z, s) : volume_gain(z, s);
        z = strip_intersection_gain(z, s, lambda);
    }
    return z;
}

SetValue correct_cz_exact(const ConstrainedZonotope& predicted, const Eigen::MatrixXd& C,
                          const Eigen::VectorXd& y, const IntervalVector& V, int maxConstraints,
                          double maxOrder) {
    const IntervalVector Y{y - V.hi, y - V.lo};  // C x = y - v
    SetValue inter = generalized_intersection(SetValue{predicted}, C, SetValue{Y});
    if (is_empty_marker(inter)) return inter;
    return reduce_constraints(std::get<ConstrainedZonotope>(inter), maxConstraints, maxOrder);
}

SetValue correct_ellipsoid(const Ellipsoid& predicted, const std::vector<Strip>& strips) {
    Ellipsoid e = predicted;
    const Eigen::Index n = e.dim();
    for (const auto& s : strips) {
        const Eigen::VectorXd c = s.normal.transpose();
        const double ym = s.mid_level();
        const double sigma = std::max(s.half_width(), 1e-9);
        const Eigen::MatrixXd Pinv =
            e.P.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
        const double a_quad = e.a.dot(Pinv * e.a);

        // trace of the fused shape as a function of the combination weight;
        // a clearly negative excess certifies an empty intersection
        bool certified_empty = false;
        const auto fuse = [&](double lam, Ellipsoid* out) -> double {
            const Eigen::MatrixXd Q =
                (1.0 - lam) * Pinv + (lam / (sigma * sigma)) * (c * c.transpose());
            const Eigen::LDLT<Eigen::MatrixXd> qd(Q);
            const Eigen::VectorXd l =
                (1.0 - lam) * (Pinv * e.a) + (lam * ym / (sigma * sigma)) * c;
            const Eigen::VectorXd xs = qd.solve(l);
            const double cst = (1.0 - lam) * a_quad + lam * ym * ym / (sigma * sigma);
            const double excess = 1.0 - cst + xs.dot(Q * xs);
            if (excess <= 0.0) {
                if (excess < -1e-9) certified_empty = true;
                return std::numeric_limits<double>::infinity();
            }
            const Eigen::MatrixXd Qinv = qd.solve(Eigen::MatrixXd::Identity(n, n));
            if (out) *out = Ellipsoid{xs, excess * Qinv};
            return excess * Qinv.trace();
        };

        // coarse scan first: empty certificates live anywhere on the interval
        for (int k = 1; k <= 20; ++k) fuse(0.05 * k * 0.9999, nullptr);
        if (certified_empty) return EmptySet{n};

        // golden-section on [0, 0.9999]; lam = 0 keeps the prior ellipsoid
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0, hi = 0.9999;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = fuse(x1, nullptr), f2 = fuse(x2, nullptr);
        for (int it = 0; it < 60; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = fuse(x1, nullptr);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = fuse(x2, nullptr);
            }
        }
        const double best = 0.5 * (lo + hi);
        Ellipsoid fused;
        const double fbest = fuse(best, &fused);
        if (certified_empty) return EmptySet{n};
        if (std::isfinite(fbest) && fbest < fuse(0.0, nullptr)) e = fused;
    }
    return e;
}

// --- composite steps ----------------------------------------------------------

SetValue step_fradC(const Zonotope& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                    const Eigen::MatrixXd* forced_gain) {
    const Linearization lin = conservative_linearization(sys.f, SetValue{X}, X.c, u);
    const Eigen::Index n = sys.n(), r = sys.r();
    Eigen::MatrixXd L;
    if (forced_gain) {
        L = *forced_gain;
    } else {
        const Eigen::MatrixXd P = X.G * X.G.transpose();
        const Eigen::MatrixXd Rv =
            Eigen::MatrixXd(sys.V.rad().array().square().matrix().asDiagonal());
        L = lin.A * P * sys.C.transpose() *
            (sys.C * P * sys.C.transpose() + Rv)
                .ldlt()
                .solve(Eigen::MatrixXd::Identity(r, r));
    }
    // x+ = (A - LC)(x - c) + affine + L (y - C c) - L v + w + remainder
    Eigen::VectorXd center = lin.affine + L * (y - sys.C * X.c) - L * sys.V.mid() +
                             sys.W.mid() + lin.remainder.mid();
    Eigen::MatrixXd G(n, X.num_generators() + r + n + n);
    G << (lin.A - L * sys.C) * X.G, -L * Eigen::MatrixXd(sys.V.rad().asDiagonal()),
        Eigen::MatrixXd(sys.W.rad().asDiagonal()),
        Eigen::MatrixXd(lin.remainder.rad().asDiagonal());
    return Zonotope{std::move(center), std::move(G)};
}

SetValue step_pdtdi(const IntervalVector& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const Eigen::VectorXd& y, int partitions,
                    const Eigen::MatrixXd* G_aug) {
    if (partitions < 1) throw std::invalid_argument("step_pdtdi: partitions must be >= 1");
    const Eigen::Index n = X.dim();
    const IntervalVector U = IntervalVector::point(u);

    const auto refine = [&](IntervalVector& slab) -> bool {
        if (!G_aug) return true;
        // one forward-backward constraint-propagation pass per redundancy row
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index row = 0; row < G_aug->rows(); ++row) {
                Strip zero;
                zero.normal = G_aug->row(row);
                zero.offset = 0.0;
                zero.noise = Interval{0.0, 0.0};
                if (!clip_box_with_strip(slab, zero)) return false;
            }
        }
        return true;
    };

    Eigen::VectorXd lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best_lo = std::numeric_limits<double>::infinity();
        double best_hi = -best_lo;
        const double w = (X.hi[i] - X.lo[i]) / double(partitions);
        for (int p = 0; p < partitions; ++p) {
            IntervalVector slab = X;
            slab.lo[i] = X.lo[i] + w * p;
            slab.hi[i] = p + 1 == partitions ? X.hi[i] : X.lo[i] + w * (p + 1);
            if (!refine(slab)) continue;  // slab inconsistent with redundancy
            const Interval fi = eval(sys.f.comps[size_t(i)], slab, U);
            best_lo = std::min(best_lo, fi.lo);
            best_hi = std::max(best_hi, fi.hi);
        }
        if (!std::isfinite(best_lo)) return EmptySet{n};
        lo[i] = best_lo + sys.W.lo[i];
        hi[i] = best_hi + sys.W.hi[i];
    }
    IntervalVector next{lo, hi};
    for (const auto& s : measurement_strips(sys.C, y, sys.V))
        if (!clip_box_with_strip(next, s)) return EmptySet{n};
    return next;
}

namespace {

/// Mixed-monotone range of xi -> f(c + G xi) + W over xi in [-1,1]^r via the
/// Jacobian-sign remainder decomposition; the gradient enclosure comes from
/// the box hull of the relaxed zonotope.
IntervalVector lifted_bounds(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                             const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& u) {
    const Eigen::Index n = sys.n();
    const Eigen::Index r = G.cols();
    const IntervalVector hull = interval_hull(SetValue{Zonotope{c, G}});
    const IntervalMatrix J = jacobian_interval(sys.f, hull, u);
    Eigen::VectorXd lo(n), hi(n);
    Eigen::VectorXd zlo(n), zhi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // lifted row i of the interval Jacobian: sum_j J(i,j) G(j,k)
        double shift_sum = 0.0;
        Eigen::VectorXd xi_lo(r), xi_hi(r);
        for (Eigen::Index k = 0; k < r; ++k) {
            Interval jk{0.0, 0.0};
            for (Eigen::Index j = 0; j < n; ++j) jk = jk + G(j, k) * J(i, j);
            if (jk.lo >= 0.0) {
                xi_lo[k] = -1.0;
                xi_hi[k] = 1.0;
            } else if (jk.hi <= 0.0) {
                xi_lo[k] = 1.0;
                xi_hi[k] = -1.0;
            } else {
                xi_lo[k] = -1.0;  // mixed entries stay on the x side
                xi_hi[k] = 1.0;
                shift_sum += -jk.lo;
            }
        }
        const double flo = eval(sys.f.comps[size_t(i)], Eigen::VectorXd(c + G * xi_lo), u);
        const double fhi = eval(sys.f.comps[size_t(i)], Eigen::VectorXd(c + G * xi_hi), u);
        zlo[i] = flo - 2.0 * shift_sum;
        zhi[i] = fhi + 2.0 * shift_sum;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        lo[i] = std::min(zlo[i], zhi[i]) + sys.W.lo[i];
        hi[i] = std::max(zlo[i], zhi[i]) + sys.W.hi[i];
    }
    return {lo, hi};
}

}  // namespace

SetValue step_czkh(const ConstrainedZonotope& X, const NonlinearDiscreteSystem& sys,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& y, int maxConstraints,
                   double maxOrder) {
    // constraint-aware rescaling before relaxing the generator domain; without
    // it the accumulated measurement constraints never reach the prediction
    const ConstrainedZonotope Xs = rescale(X);
    const IntervalVector next = lifted_bounds(Xs.c, Xs.G, sys, u);
    SetValue corrected = correct_strip(SetValue{ConstrainedZonotope::from_box(next)},
                                       measurement_strips(sys.C, y, sys.V), GainRule::CzStrip);
    if (is_empty_marker(corrected)) return corrected;
    return reduce_constraints(std::get<ConstrainedZonotope>(corrected), maxConstraints, maxOrder);
}

SetValue step_zbkh(const ZonotopeBundle& X, const NonlinearDiscreteSystem& sys,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& y, double maxOrder,
                   ReductionMethod reduction) {
    // tightest box consistent with every member's propagation
    IntervalVector pred = lifted_bounds(X.members[0].c, X.members[0].G, sys, u);
    for (size_t m = 1; m < X.members.size(); ++m) {
        const IntervalVector bm = lifted_bounds(X.members[m].c, X.members[m].G, sys, u);
        IntervalVector tmp;
        if (!intersect(pred, bm, &tmp)) return EmptySet{sys.n()};
        pred = tmp;
    }
    const auto strips = measurement_strips(sys.C, y, sys.V);
    IntervalVector clipped = pred;
    for (const auto& s : strips)
        if (!clip_box_with_strip(clipped, s)) return EmptySet{sys.n()};
    // second member keeps oblique measurement information
    Zonotope oblique = std::get<Zonotope>(
        correct_strip(SetValue{Zonotope::from_box(pred)}, strips, GainRule::Frobenius));
    oblique = reduce_zonotope(oblique, maxOrder, reduction);
    return ZonotopeBundle{{Zonotope::from_box(clipped), std::move(oblique)}};
}

// --- dispatcher ---------------------------------------------------------------

namespace {

bool is_cz_method(ObserverMethod m) {
    return m == ObserverMethod::CZDC || m == ObserverMethod::CZNA || m == ObserverMethod::CZNB ||
           m == ObserverMethod::CZMV || m == ObserverMethod::CZKH;
}

SetValue apply_reduction(const ObserverConfig& cfg, SetValue est) {
    if (auto* z = std::get_if<Zonotope>(&est))
        return reduce_zonotope(*z, cfg.maxOrder, cfg.reduction);
    if (auto* cz = std::get_if<ConstrainedZonotope>(&est))
        return reduce_constraints(*cz, cfg.maxConstraints, cfg.maxOrder);
    if (auto* bu = std::get_if<ZonotopeBundle>(&est)) {
        std::vector<Zonotope> members;
        for (auto& m : bu->members)
            members.push_back(reduce_zonotope(m, cfg.maxOrder, cfg.reduction));
        // cap at 5: merge the oldest into a box around its clipped hull
        while (members.size() > 5) {
            IntervalVector merged;
            if (!intersect(interval_hull(SetValue{members[0]}),
                           interval_hull(SetValue{members.back()}), &merged))
                return EmptySet{members[0].dim()};
            members.back() = Zonotope::from_box(merged);
            members.erase(members.begin());
        }
        return ZonotopeBundle{std::move(members)};
    }
    return est;
}

void check_divergence(ObserverState& st) {
    if (is_empty_marker(st.estimate)) {
        st.diverged = true;
        st.reason = "inconsistent measurement (empty set)";
        return;
    }
    const IntervalVector hull = interval_hull(st.estimate);
    if (!hull.lo.allFinite() || !hull.hi.allFinite()) {
        st.diverged = true;
        st.reason = "non-finite estimate";
        return;
    }
    if (hull.max_radius() > 1e12) {
        st.diverged = true;
        st.reason = "estimate unbounded (hull radius > 1e12)";
    }
}

const NonlinearDiscreteSystem& effective_system(const ObserverConfig& cfg,
                                                const NonlinearDiscreteSystem& sys) {
    if (cfg.method == ObserverMethod::PDTDI && cfg.augmentation) return cfg.augmentation->lifted;
    return sys;
}

GainRule method_gain_rule(ObserverMethod m) {
    switch (m) {
        case ObserverMethod::VolMinA:
        case ObserverMethod::VolMinB:
        // the DC correction literature minimizes segment volume, not Frobenius
        // norm; the Frobenius gain leaves the unmeasured coordinate too loose
        // to stay inside the declared dc domain
        case ObserverMethod::ZDC: return GainRule::Volume;
        case ObserverMethod::CZDC:
        case ObserverMethod::CZNB:
        case ObserverMethod::CZMV:
        case ObserverMethod::CZKH: return GainRule::CzStrip;
        default: return GainRule::Frobenius;
    }
}

SetValue initial_estimate(const ObserverConfig& cfg, const IntervalVector& R0) {
    switch (cfg.method) {
        case ObserverMethod::ESOE: return enclose_ellipsoid(R0);
        case ObserverMethod::PDTDI: return cfg.augmentation ? cfg.augmentation->R0 : R0;
        case ObserverMethod::ZBKH: return ZonotopeBundle{{Zonotope::from_box(R0)}};
        default:
            if (is_cz_method(cfg.method)) return ConstrainedZonotope::from_box(R0);
            return Zonotope::from_box(R0);
    }
}

SetValue initial_correction(const ObserverConfig& cfg, SetValue est,
                            const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& y0) {
    if (sys.r() == 0) return est;
    const auto strips = measurement_strips(sys.C, y0, sys.V);
    switch (cfg.method) {
        case ObserverMethod::ESOE:
            return correct_ellipsoid(std::get<Ellipsoid>(est), strips);
        case ObserverMethod::PDTDI: {
            IntervalVector box = std::get<IntervalVector>(est);
            for (const auto& s : strips)
                if (!clip_box_with_strip(box, s)) return EmptySet{box.dim()};
            return box;
        }
        case ObserverMethod::ZBKH: {
            const IntervalVector pred = interval_hull(est);
            IntervalVector clipped = pred;
            for (const auto& s : strips)
                if (!clip_box_with_strip(clipped, s)) return EmptySet{pred.dim()};
            Zonotope oblique = std::get<Zonotope>(
                correct_strip(SetValue{Zonotope::from_box(pred)}, strips, GainRule::Frobenius));
            return ZonotopeBundle{{Zonotope::from_box(clipped), std::move(oblique)}};
        }
        case ObserverMethod::CZNA:
            return correct_cz_exact(std::get<ConstrainedZonotope>(est), sys.C, y0, sys.V,
                                    cfg.maxConstraints, cfg.maxOrder);
        default:
            // FRad-C has no standalone correction; the initial box is tightened
            // with the same strip rule as the FRad family
            return correct_strip(est, strips, method_gain_rule(cfg.method));
    }
}

}  // namespace

ObserverState observer_init(const ObserverConfig& cfg, const NonlinearDiscreteSystem& sys,
                            const IntervalVector& R0, const Eigen::VectorXd& y0) {
    ObserverState st;
    try {
        const NonlinearDiscreteSystem& esys = effective_system(cfg, sys);
        const IntervalVector& r0 =
            (cfg.method == ObserverMethod::PDTDI && cfg.augmentation) ? cfg.augmentation->R0 : R0;
        SetValue est = initial_estimate(cfg, r0);
        est = initial_correction(cfg, std::move(est), esys, y0);
        st.estimate = apply_reduction(cfg, std::move(est));
        check_divergence(st);
    } catch (const std::exception& e) {
        st.diverged = true;
        st.reason = e.what();
        st.estimate = EmptySet{sys.n()};
    }
    return st;
}

ObserverState observer_step(const ObserverConfig& cfg, const ObserverState& state,
                            const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& y) {
    ObserverState st = state;
    st.step = state.step + 1;
    if (st.diverged) return st;  // absorbing
    try {
        const NonlinearDiscreteSystem& esys = effective_system(cfg, sys);
        const auto strips = measurement_strips(esys.C, y, esys.V);
        SetValue next;
        switch (cfg.method) {
            case ObserverMethod::ESOE: {
                SetValue pred = predict_linremainder(state.estimate, esys, u);
                next = correct_ellipsoid(std::get<Ellipsoid>(pred), strips);
                break;
            }
            case ObserverMethod::FRadA:
            case ObserverMethod::VolMinA:
            case ObserverMethod::CZMV: {
                SetValue pred = predict_mve(state.estimate, esys, u);
                next = correct_strip(pred, strips, method_gain_rule(cfg.method));
                break;
            }
            case ObserverMethod::FRadB:
            case ObserverMethod::VolMinB:
            case ObserverMethod::CZNB: {
                SetValue pred = predict_linremainder(state.estimate, esys, u);
                next = correct_strip(pred, strips, method_gain_rule(cfg.method));
                break;
            }
            case ObserverMethod::CZNA: {
                SetValue pred = predict_linremainder(state.estimate, esys, u);
                next = correct_cz_exact(as_cz(pred), esys.C, y, esys.V, cfg.maxConstraints,
                                        cfg.maxOrder);
                break;
            }
            case ObserverMethod::ZDC:
            case ObserverMethod::CZDC: {
                if (!cfg.dcSplit)
                    throw std::invalid_argument("dc observer requires a configured split");
                SetValue pred = predict_dc(state.estimate, esys, u, *cfg.dcSplit);
                next = correct_strip(pred, strips, method_gain_rule(cfg.method));
                break;
            }
            case ObserverMethod::FRadC:
                next = step_fradC(std::get<Zonotope>(state.estimate), esys, u, y);
                break;
            case ObserverMethod::PDTDI:
                next = step_pdtdi(std::get<IntervalVector>(state.estimate), esys, u, y,
                                  cfg.partitions,
                                  cfg.augmentation ? &cfg.augmentation->G_aug : nullptr);
                break;
            case ObserverMethod::CZKH:
                next = step_czkh(std::get<ConstrainedZonotope>(state.estimate), esys, u, y,
                                 cfg.maxConstraints, cfg.maxOrder);
                break;
            case ObserverMethod::ZBKH:
                next = step_zbkh(std::get<ZonotopeBundle>(state.estimate), esys, u, y,
                                 cfg.maxOrder, cfg.reduction);
                break;
        }
        st.estimate = apply_reduction(cfg, std::move(next));
        check_divergence(st);
    } catch (const std::exception& e) {
        st.diverged = true;
        st.reason = e.what();
        st.estimate = EmptySet{set_dim(state.estimate)};
    }
    return st;
}

SetValue reported_estimate(const ObserverConfig& cfg, const ObserverState& state) {
    if (cfg.method == ObserverMethod::PDTDI && cfg.augmentation && !state.diverged) {
        const auto& box = std::get<IntervalVector>(state.estimate);
        const Eigen::Index n = cfg.augmentation->n_orig;
        return IntervalVector{box.lo.head(n), box.hi.head(n)};
    }
    return state.estimate;
}

ObserverConfig default_config(ObserverMethod m, const BenchmarkSpec& bench) {
    ObserverConfig cfg;
    cfg.method = m;
    cfg.maxOrder = bench.budgets.maxOrder;
    cfg.maxConstraints = bench.budgets.maxConstraints;
    cfg.partitions = bench.budgets.partitions;
    cfg.reduction = bench.reduction;
    const bool is_vdp = bench.name.rfind("vdp:", 0) == 0;
    const bool is_tank = bench.name.rfind("tank:", 0) == 0;
    if (m == ObserverMethod::ZDC || m == ObserverMethod::CZDC) {
        if (is_vdp) cfg.dcSplit = vdp_dc_split(std::stod(bench.name.substr(4)));
        if (is_tank) cfg.dcSplit = tank_dc_split(int(bench.system.n()));
    }
    if (m == ObserverMethod::PDTDI) {
        if (is_vdp) cfg.augmentation = vdp_augment_redundant(std::stod(bench.name.substr(4)));
        if (is_tank && bench.system.n() == 6) cfg.augmentation = tank_augment_redundant(6);
    }
    return cfg;
}

}  // namespace gse
