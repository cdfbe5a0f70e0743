#include "gse/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gse/lp.hpp"

namespace gse {

namespace {

Eigen::VectorXd ones(Eigen::Index n, double v) { return Eigen::VectorXd::Constant(n, v); }

const char* rep_name(const SetValue& s) {
    static const char* names[] = {"interval", "ellipsoid", "zonotope", "czonotope", "bundle",
                                  "empty"};
    return names[s.index()];
}

// stacked equality system of a bundle in generator space, member 0 as anchor:
// G_0 xi_0 - G_i xi_i = c_i - c_0
void bundle_system(const ZonotopeBundle& bu, Eigen::MatrixXd* A, Eigen::VectorXd* b,
                   Eigen::Index* total_gens) {
    const Eigen::Index n = bu.dim();
    const Eigen::Index k = static_cast<Eigen::Index>(bu.members.size());
    Eigen::Index r = 0;
    for (const auto& z : bu.members) r += z.num_generators();
    A->setZero(n * (k - 1), r);
    b->resize(n * (k - 1));
    const Eigen::Index r0 = bu.members[0].num_generators();
    Eigen::Index col = r0;
    for (Eigen::Index i = 1; i < k; ++i) {
        const auto& zi = bu.members[i];
        A->block(n * (i - 1), 0, n, r0) = bu.members[0].G;
        A->block(n * (i - 1), col, n, zi.num_generators()) = -zi.G;
        b->segment(n * (i - 1), n) = zi.c - bu.members[0].c;
        col += zi.num_generators();
    }
    *total_gens = r;
}

double cz_support_lp(const ConstrainedZonotope& cz, const Eigen::VectorXd& d) {
    const Eigen::Index r = cz.num_generators();
    if (r == 0) {
        if (cz.num_constraints() > 0 && cz.b.lpNorm<Eigen::Infinity>() > 1e-9)
            throw std::invalid_argument("support: empty set");
        return d.dot(cz.c);
    }
    auto res = lp::solve(cz.G.transpose() * d, cz.A, cz.b, ones(r, -1.0), ones(r, 1.0), true);
    if (res.status != lp::Status::Optimal) throw std::invalid_argument("support: empty set");
    return d.dot(cz.c) + res.value;
}

double bundle_support_lp(const ZonotopeBundle& bu, const Eigen::VectorXd& d) {
    if (bu.members.size() == 1) {
        const auto& z = bu.members[0];
        return d.dot(z.c) + (z.G.transpose() * d).cwiseAbs().sum();
    }
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::Index r = 0;
    bundle_system(bu, &A, &b, &r);
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(r);
    cost.head(bu.members[0].num_generators()) = bu.members[0].G.transpose() * d;
    auto res = lp::solve(cost, A, b, ones(r, -1.0), ones(r, 1.0), true);
    if (res.status != lp::Status::Optimal) throw std::invalid_argument("support: empty set");
    return d.dot(bu.members[0].c) + res.value;
}

}  // namespace

Eigen::Index set_dim(const SetValue& s) {
    return std::visit(
        [](const auto& v) -> Eigen::Index {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EmptySet>)
                return v.n;
            else
                return v.dim();
        },
        s);
}

bool is_empty_marker(const SetValue& s) { return std::holds_alternative<EmptySet>(s); }

// --- Minkowski sum -----------------------------------------------------------

SetValue minkowski_sum(const SetValue& x, const SetValue& w) {
    if (set_dim(x) != set_dim(w))
        throw dimension_error("minkowski_sum: dimension mismatch");
    if (is_empty_marker(x) || is_empty_marker(w)) return EmptySet{set_dim(x)};

    // boxes are exactly zonotopes; promote them when paired with zonotopal reps
    if (std::holds_alternative<IntervalVector>(x) &&
        !std::holds_alternative<IntervalVector>(w))
        return minkowski_sum(SetValue{Zonotope::from_box(std::get<IntervalVector>(x))}, w);
    if (std::holds_alternative<IntervalVector>(w) &&
        !std::holds_alternative<IntervalVector>(x))
        return minkowski_sum(x, SetValue{Zonotope::from_box(std::get<IntervalVector>(w))});

    if (const auto* bx = std::get_if<IntervalVector>(&x))
        return *bx + std::get<IntervalVector>(w);

    if (const auto* zx = std::get_if<Zonotope>(&x)) {
        if (const auto* zw = std::get_if<Zonotope>(&w)) {
            Eigen::MatrixXd g(zx->dim(), zx->num_generators() + zw->num_generators());
            g << zx->G, zw->G;
            return Zonotope{zx->c + zw->c, std::move(g)};
        }
        if (std::holds_alternative<ConstrainedZonotope>(w)) return minkowski_sum(w, x);
    }

    if (const auto* cx = std::get_if<ConstrainedZonotope>(&x)) {
        ConstrainedZonotope cw = std::holds_alternative<Zonotope>(w)
                                     ? ConstrainedZonotope::from_zonotope(std::get<Zonotope>(w))
                                     : std::get<ConstrainedZonotope>(w);
        const Eigen::Index r1 = cx->num_generators(), r2 = cw.num_generators();
        const Eigen::Index q1 = cx->num_constraints(), q2 = cw.num_constraints();
        Eigen::MatrixXd g(cx->dim(), r1 + r2);
        g << cx->G, cw.G;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q1 + q2, r1 + r2);
        a.topLeftCorner(q1, r1) = cx->A;
        a.bottomRightCorner(q2, r2) = cw.A;
        Eigen::VectorXd b(q1 + q2);
        b << cx->b, cw.b;
        return ConstrainedZonotope{cx->c + cw.c, std::move(g), std::move(a), std::move(b)};
    }

    if (const auto* ex = std::get_if<Ellipsoid>(&x)) {
        if (const auto* ew = std::get_if<Ellipsoid>(&w)) return ellipsoid_sum(*ex, *ew);
    }

    if (const auto* bu = std::get_if<ZonotopeBundle>(&x)) {
        if (const auto* zw = std::get_if<Zonotope>(&w)) {
            std::vector<Zonotope> out;
            out.reserve(bu->members.size());
            for (const auto& z : bu->members)
                out.push_back(std::get<Zonotope>(minkowski_sum(SetValue{z}, SetValue{*zw})));
            return ZonotopeBundle{std::move(out)};
        }
    }

    throw std::invalid_argument(std::string("minkowski_sum: unsupported pairing ") + rep_name(x) +
                                " + " + rep_name(w));
}

Ellipsoid ellipsoid_sum(const Ellipsoid& e1, const Ellipsoid& e2) {
    if (e1.dim() != e2.dim()) throw dimension_error("ellipsoid_sum: dimension mismatch");
    const double t1 = e1.P.trace(), t2 = e2.P.trace();
    if (t2 < 1e-300) return {e1.a + e2.a, e1.P};
    if (t1 < 1e-300) return {e1.a + e2.a, e2.P};
    const double beta = std::sqrt(t1 / t2);
    return {e1.a + e2.a, (1.0 + 1.0 / beta) * e1.P + (1.0 + beta) * e2.P};
}

// --- linear map --------------------------------------------------------------

SetValue linear_map(const Eigen::MatrixXd& m, const SetValue& x) {
    if (m.cols() != set_dim(x)) throw dimension_error("linear_map: dimension mismatch");
    if (is_empty_marker(x)) return EmptySet{m.rows()};

    if (const auto* bx = std::get_if<IntervalVector>(&x))
        return IntervalVector::centered(m * bx->mid(), m.cwiseAbs() * bx->rad());
    if (const auto* z = std::get_if<Zonotope>(&x)) return Zonotope{m * z->c, m * z->G};
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&x))
        return ConstrainedZonotope{m * cz->c, m * cz->G, cz->A, cz->b};
    if (const auto* e = std::get_if<Ellipsoid>(&x))
        return Ellipsoid{m * e->a, m * e->P * m.transpose()};
    const auto& bu = std::get<ZonotopeBundle>(x);
    std::vector<Zonotope> out;
    out.reserve(bu.members.size());
    for (const auto& z : bu.members) out.push_back({m * z.c, m * z.G});
    return ZonotopeBundle{std::move(out)};
}

// --- generalized intersection ------------------------------------------------

SetValue generalized_intersection(const SetValue& x, const Eigen::MatrixXd& c, const SetValue& y) {
    if (c.cols() != set_dim(x) || c.rows() != set_dim(y))
        throw dimension_error("generalized_intersection: dimension mismatch");
    if (is_empty_marker(x) || is_empty_marker(y)) return EmptySet{set_dim(x)};

    if (const auto* bu = std::get_if<ZonotopeBundle>(&x)) {
        if (!c.isIdentity(1e-12))
            throw std::invalid_argument("generalized_intersection: bundle requires C = I");
        Zonotope add = std::holds_alternative<IntervalVector>(y)
                           ? Zonotope::from_box(std::get<IntervalVector>(y))
                           : std::get<Zonotope>(y);
        ZonotopeBundle out = *bu;
        out.members.push_back(std::move(add));
        return out;
    }

    ConstrainedZonotope cx;
    if (const auto* z = std::get_if<Zonotope>(&x))
        cx = ConstrainedZonotope::from_zonotope(*z);
    else if (const auto* bx = std::get_if<IntervalVector>(&x))
        cx = ConstrainedZonotope::from_box(*bx);
    else if (const auto* czp = std::get_if<ConstrainedZonotope>(&x))
        cx = *czp;
    else
        throw std::invalid_argument("generalized_intersection: unsupported left operand");

    ConstrainedZonotope cy;
    if (const auto* by = std::get_if<IntervalVector>(&y))
        cy = ConstrainedZonotope::from_box(*by);
    else if (const auto* zy = std::get_if<Zonotope>(&y))
        cy = ConstrainedZonotope::from_zonotope(*zy);
    else if (const auto* czy = std::get_if<ConstrainedZonotope>(&y))
        cy = *czy;
    else
        throw std::invalid_argument("generalized_intersection: unsupported right operand");

    const Eigen::Index r1 = cx.num_generators(), r2 = cy.num_generators();
    const Eigen::Index q1 = cx.num_constraints(), q2 = cy.num_constraints();
    const Eigen::Index ny = cy.dim();

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cx.dim(), r1 + r2);
    g.leftCols(r1) = cx.G;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q1 + q2 + ny, r1 + r2);
    a.topLeftCorner(q1, r1) = cx.A;
    a.block(q1, r1, q2, r2) = cy.A;
    a.block(q1 + q2, 0, ny, r1) = c * cx.G;
    a.block(q1 + q2, r1, ny, r2) = -cy.G;
    Eigen::VectorXd b(q1 + q2 + ny);
    b << cx.b, cy.b, cy.c - c * cx.c;

    ConstrainedZonotope out{cx.c, std::move(g), std::move(a), std::move(b)};
    if (!cz_feasible(out)) return EmptySet{cx.dim()};
    return out;
}

// --- strips ------------------------------------------------------------------

Zonotope strip_intersection_gain(const Zonotope& z, const Strip& strip,
                                 const Eigen::VectorXd& lambda) {
    if (strip.dim() != z.dim() || lambda.size() != z.dim())
        throw dimension_error("strip_intersection_gain: dimension mismatch");
    const double y = strip.mid_level();
    const double sigma = strip.half_width();
    Eigen::VectorXd c = z.c + lambda * (y - strip.normal.dot(z.c));
    const Eigen::Index r = z.num_generators();
    Eigen::MatrixXd g(z.dim(), r + 1);
    g.leftCols(r) = z.G - lambda * (strip.normal * z.G);
    g.col(r) = sigma * lambda;
    return {std::move(c), std::move(g)};
}

Eigen::VectorXd frobenius_gain(const Zonotope& z, const Strip& strip) {
    if (strip.dim() != z.dim()) throw dimension_error("frobenius_gain: dimension mismatch");
    const double sigma = strip.half_width();
    Eigen::VectorXd gc = z.G * (z.G.transpose() * strip.normal.transpose());
    const double denom = strip.normal.dot(gc) + sigma * sigma;
    if (denom < 1e-300) return Eigen::VectorXd::Zero(z.dim());
    return gc / denom;
}

Eigen::VectorXd volume_gain(const Zonotope& z, const Strip& strip) {
    const Eigen::VectorXd lf = frobenius_gain(z, strip);
    auto objective = [&](double t) {
        const Zonotope cand = strip_intersection_gain(z, strip, t * lf);
        // log of interval-hull volume; widths can be zero
        double obj = 0.0;
        const Eigen::VectorXd widths = 2.0 * cand.G.cwiseAbs().rowwise().sum();
        for (Eigen::Index i = 0; i < widths.size(); ++i)
            obj += std::log(widths[i] + 1e-300);
        return obj;
    };
    // golden-section search on [0, 2]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 2.0;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-8) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(x2);
        }
    }
    return 0.5 * (a + b) * lf;
}

// --- hull / support / membership --------------------------------------------

IntervalVector interval_hull(const SetValue& x) {
    if (is_empty_marker(x)) throw std::invalid_argument("interval_hull: empty set");
    if (const auto* bx = std::get_if<IntervalVector>(&x)) return *bx;
    if (const auto* z = std::get_if<Zonotope>(&x))
        return IntervalVector::centered(z->c, z->G.cwiseAbs().rowwise().sum());
    if (const auto* e = std::get_if<Ellipsoid>(&x))
        return IntervalVector::centered(e->a, e->P.diagonal().cwiseMax(0.0).cwiseSqrt());
    // CZ and bundle: 2n support LPs
    const Eigen::Index n = set_dim(x);
    Eigen::VectorXd lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd d = Eigen::VectorXd::Unit(n, i);
        hi[i] = support_raw(x, d);
        lo[i] = -support_raw(x, -d);
        if (lo[i] > hi[i]) {  // LP tolerance on a flat axis
            const double m = 0.5 * (lo[i] + hi[i]);
            lo[i] = hi[i] = m;
        }
    }
    return {std::move(lo), std::move(hi)};
}

double support_raw(const SetValue& x, const Eigen::VectorXd& d) {
    if (is_empty_marker(x)) throw std::invalid_argument("support: empty set");
    if (d.size() != set_dim(x)) throw dimension_error("support: dimension mismatch");
    if (const auto* bx = std::get_if<IntervalVector>(&x))
        return d.dot(bx->mid()) + d.cwiseAbs().dot(bx->rad());
    if (const auto* z = std::get_if<Zonotope>(&x))
        return d.dot(z->c) + (z->G.transpose() * d).cwiseAbs().sum();
    if (const auto* e = std::get_if<Ellipsoid>(&x))
        return d.dot(e->a) + std::sqrt(std::max(0.0, d.dot(e->P * d)));
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&x)) return cz_support_lp(*cz, d);
    return bundle_support_lp(std::get<ZonotopeBundle>(x), d);
}

double support(const SetValue& x, const Eigen::VectorXd& d) {
    if (std::abs(d.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("support: direction must be unit norm");
    return support_raw(x, d);
}

bool cz_feasible(const ConstrainedZonotope& cz) {
    if (cz.num_constraints() == 0) return true;
    const Eigen::Index r = cz.num_generators();
    if (r == 0) return cz.b.lpNorm<Eigen::Infinity>() <= 1e-9;
    return lp::feasible(cz.A, cz.b, ones(r, -1.0), ones(r, 1.0));
}

bool contains_point(const SetValue& x, const Eigen::VectorXd& p, double tol) {
    if (p.size() != set_dim(x)) throw dimension_error("contains_point: dimension mismatch");
    if (is_empty_marker(x)) return false;
    if (const auto* bx = std::get_if<IntervalVector>(&x)) return bx->contains(p, tol);
    if (const auto* e = std::get_if<Ellipsoid>(&x)) {
        const Eigen::VectorXd d = p - e->a;
        const Eigen::VectorXd s = e->P.ldlt().solve(d);
        return d.dot(s) <= 1.0 + tol;
    }
    if (const auto* z = std::get_if<Zonotope>(&x)) {
        const Eigen::Index r = z->num_generators();
        if (r == 0) return (p - z->c).lpNorm<Eigen::Infinity>() <= tol;
        return lp::feasible(z->G, p - z->c, ones(r, -1.0 - tol), ones(r, 1.0 + tol));
    }
    if (const auto* cz = std::get_if<ConstrainedZonotope>(&x)) {
        const Eigen::Index r = cz->num_generators(), q = cz->num_constraints();
        if (r == 0)
            return (p - cz->c).lpNorm<Eigen::Infinity>() <= tol &&
                   (q == 0 || cz->b.lpNorm<Eigen::Infinity>() <= tol);
        Eigen::MatrixXd a(cz->dim() + q, r);
        a << cz->G, cz->A;
        Eigen::VectorXd b(cz->dim() + q);
        b << p - cz->c, cz->b;
        return lp::feasible(a, b, ones(r, -1.0 - tol), ones(r, 1.0 + tol));
    }
    const auto& bu = std::get<ZonotopeBundle>(x);
    for (const auto& z : bu.members)
        if (!contains_point(SetValue{z}, p, tol)) return false;
    return true;
}

// --- reductions --------------------------------------------------------------

namespace {

// Girard selection metric: ||g||_1 - ||g||_inf, ascending
std::vector<Eigen::Index> sorted_by_girard(const Eigen::MatrixXd& g) {
    std::vector<Eigen::Index> idx(g.cols());
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    Eigen::VectorXd score(g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        score[j] = g.col(j).lpNorm<1>() - g.col(j).lpNorm<Eigen::Infinity>();
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return score[a] < score[b]; });
    return idx;
}

}  // namespace

Zonotope reduce_zonotope(const Zonotope& z, double max_order, ReductionMethod method) {
    if (max_order < 1.0) throw std::invalid_argument("reduce_zonotope: max_order < 1");
    const Eigen::Index n = z.dim();
    const Eigen::Index r = z.num_generators();
    const Eigen::Index r_max = static_cast<Eigen::Index>(std::floor(max_order * double(n)));
    if (r <= r_max) return z;

    const Eigen::Index keep = std::max<Eigen::Index>(r_max - n, 0);
    auto idx = sorted_by_girard(z.G);
    Eigen::MatrixXd g_keep(n, keep), g_box(n, r - keep);
    for (Eigen::Index j = 0; j < r; ++j) {
        if (j < r - keep)
            g_box.col(j) = z.G.col(idx[j]);
        else
            g_keep.col(j - (r - keep)) = z.G.col(idx[j]);
    }

    Eigen::MatrixXd boxed;
    if (method == ReductionMethod::Girard) {
        boxed = g_box.cwiseAbs().rowwise().sum().asDiagonal();
    } else {
        // principal axes of the mirrored generator columns
        Eigen::MatrixXd data(n, 2 * g_box.cols());
        data << g_box, -g_box;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeFullU);
        const Eigen::MatrixXd u = svd.matrixU();
        const Eigen::VectorXd radii = (u.transpose() * g_box).cwiseAbs().rowwise().sum();
        boxed = u * radii.asDiagonal();
    }
    Eigen::MatrixXd g(n, keep + n);
    g << g_keep, boxed;
    return {z.c, std::move(g)};
}

namespace {

// one propagation pass: ranges of xi implied by the constraints and [-1,1]
std::vector<Interval> implied_ranges(const ConstrainedZonotope& cz) {
    const Eigen::Index r = cz.num_generators(), q = cz.num_constraints();
    std::vector<Interval> e(r, Interval{-1.0, 1.0});
    for (Eigen::Index i = 0; i < q; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            const double aij = cz.A(i, j);
            if (std::abs(aij) < 1e-12) continue;
            Interval rest{0.0, 0.0};
            for (Eigen::Index k = 0; k < r; ++k)
                if (k != j) rest = rest + cz.A(i, k) * e[k];
            const Interval num = Interval::point(cz.b[i]) - rest;
            const double d1 = num.lo / aij, d2 = num.hi / aij;
            const Interval cand{std::min(d1, d2), std::max(d1, d2)};
            if (!cand.intersects(e[j])) continue;  // numerically empty, leave as is
            e[j] = {std::max(e[j].lo, cand.lo), std::min(e[j].hi, cand.hi)};
        }
    }
    return e;
}

// removes constraint i and generator j by substitution; over-approximating
ConstrainedZonotope eliminate(const ConstrainedZonotope& cz, Eigen::Index i, Eigen::Index j) {
    const Eigen::Index r = cz.num_generators(), q = cz.num_constraints();
    const double aij = cz.A(i, j);
    const Eigen::VectorXd lg = cz.G.col(j) / aij;
    const Eigen::VectorXd la = cz.A.col(j) / aij;

    Eigen::VectorXd c = cz.c + lg * cz.b[i];
    Eigen::MatrixXd g = cz.G - lg * cz.A.row(i);
    Eigen::MatrixXd a = cz.A - la * cz.A.row(i);
    Eigen::VectorXd b = cz.b - la * cz.b[i];

    Eigen::MatrixXd g2(g.rows(), r - 1), a2(q - 1, r - 1);
    Eigen::VectorXd b2(q - 1);
    Eigen::Index cc = 0;
    for (Eigen::Index k = 0; k < r; ++k)
        if (k != j) {
            g2.col(cc) = g.col(k);
            ++cc;
        }
    Eigen::Index rr = 0;
    for (Eigen::Index k = 0; k < q; ++k)
        if (k != i) {
            a2.block(rr, 0, 1, r - 1).setZero();
            Eigen::Index c2 = 0;
            for (Eigen::Index l = 0; l < r; ++l)
                if (l != j) a2(rr, c2++) = a(k, l);
            b2[rr] = b[k];
            ++rr;
        }
    return {std::move(c), std::move(g2), std::move(a2), std::move(b2)};
}

// drops rows of [A|b] that are linear combinations of earlier ones (exact)
ConstrainedZonotope drop_dependent_rows(const ConstrainedZonotope& cz) {
    const Eigen::Index q = cz.num_constraints(), r = cz.num_generators();
    if (q == 0) return cz;
    std::vector<Eigen::Index> keep;
    std::vector<Eigen::VectorXd> basis;  // orthonormalized [A|b] rows
    for (Eigen::Index i = 0; i < q; ++i) {
        Eigen::VectorXd row(r + 1);
        row << cz.A.row(i).transpose(), cz.b[i];
        Eigen::VectorXd res = row;
        for (const auto& u : basis) res -= u.dot(res) * u;
        if (res.norm() > 1e-10 * std::max(1.0, row.norm())) {
            basis.push_back(res / res.norm());
            keep.push_back(i);
        }
    }
    if (Eigen::Index(keep.size()) == q) return cz;
    Eigen::MatrixXd a2(keep.size(), r);
    Eigen::VectorXd b2(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
        a2.row(Eigen::Index(k)) = cz.A.row(keep[k]);
        b2[Eigen::Index(k)] = cz.b[keep[k]];
    }
    return {cz.c, cz.G, std::move(a2), std::move(b2)};
}

}  // namespace

ConstrainedZonotope rescale(const ConstrainedZonotope& cz) {
    const Eigen::Index r = cz.num_generators();
    auto e = implied_ranges(cz);
    Eigen::VectorXd m(r), rad(r);
    for (Eigen::Index j = 0; j < r; ++j) {
        m[j] = e[j].mid();
        rad[j] = e[j].rad();
    }
    ConstrainedZonotope out = cz;
    out.c = cz.c + cz.G * m;
    out.G = cz.G * rad.asDiagonal();
    if (cz.num_constraints() > 0) {
        out.b = cz.b - cz.A * m;
        out.A = cz.A * rad.asDiagonal();
    }
    return out;
}

ConstrainedZonotope reduce_constraints(const ConstrainedZonotope& cz_in,
                                       Eigen::Index max_constraints, double max_order) {
    ConstrainedZonotope cz = drop_dependent_rows(cz_in);
    while (cz.num_constraints() > max_constraints && cz.num_generators() > 0) {
        cz = rescale(cz);
        // dual-scaling style score: approximation error of dropping xi_j's box
        // bound when solving constraint i for it
        const Eigen::Index r = cz.num_generators(), q = cz.num_constraints();
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index bi = -1, bj = -1;
        for (Eigen::Index i = 0; i < q; ++i) {
            for (Eigen::Index j = 0; j < r; ++j) {
                const double aij = cz.A(i, j);
                if (std::abs(aij) < 1e-10) continue;
                Interval rest{0.0, 0.0};
                for (Eigen::Index k = 0; k < r; ++k)
                    if (k != j) rest = rest + cz.A(i, k) * Interval{-1.0, 1.0};
                const Interval num = Interval::point(cz.b[i]) - rest;
                const double d1 = num.lo / aij, d2 = num.hi / aij;
                const Interval implied{std::min(d1, d2), std::max(d1, d2)};
                const double excess =
                    std::max({implied.hi - 1.0, -1.0 - implied.lo, 0.0});
                const double score = cz.G.col(j).norm() * excess;
                if (score < best - 1e-15) {
                    best = score;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) {
            // no usable pivot: drop an all-zero constraint row if consistent
            Eigen::Index drop = -1;
            for (Eigen::Index i = 0; i < cz.num_constraints(); ++i)
                if (cz.A.row(i).lpNorm<Eigen::Infinity>() < 1e-10) {
                    drop = i;
                    break;
                }
            if (drop < 0) break;
            Eigen::MatrixXd a2(cz.num_constraints() - 1, cz.num_generators());
            Eigen::VectorXd b2(cz.num_constraints() - 1);
            Eigen::Index rr = 0;
            for (Eigen::Index i = 0; i < cz.num_constraints(); ++i)
                if (i != drop) {
                    a2.row(rr) = cz.A.row(i);
                    b2[rr] = cz.b[i];
                    ++rr;
                }
            cz = {cz.c, cz.G, std::move(a2), std::move(b2)};
            continue;
        }
        cz = eliminate(cz, bi, bj);
    }

    // order reduction on the lifted zonotope [c;-b], [G;A]
    const Eigen::Index n = cz.dim(), q = cz.num_constraints(), r = cz.num_generators();
    const Eigen::Index r_max = static_cast<Eigen::Index>(std::floor(max_order * double(n)));
    if (r > r_max && r_max >= n + q) {
        Eigen::VectorXd lc(n + q);
        lc << cz.c, -cz.b;
        Eigen::MatrixXd lg(n + q, r);
        lg << cz.G, cz.A;
        Zonotope lifted{std::move(lc), std::move(lg)};
        const double lifted_order = double(r_max) / double(n + q);
        Zonotope red = reduce_zonotope(lifted, lifted_order, ReductionMethod::Girard);
        cz = {red.c.head(n), red.G.topRows(n), red.G.bottomRows(q), -red.c.tail(q)};
    }
    return cz;
}

Ellipsoid enclose_ellipsoid(const IntervalVector& box) {
    const Eigen::Index n = box.dim();
    Eigen::VectorXd d = box.rad().array().square().max(1e-12) * double(n);
    return {box.mid(), Eigen::MatrixXd(d.asDiagonal())};
}

}  // namespace gse
