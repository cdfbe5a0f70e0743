#include <doctest.h>

#include <cmath>

#include "gse/sets.hpp"
#include "support/sampling.hpp"

using namespace gse;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

Zonotope random_zonotope(Rng& rng, int n, int r, double scale = 1.0) {
    return {testing::random_vector(rng, n, -scale, scale),
            testing::random_matrix(rng, n, r, scale)};
}

ConstrainedZonotope random_cz(Rng& rng, int n, int r) {
    // intersect a random zonotope with a random strip through its center
    Zonotope z = random_zonotope(rng, n, r);
    Eigen::MatrixXd c = testing::random_matrix(rng, 1, n);
    const double level = c.row(0).dot(z.c);
    auto iv = IntervalVector::centered(Eigen::VectorXd::Constant(1, level),
                                       Eigen::VectorXd::Constant(1, 0.3));
    auto res = generalized_intersection(SetValue{z}, c, SetValue{iv});
    return std::get<ConstrainedZonotope>(res);
}

}  // namespace

TEST_CASE("minkowski sum: intervals and zonotopes") {
    auto a = IntervalVector(VectorXd::Constant(1, 0.0), VectorXd::Constant(1, 1.0));
    auto b = IntervalVector(VectorXd::Constant(1, 2.0), VectorXd::Constant(1, 3.0));
    auto s = std::get<IntervalVector>(minkowski_sum(SetValue{a}, SetValue{b}));
    CHECK(s.lo[0] == doctest::Approx(2.0));
    CHECK(s.hi[0] == doctest::Approx(4.0));

    Zonotope z1{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    Zonotope z2{Vector2d(1, 1), 0.5 * MatrixXd::Identity(2, 2)};
    auto zs = std::get<Zonotope>(minkowski_sum(SetValue{z1}, SetValue{z2}));
    CHECK(zs.c.isApprox(Vector2d(1, 1)));
    CHECK(zs.num_generators() == 4);
    MatrixXd expect(2, 4);
    expect << 1, 0, 0.5, 0, 0, 1, 0, 0.5;
    CHECK(zs.G.isApprox(expect));
}

TEST_CASE("minkowski sum: CZ pair soundness by sampling") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        auto a = random_cz(rng, 2, 4);
        auto b = random_cz(rng, 2, 3);
        auto s = minkowski_sum(SetValue{a}, SetValue{b});
        for (int k = 0; k < 200; ++k) {
            VectorXd p = testing::sample_point(a, rng) + testing::sample_point(b, rng);
            CHECK(contains_point(s, p, 1e-6));
        }
    }
}

TEST_CASE("minkowski sum errors") {
    Zonotope z{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    Zonotope z3{Eigen::Vector3d(0, 0, 0), MatrixXd::Identity(3, 3)};
    CHECK_THROWS_AS(minkowski_sum(SetValue{z}, SetValue{z3}), dimension_error);
    Ellipsoid e{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    CHECK_THROWS_AS(minkowski_sum(SetValue{e}, SetValue{z}), std::invalid_argument);
}

TEST_CASE("linear map examples") {
    auto box = IntervalVector::unit_box(2);
    auto mapped = std::get<IntervalVector>(linear_map(2.0 * MatrixXd::Identity(2, 2), SetValue{box}));
    CHECK(mapped.lo.isApprox(Vector2d(-2, -2)));
    CHECK(mapped.hi.isApprox(Vector2d(2, 2)));

    Zonotope z{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    MatrixXd row(1, 2);
    row << 1, 0;
    auto zr = std::get<Zonotope>(linear_map(row, SetValue{z}));
    CHECK(zr.dim() == 1);
    auto h = interval_hull(SetValue{zr});
    CHECK(h.lo[0] == doctest::Approx(-1.0));
    CHECK(h.hi[0] == doctest::Approx(1.0));

    // 90 degree rotation
    MatrixXd rot(2, 2);
    rot << 0, -1, 1, 0;
    Zonotope zx{Vector2d(1, 0), (MatrixXd(2, 2) << 1, 0, 0, 2).finished()};
    auto zrot = std::get<Zonotope>(linear_map(rot, SetValue{zx}));
    CHECK(zrot.c.isApprox(Vector2d(0, 1)));
    CHECK(zrot.G.isApprox((MatrixXd(2, 2) << 0, -2, 1, 0).finished()));
}

TEST_CASE("generalized intersection: hull and emptiness") {
    auto box = IntervalVector::unit_box(2);
    MatrixXd c(1, 2);
    c << 1, 0;
    auto y = IntervalVector(VectorXd::Constant(1, 0.5), VectorXd::Constant(1, 1.5));
    auto res = generalized_intersection(SetValue{box}, c, SetValue{y});
    REQUIRE(std::holds_alternative<ConstrainedZonotope>(res));
    auto h = interval_hull(res);
    CHECK(h.lo[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(h.hi[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(h.lo[1] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(h.hi[1] == doctest::Approx(1.0).epsilon(1e-6));

    auto empty = generalized_intersection(
        SetValue{box}, c,
        SetValue{IntervalVector(VectorXd::Constant(1, 2.0), VectorXd::Constant(1, 3.0))});
    CHECK(is_empty_marker(empty));
}

TEST_CASE("generalized intersection: contained in X and covers consistent samples") {
    Rng rng(11);
    for (int t = 0; t < 5; ++t) {
        Zonotope z = random_zonotope(rng, 2, 4);
        MatrixXd c = testing::random_matrix(rng, 1, 2);
        auto y = IntervalVector::centered(VectorXd::Constant(1, c.row(0).dot(z.c)),
                                          VectorXd::Constant(1, 0.5));
        auto res = generalized_intersection(SetValue{z}, c, SetValue{y});
        REQUIRE_FALSE(is_empty_marker(res));
        for (int k = 0; k < 100; ++k) {
            VectorXd d = testing::random_unit(rng, 2);
            CHECK(support_raw(res, d) <= support_raw(SetValue{z}, d) + 1e-7);
        }
        int consistent = 0;
        for (int k = 0; k < 500; ++k) {
            VectorXd p = testing::sample_point(z, rng);
            const double v = c.row(0).dot(p);
            if (v >= y.lo[0] && v <= y.hi[0]) {
                ++consistent;
                CHECK(contains_point(res, p, 1e-6));
            }
        }
        CHECK(consistent > 0);
    }
}

TEST_CASE("strip intersection: zero gain identity, gain families sound") {
    Zonotope z{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    Strip strip;
    strip.normal = Eigen::RowVector2d(1, 0);
    strip.offset = 0.0;
    strip.noise = Interval{0.0, 0.0};

    auto same = strip_intersection_gain(z, strip, Vector2d(0, 0));
    auto h0 = interval_hull(SetValue{same});
    CHECK(h0.lo.isApprox(Vector2d(-1, -1)));
    CHECK(h0.hi.isApprox(Vector2d(1, 1)));

    auto tight = strip_intersection_gain(z, strip, Vector2d(1, 0));
    auto h = interval_hull(SetValue{tight});
    CHECK(std::abs(h.lo[0]) < 1e-12);
    CHECK(std::abs(h.hi[0]) < 1e-12);
    CHECK(h.lo[1] == doctest::Approx(-1.0));

    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        Zonotope zr = random_zonotope(rng, 2, 5);
        Strip s;
        s.normal = testing::random_unit(rng, 2).transpose();
        s.offset = s.normal.dot(zr.c) + rng.uniform(-0.3, 0.3);
        s.noise = Interval{-0.2, 0.2};
        for (const auto& lam : {frobenius_gain(zr, s), volume_gain(zr, s)}) {
            auto res = strip_intersection_gain(zr, s, lam);
            for (int k = 0; k < 300; ++k) {
                VectorXd p = testing::sample_point(zr, rng);
                const double v = s.normal.dot(p) - s.offset;
                if (v >= s.noise.lo && v <= s.noise.hi)
                    CHECK(contains_point(SetValue{res}, p, 1e-7));
            }
        }
    }
}

TEST_CASE("interval hull closed forms") {
    Zonotope z{Vector2d(1, 1), (MatrixXd(2, 2) << 1, 1, 0, 1).finished()};
    auto h = interval_hull(SetValue{z});
    CHECK(h.lo.isApprox(Vector2d(-1, 0)));
    CHECK(h.hi.isApprox(Vector2d(3, 2)));

    Ellipsoid e{Vector2d(0, 0), (MatrixXd(2, 2) << 4, 0, 0, 1).finished()};
    auto he = interval_hull(SetValue{e});
    CHECK(he.lo.isApprox(Vector2d(-2, -1)));
    CHECK(he.hi.isApprox(Vector2d(2, 1)));
}

TEST_CASE("support function: closed forms and sampling lower bound") {
    auto box = IntervalVector::unit_box(2);
    CHECK(support(SetValue{box}, Vector2d(1, 0)) == doctest::Approx(1.0));
    Ellipsoid e{Vector2d(0, 0), (MatrixXd(2, 2) << 4, 0, 0, 1).finished()};
    CHECK(support(SetValue{e}, Vector2d(1, 0)) == doctest::Approx(2.0));
    CHECK_THROWS(support(SetValue{box}, Vector2d(2, 0)));

    Rng rng(5);
    Zonotope z = random_zonotope(rng, 3, 6);
    for (int t = 0; t < 10; ++t) {
        VectorXd d = testing::random_unit(rng, 3);
        const double rho = support(SetValue{z}, d);
        double best = -1e100;
        for (int k = 0; k < 100000; ++k)
            best = std::max(best, d.dot(testing::sample_point(z, rng)));
        CHECK(rho >= best - 1e-9);
        CHECK(rho <= best + 0.5);  // sampling should come close in 3D
    }
}

TEST_CASE("bundle support is joint, not min of members") {
    // two 1D segments [-1,1] and [0,2]; intersection [0,1]
    Zonotope m1{VectorXd::Constant(1, 0.0), MatrixXd::Constant(1, 1, 1.0)};
    Zonotope m2{VectorXd::Constant(1, 1.0), MatrixXd::Constant(1, 1, 1.0)};
    ZonotopeBundle bu{{m1, m2}};
    CHECK(support(SetValue{bu}, VectorXd::Constant(1, 1.0)) == doctest::Approx(1.0));
    CHECK(support(SetValue{bu}, VectorXd::Constant(1, -1.0)) == doctest::Approx(0.0));
    auto h = interval_hull(SetValue{bu});
    CHECK(h.lo[0] == doctest::Approx(0.0));
    CHECK(h.hi[0] == doctest::Approx(1.0));
}

TEST_CASE("zonotope reduction: no-op, containment") {
    Rng rng(9);
    Zonotope small{Vector2d(0, 0), MatrixXd::Identity(2, 2)};
    auto same = reduce_zonotope(small, 2.0);
    CHECK(same.num_generators() == 2);

    MatrixXd g(2, 4);
    g << 1, 0, 0.1, 0, 0, 1, 0, 0.1;
    Zonotope z{Vector2d(0, 0), g};
    for (auto method : {ReductionMethod::Girard, ReductionMethod::PCA}) {
        auto red = reduce_zonotope(z, 1.0, method);
        CHECK(red.num_generators() <= 2);
        for (int k = 0; k < 100; ++k) {
            VectorXd d = testing::random_unit(rng, 2);
            CHECK(support_raw(SetValue{red}, d) >= support_raw(SetValue{z}, d) - 1e-9);
        }
    }

    Zonotope big = random_zonotope(rng, 2, 10);
    for (auto method : {ReductionMethod::Girard, ReductionMethod::PCA}) {
        auto red = reduce_zonotope(big, 2.0, method);
        CHECK(red.order() <= 2.0);
        for (int k = 0; k < 100; ++k) {
            VectorXd d = testing::random_unit(rng, 2);
            CHECK(support_raw(SetValue{red}, d) >= support_raw(SetValue{big}, d) - 1e-9);
        }
    }
}

TEST_CASE("constraint reduction: duplicate row removal is exact") {
    Rng rng(13);
    auto cz = random_cz(rng, 2, 4);
    REQUIRE(cz.num_constraints() == 1);
    // duplicate the constraint row
    Eigen::MatrixXd a2(2, cz.num_generators());
    a2 << cz.A, cz.A;
    Eigen::VectorXd b2(2);
    b2 << cz.b, cz.b;
    ConstrainedZonotope dup{cz.c, cz.G, a2, b2};
    auto red = reduce_constraints(dup, 1, 100.0);
    CHECK(red.num_constraints() <= 1);
    for (int k = 0; k < 100; ++k) {
        VectorXd d = testing::random_unit(rng, 2);
        CHECK(std::abs(support_raw(SetValue{red}, d) - support_raw(SetValue{cz}, d)) < 1e-6);
    }
}

TEST_CASE("constraint reduction: containment under budget 1") {
    Rng rng(17);
    for (int t = 0; t < 5; ++t) {
        auto cz = random_cz(rng, 2, 5);
        // add a second strip to get two constraints
        MatrixXd c = testing::random_matrix(rng, 1, 2);
        auto y = IntervalVector::centered(VectorXd::Constant(1, c.row(0).dot(cz.c)),
                                          VectorXd::Constant(1, 0.4));
        auto two = generalized_intersection(SetValue{cz}, c, SetValue{y});
        if (is_empty_marker(two)) continue;
        auto cz2 = std::get<ConstrainedZonotope>(two);
        auto red = reduce_constraints(cz2, 1, 100.0);
        CHECK(red.num_constraints() <= 1);
        for (int k = 0; k < 100; ++k) {
            VectorXd d = testing::random_unit(rng, 2);
            CHECK(support_raw(SetValue{red}, d) >= support_raw(SetValue{cz2}, d) - 1e-9);
        }
    }
}

TEST_CASE("ellipsoid enclosure of a box") {
    auto e1 = enclose_ellipsoid(IntervalVector::unit_box(1));
    CHECK(e1.P(0, 0) == doctest::Approx(1.0));

    auto e2 = enclose_ellipsoid(IntervalVector::unit_box(2));
    CHECK(e2.P.isApprox(2.0 * MatrixXd::Identity(2, 2)));
    for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) {
            Vector2d corner(sx, sy);
            CHECK(corner.dot(e2.P.inverse() * corner) == doctest::Approx(1.0));
        }

    // degenerate axis gets regularized
    auto flat = enclose_ellipsoid(
        IntervalVector(Vector2d(0.0, -1.0), Vector2d(0.0, 1.0)));
    CHECK(flat.P(0, 0) > 0.0);
}

TEST_CASE("contains_point basics") {
    auto box = IntervalVector::unit_box(2);
    CHECK(contains_point(SetValue{box}, Vector2d(0, 0)));
    CHECK_FALSE(contains_point(SetValue{box}, Vector2d(2, 0)));

    Rng rng(21);
    Zonotope z = random_zonotope(rng, 2, 5);
    for (int k = 0; k < 1000; ++k)
        CHECK(contains_point(SetValue{z}, testing::sample_point(z, rng), 1e-7));
    CHECK_THROWS_AS(contains_point(SetValue{z}, Eigen::Vector3d(0, 0, 0)), dimension_error);
}

TEST_CASE("ellipsoid minkowski sum is sound") {
    Rng rng(23);
    Ellipsoid e1{Vector2d(1, 0), (MatrixXd(2, 2) << 2, 0.3, 0.3, 1).finished()};
    Ellipsoid e2{Vector2d(0, 1), (MatrixXd(2, 2) << 0.5, 0, 0, 0.8).finished()};
    auto s = ellipsoid_sum(e1, e2);
    for (int k = 0; k < 1000; ++k) {
        VectorXd p = testing::sample_point(e1, rng) + testing::sample_point(e2, rng);
        CHECK(contains_point(SetValue{s}, p, 1e-7));
    }
}

TEST_CASE("zonotope exactness: sum and map have brute-force support") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        Zonotope a = random_zonotope(rng, 2, 3);
        Zonotope b = random_zonotope(rng, 2, 2);
        auto s = std::get<Zonotope>(minkowski_sum(SetValue{a}, SetValue{b}));
        MatrixXd m = testing::random_matrix(rng, 2, 2);
        auto mapped = std::get<Zonotope>(linear_map(m, SetValue{a}));
        for (int k = 0; k < 20; ++k) {
            VectorXd d = testing::random_unit(rng, 2);
            // enumerate all sign patterns of the generators (exact support)
            auto brute = [&](const Zonotope& z) {
                double best = -1e100;
                const int r = int(z.num_generators());
                for (int mask = 0; mask < (1 << r); ++mask) {
                    VectorXd xi(r);
                    for (int j = 0; j < r; ++j) xi[j] = (mask >> j) & 1 ? 1.0 : -1.0;
                    best = std::max(best, d.dot(z.c + z.G * xi));
                }
                return best;
            };
            CHECK(support_raw(SetValue{s}, d) == doctest::Approx(brute(s)).epsilon(1e-9));
            CHECK(support_raw(SetValue{mapped}, d) == doctest::Approx(brute(mapped)).epsilon(1e-9));
        }
    }
}
