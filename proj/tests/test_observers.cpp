#include <doctest.h>

#include "gse/observers.hpp"
#include "support/sampling.hpp"

using namespace gse;

namespace {

NonlinearDiscreteSystem affine2d() {
    // x+ = [0.9 x1 + 0.1 x2, -0.1 x1 + 0.9 x2 + 0.5]
    NonlinearDiscreteSystem sys;
    sys.f = SymbolicDynamics{
        {add(mul(constant(0.9), var_x(0)), mul(constant(0.1), var_x(1))),
         add(add(mul(constant(-0.1), var_x(0)), mul(constant(0.9), var_x(1))), constant(0.5))},
        2, 0};
    sys.C = Eigen::MatrixXd(1, 2);
    sys.C << 1, 0;
    sys.W = IntervalVector::centered(Eigen::VectorXd::Zero(2),
                                     Eigen::VectorXd::Constant(2, 0.01));
    sys.V = IntervalVector::centered(Eigen::VectorXd::Zero(1),
                                     Eigen::VectorXd::Constant(1, 0.1));
    return sys;
}

}  // namespace

TEST_CASE("observers: method registry") {
    CHECK(all_methods().size() == 14);
    for (auto m : all_methods()) {
        auto back = method_from_name(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_name("nope").has_value());
    CHECK(method_category(ObserverMethod::FRadA) == MethodCategory::Intersection);
    CHECK(method_category(ObserverMethod::ESOE) == MethodCategory::Propagation);
    CHECK(method_category(ObserverMethod::FRadC) == MethodCategory::Propagation);
    CHECK(method_category(ObserverMethod::PDTDI) == MethodCategory::IntervalBased);
    CHECK(category_name(MethodCategory::IntervalBased) == "interval");
}

TEST_CASE("observers: measurement strips hold at the true state") {
    auto vdp = make_vdp(0.1);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x = testing::random_vector(rng, 2, -2.0, 2.0);
        Eigen::VectorXd v(1);
        v << rng.uniform(-0.2, 0.2);
        Eigen::VectorXd y = measure(vdp.system, x, v);
        for (const auto& s : measurement_strips(vdp.system.C, y, vdp.system.V))
            CHECK(s.noise.contains(s.normal.dot(x) - s.offset, 1e-12));
    }
}

TEST_CASE("observers: affine dynamics predict without inflation") {
    auto sys = affine2d();
    Eigen::MatrixXd A(2, 2);
    A << 0.9, 0.1, -0.1, 0.9;
    Rng rng(1);
    Zonotope z{Eigen::VectorXd::Zero(2), testing::random_matrix(rng, 2, 3)};
    const Eigen::VectorXd u(0);

    for (auto* predict : {&predict_mve, &predict_linremainder}) {
        SetValue img = (*predict)(SetValue{z}, sys, u);
        const auto& zi = std::get<Zonotope>(img);
        // exact affine image: A c + offset, generators [A G | W]
        Eigen::VectorXd off(2);
        off << 0.0, 0.5;
        CHECK((zi.c - (A * z.c + off)).lpNorm<Eigen::Infinity>() < 1e-12);
        const IntervalVector hull = interval_hull(img);
        IntervalVector expect = interval_hull(SetValue{Zonotope{A * z.c + off, A * z.G}}) + sys.W;
        CHECK((hull.lo - expect.lo).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK((hull.hi - expect.hi).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("observers: zero-gain one-shot update equals pure prediction") {
    auto vdp = make_vdp(0.1);
    Zonotope z{Eigen::VectorXd::Zero(2), 0.5 * Eigen::MatrixXd::Identity(2, 2)};
    Eigen::VectorXd y(1);
    y << 0.3;
    const Eigen::MatrixXd L0 = Eigen::MatrixXd::Zero(2, 1);
    SetValue a = step_fradC(z, vdp.system, Eigen::VectorXd(0), y, &L0);
    SetValue b = predict_linremainder(SetValue{z}, vdp.system, Eigen::VectorXd(0));
    const IntervalVector ha = interval_hull(a), hb = interval_hull(b);
    CHECK((ha.lo - hb.lo).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((ha.hi - hb.hi).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("observers: strip correction keeps the consistent part") {
    Rng rng(11);
    Zonotope z{Eigen::VectorXd::Zero(2), testing::random_matrix(rng, 2, 4)};
    Strip s;
    s.normal = Eigen::RowVectorXd(2);
    s.normal << 1.0, 0.5;
    s.offset = 0.2;
    s.noise = Interval{-0.3, 0.3};
    for (GainRule rule : {GainRule::Frobenius, GainRule::Volume, GainRule::CzStrip}) {
        SetValue corrected = correct_strip(SetValue{z}, {s}, rule);
        REQUIRE_FALSE(is_empty_marker(corrected));
        int kept = 0;
        for (int t = 0; t < 500; ++t) {
            Eigen::VectorXd p = testing::sample_point(z, rng);
            if (!s.noise.contains(s.normal.dot(p) - s.offset)) continue;
            ++kept;
            CHECK(contains_point(corrected, p, 1e-7));
        }
        CHECK(kept > 20);
    }
}

TEST_CASE("observers: orthogonal exact strips pin their coordinates") {
    const IntervalVector box = IntervalVector::unit_box(2);
    Strip s1, s2;
    s1.normal = Eigen::RowVectorXd(2);
    s1.normal << 1, 0;
    s1.offset = 0.3;
    s1.noise = Interval{0.0, 0.0};
    s2.normal = Eigen::RowVectorXd(2);
    s2.normal << 0, 1;
    s2.offset = -0.4;
    s2.noise = Interval{0.0, 0.0};
    SetValue out = correct_strip(SetValue{box}, {s1, s2}, GainRule::CzStrip);
    REQUIRE_FALSE(is_empty_marker(out));
    const IntervalVector hull = interval_hull(out);
    CHECK(hull.lo[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(hull.hi[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(hull.lo[1] == doctest::Approx(-0.4).epsilon(1e-9));
    CHECK(hull.hi[1] == doctest::Approx(-0.4).epsilon(1e-9));

    // a strip outside the box certifies emptiness
    s1.offset = 5.0;
    CHECK(is_empty_marker(correct_strip(SetValue{box}, {s1}, GainRule::CzStrip)));
}

TEST_CASE("observers: exact intersection never grows the support") {
    Rng rng(21);
    Zonotope z{testing::random_vector(rng, 2), testing::random_matrix(rng, 2, 5)};
    auto cz = ConstrainedZonotope::from_zonotope(z);
    Eigen::MatrixXd C(1, 2);
    C << 1, 0;
    Eigen::VectorXd y(1);
    y << z.c[0] + 0.1;
    const IntervalVector V =
        IntervalVector::centered(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.5));
    SetValue out = correct_cz_exact(cz, C, y, V, 100, 100.0);
    REQUIRE_FALSE(is_empty_marker(out));
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd d = testing::random_unit(rng, 2);
        CHECK(support(out, d) <= support(SetValue{z}, d) + 1e-7);
    }
}

TEST_CASE("observers: ellipsoid fusion tightens and stays sound") {
    Rng rng(31);
    Ellipsoid e{Eigen::VectorXd::Zero(2), 4.0 * Eigen::MatrixXd::Identity(2, 2)};
    Strip s;
    s.normal = Eigen::RowVectorXd(2);
    s.normal << 1, 0;
    s.offset = 0.5;
    s.noise = Interval{-0.2, 0.2};
    SetValue out = correct_ellipsoid(e, {s});
    REQUIRE_FALSE(is_empty_marker(out));
    const auto& ef = std::get<Ellipsoid>(out);
    CHECK(ef.P.trace() < e.P.trace());
    // every prior point consistent with the strip survives
    for (int t = 0; t < 500; ++t) {
        Eigen::VectorXd p = testing::sample_point(e, rng);
        if (!s.noise.contains(s.normal.dot(p) - s.offset)) continue;
        const Eigen::VectorXd d = p - ef.a;
        CHECK(d.dot(ef.P.ldlt().solve(d)) <= 1.0 + 1e-6);
    }
    // far-away strip certifies emptiness
    s.offset = 50.0;
    CHECK(is_empty_marker(correct_ellipsoid(e, {s})));
}

TEST_CASE("observers: slab partitioning never loosens the interval image") {
    auto tank = make_tank(3);
    const IntervalVector X{Eigen::VectorXd::Constant(3, 15.0), Eigen::VectorXd::Constant(3, 25.0)};
    Eigen::VectorXd u = Eigen::VectorXd::Constant(tank.system.m(), 0.1);
    Eigen::VectorXd x(3);
    x << 20.0, 18.0, 22.0;
    Eigen::VectorXd y = tank.system.C * x;
    SetValue p1 = step_pdtdi(X, tank.system, u, y, 1);
    SetValue p5 = step_pdtdi(X, tank.system, u, y, 5);
    REQUIRE_FALSE(is_empty_marker(p1));
    REQUIRE_FALSE(is_empty_marker(p5));
    const auto& b1 = std::get<IntervalVector>(p1);
    const auto& b5 = std::get<IntervalVector>(p5);
    CHECK(b1.contains(b5, 1e-9));
    // the noise-free propagation of the point stays inside
    Eigen::VectorXd fx = tank.system.f.eval_point(x, u);
    CHECK(b5.contains(fx, 1e-9));
}

TEST_CASE("observers: default configs wire splits and lifts") {
    auto vdp = make_vdp(0.1);
    auto t6 = make_tank(6);
    auto t30 = make_tank(30);
    CHECK(default_config(ObserverMethod::ZDC, vdp).dcSplit.has_value());
    CHECK(default_config(ObserverMethod::CZDC, t6).dcSplit.has_value());
    CHECK(default_config(ObserverMethod::FRadA, vdp).dcSplit.has_value() == false);
    CHECK(default_config(ObserverMethod::PDTDI, vdp).augmentation.has_value());
    CHECK(default_config(ObserverMethod::PDTDI, t6).augmentation.has_value());
    CHECK_FALSE(default_config(ObserverMethod::PDTDI, t30).augmentation.has_value());
    CHECK(default_config(ObserverMethod::FRadA, t6).maxOrder == 20.0);
    CHECK(default_config(ObserverMethod::FRadA, t6).maxConstraints == 12);
}

TEST_CASE("observers: every method tracks the oscillator truth") {
    auto bench = make_vdp(0.1);
    auto traj = simulate(bench.system, bench.R0, bench.input_profile, 30, 42);
    for (auto m : all_methods()) {
        CAPTURE(method_name(m));
        auto cfg = default_config(m, bench);
        auto st = observer_init(cfg, bench.system, bench.R0, traj.measurements[0]);
        REQUIRE_FALSE(st.diverged);
        CHECK(contains_point(reported_estimate(cfg, st), traj.states[0], 1e-6));
        for (int k = 0; k < 30; ++k) {
            st = observer_step(cfg, st, bench.system, traj.inputs[size_t(k)],
                               traj.measurements[size_t(k) + 1]);
            REQUIRE_FALSE(st.diverged);
            CHECK(st.step == k + 1);
            CHECK(contains_point(reported_estimate(cfg, st), traj.states[size_t(k) + 1], 1e-6));
        }
    }
}

TEST_CASE("observers: every method tracks the small tank truth") {
    auto bench = make_tank(6);
    auto traj = simulate(bench.system, bench.R0, bench.input_profile, 10, 7);
    for (auto m : all_methods()) {
        CAPTURE(method_name(m));
        auto cfg = default_config(m, bench);
        auto st = observer_init(cfg, bench.system, bench.R0, traj.measurements[0]);
        REQUIRE_FALSE(st.diverged);
        for (int k = 0; k < 10; ++k) {
            st = observer_step(cfg, st, bench.system, traj.inputs[size_t(k)],
                               traj.measurements[size_t(k) + 1]);
            REQUIRE_FALSE(st.diverged);
            CHECK(contains_point(reported_estimate(cfg, st), traj.states[size_t(k) + 1], 1e-6));
        }
    }
}

TEST_CASE("observers: divergence is absorbing") {
    auto bench = make_vdp(0.1);
    auto cfg = default_config(ObserverMethod::CZNA, bench);
    Eigen::VectorXd y0(1);
    y0 << 0.0;
    auto st = observer_init(cfg, bench.system, bench.R0, y0);
    REQUIRE_FALSE(st.diverged);
    // a measurement far outside any reachable value empties the estimate
    Eigen::VectorXd ybad(1);
    ybad << 100.0;
    st = observer_step(cfg, st, bench.system, Eigen::VectorXd(0), ybad);
    CHECK(st.diverged);
    CHECK_FALSE(st.reason.empty());
    CHECK(is_empty_marker(st.estimate));
    // subsequent consistent measurements cannot revive it
    auto st2 = observer_step(cfg, st, bench.system, Eigen::VectorXd(0), y0);
    CHECK(st2.diverged);
    CHECK(st2.step == st.step + 1);
    CHECK(is_empty_marker(st2.estimate));
}

TEST_CASE("observers: dc methods refuse the large tank instead of hanging") {
    auto bench = make_tank(30);
    auto traj = simulate(bench.system, bench.R0, bench.input_profile, 1, 5);
    for (auto m : {ObserverMethod::ZDC, ObserverMethod::CZDC}) {
        auto cfg = default_config(m, bench);
        auto st = observer_init(cfg, bench.system, bench.R0, traj.measurements[0]);
        st = observer_step(cfg, st, bench.system, traj.inputs[0], traj.measurements[1]);
        CHECK(st.diverged);
        CHECK_FALSE(st.reason.empty());
    }
}

TEST_CASE("observers: one-step estimates cover the consistent cloud") {
    auto bench = make_vdp(0.1);
    auto traj = simulate(bench.system, bench.R0, bench.input_profile, 1, 9);
    auto cloud = initial_consistent_cloud(bench.system, bench.R0, traj.measurements[0], 0.1);
    REQUIRE_FALSE(cloud.empty());
    auto next = consistent_set_oracle(bench.system, cloud, traj.inputs[0], traj.measurements[1]);
    REQUIRE_FALSE(next.empty());
    for (auto m : all_methods()) {
        CAPTURE(method_name(m));
        auto cfg = default_config(m, bench);
        auto st = observer_init(cfg, bench.system, bench.R0, traj.measurements[0]);
        st = observer_step(cfg, st, bench.system, traj.inputs[0], traj.measurements[1]);
        REQUIRE_FALSE(st.diverged);
        SetValue est = reported_estimate(cfg, st);
        for (size_t i = 0; i < next.size(); i += 7) CHECK(contains_point(est, next[i], 1e-6));
    }
}
