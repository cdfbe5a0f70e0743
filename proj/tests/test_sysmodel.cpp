#include <doctest.h>

#include <cstdio>

#include "gse/benchmarks.hpp"
#include "gse/sysmodel.hpp"
#include "support/sampling.hpp"

using namespace gse;

namespace {

NonlinearDiscreteSystem linear1d(double a, double v_rad) {
    NonlinearDiscreteSystem sys;
    sys.f = SymbolicDynamics{{mul(constant(a), var_x(0))}, 1, 0};
    sys.C = Eigen::MatrixXd::Identity(1, 1);
    sys.W = IntervalVector::centered(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.01));
    sys.V = IntervalVector::centered(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, v_rad));
    return sys;
}

}  // namespace

TEST_CASE("sysmodel: truth step") {
    auto vdp = make_vdp(0.1);
    Eigen::VectorXd x(2), u(0), w = Eigen::VectorXd::Zero(2);
    x << 1.0, 0.0;
    Eigen::VectorXd next = step_truth(vdp.system, x, u, w);
    CHECK(next[0] == doctest::Approx(1.0));
    CHECK(next[1] == doctest::Approx(-0.025));

    // linear system with disturbance at the box center 0
    auto lin = linear1d(0.7, 0.2);
    Eigen::VectorXd x1(1);
    x1 << 3.0;
    CHECK(step_truth(lin, x1, Eigen::VectorXd(0), Eigen::VectorXd::Zero(1))[0] ==
          doctest::Approx(2.1));

    auto tank = make_tank(2);
    Eigen::VectorXd xt = Eigen::VectorXd::Constant(2, 20.0);
    Eigen::VectorXd ut = Eigen::VectorXd::Zero(tank.system.m());
    Eigen::VectorXd nt = step_truth(tank.system, xt, ut, Eigen::VectorXd::Zero(2));
    CHECK(nt[0] == doctest::Approx(20.0 - 0.0075 * std::sqrt(392.4)));
    CHECK(nt[1] == doctest::Approx(20.0));  // inflow equals outflow at equal levels
}

TEST_CASE("sysmodel: measurement") {
    NonlinearDiscreteSystem sys;
    sys.f = SymbolicDynamics{{var_x(0), var_x(1)}, 2, 0};
    sys.C = Eigen::MatrixXd(1, 2);
    sys.C << 1, 0;
    sys.W = IntervalVector::unit_box(2);
    sys.V = IntervalVector::centered(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.2));
    Eigen::VectorXd x(2);
    x << 3.0, 7.0;
    Eigen::VectorXd v(1);
    v << 0.1;
    CHECK(measure(sys, x, v)[0] == doctest::Approx(3.1));

    // noise at the bounds stays inside Cx + V
    for (double vb : {-0.2, 0.2}) {
        Eigen::VectorXd vv(1);
        vv << vb;
        const double y = measure(sys, x, vv)[0];
        CHECK(y >= 2.8);
        CHECK(y <= 3.2);
    }

    // r = 0: empty measurement vector
    sys.C = Eigen::MatrixXd(0, 2);
    sys.V = IntervalVector{Eigen::VectorXd(0), Eigen::VectorXd(0)};
    CHECK(measure(sys, x, Eigen::VectorXd(0)).size() == 0);
}

TEST_CASE("sysmodel: simulation determinism and replay") {
    auto vdp = make_vdp(0.1);
    auto t1 = simulate(vdp.system, vdp.R0, vdp.input_profile, 100, 12345);
    auto t2 = simulate(vdp.system, vdp.R0, vdp.input_profile, 100, 12345);
    REQUIRE(t1.states.size() == 101);
    REQUIRE(t1.measurements.size() == 101);
    REQUIRE(t1.inputs.size() == 100);
    for (size_t k = 0; k < t1.states.size(); ++k) {
        CHECK(t1.states[k] == t2.states[k]);  // bitwise
        CHECK(t1.measurements[k] == t2.measurements[k]);
    }
    // every implied draw lies in its box
    CHECK(vdp.R0.contains(t1.states[0]));
    for (size_t k = 0; k < t1.states.size(); ++k) {
        Eigen::VectorXd v = t1.measurements[k] - vdp.system.C * t1.states[k];
        CHECK(vdp.system.V.contains(v, 1e-12));
        if (k + 1 < t1.states.size()) {
            Eigen::VectorXd w =
                t1.states[k + 1] - vdp.system.f.eval_point(t1.states[k], t1.inputs[k]);
            CHECK(vdp.system.W.contains(w, 1e-12));
        }
    }
    // different seed, different trajectory
    auto t3 = simulate(vdp.system, vdp.R0, vdp.input_profile, 100, 999);
    CHECK(t1.states[0] != t3.states[0]);
}

TEST_CASE("sysmodel: noise-free simulation repeats the truth step") {
    auto vdp = make_vdp(0.1);
    vdp.system.W = IntervalVector::point(Eigen::VectorXd::Zero(2));
    vdp.system.V = IntervalVector::point(Eigen::VectorXd::Zero(1));
    Eigen::VectorXd x0(2);
    x0 << 0.5, -0.3;
    auto t = simulate(vdp.system, x0, vdp.input_profile, 10, 1);
    Eigen::VectorXd x = x0;
    for (int k = 0; k <= 10; ++k) {
        CHECK((t.states[size_t(k)] - x).lpNorm<Eigen::Infinity>() < 1e-15);
        CHECK(t.measurements[size_t(k)][0] == doctest::Approx(x[0]));
        if (k < 10) x = step_truth(vdp.system, x, Eigen::VectorXd(0), Eigen::VectorXd::Zero(2));
    }
}

TEST_CASE("sysmodel: trajectory csv round trip") {
    auto tank = make_tank(3);
    auto t = simulate(tank.system, tank.R0, tank.input_profile, 20, 77);
    const std::string path = "traj_roundtrip_tmp.csv";
    save_trajectory_csv(t, path);
    auto back = load_trajectory_csv(path, tank.system.n(), tank.system.m(), tank.system.r());
    std::remove(path.c_str());
    REQUIRE(back.states.size() == t.states.size());
    REQUIRE(back.inputs.size() == t.inputs.size());
    for (size_t k = 0; k < t.states.size(); ++k) {
        CHECK(back.states[k] == t.states[k]);  // %.17g round-trips doubles
        CHECK(back.measurements[k] == t.measurements[k]);
    }
}

TEST_CASE("sysmodel: consistent-set oracle on a linear 1d system") {
    // x+ = 0.5 x + w, y = x + v: analytic next interval is
    // (0.5 [lo,hi] + W) intersected with y - V
    auto sys = linear1d(0.5, 0.2);
    std::vector<Eigen::VectorXd> cloud;
    for (double a = -1.0; a <= 1.0; a += 0.001) {
        Eigen::VectorXd p(1);
        p << a;
        cloud.push_back(p);
    }
    Eigen::VectorXd y(1);
    y << 0.4;
    auto next = consistent_set_oracle(sys, cloud, Eigen::VectorXd(0), y);
    REQUIRE_FALSE(next.empty());
    double lo = 1e9, hi = -1e9;
    for (const auto& p : next) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    // propagation [-0.51, 0.51], measurement [0.2, 0.6]
    CHECK(lo == doctest::Approx(0.2).epsilon(0.01));
    CHECK(hi == doctest::Approx(0.51).epsilon(0.01));

    // no measurement information: pure propagation image
    auto wide = linear1d(0.5, 1e9);
    auto all = consistent_set_oracle(wide, cloud, Eigen::VectorXd(0), y);
    CHECK(all.size() == cloud.size() * 3);  // center + 2 disturbance corners

    // incompatible measurement: empty cloud
    Eigen::VectorXd ybad(1);
    ybad << 5.0;
    CHECK(consistent_set_oracle(sys, cloud, Eigen::VectorXd(0), ybad).empty());

    // dimension guard
    auto tank = make_tank(3);
    CHECK_THROWS_AS(
        consistent_set_oracle(tank.system, cloud, Eigen::VectorXd(0), Eigen::VectorXd(0)),
        std::invalid_argument);
}

TEST_CASE("sysmodel: initial cloud respects the first measurement") {
    auto vdp = make_vdp(0.1);
    Eigen::VectorXd y0(1);
    y0 << 0.5;
    auto cloud = initial_consistent_cloud(vdp.system, vdp.R0, y0, 0.05);
    REQUIRE_FALSE(cloud.empty());
    for (const auto& p : cloud) {
        CHECK(vdp.R0.contains(p, 1e-12));
        CHECK(std::abs(y0[0] - p[0]) <= 0.2 + 1e-12);
    }
}
