#include <doctest.h>

#include "gse/lp.hpp"
#include "support/sampling.hpp"

using namespace gse;

TEST_CASE("lp: box support without constraints") {
    // max x1 + 2 x2 over [-1,1]^2
    Eigen::VectorXd c(2);
    c << 1, 2;
    Eigen::MatrixXd A(0, 2);
    Eigen::VectorXd b(0);
    auto res = lp::solve(c, A, b, Eigen::VectorXd::Constant(2, -1),
                         Eigen::VectorXd::Constant(2, 1), true);
    REQUIRE(res.status == lp::Status::Optimal);
    CHECK(res.value == doctest::Approx(3.0));
}

TEST_CASE("lp: equality constrained") {
    // max x1 s.t. x1 + x2 = 0.5, x in [-1,1]^2  -> x1 = 1? no: x2 = -0.5 ok -> 1
    Eigen::VectorXd c(2);
    c << 1, 0;
    Eigen::MatrixXd A(1, 2);
    A << 1, 1;
    Eigen::VectorXd b(1);
    b << 0.5;
    auto res = lp::solve(c, A, b, Eigen::VectorXd::Constant(2, -1),
                         Eigen::VectorXd::Constant(2, 1), true);
    REQUIRE(res.status == lp::Status::Optimal);
    CHECK(res.value == doctest::Approx(1.0));
    CHECK(res.x[1] == doctest::Approx(-0.5));

    auto mn = lp::solve(c, A, b, Eigen::VectorXd::Constant(2, -1),
                        Eigen::VectorXd::Constant(2, 1), false);
    CHECK(mn.value == doctest::Approx(-0.5));
}

TEST_CASE("lp: infeasible detection") {
    Eigen::MatrixXd A(1, 2);
    A << 1, 1;
    Eigen::VectorXd b(1);
    b << 3.0;  // unreachable in [-1,1]^2
    CHECK_FALSE(lp::feasible(A, b, Eigen::VectorXd::Constant(2, -1),
                             Eigen::VectorXd::Constant(2, 1)));
    b << 2.0;  // exactly the corner
    CHECK(lp::feasible(A, b, Eigen::VectorXd::Constant(2, -1),
                       Eigen::VectorXd::Constant(2, 1)));
}

TEST_CASE("lp: randomized against brute-force vertex enumeration") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng.below(3));  // 2..4 variables
        const int q = int(rng.below(2));      // 0..1 equality rows
        Eigen::MatrixXd A = testing::random_matrix(rng, q, n);
        Eigen::VectorXd cost = testing::random_vector(rng, n);
        // build b from a feasible interior point so the LP is feasible
        Eigen::VectorXd x0 = testing::random_vector(rng, n, -0.9, 0.9);
        Eigen::VectorXd b = A * x0;
        auto res = lp::solve(cost, A, b, Eigen::VectorXd::Constant(n, -1),
                             Eigen::VectorXd::Constant(n, 1), true);
        REQUIRE(res.status == lp::Status::Optimal);
        // brute force: sample many feasible points by projecting onto the
        // constraint nullspace; optimum must dominate all of them
        Eigen::MatrixXd null = Eigen::FullPivLU<Eigen::MatrixXd>(A).kernel();
        double best = -1e100;
        for (int s = 0; s < 3000; ++s) {
            Eigen::VectorXd x = x0 + null * testing::random_vector(rng, null.cols(), -2, 2);
            if ((x.array().abs() > 1.0).any()) continue;
            best = std::max(best, cost.dot(x));
        }
        CHECK(res.value >= best - 1e-7);
        // solution feasibility
        CHECK((res.x.array().abs() <= 1.0 + 1e-7).all());
        if (q > 0) CHECK((A * res.x - b).lpNorm<Eigen::Infinity>() < 1e-7);
    }
}
