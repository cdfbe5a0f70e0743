#include "gse/benchmarks.hpp"

#include <stdexcept>

namespace gse {

namespace {

constexpr double kTankDt = 0.5;
constexpr double kTankKappa = 0.015;
constexpr double kTwoG = 2.0 * 9.81;  // 19.62
constexpr double kInflow = 0.1;       // known constant inflow per inflow tank

const std::vector<int> kInflowTable = {1, 4, 5, 7, 9, 10, 13, 15, 16, 19, 21, 22, 25, 27, 28};
const std::vector<int> kMeasuredTable = {2,  4,  5,  7,  8,  10, 11, 13, 14, 16, 17,
                                         19, 20, 21, 22, 23, 25, 26, 27, 28, 29};

std::vector<int> filtered(const std::vector<int>& table, int n) {
    std::vector<int> out;
    for (int i : table)
        if (i <= n) out.push_back(i);
    return out;
}

ExprPtr vdp_comp1(double dt) { return add(var_x(0), mul(constant(dt), var_x(1))); }

ExprPtr vdp_comp2(double mu, double dt) {
    ExprPtr nonlin = mul(mul(constant(mu), sub(constant(1.0), pow_int(var_x(0), 2))), var_x(1));
    return add(var_x(1), mul(constant(dt), sub(nonlin, var_x(0))));
}

ExprPtr outflow(int state) {  // dT kappa sqrt(2 g x_state)
    return mul(constant(kTankDt * kTankKappa), sqrt_of(mul(constant(kTwoG), var_x(state))));
}

/// f_i for the tank chain; inflow_slot < 0 when tank i has no external inflow.
ExprPtr tank_comp(int i, int inflow_slot) {
    ExprPtr e = sub(var_x(i), outflow(i));
    if (i > 0) e = add(e, outflow(i - 1));
    if (inflow_slot >= 0) e = add(e, mul(constant(kTankDt), var_u(inflow_slot)));
    return e;
}

SymbolicDynamics tank_dynamics(int n) {
    const auto inflow = filtered(kInflowTable, n);
    SymbolicDynamics f;
    f.n_states = n;
    f.n_inputs = int(inflow.size());
    for (int i = 0; i < n; ++i) {
        int slot = -1;
        for (size_t j = 0; j < inflow.size(); ++j)
            if (inflow[j] == i + 1) slot = int(j);
        f.comps.push_back(tank_comp(i, slot));
    }
    return f;
}

}  // namespace

std::vector<int> tank_inflow_indices(int n) { return filtered(kInflowTable, n); }
std::vector<int> tank_measured_indices(int n) { return filtered(kMeasuredTable, n); }

BenchmarkSpec make_vdp(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("make_vdp: mu must be positive");
    const double dt = 0.025;
    BenchmarkSpec b;
    b.name = "vdp:" + std::to_string(mu);
    b.system.f = SymbolicDynamics{{vdp_comp1(dt), vdp_comp2(mu, dt)}, 2, 0};
    b.system.C = Eigen::MatrixXd(1, 2);
    b.system.C << 1, 0;
    b.system.W = IntervalVector::centered(Eigen::VectorXd::Zero(2),
                                          Eigen::VectorXd::Constant(2, 0.001));
    b.system.V = IntervalVector::centered(Eigen::VectorXd::Zero(1),
                                          Eigen::VectorXd::Constant(1, 0.2));
    b.R0 = IntervalVector::unit_box(2);
    b.steps = 100;
    b.input_profile.assign(size_t(b.steps), Eigen::VectorXd(0));
    b.budgets = {30.0, 5, 5};
    b.reduction = ReductionMethod::PCA;
    return b;
}

BenchmarkSpec make_tank(int n) {
    if (n < 2) throw std::invalid_argument("make_tank: need at least 2 tanks");
    BenchmarkSpec b;
    b.name = "tank:" + std::to_string(n);
    b.system.f = tank_dynamics(n);
    const auto measured = tank_measured_indices(n);
    b.system.C = Eigen::MatrixXd::Zero(Eigen::Index(measured.size()), n);
    for (size_t k = 0; k < measured.size(); ++k) b.system.C(Eigen::Index(k), measured[k] - 1) = 1.0;
    b.system.W = IntervalVector::centered(Eigen::VectorXd::Zero(n),
                                          Eigen::VectorXd::Constant(n, 0.001));
    b.system.V =
        IntervalVector::centered(Eigen::VectorXd::Zero(Eigen::Index(measured.size())),
                                 Eigen::VectorXd::Constant(Eigen::Index(measured.size()), 0.2));
    b.R0 = IntervalVector::centered(Eigen::VectorXd::Constant(n, 20.0),
                                    Eigen::VectorXd::Constant(n, 4.0));
    b.steps = 100;
    b.input_profile.assign(
        size_t(b.steps),
        Eigen::VectorXd::Constant(Eigen::Index(b.system.f.n_inputs), kInflow));
    b.budgets = {20.0, n <= 6 ? 12 : 60, 5};
    b.reduction = ReductionMethod::PCA;
    return b;
}

BenchmarkSpec make_benchmark(const std::string& id) {
    const auto sep = id.find(':');
    if (sep == std::string::npos)
        throw std::invalid_argument("benchmark id must look like vdp:0.1 or tank:6");
    const std::string family = id.substr(0, sep);
    const std::string param = id.substr(sep + 1);
    try {
        if (family == "vdp") return make_vdp(std::stod(param));
        if (family == "tank") return make_tank(std::stoi(param));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("benchmark id has a malformed parameter: " + id);
    }
    throw std::invalid_argument("unknown benchmark family '" + family +
                                "' (available: vdp:<mu>, tank:<n>)");
}

DCSplit vdp_dc_split(double mu) {
    const double dt = 0.025;
    const double s = dt * mu / 8.0;
    // mu (1 - x1^2) x2 = mu x2 - (mu/8) [(x1^2 + 2 x2)^2 - (x1^2 - 2 x2)^2]
    ExprPtr minus = pow_int(sub(pow_int(var_x(0), 2), mul(constant(2.0), var_x(1))), 2);
    ExprPtr plus = pow_int(add(pow_int(var_x(0), 2), mul(constant(2.0), var_x(1))), 2);
    ExprPtr g2 = add(add(var_x(1), mul(constant(dt), sub(mul(constant(mu), var_x(1)), var_x(0)))),
                     mul(constant(s), minus));
    ExprPtr h2 = mul(constant(s), plus);

    SymbolicDynamics g{{vdp_comp1(dt), g2}, 2, 0};
    SymbolicDynamics h{{constant(0.0), h2}, 2, 0};
    const double r1 = mu <= 1.0 ? 2.5 : 4.0;
    const double r2 = mu <= 1.0 ? 2.5 : 8.0;
    Eigen::VectorXd rad(2);
    rad << r1, r2;
    const IntervalVector domain = IntervalVector::centered(Eigen::VectorXd::Zero(2), rad);
    return make_dc_split_regularized(g, h, domain);
}

DCSplit tank_dc_split(int n) {
    if (n < 2) throw std::invalid_argument("tank_dc_split: need at least 2 tanks");
    const auto inflow = tank_inflow_indices(n);
    DCSplit split;
    split.g.n_states = split.h.n_states = n;
    split.g.n_inputs = split.h.n_inputs = int(inflow.size());
    for (int i = 0; i < n; ++i) {
        int slot = -1;
        for (size_t j = 0; j < inflow.size(); ++j)
            if (inflow[j] == i + 1) slot = int(j);
        // own outflow -sqrt(x_i) is convex; upstream +sqrt(x_{i-1}) is concave
        // and moves to h with flipped sign
        ExprPtr gi = sub(var_x(i), outflow(i));
        if (slot >= 0) gi = add(gi, mul(constant(kTankDt), var_u(slot)));
        split.g.comps.push_back(gi);
        split.h.comps.push_back(i > 0 ? negate(outflow(i - 1)) : constant(0.0));
    }
    split.domain = IntervalVector{Eigen::VectorXd::Constant(n, 1e-4),
                                  Eigen::VectorXd::Constant(n, 200.0)};
    return split;
}

Augmentation vdp_augment_redundant(double mu) {
    const double dt = 0.025;
    const ExprPtr f1 = vdp_comp1(dt);
    const ExprPtr f2 = vdp_comp2(mu, dt);
    Augmentation a;
    a.n_orig = 2;
    a.lifted.f = SymbolicDynamics{{f1, f2, add(f1, f2), sub(f1, f2)}, 4, 0};
    a.lifted.C = Eigen::MatrixXd::Zero(1, 4);
    a.lifted.C(0, 0) = 1.0;
    Eigen::VectorXd wrad(4);
    wrad << 0.001, 0.001, 0.002, 0.002;
    a.lifted.W = IntervalVector::centered(Eigen::VectorXd::Zero(4), wrad);
    a.lifted.V = IntervalVector::centered(Eigen::VectorXd::Zero(1),
                                          Eigen::VectorXd::Constant(1, 0.2));
    a.G_aug = Eigen::MatrixXd::Zero(2, 4);
    a.G_aug << 1, 1, -1, 0, 1, -1, 0, -1;
    a.lift = Eigen::MatrixXd(4, 2);
    a.lift << 1, 0, 0, 1, 1, 1, 1, -1;
    Eigen::VectorXd rad(4);
    rad << 1, 1, 2, 2;
    a.R0 = IntervalVector::centered(Eigen::VectorXd::Zero(4), rad);
    return a;
}

Augmentation tank_augment_redundant(int n) {
    if (n != 6)
        throw std::invalid_argument(
            "tank_augment_redundant: only the 6-tank system is augmented");
    const SymbolicDynamics base = tank_dynamics(6);
    Augmentation a;
    a.n_orig = 6;
    a.lifted.f.n_states = 9;
    a.lifted.f.n_inputs = base.n_inputs;
    for (int i = 0; i < 6; ++i) a.lifted.f.comps.push_back(base.comps[size_t(i)]);
    for (int k = 0; k < 3; ++k)
        a.lifted.f.comps.push_back(add(base.comps[size_t(2 * k)], base.comps[size_t(2 * k + 1)]));
    const auto measured = tank_measured_indices(6);
    a.lifted.C = Eigen::MatrixXd::Zero(Eigen::Index(measured.size()), 9);
    for (size_t k = 0; k < measured.size(); ++k) a.lifted.C(Eigen::Index(k), measured[k] - 1) = 1.0;
    Eigen::VectorXd wrad(9);
    wrad << 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.002, 0.002, 0.002;
    a.lifted.W = IntervalVector::centered(Eigen::VectorXd::Zero(9), wrad);
    a.lifted.V =
        IntervalVector::centered(Eigen::VectorXd::Zero(Eigen::Index(measured.size())),
                                 Eigen::VectorXd::Constant(Eigen::Index(measured.size()), 0.2));
    a.G_aug = Eigen::MatrixXd::Zero(3, 9);
    for (int k = 0; k < 3; ++k) {
        a.G_aug(k, 2 * k) = 1.0;
        a.G_aug(k, 2 * k + 1) = 1.0;
        a.G_aug(k, 6 + k) = -1.0;
    }
    a.lift = Eigen::MatrixXd::Zero(9, 6);
    a.lift.topLeftCorner(6, 6).setIdentity();
    for (int k = 0; k < 3; ++k) {
        a.lift(6 + k, 2 * k) = 1.0;
        a.lift(6 + k, 2 * k + 1) = 1.0;
    }
    Eigen::VectorXd mid(9), rad(9);
    mid << 20, 20, 20, 20, 20, 20, 40, 40, 40;
    rad << 4, 4, 4, 4, 4, 4, 8, 8, 8;
    a.R0 = IntervalVector::centered(mid, rad);
    return a;
}

}  // namespace gse
