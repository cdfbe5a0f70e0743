#ifndef GSE_BENCHMARKS_HPP_
#define GSE_BENCHMARKS_HPP_

#include <string>
#include <vector>

#include "gse/rangebound.hpp"
#include "gse/sysmodel.hpp"

namespace gse {

struct ObserverBudgets {
    double maxOrder = 30.0;
    int maxConstraints = 5;
    int partitions = 5;
};

struct BenchmarkSpec {
    std::string name;
    NonlinearDiscreteSystem system;
    IntervalVector R0;
    std::vector<Eigen::VectorXd> input_profile;  // one entry per step
    ObserverBudgets budgets;
    ReductionMethod reduction = ReductionMethod::PCA;
    int steps = 100;
};

/// Lifted system with redundant states and the equality rows G_aug x = 0 they
/// satisfy; the truth trajectory of the original system lifts exactly.
struct Augmentation {
    NonlinearDiscreteSystem lifted;
    Eigen::MatrixXd G_aug;       // rows annihilate every lifted state
    Eigen::MatrixXd lift;        // x_lifted = lift * x
    IntervalVector R0;
    Eigen::Index n_orig = 0;
};

/// Euler-discretized oscillator: d_T = 0.025, C = [1 0], R0 = B^2,
/// W = 0.001 B^2, V = 0.2 B, u = 0; order 30 with PCA reduction, 5
/// constraints, 100 steps.
BenchmarkSpec make_vdp(double mu);

/// Tank chain under Torricelli outflow: d_T = 0.5, g = 9.81, kappa = 0.015,
/// unit cross-sections; R0 = [16,24]^n, W = 0.001 B^n, V = 0.2 B^r; inflow and
/// measured tanks from the fixed index table filtered to <= n; order 20,
/// 12 constraints (n <= 6) or 60 (larger), 100 steps. Inflows are known,
/// constant 0.1 per inflow tank.
BenchmarkSpec make_tank(int n);

/// "vdp:0.1", "vdp:5", "tank:6", "tank:30".
BenchmarkSpec make_benchmark(const std::string& id);

/// Convex/concave grouping of mu (1 - x1^2) x2 via the quartic identity, with
/// automatic convexity padding over the declared domain.
DCSplit vdp_dc_split(double mu);
/// Square-root terms grouped by sign; valid on positive levels.
DCSplit tank_dc_split(int n);

/// Two redundant states x1 + x2 and x1 - x2.
Augmentation vdp_augment_redundant(double mu);
/// Three pairwise-sum states for n = 6; larger n refuses.
Augmentation tank_augment_redundant(int n);

std::vector<int> tank_inflow_indices(int n);    // 1-based
std::vector<int> tank_measured_indices(int n);  // 1-based

}  // namespace gse

#endif  // GSE_BENCHMARKS_HPP_
