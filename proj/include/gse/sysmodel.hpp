#ifndef GSE_SYSMODEL_HPP_
#define GSE_SYSMODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gse/expr.hpp"
#include "gse/interval.hpp"
#include "gse/sets.hpp"

namespace gse {

/// x_{k+1} = f(x_k, u_k) + w_k,  y_k = C x_k + v_k,  w in W, v in V.
struct NonlinearDiscreteSystem {
    SymbolicDynamics f;   // n -> n, m inputs
    Eigen::MatrixXd C;    // r x n
    IntervalVector W;     // n
    IntervalVector V;     // r

    Eigen::Index n() const { return Eigen::Index(f.n_states); }
    Eigen::Index m() const { return Eigen::Index(f.n_inputs); }
    Eigen::Index r() const { return C.rows(); }
    void check() const;
};

/// states[k] for k = 0..steps, measurements aligned with states, inputs[k]
/// drives the transition k -> k+1.
struct Trajectory {
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> measurements;
    std::uint64_t seed = 0;

    int steps() const { return int(states.size()) - 1; }
};

Eigen::VectorXd step_truth(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w);
Eigen::VectorXd measure(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& v);

/// Disturbances and noises drawn uniformly from W and V; a measurement is
/// produced at every step including k = 0. Deterministic per seed.
Trajectory simulate(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x0,
                    const std::vector<Eigen::VectorXd>& u_seq, int steps, std::uint64_t seed);
/// Same, with the initial state itself drawn uniformly from R0.
Trajectory simulate(const NonlinearDiscreteSystem& sys, const IntervalVector& R0,
                    const std::vector<Eigen::VectorXd>& u_seq, int steps, std::uint64_t seed);

void save_trajectory_csv(const Trajectory& t, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path, Eigen::Index n, Eigen::Index m,
                               Eigen::Index r);

/// Brute-force reference for 2D soundness/tightness tests: the states at step 0
/// consistent with the measurement y0.
std::vector<Eigen::VectorXd> initial_consistent_cloud(const NonlinearDiscreteSystem& sys,
                                                      const IntervalVector& R0,
                                                      const Eigen::VectorXd& y0, double gridRes);

/// One-step image of a previous cloud under the dynamics (disturbance corners
/// and center), filtered by consistency with y. Refuses n > 2.
std::vector<Eigen::VectorXd> consistent_set_oracle(const NonlinearDiscreteSystem& sys,
                                                   const std::vector<Eigen::VectorXd>& cloud_prev,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& y);

/// Same, starting from a set: grid its hull, keep members, propagate.
std::vector<Eigen::VectorXd> consistent_set_oracle(const NonlinearDiscreteSystem& sys,
                                                   const SetValue& S_prev,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& y, double gridRes);

}  // namespace gse

#endif  // GSE_SYSMODEL_HPP_
