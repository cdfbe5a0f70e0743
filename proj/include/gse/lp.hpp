#ifndef GSE_LP_HPP_
#define GSE_LP_HPP_

#include <Eigen/Dense>

namespace gse::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    double value = 0.0;
    Eigen::VectorXd x;
};

/// Solves  max/min cost^T x  s.t.  A x = b,  lb <= x <= ub.
///
/// All bounds must be finite. Deterministic: Dantzig pricing with a Bland
/// fallback against cycling, ties broken by lowest index.
Result solve(const Eigen::VectorXd& cost, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
             const Eigen::VectorXd& lb, const Eigen::VectorXd& ub, bool maximize = true);

/// Phase-1 only: is { x : A x = b, lb <= x <= ub } nonempty?
bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lb,
              const Eigen::VectorXd& ub);

}  // namespace gse::lp

#endif  // GSE_LP_HPP_
