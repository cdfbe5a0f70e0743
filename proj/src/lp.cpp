#include "gse/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gse::lp {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;

enum class VarState : unsigned char { AtLower, AtUpper, Basic };

// Bounded-variable primal simplex over structural + artificial columns.
class Simplex {
public:
    Simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lb,
            const Eigen::VectorXd& ub)
        : m_(A.rows()), n_(A.cols()) {
        cols_.resize(m_, n_ + m_);
        cols_.leftCols(n_) = A;
        lb_.resize(n_ + m_);
        ub_.resize(n_ + m_);
        lb_.head(n_) = lb;
        ub_.head(n_) = ub;
        state_.assign(n_ + m_, VarState::AtLower);
        x_ = Eigen::VectorXd::Zero(n_ + m_);
        for (Eigen::Index j = 0; j < n_; ++j) x_[j] = lb[j];

        // artificial columns carry the initial residual
        Eigen::VectorXd r = b - A * lb;
        basis_.resize(m_);
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            const double s = r[i] >= 0 ? 1.0 : -1.0;
            cols_.col(n_ + i) = Eigen::VectorXd::Unit(m_, i) * s;
            lb_[n_ + i] = 0.0;
            ub_[n_ + i] = std::abs(r[i]);
            x_[n_ + i] = std::abs(r[i]);
            basis_[i] = n_ + i;
            state_[n_ + i] = VarState::Basic;
            binv_(i, i) = s;  // inverse of the signed identity
        }
    }

    bool run_phase1() {
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n_ + m_);
        c1.tail(m_).setConstant(-1.0);
        // a claimed-feasible point must certify itself: the structural columns
        // alone have to reproduce b. Basis-inverse drift can stall pricing at a
        // false optimum, so retry from a fresh factorization before giving up.
        const double thresh = kFeasTol * (1.0 + b_cache_.lpNorm<Eigen::Infinity>());
        bool ok = false;
        for (int attempt = 0; attempt < 4; ++attempt) {
            iterate(c1);
            if (structural_residual() <= thresh) {
                ok = true;
                break;
            }
            refactor();
        }
        if (!ok) return false;
        // pin artificials at zero for phase 2
        for (Eigen::Index i = 0; i < m_; ++i) ub_[n_ + i] = 0.0;
        for (Eigen::Index j = n_; j < n_ + m_; ++j)
            if (state_[j] != VarState::Basic) x_[j] = 0.0;
        return true;
    }

    Status run_phase2(const Eigen::VectorXd& cost) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n_ + m_);
        c.head(n_) = cost;
        Status st = iterate(c);
        // reprice once from a clean factorization before trusting optimality
        refactor();
        st = iterate(c);
        return st;
    }

    Eigen::VectorXd solution() const { return x_.head(n_); }

private:
    Status iterate(const Eigen::VectorXd& c) {
        const long max_iter = 200 + 40L * (m_ + n_);
        const long bland_after = max_iter / 2;
        for (long it = 0; it < max_iter; ++it) {
            refresh_basics();
            Eigen::VectorXd cb(m_);
            for (Eigen::Index i = 0; i < m_; ++i) cb[i] = c[basis_[i]];
            Eigen::VectorXd y = binv_.transpose() * cb;

            // pricing
            Eigen::Index enter = -1;
            double best = kCostTol;
            const bool bland = it >= bland_after;
            for (Eigen::Index j = 0; j < n_ + m_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                if (ub_[j] - lb_[j] < kPivotTol && x_[j] <= ub_[j] + kPivotTol &&
                    x_[j] >= lb_[j] - kPivotTol)
                    continue;  // fixed variable
                const double d = c[j] - y.dot(cols_.col(j));
                const double gain = state_[j] == VarState::AtLower ? d : -d;
                if (gain > (bland ? kCostTol : best)) {
                    enter = j;
                    best = gain;
                    if (bland) break;
                }
            }
            if (enter < 0) return Status::Optimal;

            const double dir = state_[enter] == VarState::AtLower ? 1.0 : -1.0;
            Eigen::VectorXd w = binv_ * cols_.col(enter);  // basic change per unit step

            // ratio test
            double theta = ub_[enter] - lb_[enter];
            Eigen::Index leave = -1;  // -1: bound flip
            for (Eigen::Index i = 0; i < m_; ++i) {
                const double delta = -dir * w[i];
                const Eigen::Index jb = basis_[i];
                double limit = std::numeric_limits<double>::infinity();
                if (delta < -kPivotTol)
                    limit = (lb_[jb] - x_[jb]) / delta;
                else if (delta > kPivotTol)
                    limit = (ub_[jb] - x_[jb]) / delta;
                if (limit < theta - kPivotTol || (limit < theta + kPivotTol && leave >= 0 &&
                                                  basis_[i] < basis_[leave])) {
                    theta = std::max(limit, 0.0);
                    leave = i;
                }
            }
            if (!std::isfinite(theta)) return Status::Unbounded;

            // apply the step
            x_[enter] += dir * theta;
            for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[i]] -= dir * theta * w[i];

            if (leave < 0) {
                state_[enter] = state_[enter] == VarState::AtLower ? VarState::AtUpper
                                                                   : VarState::AtLower;
                continue;
            }
            const Eigen::Index out = basis_[leave];
            const double delta = -dir * w[leave];
            state_[out] = delta < 0 ? VarState::AtLower : VarState::AtUpper;
            x_[out] = state_[out] == VarState::AtLower ? lb_[out] : ub_[out];
            basis_[leave] = enter;
            state_[enter] = VarState::Basic;
            pivot_binv(leave, w);
        }
        return Status::Optimal;  // iteration cap; current point is feasible
    }

    // elementary row update of the basis inverse after replacing row `leave`
    void pivot_binv(Eigen::Index leave, const Eigen::VectorXd& w) {
        const double piv = w[leave];
        if (std::abs(piv) < kPivotTol) {  // refactor from scratch
            Eigen::MatrixXd B(m_, m_);
            for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[i]);
            binv_ = B.fullPivLu().inverse();
            return;
        }
        binv_.row(leave) /= piv;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (i == leave) continue;
            const double f = w[i];
            if (f != 0.0) binv_.row(i) -= f * binv_.row(leave);
        }
        if (++pivots_since_refactor_ >= 16) {
            pivots_since_refactor_ = 0;
            Eigen::MatrixXd B(m_, m_);
            for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[i]);
            binv_ = B.fullPivLu().inverse();
        }
    }

    // infinity-norm equality violation of the structural part of the point
    double structural_residual() const {
        Eigen::VectorXd r = b_cache_;
        for (Eigen::Index j = 0; j < n_; ++j)
            if (x_[j] != 0.0) r -= cols_.col(j) * x_[j];
        return r.lpNorm<Eigen::Infinity>();
    }

    // rebuild the basis inverse exactly and recompute the basic values
    void refactor() {
        Eigen::MatrixXd B(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[i]);
        binv_ = B.fullPivLu().inverse();
        pivots_since_refactor_ = 0;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(m_);
        for (Eigen::Index j = 0; j < n_ + m_; ++j)
            if (state_[j] != VarState::Basic) full += cols_.col(j) * x_[j];
        const Eigen::VectorXd xb = binv_ * (b_cache_ - full);
        for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    }

    // recompute basic values from nonbasic ones every few iterations; curbs drift
    void refresh_basics() {
        if (++refresh_counter_ % 8 != 0) return;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(m_);
        for (Eigen::Index j = 0; j < n_ + m_; ++j)
            if (state_[j] != VarState::Basic) full += cols_.col(j) * x_[j];
        Eigen::VectorXd xb = binv_ * (b_cache_ - full);
        for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    }

public:
    void set_b(const Eigen::VectorXd& b) { b_cache_ = b; }

private:
    Eigen::Index m_, n_;
    Eigen::MatrixXd cols_;
    Eigen::VectorXd lb_, ub_, x_;
    Eigen::VectorXd b_cache_;
    Eigen::MatrixXd binv_;
    std::vector<Eigen::Index> basis_;
    std::vector<VarState> state_;
    long pivots_since_refactor_ = 0;
    long refresh_counter_ = 0;
};

// Column equilibration: substituting x_j = x'_j / s_j keeps the problem exact
// while evening out column magnitudes, which the pivot tolerances rely on.
Eigen::VectorXd column_scales(const Eigen::MatrixXd& A) {
    Eigen::VectorXd s(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double norm = A.col(j).norm();
        // near-zero columns stay unscaled: shrinking their bound range would
        // make the simplex treat an almost-unconstrained variable as fixed
        s[j] = norm > 1e-8 ? norm : 1.0;
    }
    return s;
}

}  // namespace

Result solve(const Eigen::VectorXd& cost, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
             const Eigen::VectorXd& lb, const Eigen::VectorXd& ub, bool maximize) {
    if (A.cols() != cost.size() || A.rows() != b.size() || lb.size() != cost.size() ||
        ub.size() != cost.size())
        throw std::invalid_argument("lp::solve: inconsistent dimensions");
    for (Eigen::Index j = 0; j < lb.size(); ++j)
        if (lb[j] > ub[j] + 1e-12) return {Status::Infeasible, 0.0, {}};

    const Eigen::VectorXd sc = column_scales(A);
    const Eigen::MatrixXd As = A * sc.cwiseInverse().asDiagonal();
    Simplex s(As, b, lb.cwiseProduct(sc), ub.cwiseProduct(sc));
    s.set_b(b);
    Result res;
    if (!s.run_phase1()) {
        res.status = Status::Infeasible;
        return res;
    }
    const Eigen::VectorXd cs = cost.cwiseQuotient(sc);
    res.status = s.run_phase2(maximize ? cs : Eigen::VectorXd(-cs));
    res.x = s.solution().cwiseQuotient(sc);
    res.value = cost.dot(res.x);
    return res;
}

bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lb,
              const Eigen::VectorXd& ub) {
    for (Eigen::Index j = 0; j < lb.size(); ++j)
        if (lb[j] > ub[j] + 1e-12) return false;
    const Eigen::VectorXd sc = column_scales(A);
    Simplex s(A * sc.cwiseInverse().asDiagonal(), b, lb.cwiseProduct(sc), ub.cwiseProduct(sc));
    s.set_b(b);
    return s.run_phase1();
}

}  // namespace gse::lp
