#ifndef GSE_INTERVAL_HPP_
#define GSE_INTERVAL_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gse {

/// Thrown when an operation leaves its mathematical domain (sqrt of a
/// negative interval, division by an interval containing zero, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

class dimension_error : public std::invalid_argument {
public:
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Scalar interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
    }
    static Interval point(double v) { return {v, v}; }

    double mid() const { return 0.5 * (lo + hi); }
    double rad() const { return 0.5 * (hi - lo); }
    double width() const { return hi - lo; }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
    bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return o.lo <= hi && lo <= o.hi; }
};

inline Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
inline Interval operator+(const Interval& a, double s) { return {a.lo + s, a.hi + s}; }
inline Interval operator*(const Interval& a, const Interval& b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {std::min({p[0], p[1], p[2], p[3]}), std::max({p[0], p[1], p[2], p[3]})};
}
inline Interval operator*(double s, const Interval& a) {
    return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}
inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0)
        throw domain_error("interval division by an interval containing zero");
    return a * Interval{1.0 / b.hi, 1.0 / b.lo};
}

inline Interval isqrt(const Interval& a) {
    if (a.lo < 0.0) throw domain_error("sqrt of an interval with negative lower bound");
    return {std::sqrt(a.lo), std::sqrt(a.hi)};
}

/// Integer power with the even-exponent tightening.
inline Interval ipow(const Interval& a, int k) {
    if (k == 0) return Interval::point(1.0);
    if (k < 0) return Interval::point(1.0) / ipow(a, -k);
    if (k % 2 == 1 || a.lo >= 0.0)
        return {std::pow(a.lo, k), std::pow(a.hi, k)};
    if (a.hi <= 0.0)
        return {std::pow(a.hi, k), std::pow(a.lo, k)};
    // even exponent, zero inside
    return {0.0, std::pow(a.mag(), k)};
}

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Axis-aligned box given by componentwise bounds.
struct IntervalVector {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    IntervalVector() = default;
    IntervalVector(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.size() != hi.size()) throw dimension_error("IntervalVector: size mismatch");
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i])) throw std::invalid_argument("IntervalVector: lo > hi");
    }
    static IntervalVector point(const Eigen::VectorXd& v) { return {v, v}; }
    /// Centered box c +- r.
    static IntervalVector centered(const Eigen::VectorXd& c, const Eigen::VectorXd& r) {
        return {c - r, c + r};
    }
    /// Unit box B^n.
    static IntervalVector unit_box(Eigen::Index n) {
        return {Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)};
    }

    Eigen::Index dim() const { return lo.size(); }
    Eigen::VectorXd mid() const { return 0.5 * (lo + hi); }
    Eigen::VectorXd rad() const { return 0.5 * (hi - lo); }
    Interval operator[](Eigen::Index i) const { return {lo[i], hi[i]}; }
    void set(Eigen::Index i, const Interval& v) { lo[i] = v.lo; hi[i] = v.hi; }

    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
        if (x.size() != dim()) throw dimension_error("contains: dimension mismatch");
        return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
    }
    bool contains(const IntervalVector& o, double tol = 0.0) const {
        return (o.lo.array() >= lo.array() - tol).all() && (o.hi.array() <= hi.array() + tol).all();
    }
    double max_radius() const { return dim() == 0 ? 0.0 : rad().maxCoeff(); }
};

inline IntervalVector operator+(const IntervalVector& a, const IntervalVector& b) {
    if (a.dim() != b.dim()) throw dimension_error("box sum: dimension mismatch");
    return {a.lo + b.lo, a.hi + b.hi};
}

/// Componentwise intersection; returns false if any component is empty.
inline bool intersect(const IntervalVector& a, const IntervalVector& b, IntervalVector* out) {
    if (a.dim() != b.dim()) throw dimension_error("box intersection: dimension mismatch");
    Eigen::VectorXd lo = a.lo.cwiseMax(b.lo), hi = a.hi.cwiseMin(b.hi);
    if ((lo.array() > hi.array()).any()) return false;
    *out = IntervalVector(std::move(lo), std::move(hi));
    return true;
}

/// Matrix with elementwise interval entries.
struct IntervalMatrix {
    Eigen::MatrixXd lo;
    Eigen::MatrixXd hi;

    IntervalMatrix() = default;
    IntervalMatrix(Eigen::MatrixXd l, Eigen::MatrixXd h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.rows() != hi.rows() || lo.cols() != hi.cols())
            throw dimension_error("IntervalMatrix: shape mismatch");
    }
    static IntervalMatrix point(const Eigen::MatrixXd& m) { return {m, m}; }

    Eigen::Index rows() const { return lo.rows(); }
    Eigen::Index cols() const { return lo.cols(); }
    Eigen::MatrixXd mid() const { return 0.5 * (lo + hi); }
    Eigen::MatrixXd rad() const { return 0.5 * (hi - lo); }
    Interval operator()(Eigen::Index i, Eigen::Index j) const { return {lo(i, j), hi(i, j)}; }
    void set(Eigen::Index i, Eigen::Index j, const Interval& v) { lo(i, j) = v.lo; hi(i, j) = v.hi; }
};

}  // namespace gse

#endif  // GSE_INTERVAL_HPP_
