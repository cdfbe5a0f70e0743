#ifndef GSE_EXPR_HPP_
#define GSE_EXPR_HPP_

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "gse/interval.hpp"

namespace gse {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node over state symbols x1..xn and input symbols
/// u1..um. Supported: +, -, *, /, integer power, sqrt, constants.
class Expr {
public:
    enum class Kind { Const, VarX, VarU, Add, Sub, Mul, Div, Pow, Sqrt, Neg };

    Kind kind;
    double value = 0.0;  // Const
    int index = 0;       // VarX / VarU (0-based)
    int exponent = 0;    // Pow
    ExprPtr lhs, rhs;

    explicit Expr(Kind k) : kind(k) {}
};

// builders (with light constant folding / identity elimination)
ExprPtr constant(double v);
ExprPtr var_x(int i);
ExprPtr var_u(int i);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr divide(ExprPtr a, ExprPtr b);
ExprPtr pow_int(ExprPtr a, int k);
ExprPtr sqrt_of(ExprPtr a);
ExprPtr negate(ExprPtr a);

inline ExprPtr operator+(ExprPtr a, ExprPtr b) { return add(std::move(a), std::move(b)); }
inline ExprPtr operator-(ExprPtr a, ExprPtr b) { return sub(std::move(a), std::move(b)); }
inline ExprPtr operator*(ExprPtr a, ExprPtr b) { return mul(std::move(a), std::move(b)); }
inline ExprPtr operator/(ExprPtr a, ExprPtr b) { return divide(std::move(a), std::move(b)); }
inline ExprPtr operator-(ExprPtr a) { return negate(std::move(a)); }
inline ExprPtr operator*(double s, ExprPtr a) { return mul(constant(s), std::move(a)); }
inline ExprPtr operator+(double s, ExprPtr a) { return add(constant(s), std::move(a)); }
inline ExprPtr operator-(double s, ExprPtr a) { return sub(constant(s), std::move(a)); }

double eval(const ExprPtr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& u);
Interval eval(const ExprPtr& e, const IntervalVector& x, const IntervalVector& u);
/// Partial derivative w.r.t. state j (symbolic).
ExprPtr diff_x(const ExprPtr& e, int j);
std::string to_string(const ExprPtr& e);

/// f : R^n x R^m -> R^k as one expression per component.
struct SymbolicDynamics {
    std::vector<ExprPtr> comps;
    int n_states = 0;
    int n_inputs = 0;

    Eigen::Index dim_out() const { return Eigen::Index(comps.size()); }
    Eigen::VectorXd eval_point(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
};

/// Parses "x1 + 0.1*x2 ; x2 - sqrt(x1)" style text, one component per ';'.
SymbolicDynamics parse_dynamics(const std::string& text, int n_states, int n_inputs);
ExprPtr parse_expression(const std::string& text, int n_states, int n_inputs);

}  // namespace gse

#endif  // GSE_EXPR_HPP_
