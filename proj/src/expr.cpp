#include "gse/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gse {

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Const && e->value == v;
}

std::shared_ptr<Expr> node(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>(k);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

}  // namespace

ExprPtr constant(double v) {
    auto e = std::make_shared<Expr>(Expr::Kind::Const);
    e->value = v;
    return e;
}

ExprPtr var_x(int i) {
    if (i < 0) throw std::invalid_argument("var_x: negative index");
    auto e = std::make_shared<Expr>(Expr::Kind::VarX);
    e->index = i;
    return e;
}

ExprPtr var_u(int i) {
    if (i < 0) throw std::invalid_argument("var_u: negative index");
    auto e = std::make_shared<Expr>(Expr::Kind::VarU);
    e->index = i;
    return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) {
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return node(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return constant(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return negate(std::move(b));
    return node(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return node(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr divide(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) throw std::invalid_argument("divide: constant zero denominator");
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return constant(a->value / b->value);
    if (is_const(a, 0.0)) return constant(0.0);
    if (is_const(b, 1.0)) return a;
    return node(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr pow_int(ExprPtr a, int k) {
    if (k < 0) throw std::invalid_argument("pow_int: negative exponent unsupported");
    if (k == 0) return constant(1.0);
    if (k == 1) return a;
    if (a->kind == Expr::Kind::Const) return constant(std::pow(a->value, k));
    auto e = node(Expr::Kind::Pow, std::move(a));
    e->exponent = k;
    return e;
}

ExprPtr sqrt_of(ExprPtr a) {
    if (a->kind == Expr::Kind::Const) {
        if (a->value < 0.0) throw domain_error("sqrt of negative constant");
        return constant(std::sqrt(a->value));
    }
    return node(Expr::Kind::Sqrt, std::move(a));
}

ExprPtr negate(ExprPtr a) {
    if (a->kind == Expr::Kind::Const) return constant(-a->value);
    if (a->kind == Expr::Kind::Neg) return a->lhs;
    return node(Expr::Kind::Neg, std::move(a));
}

double eval(const ExprPtr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    switch (e->kind) {
        case Expr::Kind::Const: return e->value;
        case Expr::Kind::VarX:
            if (e->index >= x.size()) throw dimension_error("eval: state index out of range");
            return x[e->index];
        case Expr::Kind::VarU:
            if (e->index >= u.size()) throw dimension_error("eval: input index out of range");
            return u[e->index];
        case Expr::Kind::Add: return eval(e->lhs, x, u) + eval(e->rhs, x, u);
        case Expr::Kind::Sub: return eval(e->lhs, x, u) - eval(e->rhs, x, u);
        case Expr::Kind::Mul: return eval(e->lhs, x, u) * eval(e->rhs, x, u);
        case Expr::Kind::Div: {
            const double d = eval(e->rhs, x, u);
            if (d == 0.0) throw domain_error("division by zero in " + to_string(e));
            return eval(e->lhs, x, u) / d;
        }
        case Expr::Kind::Pow: return std::pow(eval(e->lhs, x, u), e->exponent);
        case Expr::Kind::Sqrt: {
            const double v = eval(e->lhs, x, u);
            if (v < 0.0) throw domain_error("sqrt of negative value in " + to_string(e));
            return std::sqrt(v);
        }
        case Expr::Kind::Neg: return -eval(e->lhs, x, u);
    }
    throw std::logic_error("eval: unreachable");
}

Interval eval(const ExprPtr& e, const IntervalVector& x, const IntervalVector& u) {
    switch (e->kind) {
        case Expr::Kind::Const: return Interval{e->value, e->value};
        case Expr::Kind::VarX:
            if (e->index >= x.dim()) throw dimension_error("eval: state index out of range");
            return Interval{x.lo[e->index], x.hi[e->index]};
        case Expr::Kind::VarU:
            if (e->index >= u.dim()) throw dimension_error("eval: input index out of range");
            return Interval{u.lo[e->index], u.hi[e->index]};
        case Expr::Kind::Add: return eval(e->lhs, x, u) + eval(e->rhs, x, u);
        case Expr::Kind::Sub: return eval(e->lhs, x, u) - eval(e->rhs, x, u);
        case Expr::Kind::Mul: return eval(e->lhs, x, u) * eval(e->rhs, x, u);
        case Expr::Kind::Div: {
            try {
                return eval(e->lhs, x, u) / eval(e->rhs, x, u);
            } catch (const domain_error&) {
                throw domain_error("denominator range spans zero in " + to_string(e));
            }
        }
        case Expr::Kind::Pow: return ipow(eval(e->lhs, x, u), e->exponent);
        case Expr::Kind::Sqrt: {
            try {
                return isqrt(eval(e->lhs, x, u));
            } catch (const domain_error&) {
                throw domain_error("sqrt argument range goes negative in " + to_string(e));
            }
        }
        case Expr::Kind::Neg: return -eval(e->lhs, x, u);
    }
    throw std::logic_error("eval: unreachable");
}

ExprPtr diff_x(const ExprPtr& e, int j) {
    switch (e->kind) {
        case Expr::Kind::Const:
        case Expr::Kind::VarU: return constant(0.0);
        case Expr::Kind::VarX: return constant(e->index == j ? 1.0 : 0.0);
        case Expr::Kind::Add: return add(diff_x(e->lhs, j), diff_x(e->rhs, j));
        case Expr::Kind::Sub: return sub(diff_x(e->lhs, j), diff_x(e->rhs, j));
        case Expr::Kind::Mul:
            return add(mul(diff_x(e->lhs, j), e->rhs), mul(e->lhs, diff_x(e->rhs, j)));
        case Expr::Kind::Div:
            return divide(sub(mul(diff_x(e->lhs, j), e->rhs), mul(e->lhs, diff_x(e->rhs, j))),
                          pow_int(e->rhs, 2));
        case Expr::Kind::Pow:
            return mul(mul(constant(double(e->exponent)), pow_int(e->lhs, e->exponent - 1)),
                       diff_x(e->lhs, j));
        case Expr::Kind::Sqrt:
            return divide(diff_x(e->lhs, j), mul(constant(2.0), sqrt_of(e->lhs)));
        case Expr::Kind::Neg: return negate(diff_x(e->lhs, j));
    }
    throw std::logic_error("diff_x: unreachable");
}

std::string to_string(const ExprPtr& e) {
    std::ostringstream os;
    switch (e->kind) {
        case Expr::Kind::Const: os << e->value; break;
        case Expr::Kind::VarX: os << "x" << (e->index + 1); break;
        case Expr::Kind::VarU: os << "u" << (e->index + 1); break;
        case Expr::Kind::Add: os << "(" << to_string(e->lhs) << " + " << to_string(e->rhs) << ")"; break;
        case Expr::Kind::Sub: os << "(" << to_string(e->lhs) << " - " << to_string(e->rhs) << ")"; break;
        case Expr::Kind::Mul: os << "(" << to_string(e->lhs) << " * " << to_string(e->rhs) << ")"; break;
        case Expr::Kind::Div: os << "(" << to_string(e->lhs) << " / " << to_string(e->rhs) << ")"; break;
        case Expr::Kind::Pow: os << to_string(e->lhs) << "^" << e->exponent; break;
        case Expr::Kind::Sqrt: os << "sqrt(" << to_string(e->lhs) << ")"; break;
        case Expr::Kind::Neg: os << "(-" << to_string(e->lhs) << ")"; break;
    }
    return os.str();
}

Eigen::VectorXd SymbolicDynamics::eval_point(const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(dim_out());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = eval(comps[size_t(i)], x, u);
    return out;
}

namespace {

/// Recursive-descent parser for infix expressions.
class Parser {
public:
    Parser(const std::string& s, int n, int m) : s_(s), n_(n), m_(m) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = peek() == '-' ? (accept('-'), negate(term())) : term();
        for (;;) {
            if (accept('+'))
                e = add(e, term());
            else if (accept('-'))
                e = sub(e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept('*'))
                e = mul(e, factor());
            else if (accept('/'))
                e = divide(e, factor());
            else
                return e;
        }
    }

    ExprPtr factor() {
        ExprPtr e = primary();
        if (accept('^')) {
            skip_ws();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start) fail("expected integer exponent");
            e = pow_int(e, std::stoi(s_.substr(start, pos_ - start)));
        }
        return e;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (c == '-') {
            ++pos_;
            return negate(primary());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &consumed);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += consumed;
        return constant(v);
    }

    ExprPtr identifier() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "sqrt") {
            if (!accept('(')) fail("expected '(' after sqrt");
            ExprPtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return sqrt_of(e);
        }
        if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u')) {
            for (size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) fail("bad symbol " + name);
            const int idx = std::stoi(name.substr(1)) - 1;
            if (name[0] == 'x') {
                if (idx < 0 || idx >= n_) fail("state symbol out of range: " + name);
                return var_x(idx);
            }
            if (idx < 0 || idx >= m_) fail("input symbol out of range: " + name);
            return var_u(idx);
        }
        fail("unknown identifier " + name);
    }

    const std::string& s_;
    size_t pos_ = 0;
    int n_, m_;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int n_states, int n_inputs) {
    return Parser(text, n_states, n_inputs).parse();
}

SymbolicDynamics parse_dynamics(const std::string& text, int n_states, int n_inputs) {
    SymbolicDynamics d;
    d.n_states = n_states;
    d.n_inputs = n_inputs;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t sep = text.find(';', pos);
        const std::string piece =
            text.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
        if (piece.find_first_not_of(" \t\r\n") != std::string::npos)
            d.comps.push_back(parse_expression(piece, n_states, n_inputs));
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    if (d.comps.empty()) throw std::invalid_argument("parse_dynamics: no components");
    return d;
}

}  // namespace gse
