#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ilg/domain.hpp"

namespace ilg {

/** Expression trees over constants, the coordinates z and t, +, -, *, /, integer powers
 *  (^k or pow(e,k)) and the functions sqrt, abs, sign, sin.
 *
 *  Text syntax (used by the CLI and the gallery), e.g.  "sqrt(abs(t))",  "sign(t)/2",
 *  "-sign(t)*sqrt(abs(t))",  "t^2 - 0.5*z".
 */
class Expr {
  public:
    enum class Op { Const, Z, T, Add, Sub, Mul, Div, Neg, Sqrt, Abs, Sign, Sin, Pow };

    Op op = Op::Const;
    double value = 0;   // Const
    int exponent = 1;   // Pow
    std::shared_ptr<Expr> a, b;

    double eval(double z, double t) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Z: return z;
            case Op::T: return t;
            case Op::Add: return a->eval(z, t) + b->eval(z, t);
            case Op::Sub: return a->eval(z, t) - b->eval(z, t);
            case Op::Mul: return a->eval(z, t) * b->eval(z, t);
            case Op::Div: {
                const double den = b->eval(z, t);
                if (den == 0.0) throw eval_error("division by zero", z, t);
                return a->eval(z, t) / den;
            }
            case Op::Neg: return -a->eval(z, t);
            case Op::Sqrt: {
                const double x = a->eval(z, t);
                if (x < 0.0) throw eval_error("sqrt of negative value", z, t);
                return std::sqrt(x);
            }
            case Op::Abs: return std::fabs(a->eval(z, t));
            case Op::Sign: {
                const double x = a->eval(z, t);
                return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
            }
            case Op::Sin: return std::sin(a->eval(z, t));
            case Op::Pow: {
                double x = a->eval(z, t), r = 1.0;
                int k = exponent;
                bool inv = k < 0;
                if (inv) k = -k;
                while (k--) r *= x;
                if (inv) {
                    if (r == 0.0) throw eval_error("zero to negative power", z, t);
                    r = 1.0 / r;
                }
                return r;
            }
        }
        throw error("Expr: corrupt node");
    }
};

using ExprPtr = std::shared_ptr<Expr>;

namespace detail {

class ExprParser {
  public:
    explicit ExprParser(std::string src) : s_(std::move(src)) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        skip_ws();
        if (pos_ != s_.size())
            throw config_error("expression: trailing input at '" + s_.substr(pos_) + "'");
        return e;
    }

  private:
    std::string s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    static ExprPtr node(Expr::Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
        auto e = std::make_shared<Expr>();
        e->op = op; e->a = std::move(a); e->b = std::move(b);
        return e;
    }

    ExprPtr sum() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+')) e = node(Expr::Op::Add, e, term());
            else if (eat('-')) e = node(Expr::Op::Sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = power();
        for (;;) {
            if (eat('*')) e = node(Expr::Op::Mul, e, power());
            else if (eat('/')) e = node(Expr::Op::Div, e, power());
            else return e;
        }
    }
    ExprPtr power() {
        ExprPtr e = unary();
        if (eat('^')) {
            auto p = node(Expr::Op::Pow, e);
            p->exponent = parse_int();
            return p;
        }
        return e;
    }
    ExprPtr unary() {
        if (eat('-')) return node(Expr::Op::Neg, unary());
        return primary();
    }
    int parse_int() {
        skip_ws();
        bool neg = eat('-');
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw config_error("expression: integer expected after '^'");
        int v = std::stoi(s_.substr(start, pos_ - start));
        return neg ? -v : v;
    }
    ExprPtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw config_error("expression: unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            auto e = node(Expr::Op::Const);
            e->value = v;
            return e;
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!eat(')')) throw config_error("expression: missing ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "z" && peek() != '(') return node(Expr::Op::Z);
            if (name == "t" && peek() != '(') return node(Expr::Op::T);
            if (!eat('(')) throw config_error("expression: '(' expected after '" + name + "'");
            ExprPtr arg = sum();
            if (name == "pow") {
                if (!eat(',')) throw config_error("expression: pow(e,k) needs two arguments");
                auto p = node(Expr::Op::Pow, arg);
                p->exponent = parse_int();
                if (!eat(')')) throw config_error("expression: missing ')'");
                return p;
            }
            if (!eat(')')) throw config_error("expression: missing ')'");
            if (name == "sqrt") return node(Expr::Op::Sqrt, arg);
            if (name == "abs") return node(Expr::Op::Abs, arg);
            if (name == "sign" || name == "sgn") return node(Expr::Op::Sign, arg);
            if (name == "sin") return node(Expr::Op::Sin, arg);
            throw config_error("expression: unknown function '" + name + "'");
        }
        throw config_error(std::string("expression: unexpected character '") + c + "'");
    }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text) { return detail::ExprParser(text).parse(); }

}  // namespace ilg
