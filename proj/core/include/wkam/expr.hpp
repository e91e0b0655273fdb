#pragma once

// Minimal expression evaluator for user-defined Lagrangians: polynomials and
// trigonometric terms in t, q1, q2, v1, v2 (q, v are aliases for q1, v1).

#include <cctype>
#include <cmath>
#include <memory>
#include <string>

#include "wkam/grid.hpp"

namespace wkam {

struct ExprEnv {
    double t = 0.0;
    Vec2 q{0.0, 0.0};
    Vec2 v{0.0, 0.0};
};

class Expr {
public:
    virtual ~Expr() = default;
    virtual double eval(const ExprEnv& env) const = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

namespace detail {

struct NumExpr : Expr {
    double value;
    explicit NumExpr(double v) : value(v) {}
    double eval(const ExprEnv&) const override { return value; }
};

struct VarExpr : Expr {
    int slot;  // 0=t, 1=q1, 2=q2, 3=v1, 4=v2
    explicit VarExpr(int s) : slot(s) {}
    double eval(const ExprEnv& e) const override {
        switch (slot) {
            case 0: return e.t;
            case 1: return e.q[0];
            case 2: return e.q[1];
            case 3: return e.v[0];
            default: return e.v[1];
        }
    }
};

struct BinExpr : Expr {
    char op;
    ExprPtr a, b;
    BinExpr(char o, ExprPtr x, ExprPtr y) : op(o), a(std::move(x)), b(std::move(y)) {}
    double eval(const ExprEnv& e) const override {
        double x = a->eval(e), y = b->eval(e);
        switch (op) {
            case '+': return x + y;
            case '-': return x - y;
            case '*': return x * y;
            case '/': return x / y;
            default: return std::pow(x, y);
        }
    }
};

struct FunExpr : Expr {
    int fn;  // 0=sin, 1=cos, 2=neg
    ExprPtr a;
    FunExpr(int f, ExprPtr x) : fn(f), a(std::move(x)) {}
    double eval(const ExprEnv& e) const override {
        double x = a->eval(e);
        switch (fn) {
            case 0: return std::sin(x);
            case 1: return std::cos(x);
            default: return -x;
        }
    }
};

class Parser {
public:
    explicit Parser(const std::string& s) : src_(s) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        skip();
        if (pos_ != src_.size())
            throw WkamError("expression parse error at offset " + std::to_string(pos_));
        return e;
    }

private:
    const std::string& src_;
    size_t pos_ = 0;

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr sum() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+')) e = std::make_shared<BinExpr>('+', e, term());
            else if (eat('-')) e = std::make_shared<BinExpr>('-', e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = power();
        for (;;) {
            if (eat('*')) e = std::make_shared<BinExpr>('*', e, power());
            else if (eat('/')) e = std::make_shared<BinExpr>('/', e, power());
            else return e;
        }
    }

    ExprPtr power() {
        ExprPtr e = unary();
        if (eat('^')) return std::make_shared<BinExpr>('^', e, power());
        return e;
    }

    ExprPtr unary() {
        if (eat('-')) return std::make_shared<FunExpr>(2, unary());
        eat('+');
        return atom();
    }

    ExprPtr atom() {
        skip();
        if (pos_ >= src_.size()) throw WkamError("unexpected end of expression");
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = std::stod(src_.substr(pos_), &used);
            pos_ += used;
            return std::make_shared<NumExpr>(v);
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!eat(')')) throw WkamError("missing ')' in expression");
            return e;
        }
        std::string name;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            name += src_[pos_++];
        }
        if (name.empty()) throw WkamError(std::string("unexpected character '") + c + "'");
        if (name == "pi") return std::make_shared<NumExpr>(M_PI);
        if (name == "t") return std::make_shared<VarExpr>(0);
        if (name == "q" || name == "q1") return std::make_shared<VarExpr>(1);
        if (name == "q2") return std::make_shared<VarExpr>(2);
        if (name == "v" || name == "v1") return std::make_shared<VarExpr>(3);
        if (name == "v2") return std::make_shared<VarExpr>(4);
        int fn = name == "sin" ? 0 : name == "cos" ? 1 : -1;
        if (fn < 0) throw WkamError("unknown symbol '" + name + "'");
        if (!eat('(')) throw WkamError("expected '(' after " + name);
        ExprPtr arg = sum();
        if (!eat(')')) throw WkamError("missing ')' after " + name + " argument");
        return std::make_shared<FunExpr>(fn, arg);
    }
};

}  // namespace detail

inline ExprPtr parse_expression(const std::string& text) {
    return detail::Parser(text).parse();
}

}  // namespace wkam
