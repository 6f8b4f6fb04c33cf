#pragma once

// Tiny recursive-descent evaluator for formula strings such as
// "25 + 2*P + 0.008*P^2 + abs(100*sin(0.042*(Pmin - P)))".
// Supports + - * / ^, unary minus, parentheses, numbers with exponents,
// named variables and the functions exp, sin, abs.

#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace oracle {

class Expr {
public:
    using Vars = std::map<std::string, double>;

    static double eval(const std::string& text, const Vars& vars) {
        Expr e(text, vars);
        const double v = e.sum();
        e.skip();
        if (e.pos_ != e.s_.size()) throw std::runtime_error("trailing input in '" + text + "'");
        return v;
    }

private:
    Expr(const std::string& s, const Vars& v) : s_(s), vars_(v) {}

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }
    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    double power() {
        const double base = atom();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }
    double atom() {
        skip();
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) throw std::runtime_error("missing ) in '" + s_ + "'");
            return v;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return v;
        }
        std::string name;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            name += s_[pos_++];
        }
        if (name.empty()) throw std::runtime_error("unexpected input in '" + s_ + "'");
        if (name == "exp" || name == "sin" || name == "abs") {
            if (!eat('(')) throw std::runtime_error("expected ( after " + name);
            const double arg = sum();
            if (!eat(')')) throw std::runtime_error("missing ) after " + name);
            if (name == "exp") return std::exp(arg);
            if (name == "sin") return std::sin(arg);
            return std::fabs(arg);
        }
        const auto it = vars_.find(name);
        if (it == vars_.end()) throw std::runtime_error("unknown variable " + name);
        return it->second;
    }

    std::string s_;
    const Vars& vars_;
    std::size_t pos_ = 0;
};

}  // namespace oracle
