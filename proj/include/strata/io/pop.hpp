#pragma once

/**
 * @file pop.hpp
 * @brief Plain-text polynomial optimization problems.
 *
 *     # comment
 *     var x y
 *     min (x^2 - 1)^2 + y^2
 *     ge 1 - x^2 - y^2
 *     eq x*y
 *     ball 10
 *
 * `ball c` appends c - f >= 0. Polynomials are infix with + - * / ^ and
 * parentheses; exponents are nonnegative integers and divisors are constants.
 */

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "strata/moment.hpp"

namespace strata::io {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

class PolyParser {
public:
    PolyParser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) index_.emplace(vars[i], i);
    }

    Polynomial parse() {
        Polynomial p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p.with_n(vars_.size());
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at column " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial p = term();
        for (;;) {
            if (accept('+'))
                p += term();
            else if (accept('-'))
                p -= term();
            else
                return p;
        }
    }
    Polynomial term() {
        Polynomial p = unary();
        for (;;) {
            if (accept('*')) {
                p *= unary();
            } else if (accept('/')) {
                const Polynomial q = unary();
                if (q.degree() != 0 || q.is_zero()) fail("division by a non-constant or zero");
                p = p / q.constant_term();
            } else {
                return p;
            }
        }
    }
    Polynomial unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }
    Polynomial power() {
        Polynomial base = primary();
        if (!accept('^')) return base;
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a nonnegative integer exponent");
        return pow(base, std::stoi(s_.substr(start, pos_ - start)));
    }
    Polynomial primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            const char* first = s_.data() + pos_;
            const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("bad number");
            pos_ += static_cast<std::size_t>(ptr - first);
            return Polynomial::constant(vars_.size(), v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            auto it = index_.find(name);
            if (it == index_.end()) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            return Polynomial::variable(vars_.size(), it->second);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
    const std::vector<std::string>& vars_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
    return detail::PolyParser(text, vars).parse();
}

/// Infix form that parse_polynomial reads back exactly.
inline std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [a, c] : p.terms()) {
        const bool constant = a.degree() == 0;
        double mag = std::abs(c);
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars.at(i);
            if (a[i] > 1) mono += "^" + std::to_string(a[i]);
        }
        if (constant)
            out += detail::format_real(mag);
        else if (mag == 1.0)
            out += mono;
        else
            out += detail::format_real(mag) + "*" + mono;
    }
    return out;
}

struct PopProblem {
    std::vector<std::string> variables;
    Polynomial objective;
    std::vector<Constraint> constraints;
    std::optional<double> ball;

    /// Constraints with c - f >= 0 appended when a ball constant is given.
    std::vector<Constraint> constraints_with_ball() const {
        std::vector<Constraint> cs = constraints;
        if (ball) cs.push_back(Constraint::ge(Polynomial::constant(variables.size(), *ball) - objective));
        return cs;
    }
};

inline PopProblem parse_pop(const std::string& text) {
    PopProblem pb;
    bool have_vars = false, have_min = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        std::string rest;
        std::getline(ls, rest);
        try {
            if (kw == "var") {
                if (have_vars) fail("duplicate 'var' statement");
                std::istringstream vs(rest);
                std::string v;
                while (vs >> v) {
                    if (!(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_')) fail("bad variable name '" + v + "'");
                    for (const auto& w : pb.variables)
                        if (w == v) fail("duplicate variable '" + v + "'");
                    pb.variables.push_back(v);
                }
                if (pb.variables.empty()) fail("'var' needs at least one name");
                have_vars = true;
            } else if (kw == "min" || kw == "eq" || kw == "ge") {
                if (!have_vars) fail("'" + kw + "' before 'var'");
                Polynomial p = parse_polynomial(rest, pb.variables);
                if (kw == "min") {
                    if (have_min) fail("duplicate 'min' statement");
                    pb.objective = std::move(p);
                    have_min = true;
                } else {
                    pb.constraints.push_back(kw == "eq" ? Constraint::eq(std::move(p)) : Constraint::ge(std::move(p)));
                }
            } else if (kw == "ball") {
                if (pb.ball) fail("duplicate 'ball' statement");
                std::istringstream bs(rest);
                double c = 0.0;
                std::string extra;
                if (!(bs >> c) || (bs >> extra)) fail("'ball' needs one real number");
                pb.ball = c;
            } else {
                fail("unknown statement '" + kw + "'");
            }
        } catch (const ParseError& e) {
            const std::string w = e.what();
            if (w.rfind("line ", 0) == 0) throw;
            fail(w);
        }
    }
    if (!have_vars) throw ParseError("missing 'var' statement");
    if (!have_min) throw ParseError("missing 'min' statement");
    return pb;
}

inline std::string format_pop(const PopProblem& pb) {
    std::string out = "var";
    for (const auto& v : pb.variables) out += " " + v;
    out += "\nmin " + format_polynomial(pb.objective, pb.variables) + "\n";
    for (const auto& c : pb.constraints)
        out += (c.kind == ConstraintKind::equality ? "eq " : "ge ") + format_polynomial(c.p, pb.variables) + "\n";
    if (pb.ball) out += "ball " + detail::format_real(*pb.ball) + "\n";
    return out;
}

}  // namespace strata::io
