#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate real polynomials and graded monomial index sets.
 *
 * Monomials are dense exponent tuples. Terms are kept in graded
 * lexicographic order (total degree first, then x1 > x2 > ... > xn), so the
 * index set of monomials of degree <= k is an ordered prefix of the one of
 * degree <= k + 1.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace strata {

class ExponentVector {
public:
    ExponentVector() = default;
    explicit ExponentVector(std::size_t n) : e_(n, 0) {}
    ExponentVector(std::initializer_list<int> e) : e_(e.begin(), e.end()) { check(); }
    explicit ExponentVector(std::vector<int> e) : e_(std::move(e)) { check(); }

    static ExponentVector unit(std::size_t n, std::size_t var) {
        ExponentVector a(n);
        a.e_.at(var) = 1;
        return a;
    }

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
    const std::vector<int>& values() const { return e_; }

    ExponentVector operator+(const ExponentVector& o) const {
        if (o.size() != size()) throw std::invalid_argument("ExponentVector: dimension mismatch");
        ExponentVector r(*this);
        for (std::size_t i = 0; i < size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }

    bool operator==(const ExponentVector&) const = default;

private:
    void check() const {
        for (int v : e_)
            if (v < 0) throw std::invalid_argument("ExponentVector: negative exponent");
    }
    std::vector<int> e_;
};

/// Graded lexicographic "less": lower total degree first, then larger
/// exponent on the earliest variable first (x1^2 < x1*x2 < x2^2).
struct GrlexLess {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const {
        const int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return std::lexicographical_compare(b.values().begin(), b.values().end(),
                                            a.values().begin(), a.values().end());
    }
};

struct ExponentHash {
    std::size_t operator()(const ExponentVector& a) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : a.values()) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// The set of exponents of total degree <= k in n variables, in graded
/// lexicographic order.
class IndexSet {
public:
    IndexSet(std::size_t n, int k) : n_(n), k_(k) {
        if (n == 0) throw std::invalid_argument("lambda_set: n must be positive");
        if (k < 0) throw std::invalid_argument("lambda_set: k must be nonnegative");
        members_.reserve(binomial(n + k, n));
        for (int deg = 0; deg <= k; ++deg) {
            ExponentVector a(n);
            append_degree(a, 0, deg);
        }
        position_.reserve(members_.size());
        for (std::size_t i = 0; i < members_.size(); ++i) position_.emplace(members_[i], i);
    }

    std::size_t n() const { return n_; }
    int k() const { return k_; }
    std::size_t size() const { return members_.size(); }
    const ExponentVector& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<ExponentVector>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    std::optional<std::size_t> position(const ExponentVector& a) const {
        auto it = position_.find(a);
        if (it == position_.end()) return std::nullopt;
        return it->second;
    }

    /// Number of members of degree <= k (the prefix length).
    std::size_t prefix(int k) const { return binomial(n_ + static_cast<std::size_t>(k), n_); }

private:
    // Within one degree, descending lex: the earliest variable takes the most.
    void append_degree(ExponentVector& a, std::size_t var, int remaining) {
        if (var + 1 == n_) {
            a[var] = remaining;
            members_.push_back(a);
            a[var] = 0;
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            a[var] = e;
            append_degree(a, var + 1, remaining - e);
        }
        a[var] = 0;
    }

    std::size_t n_;
    int k_;
    std::vector<ExponentVector> members_;
    std::unordered_map<ExponentVector, std::size_t, ExponentHash> position_;
};

inline IndexSet lambda_set(std::size_t n, int k) { return IndexSet(n, k); }

/// Sparse polynomial with double coefficients. A polynomial built from a bare
/// scalar has n = 0 and adopts the variable count of whatever it is combined
/// with; any two polynomials with n > 0 must agree on n.
class Polynomial {
public:
    using TermMap = std::map<ExponentVector, double, GrlexLess>;

    Polynomial() = default;
    Polynomial(double c) {  // NOLINT: implicit scalar promotion is intended
        if (c != 0.0) terms_.emplace(ExponentVector(0), c);
    }
    explicit Polynomial(std::size_t n) : n_(n) {}

    static Polynomial constant(std::size_t n, double c) {
        Polynomial p(n);
        if (c != 0.0) p.terms_.emplace(ExponentVector(n), c);
        return p;
    }
    static Polynomial variable(std::size_t n, std::size_t i, double c = 1.0) {
        return monomial(ExponentVector::unit(n, i), c);
    }
    static Polynomial monomial(const ExponentVector& a, double c = 1.0) {
        Polynomial p(a.size());
        if (c != 0.0) p.terms_.emplace(a, c);
        return p;
    }
    /// The n coordinate functions x1..xn.
    static std::vector<Polynomial> variables(std::size_t n) {
        std::vector<Polynomial> xs;
        xs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) xs.push_back(variable(n, i));
        return xs;
    }

    std::size_t n() const { return n_; }
    const TermMap& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    /// Total degree; 0 for constants and for the zero polynomial.
    int degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

    double coefficient(const ExponentVector& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? 0.0 : it->second;
    }
    double constant_term() const {
        return terms_.empty() || terms_.begin()->first.degree() != 0 ? 0.0 : terms_.begin()->second;
    }
    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Returns the same polynomial declared over n variables (n_ must be 0 or n).
    Polynomial with_n(std::size_t n) const {
        if (n_ == n) return *this;
        if (n_ != 0) throw std::invalid_argument("Polynomial: dimension mismatch");
        return constant(n, constant_term());
    }

    double evaluate(std::span<const double> x) const {
        if (n_ != 0 && x.size() != n_) throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
        double s = 0.0;
        for (const auto& [a, c] : terms_) {
            double m = c;
            for (std::size_t i = 0; i < a.size(); ++i)
                for (int e = 0; e < a[i]; ++e) m *= x[i];
            s += m;
        }
        return s;
    }
    double operator()(std::span<const double> x) const { return evaluate(x); }

    /// p(s * x) for a scalar s.
    Polynomial scale_variables(double s) const {
        Polynomial r(n_);
        for (const auto& [a, c] : terms_) r.add_term(a, c * std::pow(s, a.degree()));
        return r;
    }

    /// Partial derivative with respect to x_i.
    Polynomial derivative(std::size_t i) const {
        if (i >= n_) throw std::invalid_argument("Polynomial::derivative: variable out of range");
        Polynomial r(n_);
        for (const auto& [a, c] : terms_) {
            if (a[i] == 0) continue;
            ExponentVector b = a;
            b[i] -= 1;
            r.add_term(b, c * a[i]);
        }
        return r;
    }

    void add_term(const ExponentVector& a, double c) {
        if (n_ == 0 && a.size() != 0) {
            if (!terms_.empty()) throw std::logic_error("Polynomial::add_term: promote before adding terms");
            n_ = a.size();
        }
        if (a.size() != n_) throw std::invalid_argument("Polynomial: exponent dimension mismatch");
        if (c == 0.0) return;
        auto [it, inserted] = terms_.emplace(a, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& [a, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        const std::size_t n = common_n(o);
        promote(n);
        for (const auto& [a, c] : o.terms_) add_term(o.n_ == n ? a : ExponentVector(n), c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [a, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        const std::size_t n = a.common_n(b);
        Polynomial r(n);
        const Polynomial pa = a.with_n(n), pb = b.with_n(n);
        for (const auto& [ea, ca] : pa.terms_)
            for (const auto& [eb, cb] : pb.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator/(Polynomial a, double s) { return a *= 1.0 / s; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    std::size_t common_n(const Polynomial& o) const {
        if (n_ == 0) return o.n_;
        if (o.n_ == 0 || o.n_ == n_) return n_;
        throw std::invalid_argument("Polynomial: dimension mismatch");
    }
    void promote(std::size_t n) {
        if (n_ == n) return;
        *this = with_n(n);
    }

    std::size_t n_ = 0;
    TermMap terms_;
};

inline Polynomial pow(const Polynomial& p, int k) {
    if (k < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial r = Polynomial::constant(p.n(), 1.0);
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

inline double poly_eval(const Polynomial& p, std::span<const double> x) { return p.evaluate(x); }
inline Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }
inline Polynomial poly_scale(const Polynomial& p, double s) { return p * s; }

/// Sum of squares of the given polynomials.
inline Polynomial sum_of_squares(std::span<const Polynomial> ps) {
    Polynomial r;
    for (const auto& p : ps) r += p * p;
    return r;
}

}  // namespace strata
