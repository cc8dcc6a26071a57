#pragma once

/**
 * @file moment.hpp
 * @brief Truncated moment vectors, moment/localizing matrices and assembly of
 *        the order-d moment relaxation in linear-matrix-inequality form.
 *
 * For a relaxation order d, the unknown is y indexed by the monomials of
 * degree <= 2d. Each constraint g >= 0 contributes the block
 * M_{d - v}(g * y) with v = ceil(deg g / 2), written as
 *
 *     M_{d-v}(g * y) = A_0 + sum_{alpha != 0} y_alpha A_alpha
 *
 * with y_0 pinned to 1. The pure moment matrix is the block of g = 1.
 */

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "strata/poly.hpp"

namespace strata {

enum class ConstraintKind { equality, inequality };

struct Constraint {
    Polynomial p;
    ConstraintKind kind = ConstraintKind::inequality;

    static Constraint eq(Polynomial p) { return {std::move(p), ConstraintKind::equality}; }
    static Constraint ge(Polynomial p) { return {std::move(p), ConstraintKind::inequality}; }
};

inline int half_degree(const Polynomial& g) { return (g.degree() + 1) / 2; }

/// y in R^{Lambda(2d)}.
class MomentVector {
public:
    MomentVector(std::size_t n, int d)
        : n_(n), d_(d), basis_(std::make_shared<const IndexSet>(n, 2 * d)), values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->size()))) {}
    MomentVector(std::size_t n, int d, Eigen::VectorXd values) : MomentVector(n, d) {
        if (static_cast<std::size_t>(values.size()) != basis_->size())
            throw std::invalid_argument("MomentVector: wrong number of values");
        values_ = std::move(values);
    }

    /// Moments of the probability measure sum_i w_i delta_{x_i}.
    static MomentVector atomic(std::size_t n, int d, const std::vector<Eigen::VectorXd>& points,
                               const std::vector<double>& weights) {
        MomentVector y(n, d);
        for (std::size_t a = 0; a < y.size(); ++a) {
            const ExponentVector& alpha = y.basis()[a];
            double s = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                double m = weights.at(i);
                for (std::size_t j = 0; j < n; ++j) m *= std::pow(points[i][static_cast<Eigen::Index>(j)], alpha[j]);
                s += m;
            }
            y.values_[static_cast<Eigen::Index>(a)] = s;
        }
        return y;
    }
    static MomentVector dirac(std::size_t n, int d, const Eigen::VectorXd& x) { return atomic(n, d, {x}, {1.0}); }

    std::size_t n() const { return n_; }
    int d() const { return d_; }
    std::size_t size() const { return basis_->size(); }
    const IndexSet& basis() const { return *basis_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    double at(const ExponentVector& a) const {
        auto p = basis_->position(a);
        if (!p) throw std::out_of_range("MomentVector: exponent outside Lambda(2d)");
        return values_[static_cast<Eigen::Index>(*p)];
    }

    /// <p, y> = sum_alpha p_alpha y_alpha.
    double pair(const Polynomial& p) const {
        double s = 0.0;
        for (const auto& [a, c] : p.terms()) s += c * at(p.n() == n_ ? a : ExponentVector(n_));
        return s;
    }

    /// Restriction to Lambda(2d') for d' <= d (a prefix under graded order).
    MomentVector truncate(int d) const {
        if (d > d_) throw std::invalid_argument("MomentVector::truncate: order too large");
        MomentVector t(n_, d);
        t.values_ = values_.head(static_cast<Eigen::Index>(t.size()));
        return t;
    }

private:
    std::size_t n_;
    int d_;
    std::shared_ptr<const IndexSet> basis_;
    Eigen::VectorXd values_;
};

/// (g * y)_alpha = sum_beta g_beta y_{alpha + beta}, alpha in Lambda(2k) with
/// k = d - ceil(deg g / 2).
inline Eigen::VectorXd shift_vector(const Polynomial& g, const MomentVector& y) {
    const int k = y.d() - half_degree(g);
    if (k < 0 || g.degree() > 2 * y.d()) throw std::out_of_range("shift_vector: degree overflow");
    const Polynomial gn = g.with_n(y.n());
    const std::size_t len = y.basis().prefix(2 * k);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
    for (std::size_t a = 0; a < len; ++a) {
        double s = 0.0;
        for (const auto& [beta, c] : gn.terms()) {
            auto p = y.basis().position(y.basis()[a] + beta);
            if (!p) throw std::out_of_range("shift_vector: degree overflow");
            s += c * y[*p];
        }
        out[static_cast<Eigen::Index>(a)] = s;
    }
    return out;
}

/// M_k(y) = (y_{alpha+beta})_{alpha, beta in Lambda(k)}.
inline Eigen::MatrixXd moment_matrix(const MomentVector& y, int k) {
    if (k > y.d() || k < 0) throw std::invalid_argument("moment_matrix: k must lie in [0, d]");
    const std::size_t side = y.basis().prefix(k);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = r; c < side; ++c) {
            const double v = y.at(y.basis()[r] + y.basis()[c]);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
        }
    return m;
}

/// M_k(g * y). k defaults to d - ceil(deg g / 2).
inline Eigen::MatrixXd localizing_matrix(const Polynomial& g, const MomentVector& y, int k) {
    if (k < 0 || k > y.d() - half_degree(g)) throw std::out_of_range("localizing_matrix: degree overflow");
    const Polynomial gn = g.with_n(y.n());
    const std::size_t side = y.basis().prefix(k);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = r; c < side; ++c) {
            const ExponentVector rc = y.basis()[r] + y.basis()[c];
            double s = 0.0;
            for (const auto& [beta, coef] : gn.terms()) s += coef * y.at(rc + beta);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
            m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = s;
        }
    return m;
}
inline Eigen::MatrixXd localizing_matrix(const Polynomial& g, const MomentVector& y) {
    return localizing_matrix(g, y, y.d() - half_degree(g));
}

/// One block M_{d - v}(g * y) of the relaxation, stored as A_0 and the
/// per-monomial coefficient matrices. coeff[a] is empty when monomial a does
/// not occur in the block.
struct LmiBlock {
    enum class Origin { moment, inequality, equality_upper, equality_lower };

    std::string label;
    Origin origin = Origin::moment;
    int constraint_index = -1;  // index into the constraint list, -1 for the moment block
    int order = 0;              // d - v
    Polynomial g;
    std::size_t side = 0;
    std::vector<Eigen::MatrixXd> coeff;  // indexed by position in Lambda(2d); coeff[0] is A_0

    bool has(std::size_t a) const { return coeff[a].size() != 0; }

    Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
        for (std::size_t a = 0; a < coeff.size(); ++a)
            if (has(a)) m += (a == 0 ? 1.0 : y[static_cast<Eigen::Index>(a)]) * coeff[a];
        return m;
    }
};

struct RelaxationProblem {
    std::size_t n = 0;
    int d = 0;
    int d0 = 0;
    std::shared_ptr<const IndexSet> basis;  // Lambda(2d)
    Polynomial f;
    std::vector<Constraint> constraints;
    std::vector<int> v;         // per-constraint half degrees
    Eigen::VectorXd objective;  // f padded over Lambda(2d)
    std::vector<LmiBlock> blocks;

    std::size_t num_moments() const { return basis->size(); }
};

inline int minimal_order(const Polynomial& f, const std::vector<Constraint>& constraints) {
    int d0 = (f.degree() + 1) / 2;
    for (const auto& c : constraints) d0 = std::max(d0, half_degree(c.p));
    return std::max(d0, 0);
}

namespace detail {

inline LmiBlock assemble_block(const IndexSet& basis, const Polynomial& g, int order) {
    LmiBlock b;
    b.g = g;
    b.order = order;
    b.side = basis.prefix(order);
    b.coeff.assign(basis.size(), Eigen::MatrixXd());
    const auto side = static_cast<Eigen::Index>(b.side);
    for (std::size_t r = 0; r < b.side; ++r)
        for (std::size_t c = r; c < b.side; ++c) {
            const ExponentVector rc = basis[r] + basis[c];
            for (const auto& [beta, coef] : g.terms()) {
                auto p = basis.position(rc + beta);
                if (!p) throw std::out_of_range("assemble_relaxation: degree overflow");
                Eigen::MatrixXd& a = b.coeff[*p];
                if (a.size() == 0) a = Eigen::MatrixXd::Zero(side, side);
                // Several (row, col) positions can share one monomial: accumulate.
                a(r, c) += coef;
                if (r != c) a(c, r) += coef;
            }
        }
    return b;
}

}  // namespace detail

/// Order-d relaxation of  min f  s.t. the given constraints. Each equality
/// h = 0 becomes the two blocks of h >= 0 and -h >= 0.
inline RelaxationProblem assemble_relaxation(const Polynomial& f, const std::vector<Constraint>& constraints,
                                             int d) {
    std::size_t n = f.n();
    for (const auto& c : constraints) {
        if (n == 0) n = c.p.n();
        if (c.p.n() != 0 && c.p.n() != n) throw std::invalid_argument("assemble_relaxation: inconsistent n");
    }
    if (n == 0) throw std::invalid_argument("assemble_relaxation: cannot infer the number of variables");

    RelaxationProblem rp;
    rp.n = n;
    rp.d = d;
    rp.d0 = minimal_order(f, constraints);
    if (d < rp.d0 || d < 1) throw std::invalid_argument("assemble_relaxation: order below d0");
    rp.basis = std::make_shared<const IndexSet>(n, 2 * d);
    rp.f = f.with_n(n);
    rp.constraints = constraints;
    for (auto& c : rp.constraints) c.p = c.p.with_n(n);

    rp.objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rp.basis->size()));
    for (const auto& [a, c] : rp.f.terms()) rp.objective[static_cast<Eigen::Index>(*rp.basis->position(a))] = c;

    LmiBlock mom = detail::assemble_block(*rp.basis, Polynomial::constant(n, 1.0), d);
    mom.label = "moment";
    rp.blocks.push_back(std::move(mom));

    for (std::size_t i = 0; i < rp.constraints.size(); ++i) {
        const auto& c = rp.constraints[i];
        const int vi = half_degree(c.p);
        rp.v.push_back(vi);
        const int order = d - vi;
        if (c.kind == ConstraintKind::inequality) {
            LmiBlock b = detail::assemble_block(*rp.basis, c.p, order);
            b.origin = LmiBlock::Origin::inequality;
            b.constraint_index = static_cast<int>(i);
            b.label = "ge[" + std::to_string(i) + "]";
            rp.blocks.push_back(std::move(b));
        } else {
            LmiBlock up = detail::assemble_block(*rp.basis, c.p, order);
            up.origin = LmiBlock::Origin::equality_upper;
            up.constraint_index = static_cast<int>(i);
            up.label = "eq[" + std::to_string(i) + "]+";
            LmiBlock lo = detail::assemble_block(*rp.basis, -c.p, order);
            lo.origin = LmiBlock::Origin::equality_lower;
            lo.constraint_index = static_cast<int>(i);
            lo.label = "eq[" + std::to_string(i) + "]-";
            rp.blocks.push_back(std::move(up));
            rp.blocks.push_back(std::move(lo));
        }
    }
    return rp;
}

}  // namespace strata
