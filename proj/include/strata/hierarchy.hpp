#pragma once

/**
 * @file hierarchy.hpp
 * @brief The Lasserre loop: relaxation orders, rank test, minimizer extraction.
 *
 * run_hierarchy solves rho_d for d = d0, d0 + 1, ..., d_max and stops at the
 * first order whose moment matrix is flat, i.e. rank M_{d-v}(y) = rank M_d(y)
 * with v = max_i ceil(deg g_i / 2). The atoms of the representing measure are
 * then recovered with the echelon / multiplication-matrix procedure.
 *
 * Status xi follows the usual convention: -1 no order solved, 0 solved but not
 * certified, 1 certified with extracted minimizers.
 */

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "strata/moment.hpp"
#include "strata/sdp.hpp"

namespace strata {

struct HierarchyOptions {
    int d_max = 4;
    double rank_eps = 1e-6;        // relative singular-value threshold
    SdpOptions solver;
    double extraction_tol = 1e-6;  // pivot / weight / moment-mismatch tolerance
    std::uint64_t seed = 20220901;
    int reseeds = 3;
    /// Solve in u = x / variable_scale. Ranks and extraction live in u.
    double variable_scale = 1.0;
    /// Newton polish of extracted points on the active constraints (see refine_minimizer).
    bool refine = true;
};

struct ExtractionResult {
    bool ok = false;
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
    double moment_residual = std::numeric_limits<double>::infinity();
    int attempts = 0;
    std::uint64_t seed_used = 0;
    std::vector<ExponentVector> basis;  // monomial basis found by the echelon step
    std::string failure;
};

struct RankCheck {
    bool satisfied = false;
    int s = 0;          // rank M_d(y)
    int rank_low = 0;   // rank M_{d-v}(y)
};

struct OrderRecord {
    int d = 0;
    SdpStatus solver_status = SdpStatus::numerical_failure;
    double objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    double min_eigenvalue = 0.0;
    int iterations = 0;
    int rank_low = 0;
    int rank_high = 0;
    bool rank_condition = false;
    bool extraction_attempted = false;
    bool extraction_ok = false;
    int extraction_attempts = 0;
    std::uint64_t extraction_seed = 0;
    std::string extraction_failure;
    double max_violation = 0.0;       // max_i max(0, -g_i(x)), |h(x)| for equalities, over extracted points
    double objective_mismatch = 0.0;  // max |f(x) - rho| over extracted points
    double seconds = 0.0;
};

struct HierarchyResult {
    int xi = -1;
    double bound = -std::numeric_limits<double>::infinity();
    int order_reached = 0;
    std::vector<Eigen::VectorXd> minimizers;
    std::vector<double> weights;
    int rank_s = 0;
    std::vector<OrderRecord> diagnostics;
    std::optional<MomentVector> y;  // last solved moment vector (in scaled variables)
};

/// Appends c - f >= 0. Rejects c <= 0 and c <= f(x_ref).
inline std::vector<Constraint> add_ball_constraint(const Polynomial& f, std::vector<Constraint> constraints, double c,
                                                   const std::optional<Eigen::VectorXd>& x_ref = std::nullopt) {
    if (!(c > 0.0)) throw std::invalid_argument("add_ball_constraint: c must be positive");
    if (x_ref) {
        const double fx = f.evaluate(std::span<const double>(x_ref->data(), static_cast<std::size_t>(x_ref->size())));
        if (!(fx < c)) throw std::invalid_argument("add_ball_constraint: c must exceed f(x_ref)");
    }
    constraints.push_back(Constraint::ge(Polynomial::constant(f.n(), c) - f));
    return constraints;
}

/// Number of singular values above rank_eps * sigma_max.
inline int numerical_rank(const Eigen::MatrixXd& M, double rank_eps) {
    if (M.size() == 0) return 0;
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(M).singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_eps * sv[0]) ++r;
    return r;
}

inline RankCheck check_rank_condition(const MomentVector& y, int d, int v, double rank_eps) {
    if (d - v < 0) throw std::invalid_argument("check_rank_condition: d - v must be nonnegative");
    RankCheck rc;
    rc.s = numerical_rank(moment_matrix(y, d), rank_eps);
    rc.rank_low = numerical_rank(moment_matrix(y, d - v), rank_eps);
    rc.satisfied = rc.s == rc.rank_low;
    return rc;
}

namespace detail {

inline double monomial_value(const ExponentVector& a, const Eigen::VectorXd& x) {
    double m = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (int e = 0; e < a[j]; ++e) m *= x[static_cast<Eigen::Index>(j)];
    return m;
}

}  // namespace detail

/// Recovers the s atoms of a flat moment vector y of order d.
inline ExtractionResult extract_minimizers(const MomentVector& y, int d, int s, double tol,
                                           std::uint64_t seed = 20220901, int reseeds = 3) {
    using Eigen::Index;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    ExtractionResult res;
    const std::size_t n = y.n();
    if (s < 1) {
        res.failure = "rank must be positive";
        return res;
    }
    const MatrixXd M = moment_matrix(y, d);
    const Index N = M.rows();
    if (s > N) {
        res.failure = "rank exceeds moment matrix size";
        return res;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
    VectorXd lam = es.eigenvalues().tail(s);
    if (lam.minCoeff() <= 0.0) {
        res.failure = "moment matrix has fewer positive eigenvalues than the rank";
        return res;
    }
    MatrixXd U = es.eigenvectors().rightCols(s) * lam.cwiseSqrt().asDiagonal();

    // Reduced column echelon form: U(basis rows, :) = I.
    const double piv_tol = tol * std::max(1.0, U.cwiseAbs().maxCoeff());
    std::vector<Index> brows;
    Index col = 0;
    for (Index i = 0; i < N && col < s; ++i) {
        Index j = 0;
        const double piv = U.row(i).segment(col, s - col).cwiseAbs().maxCoeff(&j);
        if (piv <= piv_tol) continue;
        j += col;
        if (j != col) U.col(col).swap(U.col(j));
        U.col(col) /= U(i, col);
        for (Index c = 0; c < s; ++c)
            if (c != col) U.col(c) -= U(i, c) * U.col(col);
        brows.push_back(i);
        ++col;
    }
    if (col < s) {
        res.failure = "echelon pivot below tolerance";
        return res;
    }
    const IndexSet& lam_d = y.basis();  // Lambda(2d), whose prefix is Lambda(d)
    for (Index r : brows) res.basis.push_back(lam_d[static_cast<std::size_t>(r)]);

    // Multiplication matrices: N_j(k, :) = U(row of x_j * b_k, :).
    std::vector<MatrixXd> Nj(n, MatrixXd(s, s));
    for (std::size_t j = 0; j < n; ++j)
        for (Index k = 0; k < s; ++k) {
            const ExponentVector shifted = res.basis[static_cast<std::size_t>(k)] + ExponentVector::unit(n, j);
            if (shifted.degree() > d) {
                res.failure = "monomial basis is not closed under multiplication at this order";
                return res;
            }
            const auto pos = lam_d.position(shifted);
            Nj[j].row(k) = U.row(static_cast<Index>(*pos));
        }

    const Index nm = static_cast<Index>(y.size());
    const double ymax = std::max(1.0, y.values().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt <= reseeds; ++attempt) {
        res.attempts = attempt + 1;
        res.seed_used = seed + static_cast<std::uint64_t>(attempt);
        std::mt19937_64 gen(res.seed_used);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> w(n);
        double wsum = 0.0;
        for (auto& v : w) wsum += (v = unif(gen) + 1e-3);
        MatrixXd Ncomb = MatrixXd::Zero(s, s);
        for (std::size_t j = 0; j < n; ++j) Ncomb += (w[j] / wsum) * Nj[j];

        Eigen::RealSchur<MatrixXd> schur(Ncomb);
        const MatrixXd& T = schur.matrixT();
        bool real_schur = true;
        for (Index i = 0; i + 1 < s; ++i)
            if (std::abs(T(i + 1, i)) > tol * std::max(1.0, T.cwiseAbs().maxCoeff())) real_schur = false;
        if (!real_schur) {
            res.failure = "complex eigenvalues in multiplication matrix";
            continue;
        }
        const MatrixXd& Q = schur.matrixU();
        std::vector<VectorXd> pts(static_cast<std::size_t>(s), VectorXd(static_cast<Index>(n)));
        for (Index i = 0; i < s; ++i)
            for (std::size_t j = 0; j < n; ++j)
                pts[static_cast<std::size_t>(i)][static_cast<Index>(j)] = Q.col(i).dot(Nj[j] * Q.col(i));

        MatrixXd A(nm, s);
        for (Index a = 0; a < nm; ++a)
            for (Index i = 0; i < s; ++i)
                A(a, i) = detail::monomial_value(lam_d[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(i)]);
        VectorXd wts = A.colPivHouseholderQr().solve(y.values());
        const double resid = (A * wts - y.values()).cwiseAbs().maxCoeff() / ymax;
        if (resid > 100.0 * tol) {
            res.failure = "recovered moments do not match y";
            res.moment_residual = resid;
            continue;
        }
        res.points.clear();
        res.weights.clear();
        for (Index i = 0; i < s; ++i)
            if (wts[i] >= tol) {
                res.points.push_back(pts[static_cast<std::size_t>(i)]);
                res.weights.push_back(wts[i]);
            }
        if (res.points.empty()) {
            res.failure = "all recovered weights below tolerance";
            continue;
        }
        res.moment_residual = resid;
        res.ok = true;
        res.failure.clear();
        return res;
    }
    return res;
}

/// max_i violation of the constraints at x: -g for inequalities, |h| for equalities.
inline double constraint_violation(const std::vector<Constraint>& constraints, std::span<const double> x) {
    double v = 0.0;
    for (const auto& c : constraints) {
        const double g = c.p.evaluate(x);
        v = std::max(v, c.kind == ConstraintKind::equality ? std::abs(g) : std::max(0.0, -g));
    }
    return v;
}

struct RefineResult {
    Eigen::VectorXd x;
    bool accepted = false;
    int active = 0;         // number of constraints treated as equalities
    double kkt_before = 0.0;
    double kkt_after = 0.0;
};

/// Newton iterations on the KKT system of f restricted to the equalities and the
/// inequalities with g(x) <= active_tol (1 + |x|^deg g). The step is the minimum-norm
/// solution, so redundant constraints are harmless. The polished point is kept only
/// if the KKT residual drops, inactive inequalities stay satisfied and the point
/// moves by at most max_move (1 + |x|).
inline RefineResult refine_minimizer(const Polynomial& f, const std::vector<Constraint>& constraints,
                                     const Eigen::VectorXd& x0, double active_tol = 1e-5, double max_move = 1e-3,
                                     int max_iter = 8) {
    using Eigen::Index;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const std::size_t n = f.n();
    RefineResult out{.x = x0};
    if (static_cast<std::size_t>(x0.size()) != n || n == 0) return out;
    auto at = [](const Polynomial& p, const VectorXd& x) {
        return p.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    };
    const double xs = 1.0 + x0.norm();

    std::vector<const Polynomial*> act, inact;
    for (const auto& c : constraints) {
        if (c.kind == ConstraintKind::equality) {
            act.push_back(&c.p);
            continue;
        }
        const double scale = std::max(1.0, c.p.max_abs_coefficient()) * std::pow(xs, c.p.degree());
        (at(c.p, x0) <= active_tol * scale ? act : inact).push_back(&c.p);
    }
    const Index m = static_cast<Index>(act.size());
    const Index nn = static_cast<Index>(n);
    out.active = static_cast<int>(m);

    std::vector<Polynomial> df(n);
    std::vector<std::vector<Polynomial>> d2f(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i) {
        df[i] = f.derivative(i);
        for (std::size_t j = 0; j < n; ++j) d2f[i][j] = df[i].derivative(j);
    }
    std::vector<std::vector<Polynomial>> dg(act.size(), std::vector<Polynomial>(n));
    std::vector<std::vector<std::vector<Polynomial>>> d2g(act.size());
    for (std::size_t k = 0; k < act.size(); ++k) {
        d2g[k].assign(n, std::vector<Polynomial>(n));
        for (std::size_t i = 0; i < n; ++i) {
            dg[k][i] = act[k]->derivative(i);
            for (std::size_t j = 0; j < n; ++j) d2g[k][i][j] = dg[k][i].derivative(j);
        }
    }
    auto jacobian = [&](const VectorXd& x) {
        MatrixXd J(m, nn);
        for (Index k = 0; k < m; ++k)
            for (Index i = 0; i < nn; ++i)
                J(k, i) = at(dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)], x);
        return J;
    };
    auto gradient = [&](const VectorXd& x) {
        VectorXd g(nn);
        for (Index i = 0; i < nn; ++i) g[i] = at(df[static_cast<std::size_t>(i)], x);
        return g;
    };
    auto residual = [&](const VectorXd& x, const VectorXd& lam) {
        VectorXd r(nn + m);
        r.head(nn) = gradient(x) - jacobian(x).transpose() * lam;
        for (Index k = 0; k < m; ++k) r[nn + k] = at(*act[static_cast<std::size_t>(k)], x);
        return r;
    };

    VectorXd x = x0;
    VectorXd lam = VectorXd::Zero(m);
    if (m > 0) lam = jacobian(x).transpose().completeOrthogonalDecomposition().solve(gradient(x));
    out.kkt_before = residual(x, lam).norm();
    double best = out.kkt_before;
    VectorXd best_x = x;
    for (int it = 0; it < max_iter && best > 0.0; ++it) {
        MatrixXd K = MatrixXd::Zero(nn + m, nn + m);
        for (Index i = 0; i < nn; ++i)
            for (Index j = 0; j < nn; ++j) {
                double h = at(d2f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], x);
                for (Index k = 0; k < m; ++k)
                    h -= lam[k] * at(d2g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                                        [static_cast<std::size_t>(j)],
                                     x);
                K(i, j) = h;
            }
        const MatrixXd J = jacobian(x);
        K.block(0, nn, nn, m) = -J.transpose();
        K.block(nn, 0, m, nn) = J;
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(K);
        cod.setThreshold(1e-10);
        const VectorXd step = cod.solve(-residual(x, lam));
        x += step.head(nn);
        lam += step.tail(m);
        const double r = residual(x, lam).norm();
        if (!std::isfinite(r)) break;
        if (r < best) {
            best = r;
            best_x = x;
        }
        if (step.head(nn).norm() <= 1e-15 * xs) break;
    }
    out.kkt_after = best;
    if (!(best < out.kkt_before) || (best_x - x0).norm() > max_move * xs) return out;
    for (const Polynomial* g : inact)
        if (at(*g, best_x) < 0.0) return out;
    out.x = best_x;
    out.accepted = true;
    return out;
}

inline HierarchyResult run_hierarchy(const Polynomial& f, const std::vector<Constraint>& constraints,
                                     const HierarchyOptions& options = {}) {
    const double s = options.variable_scale;
    if (!(s > 0.0)) throw std::invalid_argument("run_hierarchy: variable_scale must be positive");
    const Polynomial fs = s == 1.0 ? f : f.scale_variables(s);
    std::vector<Constraint> cs;
    cs.reserve(constraints.size());
    for (const auto& c : constraints) cs.push_back({s == 1.0 ? c.p : c.p.scale_variables(s), c.kind});

    const int d0 = minimal_order(fs, cs);
    int v = 1;
    for (const auto& c : cs) v = std::max(v, half_degree(c.p));

    if (options.d_max < std::max(d0, 1)) throw std::invalid_argument("run_hierarchy: d_max is below the minimal order");

    HierarchyResult out;
    for (int d = std::max(d0, 1); d <= options.d_max; ++d) {
        const auto t0 = std::chrono::steady_clock::now();
        OrderRecord rec;
        rec.d = d;
        out.order_reached = d;
        const RelaxationProblem rp = assemble_relaxation(fs, cs, d);
        const SdpSolution sol = solve_sdp(rp, options.solver);
        rec.solver_status = sol.status;
        rec.objective = sol.objective;
        rec.dual_objective = sol.dual_objective;
        rec.duality_gap = sol.duality_gap;
        rec.min_eigenvalue = sol.min_eigenvalue;
        rec.iterations = sol.iterations;
        if (sol.status != SdpStatus::optimal) {
            rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out.diagnostics.push_back(rec);
            continue;
        }
        out.xi = 0;
        out.bound = sol.objective;
        out.y = sol.y;

        const RankCheck rc = check_rank_condition(sol.y, d, std::min(v, d), options.rank_eps);
        rec.rank_high = rc.s;
        rec.rank_low = rc.rank_low;
        rec.rank_condition = rc.satisfied;
        if (rc.satisfied) {
            rec.extraction_attempted = true;
            const ExtractionResult ex =
                extract_minimizers(sol.y, d, rc.s, options.extraction_tol, options.seed, options.reseeds);
            rec.extraction_ok = ex.ok;
            rec.extraction_attempts = ex.attempts;
            rec.extraction_seed = ex.seed_used;
            rec.extraction_failure = ex.failure;
            if (ex.ok) {
                out.xi = 1;
                out.minimizers.clear();
                for (const auto& u : ex.points)
                    out.minimizers.push_back(options.refine ? refine_minimizer(f, constraints, s * u).x : s * u);
                out.weights = ex.weights;
                out.rank_s = static_cast<int>(out.minimizers.size());
                for (const auto& x : out.minimizers) {
                    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
                    rec.max_violation = std::max(rec.max_violation, constraint_violation(constraints, xs));
                    rec.objective_mismatch = std::max(rec.objective_mismatch, std::abs(f.evaluate(xs) - out.bound));
                }
            }
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.diagnostics.push_back(rec);
        if (out.xi == 1) break;
    }
    return out;
}

}  // namespace strata
