#pragma once

/**
 * @file sdp.hpp
 * @brief Dense primal-dual interior-point solver for the relaxation SDP
 *
 *     minimize  <f, y>   s.t.  A_{0,i} + sum_alpha y_alpha A_{alpha,i} >= 0  (each block i),  y_0 = 1.
 *
 * Internally the LMI is the dual side of the standard pair
 *
 *     (P)  max  -<F0, X>        s.t.  <F_k, X> = c_k,  X >= 0
 *     (D)  min  c^T z           s.t.  Z = F0 + sum_k z_k F_k >= 0
 *
 * and is solved by an infeasible path-following method with Nesterov-Todd
 * scaling and a Mehrotra predictor-corrector step. The Schur complement is
 * formed densely and factorized by Cholesky.
 *
 * Equality pairs (h >= 0, -h >= 0) can either stay as blocks or be turned
 * into linear equations on y and eliminated through a null-space
 * parameterization y = y_p + N z (the default; both give the same optimum).
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "strata/moment.hpp"

namespace strata {

enum class SdpStatus { optimal, max_iterations, numerical_failure, unbounded_suspected };

inline const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::max_iterations: return "max_iterations";
        case SdpStatus::numerical_failure: return "numerical_failure";
        case SdpStatus::unbounded_suspected: return "unbounded_suspected";
    }
    return "unknown";
}

enum class EqualityHandling { eliminate, paired };

struct SdpOptions {
    double gap_tol = 1e-8;   // relative duality gap
    double feas_tol = 1e-8;  // relative primal/dual residuals, and block eigenvalue floor
    int max_iter = 200;
    EqualityHandling equalities = EqualityHandling::eliminate;
    double objective_floor = -1e12;  // scaled objective below this with dual feasibility => unbounded
};

struct SdpIterate {
    int iteration = 0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double relative_gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double step_primal = 0.0;
    double step_dual = 0.0;

    bool operator==(const SdpIterate&) const = default;
};

struct SdpSolution {
    MomentVector y;
    double objective = 0.0;       // <f, y>
    double dual_objective = 0.0;  // unscaled dual bound
    double duality_gap = 0.0;     // relative
    double absolute_gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double min_eigenvalue = 0.0;  // smallest eigenvalue over all normalized blocks at y
    int iterations = 0;
    SdpStatus status = SdpStatus::numerical_failure;
    std::vector<SdpIterate> trace;
};

namespace detail {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SdpBlock {
    Index side = 0;
    MatrixXd F0;
    std::vector<int> vars;      // variables occurring in this block
    std::vector<MatrixXd> F;    // F[j] belongs to variable vars[j]
    int source = -1;            // index into RelaxationProblem::blocks
};

struct LmiProgram {
    Index m = 0;
    VectorXd c;
    double c_scale = 1.0;
    std::vector<SdpBlock> blocks;
    std::vector<double> block_scale;
    // y_free = y_p + N z
    VectorXd y_p;
    MatrixXd N;
    bool identity_map = true;
};

inline double frob_inner(const MatrixXd& a, const MatrixXd& b) { return (a.array() * b.array()).sum(); }

inline LmiProgram reduce(const RelaxationProblem& rp, const SdpOptions& opt, bool& consistent) {
    const Index nm = static_cast<Index>(rp.num_moments());
    const Index m_full = nm - 1;
    LmiProgram lp;
    consistent = true;

    std::vector<int> kept;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    for (std::size_t b = 0; b < rp.blocks.size(); ++b) {
        const auto& blk = rp.blocks[b];
        const bool is_eq = blk.origin == LmiBlock::Origin::equality_upper ||
                           blk.origin == LmiBlock::Origin::equality_lower;
        if (!is_eq || opt.equalities == EqualityHandling::paired) {
            kept.push_back(static_cast<int>(b));
            continue;
        }
        if (blk.origin == LmiBlock::Origin::equality_lower) continue;
        const Index side = static_cast<Index>(blk.side);
        for (Index r = 0; r < side; ++r)
            for (Index c = r; c < side; ++c) {
                std::vector<double> row(static_cast<std::size_t>(m_full), 0.0);
                bool any = false;
                for (Index a = 1; a < nm; ++a)
                    if (blk.has(static_cast<std::size_t>(a))) {
                        const double v = blk.coeff[static_cast<std::size_t>(a)](r, c);
                        row[static_cast<std::size_t>(a - 1)] = v;
                        any = any || v != 0.0;
                    }
                const double rhs = blk.has(0) ? -blk.coeff[0](r, c) : 0.0;
                if (!any) {
                    if (std::abs(rhs) > 1e-12 * (1.0 + blk.g.max_abs_coefficient())) consistent = false;
                    continue;
                }
                eq_rows.push_back(std::move(row));
                eq_rhs.push_back(rhs);
            }
    }

    Index m = m_full;
    if (!eq_rows.empty()) {
        const Index p = static_cast<Index>(eq_rows.size());
        MatrixXd A(p, m_full);
        VectorXd rhs(p);
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j < m_full; ++j) A(i, j) = eq_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            rhs[i] = eq_rhs[static_cast<std::size_t>(i)];
        }
        Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const VectorXd& sv = svd.singularValues();
        const double smax = sv.size() ? sv[0] : 0.0;
        Index r = 0;
        while (r < sv.size() && sv[r] > 1e-11 * std::max(1.0, smax)) ++r;
        const MatrixXd& U = svd.matrixU();
        const MatrixXd& V = svd.matrixV();
        VectorXd coef = (U.leftCols(r).transpose() * rhs).cwiseQuotient(sv.head(r));
        lp.y_p = V.leftCols(r) * coef;
        if ((A * lp.y_p - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) consistent = false;
        lp.N = V.rightCols(m_full - r);
        lp.identity_map = false;
        m = m_full - r;
    } else {
        lp.y_p = VectorXd::Zero(m_full);
    }
    lp.m = m;

    // Objective over the reduced variables.
    const VectorXd c_full = rp.objective.tail(m_full);
    lp.c = lp.identity_map ? c_full : VectorXd(lp.N.transpose() * c_full);

    for (int b : kept) {
        const auto& blk = rp.blocks[static_cast<std::size_t>(b)];
        SdpBlock sb;
        sb.source = b;
        sb.side = static_cast<Index>(blk.side);
        sb.F0 = blk.has(0) ? blk.coeff[0] : MatrixXd::Zero(sb.side, sb.side);
        if (lp.identity_map) {
            for (Index a = 1; a < nm; ++a)
                if (blk.has(static_cast<std::size_t>(a))) {
                    sb.vars.push_back(static_cast<int>(a - 1));
                    sb.F.push_back(blk.coeff[static_cast<std::size_t>(a)]);
                }
        } else {
            std::vector<Index> present;
            for (Index a = 1; a < nm; ++a)
                if (blk.has(static_cast<std::size_t>(a))) present.push_back(a);
            for (Index a : present) sb.F0 += lp.y_p[a - 1] * blk.coeff[static_cast<std::size_t>(a)];
            for (Index k = 0; k < m; ++k) {
                MatrixXd Fk = MatrixXd::Zero(sb.side, sb.side);
                bool any = false;
                for (Index a : present) {
                    const double w = lp.N(a - 1, k);
                    if (w != 0.0) {
                        Fk += w * blk.coeff[static_cast<std::size_t>(a)];
                        any = true;
                    }
                }
                if (any && Fk.cwiseAbs().maxCoeff() > 1e-15) {
                    sb.vars.push_back(static_cast<int>(k));
                    sb.F.push_back(std::move(Fk));
                }
            }
        }
        // Normalize the block so its largest coefficient is 1.
        double s = sb.F0.cwiseAbs().maxCoeff();
        for (const auto& F : sb.F) s = std::max(s, F.cwiseAbs().maxCoeff());
        if (s == 0.0) s = 1.0;
        sb.F0 /= s;
        for (auto& F : sb.F) F /= s;
        lp.block_scale.push_back(s);
        lp.blocks.push_back(std::move(sb));
    }

    lp.c_scale = lp.c.size() ? lp.c.cwiseAbs().maxCoeff() : 0.0;
    if (lp.c_scale == 0.0) lp.c_scale = 1.0;
    lp.c /= lp.c_scale;
    return lp;
}

/// Largest step a <= cap keeping S + a dS positive semidefinite, given the
/// Cholesky factor of S.
inline double max_step(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dS) {
    const MatrixXd Linv_dS = chol.matrixL().solve(dS);
    MatrixXd B = chol.matrixL().solve(Linv_dS.transpose());
    B = 0.5 * (B + B.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(B, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

inline double min_eigenvalue(const MatrixXd& S) {
    if (S.size() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

class InteriorPoint {
public:
    InteriorPoint(const LmiProgram& lp, const SdpOptions& opt) : lp_(lp), opt_(opt) {}

    struct Result {
        VectorXd z;
        double pobj = 0.0, dobj = 0.0, rel_gap = 0.0, pinf = 0.0, dinf = 0.0;
        int iterations = 0;
        SdpStatus status = SdpStatus::numerical_failure;
        std::vector<SdpIterate> trace;
    };

    Result run() {
        Result res;
        const Index m = lp_.m;
        const std::size_t nb = lp_.blocks.size();
        Index n_total = 0;
        double tau = 1.0;
        for (const auto& b : lp_.blocks) {
            n_total += b.side;
            tau = std::max(tau, 1.0 + b.F0.norm());
        }
        std::vector<MatrixXd> X(nb), Z(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            X[b] = tau * MatrixXd::Identity(lp_.blocks[b].side, lp_.blocks[b].side);
            Z[b] = X[b];
        }
        VectorXd z = VectorXd::Zero(m);
        double F0norm = 0.0;
        for (const auto& b : lp_.blocks) F0norm += b.F0.squaredNorm();
        F0norm = std::sqrt(F0norm);
        const double cnorm = lp_.c.norm();

        int stalled = 0;
        for (int it = 0;; ++it) {
            // Residuals.
            VectorXd rp = lp_.c;
            std::vector<MatrixXd> Rd(nb);
            double pobj = lp_.c.dot(z), dobj = 0.0, xz = 0.0, rdn = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                const auto& blk = lp_.blocks[b];
                Rd[b] = blk.F0 - Z[b];
                for (std::size_t j = 0; j < blk.vars.size(); ++j) {
                    rp[blk.vars[j]] -= frob_inner(blk.F[j], X[b]);
                    Rd[b] += z[blk.vars[j]] * blk.F[j];
                }
                dobj -= frob_inner(blk.F0, X[b]);
                xz += frob_inner(X[b], Z[b]);
                rdn += Rd[b].squaredNorm();
            }
            const double mu = n_total ? xz / static_cast<double>(n_total) : 0.0;
            const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
            const double rel_gap = std::max(std::abs(pobj - dobj), std::abs(xz)) / denom;
            const double pinf = rp.norm() / (1.0 + cnorm);
            const double dinf = std::sqrt(rdn) / (1.0 + F0norm);

            res.z = z;
            res.pobj = pobj;
            res.dobj = dobj;
            res.rel_gap = rel_gap;
            res.pinf = pinf;
            res.dinf = dinf;
            res.iterations = it;
            SdpIterate rec{it, pobj, dobj, rel_gap, pinf, dinf, mu, 0.0, 0.0, 0.0};

            if (rel_gap <= opt_.gap_tol && pinf <= opt_.feas_tol && dinf <= opt_.feas_tol) {
                res.trace.push_back(rec);
                res.status = SdpStatus::optimal;
                return res;
            }
            if (pobj < opt_.objective_floor && dinf <= opt_.feas_tol) {
                res.trace.push_back(rec);
                res.status = SdpStatus::unbounded_suspected;
                return res;
            }
            if (it >= opt_.max_iter) {
                res.trace.push_back(rec);
                res.status = SdpStatus::max_iterations;
                return res;
            }

            // Nesterov-Todd scaling W = G G^T with W Z W = X and
            // G^T Z G = G^{-1} X G^{-T} = diag(v).
            std::vector<MatrixXd> G(nb), Ginv(nb), W(nb);
            std::vector<VectorXd> v(nb);
            std::vector<Eigen::LLT<MatrixXd>> cholX(nb), cholZ(nb);
            for (std::size_t b = 0; b < nb; ++b) {
                cholX[b].compute(X[b]);
                cholZ[b].compute(Z[b]);
                if (cholX[b].info() != Eigen::Success || cholZ[b].info() != Eigen::Success) {
                    res.trace.push_back(rec);
                    res.status = SdpStatus::numerical_failure;
                    return res;
                }
                const MatrixXd L = cholX[b].matrixL();
                const MatrixXd R = cholZ[b].matrixL();
                Eigen::JacobiSVD<MatrixXd> svd(R.transpose() * L, Eigen::ComputeFullU | Eigen::ComputeFullV);
                v[b] = svd.singularValues();
                const VectorXd sq = v[b].cwiseSqrt();
                G[b] = L * svd.matrixV() * sq.cwiseInverse().asDiagonal();
                const MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(L.rows(), L.cols()));
                Ginv[b] = sq.asDiagonal() * svd.matrixV().transpose() * Linv;
                W[b] = G[b] * G[b].transpose();
            }

            // Schur complement M_kl = <F_k, W F_l W>.
            MatrixXd M = MatrixXd::Zero(m, m);
            for (std::size_t b = 0; b < nb; ++b) {
                const auto& blk = lp_.blocks[b];
                const Index nv = static_cast<Index>(blk.vars.size());
                if (nv == 0) continue;
                MatrixXd P(nv, blk.side * blk.side);
                for (Index j = 0; j < nv; ++j) {
                    const MatrixXd S = G[b].transpose() * blk.F[static_cast<std::size_t>(j)] * G[b];
                    P.row(j) = Eigen::Map<const Eigen::RowVectorXd>(S.data(), S.size());
                }
                const MatrixXd Mb = P * P.transpose();
                for (Index i = 0; i < nv; ++i)
                    for (Index j = 0; j < nv; ++j) M(blk.vars[static_cast<std::size_t>(i)], blk.vars[static_cast<std::size_t>(j)]) += Mb(i, j);
            }
            Eigen::LLT<MatrixXd> cholM;
            if (!factor_schur(M, cholM)) {
                res.trace.push_back(rec);
                res.status = SdpStatus::numerical_failure;
                return res;
            }

            // Predictor.
            std::vector<MatrixXd> Rc(nb), dXa(nb), dZa(nb);
            for (std::size_t b = 0; b < nb; ++b) Rc[b] = -X[b];
            VectorXd dza;
            solve_direction(cholM, W, Rd, Rc, rp, dza, dXa, dZa);
            double ap = 1.0, ad = 1.0;
            for (std::size_t b = 0; b < nb; ++b) {
                ap = std::min(ap, max_step(cholX[b], dXa[b]));
                ad = std::min(ad, max_step(cholZ[b], dZa[b]));
            }
            double xz_aff = 0.0;
            for (std::size_t b = 0; b < nb; ++b) xz_aff += frob_inner(X[b] + ap * dXa[b], Z[b] + ad * dZa[b]);
            const double mu_aff = xz_aff / static_cast<double>(n_total);
            const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
            const double sigma = mu > 0.0 ? std::min(1.0, std::pow(std::max(mu_aff, 0.0) / mu, expon)) : 0.0;

            // Corrector, linearized in the scaled space where X and Z are diag(v):
            // v o (dX~ + dZ~) = sigma mu I - v o v - dXa~ o dZa~.
            for (std::size_t b = 0; b < nb; ++b) {
                const MatrixXd dXs = Ginv[b] * dXa[b] * Ginv[b].transpose();
                const MatrixXd dZs = G[b].transpose() * dZa[b] * G[b];
                const MatrixXd prod = dXs * dZs;
                MatrixXd Rs = -0.5 * (prod + prod.transpose());
                Rs.diagonal().array() += sigma * mu;
                Rs.diagonal() -= v[b].cwiseAbs2();
                for (Index i = 0; i < Rs.rows(); ++i)
                    for (Index j = 0; j < Rs.cols(); ++j) Rs(i, j) *= 2.0 / (v[b][i] + v[b][j]);
                Rc[b] = G[b] * Rs * G[b].transpose();
            }
            VectorXd dz;
            std::vector<MatrixXd> dX(nb), dZ(nb);
            solve_direction(cholM, W, Rd, Rc, rp, dz, dX, dZ);
            double apm = std::numeric_limits<double>::infinity(), adm = apm;
            for (std::size_t b = 0; b < nb; ++b) {
                apm = std::min(apm, max_step(cholX[b], dX[b]));
                adm = std::min(adm, max_step(cholZ[b], dZ[b]));
            }
            const double gamma = 0.9 + 0.09 * std::min(ap, ad);
            const double step_p = std::min(1.0, gamma * apm);
            const double step_d = std::min(1.0, gamma * adm);
            rec.sigma = sigma;
            rec.step_primal = step_p;
            rec.step_dual = step_d;
            res.trace.push_back(rec);

            if (step_p < 1e-10 && step_d < 1e-10) {
                if (++stalled >= 5) {
                    res.status = SdpStatus::numerical_failure;
                    return res;
                }
            } else {
                stalled = 0;
            }
            for (std::size_t b = 0; b < nb; ++b) {
                X[b] += step_p * dX[b];
                Z[b] += step_d * dZ[b];
                X[b] = 0.5 * (X[b] + X[b].transpose());
                Z[b] = 0.5 * (Z[b] + Z[b].transpose());
            }
            z += step_d * dz;
        }
    }

private:
    static bool factor_schur(MatrixXd& M, Eigen::LLT<MatrixXd>& chol) {
        if (M.rows() == 0) return true;
        chol.compute(M);
        if (chol.info() == Eigen::Success) return true;
        const double scale = std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        for (double delta = 1e-14; delta <= 1e-6; delta *= 100.0) {
            MatrixXd Mr = M;
            Mr.diagonal().array() += delta * scale;
            chol.compute(Mr);
            if (chol.info() == Eigen::Success) return true;
        }
        return false;
    }

    void solve_direction(const Eigen::LLT<MatrixXd>& cholM, const std::vector<MatrixXd>& W,
                         const std::vector<MatrixXd>& Rd, const std::vector<MatrixXd>& Rc, const VectorXd& rp,
                         VectorXd& dz, std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dZ) const {
        const std::size_t nb = lp_.blocks.size();
        VectorXd rhs = -rp;
        std::vector<MatrixXd> T(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& blk = lp_.blocks[b];
            T[b] = Rc[b] - W[b] * Rd[b] * W[b];
            for (std::size_t j = 0; j < blk.vars.size(); ++j) rhs[blk.vars[j]] += frob_inner(blk.F[j], T[b]);
        }
        dz = lp_.m ? VectorXd(cholM.solve(rhs)) : VectorXd();
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& blk = lp_.blocks[b];
            dZ[b] = Rd[b];
            for (std::size_t j = 0; j < blk.vars.size(); ++j) dZ[b] += dz[blk.vars[j]] * blk.F[j];
            dZ[b] = 0.5 * (dZ[b] + dZ[b].transpose());
            dX[b] = Rc[b] - W[b] * dZ[b] * W[b];
            dX[b] = 0.5 * (dX[b] + dX[b].transpose());
        }
    }

    const LmiProgram& lp_;
    const SdpOptions& opt_;
};

}  // namespace detail

/// Solves the relaxation. y_0 is pinned to 1; all other moments are free.
inline SdpSolution solve_sdp(const RelaxationProblem& problem, const SdpOptions& options = {}) {
    using Eigen::Index;
    SdpSolution sol{.y = MomentVector(problem.n, problem.d), .trace = {}};
    bool consistent = true;
    const detail::LmiProgram lp = detail::reduce(problem, options, consistent);
    if (!consistent) {
        sol.status = SdpStatus::numerical_failure;
        return sol;
    }

    detail::InteriorPoint ipm(lp, options);
    const auto r = ipm.run();

    const Index m_full = static_cast<Index>(problem.num_moments()) - 1;
    Eigen::VectorXd y_free = lp.identity_map ? Eigen::VectorXd(lp.y_p + r.z) : Eigen::VectorXd(lp.y_p + lp.N * r.z);
    Eigen::VectorXd y(m_full + 1);
    y[0] = 1.0;
    y.tail(m_full) = y_free;
    sol.y = MomentVector(problem.n, problem.d, y);

    sol.objective = problem.objective.dot(y);
    const double offset = problem.objective[0] + problem.objective.tail(m_full).dot(lp.y_p);
    sol.dual_objective = lp.c_scale * r.dobj + offset;
    sol.duality_gap = r.rel_gap;
    sol.absolute_gap = r.rel_gap * lp.c_scale * (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
    sol.primal_infeasibility = r.pinf;
    sol.dual_infeasibility = r.dinf;
    sol.iterations = r.iterations;
    sol.trace = r.trace;
    sol.status = r.status;

    double lmin = std::numeric_limits<double>::infinity();
    for (const auto& blk : problem.blocks) {
        double s = 0.0;
        for (const auto& a : blk.coeff)
            if (a.size()) s = std::max(s, a.cwiseAbs().maxCoeff());
        if (s == 0.0) s = 1.0;
        lmin = std::min(lmin, detail::min_eigenvalue(blk.evaluate(y) / s));
    }
    sol.min_eigenvalue = lmin;
    if (sol.status == SdpStatus::optimal && lmin < -options.feas_tol) sol.status = SdpStatus::numerical_failure;
    return sol;
}

}  // namespace strata
