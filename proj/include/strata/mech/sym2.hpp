#pragma once

/**
 * @file sym2.hpp
 * @brief Symmetric second-order tensors: generalized cross product, symmetry
 * classes and the distance problem to the transversely isotropic stratum.
 */

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "strata/mech/problem.hpp"
#include "strata/mech/tensor.hpp"
#include "strata/poly.hpp"

namespace strata::mech {

/// (a x b)_{ijk} = -(a_il eps_ljs b_sk)^s
template <class T>
Tensor3T<T> cross_gen(const Mat3<T>& a, const Mat3<T>& b) {
    Tensor3T<T> t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                T acc{};
                for (int l = 0; l < 3; ++l)
                    for (int s = 0; s < 3; ++s) {
                        const double e = levi_civita(l, j, s);
                        if (e != 0.0) acc += (a[i][l] * b[s][k]) * (-e);
                    }
                t(i, j, k) = acc;
            }
    return symmetrize3(t);
}

inline Sym3Tensor cross_gen(const Sym2Tensor& a, const Sym2Tensor& b) {
    return Sym3Tensor(cross_gen<double>(a.array(), b.array()));
}

/// ((tr a'^2)^3 - 6 (tr a'^3)^2) / 12, which equals ||a^2 x a||^2.
inline double transverse_invariant(const Sym2Tensor& a) {
    const Eigen::Matrix3d ap = traceless(a).matrix();
    const Eigen::Matrix3d ap2 = ap * ap;
    const double t2 = ap2.trace(), t3 = (ap2 * ap).trace();
    return (t2 * t2 * t2 - 6.0 * t3 * t3) / 12.0;
}

enum class Sym2Class { orthotropic, transversely_isotropic, isotropic };

inline const char* to_string(Sym2Class c) {
    switch (c) {
        case Sym2Class::orthotropic: return "orthotropic";
        case Sym2Class::transversely_isotropic: return "transversely_isotropic";
        case Sym2Class::isotropic: return "isotropic";
    }
    return "unknown";
}

struct Sym2Classification {
    Sym2Class cls = Sym2Class::orthotropic;
    double isotropy_residual = 0.0;    // ||a'|| / ||a||
    double transverse_residual = 0.0;  // ||a^2 x a|| / ||a||^3
    bool near_boundary = false;
    std::vector<Sym2Class> chain;  // closed strata containing a, least symmetric first
};

inline Sym2Classification classify_sym2(const Sym2Tensor& a, double tol = 1e-6) {
    Sym2Classification out;
    const double na = a.norm();
    if (na > 0.0) {
        out.isotropy_residual = traceless(a).norm() / na;
        out.transverse_residual = cross_gen(a.square(), a).norm() / (na * na * na);
    }
    auto pick = [&](double t) {
        if (out.isotropy_residual <= t) return Sym2Class::isotropic;
        if (out.transverse_residual <= t) return Sym2Class::transversely_isotropic;
        return Sym2Class::orthotropic;
    };
    out.cls = pick(tol);
    auto near = [&](double r) { return r > tol / 10.0 && r <= tol * 10.0; };
    out.near_boundary = near(out.isotropy_residual) || near(out.transverse_residual);
    out.chain.push_back(Sym2Class::orthotropic);
    const double loose = out.near_boundary ? 10.0 * tol : tol;
    if (out.transverse_residual <= loose || out.isotropy_residual <= loose)
        out.chain.push_back(Sym2Class::transversely_isotropic);
    if (out.isotropy_residual <= loose) out.chain.push_back(Sym2Class::isotropic);
    return out;
}

/// Symmetric matrix of the six variables (a11, a22, a33, a23, a13, a12).
inline Mat3<Polynomial> sym2_variables() {
    const auto x = Polynomial::variables(6);
    Mat3<Polynomial> a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = x[static_cast<std::size_t>(voigt_index(i, j))];
    return a;
}

inline Sym2Tensor sym2_from_x(const Eigen::VectorXd& x) {
    return Sym2Tensor::from_components(x[0], x[1], x[2], x[3], x[4], x[5]);
}

/// Nearest transversely isotropic tensor with the same eigenvectors: the two
/// closest eigenvalues are replaced by their mean.
inline Sym2Tensor transverse_projection(const Sym2Tensor& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a.matrix());
    Eigen::Vector3d lam = es.eigenvalues();
    if (lam[1] - lam[0] <= lam[2] - lam[1])
        lam[0] = lam[1] = 0.5 * (lam[0] + lam[1]);
    else
        lam[1] = lam[2] = 0.5 * (lam[1] + lam[2]);
    const Eigen::Matrix3d& Q = es.eigenvectors();
    return Sym2Tensor::from_matrix(Q * lam.asDiagonal() * Q.transpose(), 1e-8);
}

/// min ||a0 - a||^2 subject to a^2 x a = 0 (ten cubic equations).
inline DistanceProblem build_distance_problem_sym2(const Sym2Tensor& a0) {
    DistanceProblem p;
    p.stratum = "O2";
    p.variables = {"a11", "a22", "a33", "a23", "a13", "a12"};
    const Mat3<Polynomial> a = sym2_variables();
    Polynomial f = Polynomial::constant(6, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Polynomial r = a0(i, j) - a[i][j];
            f += r * r;
        }
    p.f = f;
    const Tensor3T<Polynomial> c = cross_gen(matmul(a, a), a);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            for (int k = j; k < 3; ++k) p.constraints.push_back(Constraint::eq(c(i, j, k).with_n(6)));
    p.reference_norm = a0.norm();

    const Eigen::VectorXd proj = transverse_projection(a0).voigt();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
    auto fx = [&](const Eigen::VectorXd& x) { return f.evaluate(std::span<const double>(x.data(), 6)); };
    p.x_ref = fx(proj) <= fx(zero) ? proj : zero;
    p.variable_scale = std::max(1.0, a0.norm() / std::sqrt(3.0));
    return p;
}

}  // namespace strata::mech
