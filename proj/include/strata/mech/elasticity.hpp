#pragma once

/**
 * @file elasticity.hpp
 * @brief Elasticity tensors: Voigt form, harmonic decomposition
 * E = (alpha, beta, d', v', H), the covariant d2' = (H:.H)' and the distance
 * problem to the cubic stratum.
 *
 * The fourth-order harmonic component is parameterized by
 * x = (L1, L2, L3, X1, X2, Y1, Y2, Z1, Z2) through the Voigt matrix
 *
 *     [ L2+L3  -L3    -L2    -X1    Y1+Y2  -Z2   ]
 *     [ -L3    L3+L1  -L1    -X2    -Y1    Z1+Z2 ]
 *     [ -L2    -L1    L1+L2  X1+X2  -Y2    -Z1   ]
 *     [ -X1    -X2    X1+X2  -L1    -Z1    -Y1   ]
 *     [ Y1+Y2  -Y1    -Y2    -Z1    -L2    -X1   ]
 *     [ -Z2    Z1+Z2  -Z1    -Y1    -X1    -L3   ]
 */

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "strata/mech/problem.hpp"
#include "strata/mech/tensor.hpp"
#include "strata/poly.hpp"

namespace strata::mech {

using Voigt6 = Eigen::Matrix<double, 6, 6>;

class ElasticityTensor {
public:
    ElasticityTensor() : v_(Voigt6::Zero()) {}

    /// Throws when the matrix is not symmetric within tol relative to its largest entry.
    static ElasticityTensor from_voigt(const Voigt6& m, double tol = 1e-9) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
            throw std::invalid_argument("ElasticityTensor: Voigt matrix is not symmetric");
        ElasticityTensor e;
        e.v_ = 0.5 * (m + m.transpose());
        return e;
    }
    /// Reads the Voigt entries of a tensor assumed to carry the elasticity symmetries.
    static ElasticityTensor from_full(const Tensor4& t) {
        Voigt6 m;
        for (int p = 0; p < 6; ++p)
            for (int q = 0; q < 6; ++q) {
                const auto a = voigt_pair(p), b = voigt_pair(q);
                m(p, q) = t(a[0], a[1], b[0], b[1]);
            }
        return from_voigt(m, 1e-6);
    }

    const Voigt6& voigt() const { return v_; }
    double operator()(int i, int j, int k, int l) const { return v_(voigt_index(i, j), voigt_index(k, l)); }
    Tensor4 full() const {
        Tensor4 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) t(i, j, k, l) = (*this)(i, j, k, l);
        return t;
    }
    /// Full 81-component Frobenius norm.
    double norm() const { return std::sqrt(norm_squared(full())); }

    friend ElasticityTensor operator+(const ElasticityTensor& a, const ElasticityTensor& b) {
        ElasticityTensor r;
        r.v_ = a.v_ + b.v_;
        return r;
    }
    friend ElasticityTensor operator-(const ElasticityTensor& a, const ElasticityTensor& b) {
        ElasticityTensor r;
        r.v_ = a.v_ - b.v_;
        return r;
    }
    friend ElasticityTensor operator*(double s, const ElasticityTensor& a) {
        ElasticityTensor r;
        r.v_ = s * a.v_;
        return r;
    }

private:
    Voigt6 v_;
};

/// Voigt matrix of H(x), generic in the scalar type.
template <class T>
std::array<std::array<T, 6>, 6> h4_voigt(const std::array<T, 9>& x) {
    const T &L1 = x[0], &L2 = x[1], &L3 = x[2], &X1 = x[3], &X2 = x[4], &Y1 = x[5], &Y2 = x[6], &Z1 = x[7],
            &Z2 = x[8];
    return {{{L2 + L3, -L3, -L2, -X1, Y1 + Y2, -Z2},
             {-L3, L3 + L1, -L1, -X2, -Y1, Z1 + Z2},
             {-L2, -L1, L1 + L2, X1 + X2, -Y2, -Z1},
             {-X1, -X2, X1 + X2, -L1, -Z1, -Y1},
             {Y1 + Y2, -Y1, -Y2, -Z1, -L2, -X1},
             {-Z2, Z1 + Z2, -Z1, -Y1, -X1, -L3}}};
}

template <class T>
Tensor4T<T> h4_full(const std::array<T, 9>& x) {
    const auto v = h4_voigt(x);
    Tensor4T<T> t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t(i, j, k, l) = v[static_cast<std::size_t>(voigt_index(i, j))][static_cast<std::size_t>(voigt_index(k, l))];
    return t;
}

struct H4Params {
    std::array<double, 9> x{};  // L1, L2, L3, X1, X2, Y1, Y2, Z1, Z2

    static H4Params cubic(double lambda) { return {{lambda, lambda, lambda, 0, 0, 0, 0, 0, 0}}; }

    /// Reads the parameters back from a harmonic fourth-order tensor.
    static H4Params from_tensor(const Tensor4& h) {
        H4Params p;
        p.x = {-h(1, 2, 1, 2), -h(0, 2, 0, 2), -h(0, 1, 0, 1), -h(0, 0, 1, 2), -h(1, 1, 1, 2),
               -h(1, 1, 0, 2), -h(2, 2, 0, 2), -h(2, 2, 0, 1), -h(0, 0, 0, 1)};
        return p;
    }

    Voigt6 voigt() const {
        const auto v = h4_voigt(x);
        Voigt6 m;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) m(i, j) = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return m;
    }
    Tensor4 full() const { return h4_full(x); }
    ElasticityTensor tensor() const { return ElasticityTensor::from_voigt(voigt()); }
    double norm() const { return std::sqrt(norm_squared(full())); }
};

struct ElaHarmonic {
    double alpha = 0.0;
    double beta = 0.0;
    Sym2Tensor dp;  // d'
    Sym2Tensor vp;  // v'
    H4Params H;
};

/// (a (x)_4 b)_ijkl = (a_ij b_kl + b_ij a_kl + a_ik b_jl + b_ik a_jl + a_il b_jk + b_il a_jk) / 6
inline ElasticityTensor tensor_prod_4(const Sym2Tensor& a, const Sym2Tensor& b) {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t(i, j, k, l) = (a(i, j) * b(k, l) + b(i, j) * a(k, l) + a(i, k) * b(j, l) + b(i, k) * a(j, l) +
                                     a(i, l) * b(j, k) + b(i, l) * a(j, k)) /
                                    6.0;
    return ElasticityTensor::from_full(t);
}

/// (a (x)_(2,2) b)_ijkl = (2 a_ij b_kl + 2 b_ij a_kl - a_ik b_jl - a_il b_jk - b_ik a_jl - b_il a_jk) / 6
inline ElasticityTensor tensor_prod_22(const Sym2Tensor& a, const Sym2Tensor& b) {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t(i, j, k, l) = (2.0 * a(i, j) * b(k, l) + 2.0 * b(i, j) * a(k, l) - a(i, k) * b(j, l) -
                                     a(i, l) * b(j, k) - b(i, k) * a(j, l) - b(i, l) * a(j, k)) /
                                    6.0;
    return ElasticityTensor::from_full(t);
}

/// d = tr_12 E (d_ij = E_kkij).
inline Sym2Tensor dilatation_trace(const ElasticityTensor& E) {
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) d(i, j) += E(k, k, i, j);
    return Sym2Tensor::from_matrix(d);
}

/// v = tr_13 E (v_ij = E_kikj).
inline Sym2Tensor voigt_trace(const ElasticityTensor& E) {
    Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) v(i, j) += E(k, i, k, j);
    return Sym2Tensor::from_matrix(v);
}

inline ElasticityTensor isotropic_part(double alpha, double beta) {
    const Sym2Tensor q = Sym2Tensor::identity();
    return ((alpha + 2.0 * beta) / 15.0) * tensor_prod_4(q, q) + ((alpha - beta) / 6.0) * tensor_prod_22(q, q);
}

inline ElaHarmonic harmonic_decompose_ela(const ElasticityTensor& E) {
    ElaHarmonic h;
    const Sym2Tensor d = dilatation_trace(E), v = voigt_trace(E);
    h.alpha = d.trace();
    h.beta = v.trace();
    h.dp = traceless(d);
    h.vp = traceless(v);
    const Sym2Tensor q = Sym2Tensor::identity();
    const Sym2Tensor a = (2.0 / 7.0) * (h.dp + 2.0 * h.vp);
    const Sym2Tensor b = 2.0 * (h.dp - h.vp);
    const ElasticityTensor H = E - isotropic_part(h.alpha, h.beta) - tensor_prod_4(q, a) - tensor_prod_22(q, b);
    h.H = H4Params::from_tensor(H.full());
    return h;
}

inline ElasticityTensor recompose_ela(const ElaHarmonic& h) {
    const Sym2Tensor q = Sym2Tensor::identity();
    const Sym2Tensor a = (2.0 / 7.0) * (h.dp + 2.0 * h.vp);
    const Sym2Tensor b = 2.0 * (h.dp - h.vp);
    return isotropic_part(h.alpha, h.beta) + tensor_prod_4(q, a) + tensor_prod_22(q, b) + h.H.tensor();
}

/// ||E||^2 from the harmonic components:
/// (2 alpha^2 - 2 alpha beta + 3 beta^2)/15 + (2/21)||d' + 2v'||^2 + (4/3)||d' - v'||^2 + ||H||^2.
inline double harmonic_norm_squared(const ElaHarmonic& h) {
    const double iso = (2.0 * h.alpha * h.alpha - 2.0 * h.alpha * h.beta + 3.0 * h.beta * h.beta) / 15.0;
    const double a = (h.dp + 2.0 * h.vp).norm(), b = (h.dp - h.vp).norm();
    return iso + (2.0 / 21.0) * a * a + (4.0 / 3.0) * b * b + norm_squared(h.H.full());
}

/// The five independent components (11, 22, 12, 13, 23) of d2' = (H :. H)'.
template <class T>
std::array<T, 5> d2prime_ela_components(const std::array<T, 9>& x) {
    const T &L1 = x[0], &L2 = x[1], &L3 = x[2], &X1 = x[3], &X2 = x[4], &Y1 = x[5], &Y2 = x[6], &Z1 = x[7],
            &Z2 = x[8];
    return {(2.0 / 3.0) * (-4.0 * L1 * L1 - L1 * L2 - L1 * L3 + 2.0 * L2 * L2 + 2.0 * L2 * L3 + 2.0 * L3 * L3 + X1 * X1 -
                           4.0 * X1 * X2 - 4.0 * X2 * X2 + Y1 * Y1 + 5.0 * Y1 * Y2 + 2.0 * Y2 * Y2 - 2.0 * Z1 * Z1 -
                           Z1 * Z2 + 2.0 * Z2 * Z2),
            (-2.0 / 3.0) * (-2.0 * L1 * L1 + L1 * L2 - 2.0 * L1 * L3 + 4.0 * L2 * L2 + L2 * L3 - 2.0 * L3 * L3 +
                            2.0 * X1 * X1 + X1 * X2 - 2.0 * X2 * X2 - Y1 * Y1 + 4.0 * Y1 * Y2 + 4.0 * Y2 * Y2 - Z1 * Z1 -
                            5.0 * Z1 * Z2 - 2.0 * Z2 * Z2),
            3.0 * X1 * Y1 + 3.0 * X2 * Y1 - 4.0 * X1 * Y2 - X2 * Y2 + 4.0 * Z1 * L1 + Z2 * L1 + 3.0 * Z1 * L2 -
                Z2 * L2 - 2.0 * Z1 * L3,
            3.0 * X1 * (Z1 + Z2) - X2 * (4.0 * Z1 + Z2) + 3.0 * Y1 * L1 - Y2 * L1 - 2.0 * Y1 * L2 + 4.0 * Y1 * L3 +
                Y2 * L3,
            3.0 * Y1 * Z1 + 3.0 * Y2 * Z1 - 4.0 * Y1 * Z2 - Y2 * Z2 - 2.0 * X1 * L1 + 4.0 * X1 * L2 + X2 * L2 +
                3.0 * X1 * L3 - X2 * L3};
}

inline Sym2Tensor d2prime_ela(const H4Params& H) {
    const auto c = d2prime_ela_components(H.x);
    return Sym2Tensor::from_components(c[0], c[1], -c[0] - c[1], c[4], c[3], c[2]);
}

/// (H_ipqr H_pqrj)' by direct contraction of the full tensor.
inline Sym2Tensor d2prime_ela_contract(const Tensor4& H) {
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                    for (int r = 0; r < 3; ++r) d(i, j) += H(i, p, q, r) * H(p, q, r, j);
    return traceless(Sym2Tensor::from_matrix(d, 1e-8));
}

struct CubicTest {
    bool at_least_cubic = false;
    bool strictly_cubic = false;
    double dp_residual = 0.0;   // ||d'|| / ||E||
    double vp_residual = 0.0;   // ||v'|| / ||E||
    double d2p_residual = 0.0;  // ||d2'|| / ||H||^2
    double harmonic_ratio = 0.0;  // ||H|| / ||E||
};

inline CubicTest cubic_test_ela(const ElasticityTensor& E, double tol = 1e-6) {
    CubicTest t;
    const ElaHarmonic h = harmonic_decompose_ela(E);
    const double nE = E.norm(), nH = h.H.norm();
    t.dp_residual = nE > 0.0 ? h.dp.norm() / nE : 0.0;
    t.vp_residual = nE > 0.0 ? h.vp.norm() / nE : 0.0;
    t.d2p_residual = nH > 0.0 ? d2prime_ela(h.H).norm() / (nH * nH) : 0.0;
    t.harmonic_ratio = nE > 0.0 ? nH / nE : 0.0;
    t.at_least_cubic = t.dp_residual <= tol && t.vp_residual <= tol && t.d2p_residual <= tol;
    t.strictly_cubic = t.at_least_cubic && t.harmonic_ratio > tol;
    return t;
}

inline bool is_cubic_ela(const ElasticityTensor& E, double tol = 1e-6, bool strict = false) {
    const CubicTest t = cubic_test_ela(E, tol);
    return strict ? t.strictly_cubic : t.at_least_cubic;
}

/// (2/21)||d0' + 2 v0'||^2 + (4/3)||d0' - v0'||^2
inline double cubic_offset_ela(const ElaHarmonic& h) {
    const double a = (h.dp + 2.0 * h.vp).norm(), b = (h.dp - h.vp).norm();
    return (2.0 / 21.0) * a * a + (4.0 / 3.0) * b * b;
}

/// E* = (alpha0, beta0, 0, 0, H(x)).
inline ElasticityTensor cubic_tensor_from_solution(const ElaHarmonic& h0, const Eigen::VectorXd& x) {
    ElaHarmonic h;
    h.alpha = h0.alpha;
    h.beta = h0.beta;
    for (std::size_t i = 0; i < 9; ++i) h.H.x[i] = x[static_cast<Eigen::Index>(i)];
    return recompose_ela(h);
}

/// min ||H0 - H(x)||^2 subject to d2'(H(x)) = 0.
inline DistanceProblem build_distance_problem_ela(const ElasticityTensor& E0) {
    DistanceProblem p;
    p.stratum = "cubic-ela";
    p.variables = {"L1", "L2", "L3", "X1", "X2", "Y1", "Y2", "Z1", "Z2"};
    const ElaHarmonic h0 = harmonic_decompose_ela(E0);
    const Tensor4 H0 = h0.H.full();

    const auto xv = Polynomial::variables(9);
    std::array<Polynomial, 9> x;
    for (std::size_t i = 0; i < 9; ++i) x[i] = xv[i];
    const Tensor4T<Polynomial> H = h4_full(x);
    Polynomial f = Polynomial::constant(9, 0.0);
    for (std::size_t c = 0; c < 81; ++c) {
        const Polynomial r = H0.c[c] - H.c[c];
        f += r * r;
    }
    p.f = f;
    for (const auto& g : d2prime_ela_components(x)) p.constraints.push_back(Constraint::eq(g.with_n(9)));
    p.offset = cubic_offset_ela(h0);
    p.reference_norm = E0.norm();

    // Best cubic normal form L1 = L2 = L3 = l in the given frame, or 0.
    auto fx = [&](const Eigen::VectorXd& v) { return f.evaluate(std::span<const double>(v.data(), 9)); };
    Eigen::VectorXd e = Eigen::VectorXd::Zero(9);
    e.head(3).setOnes();
    const double f0 = fx(Eigen::VectorXd::Zero(9)), fp = fx(e), fm = fx(-e);
    const double A = 0.5 * (fp + fm) - f0, B = 0.5 * (fp - fm);
    p.x_ref = Eigen::VectorXd::Zero(9);
    if (A > 0.0 && fx(-B / (2.0 * A) * e) < f0) p.x_ref = -B / (2.0 * A) * e;
    p.variable_scale = std::max(1.0, h0.H.norm() / 3.0);
    return p;
}

}  // namespace strata::mech
