#pragma once

/**
 * @file piezo.hpp
 * @brief Piezoelectricity tensors: Voigt form, the split e = g + h with h the
 * leading harmonic part, the covariant d2' = (h : h)', SO(3) invariants of h
 * and the distance problem to the cubic stratum.
 *
 * The harmonic part is parameterized by
 * x = (h111, h112, h122, h123, h222, h223, h333) through
 *
 *     [ h111       h122   -h111-h122  h123       -h223-h333  h112 ]
 *     [ h112       h222   -h112-h222  h223       h123        h122 ]
 *     [ -h223-h333 h223   h333        -h112-h222 -h111-h122  h123 ]
 */

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

#include "strata/mech/problem.hpp"
#include "strata/mech/tensor.hpp"
#include "strata/poly.hpp"

namespace strata::mech {

using Voigt36 = Eigen::Matrix<double, 3, 6>;

class PiezoTensor {
public:
    PiezoTensor() : v_(Voigt36::Zero()) {}
    static PiezoTensor from_voigt(const Voigt36& m) {
        PiezoTensor e;
        e.v_ = m;
        return e;
    }
    /// Reads e_ijk from a tensor assumed symmetric in (j, k).
    static PiezoTensor from_full(const Tensor3& t) {
        Voigt36 m;
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 6; ++p) {
                const auto jk = voigt_pair(p);
                m(i, p) = t(i, jk[0], jk[1]);
            }
        return from_voigt(m);
    }

    const Voigt36& voigt() const { return v_; }
    double operator()(int i, int j, int k) const { return v_(i, voigt_index(j, k)); }
    Tensor3 full() const {
        Tensor3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) t(i, j, k) = (*this)(i, j, k);
        return t;
    }
    /// Full 27-component Frobenius norm.
    double norm() const { return std::sqrt(norm_squared(full())); }

    friend PiezoTensor operator+(const PiezoTensor& a, const PiezoTensor& b) { return from_voigt(a.v_ + b.v_); }
    friend PiezoTensor operator-(const PiezoTensor& a, const PiezoTensor& b) { return from_voigt(a.v_ - b.v_); }
    friend double inner(const PiezoTensor& a, const PiezoTensor& b) {
        const Tensor3 x = a.full(), y = b.full();
        double s = 0.0;
        for (std::size_t i = 0; i < 27; ++i) s += x.c[i] * y.c[i];
        return s;
    }

private:
    Voigt36 v_;
};

template <class T>
std::array<std::array<T, 6>, 3> h3_voigt(const std::array<T, 7>& x) {
    const T &a = x[0], &b = x[1], &c = x[2], &d = x[3], &e = x[4], &f = x[5], &g = x[6];
    return {{{a, c, -a - c, d, -f - g, b}, {b, e, -b - e, f, d, c}, {-f - g, f, g, -b - e, -a - c, d}}};
}

template <class T>
Tensor3T<T> h3_full(const std::array<T, 7>& x) {
    const auto v = h3_voigt(x);
    Tensor3T<T> t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) t(i, j, k) = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(voigt_index(j, k))];
    return t;
}

struct H3Params {
    std::array<double, 7> x{};  // h111, h112, h122, h123, h222, h223, h333

    static H3Params cubic(double delta) { return {{0, 0, 0, delta, 0, 0, 0}}; }
    static H3Params from_tensor(const Tensor3& h) {
        return {{h(0, 0, 0), h(0, 0, 1), h(0, 1, 1), h(0, 1, 2), h(1, 1, 1), h(1, 1, 2), h(2, 2, 2)}};
    }

    Voigt36 voigt() const {
        const auto v = h3_voigt(x);
        Voigt36 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 6; ++j) m(i, j) = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return m;
    }
    Tensor3 full() const { return h3_full(x); }
    PiezoTensor tensor() const { return PiezoTensor::from_voigt(voigt()); }
    double norm() const { return std::sqrt(norm_squared(full())); }
};

struct PiezoSplit {
    PiezoTensor g;
    H3Params h;
};

/// h = e^s - (3/5) q (.) tr(e^s), g = e - h.
inline PiezoSplit piezo_harmonic_part(const PiezoTensor& e) {
    const Tensor3 t = e.full();
    Tensor3 es;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) es(i, j, k) = (t(i, j, k) + t(j, i, k) + t(k, j, i)) / 3.0;
    std::array<double, 3> tr{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) tr[static_cast<std::size_t>(i)] += es(i, k, k);
    Tensor3 h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const double qt = (kronecker(i, j) * tr[static_cast<std::size_t>(k)] +
                                   kronecker(i, k) * tr[static_cast<std::size_t>(j)] +
                                   kronecker(j, k) * tr[static_cast<std::size_t>(i)]) /
                                  3.0;
                h(i, j, k) = es(i, j, k) - 0.6 * qt;
            }
    PiezoSplit s;
    s.h = H3Params::from_tensor(h);
    s.g = e - s.h.tensor();
    return s;
}

/// The five independent components (11, 22, 12, 13, 23) of d2' = (h : h)'.
template <class T>
std::array<T, 5> d2prime_piezo_components(const std::array<T, 7>& x) {
    const T &h111 = x[0], &h112 = x[1], &h122 = x[2], &h123 = x[3], &h222 = x[4], &h223 = x[5], &h333 = x[6];
    return {(2.0 / 3.0) * (h111 * h111 - 3.0 * h112 * h222 - 2.0 * h222 * h222 + 3.0 * h223 * h333 + h333 * h333),
            (-2.0 / 3.0) * (2.0 * h111 * h111 + 3.0 * h111 * h122 - h222 * h222 + h333 * (3.0 * h223 + 2.0 * h333)),
            h111 * (2.0 * h112 + h222) + 3.0 * h112 * h122 + 2.0 * h122 * h222 - 2.0 * h123 * h333,
            h111 * h223 + h122 * (3.0 * h223 + h333) - 2.0 * h123 * h222,
            -2.0 * h111 * h123 - h112 * (3.0 * h223 + 2.0 * h333) - h222 * (h223 + h333)};
}

inline Sym2Tensor d2prime_piezo(const H3Params& h) {
    const auto c = d2prime_piezo_components(h.x);
    return Sym2Tensor::from_components(c[0], c[1], -c[0] - c[1], c[4], c[3], c[2]);
}

/// d2 = h : h by direct contraction, (d2)_ij = h_ikl h_klj.
inline Eigen::Matrix3d d2_piezo_contract(const Tensor3& h) {
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) d(i, j) += h(i, k, l) * h(k, l, j);
    return d;
}

inline Sym2Tensor d2prime_piezo_contract(const Tensor3& h) {
    return traceless(Sym2Tensor::from_matrix(d2_piezo_contract(h), 1e-8));
}

struct H3Invariants {
    double I2 = 0.0, I4 = 0.0, I6 = 0.0, I10 = 0.0, I15 = 0.0;
};

/// I2 = ||h||^2, I4 = ||d2'||^2, I6 = ||v3||^2, I10 = ||d2' x v3||^2,
/// I15 = det(v3, v5, v7), with v3 = h : d2', v5 = d2' v3, v7 = d2' v5.
inline H3Invariants invariants_h3(const H3Params& hp) {
    const Tensor3 h = hp.full();
    const Eigen::Matrix3d d2p = traceless(Sym2Tensor::from_matrix(d2_piezo_contract(h), 1e-8)).matrix();
    Eigen::Vector3d v3 = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) v3[i] += h(i, j, k) * d2p(j, k);
    const Eigen::Vector3d v5 = d2p * v3, v7 = d2p * v5;
    // (d2' x v3)_ij = -(d2'_ik eps_kjl v3_l)^s
    Eigen::Matrix3d X = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) X(i, j) -= d2p(i, k) * levi_civita(k, j, l) * v3[l];
    X = 0.5 * (X + X.transpose()).eval();
    Eigen::Matrix3d V;
    V << v3.transpose(), v5.transpose(), v7.transpose();
    H3Invariants r;
    r.I2 = norm_squared(h);
    r.I4 = d2p.squaredNorm();
    r.I6 = v3.squaredNorm();
    r.I10 = X.squaredNorm();
    r.I15 = V.determinant();
    return r;
}

struct SmithBaoInvariants {
    double K4 = 0.0, K10 = 0.0, K15 = 0.0;
};

/// K4 = tr d2^2, K10 = h(v3, v3, v3), K15 = det(v3, d2 v3, v3 . h . v3).
inline SmithBaoInvariants smith_bao_invariants(const H3Params& hp) {
    const Tensor3 h = hp.full();
    const Eigen::Matrix3d d2 = d2_piezo_contract(h);
    const Eigen::Matrix3d d2p = d2 - d2.trace() / 3.0 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d v3 = Eigen::Vector3d::Zero(), w = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) v3[i] += h(i, j, k) * d2p(j, k);
    double k10 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                k10 += h(i, j, k) * v3[i] * v3[j] * v3[k];
                w[j] += v3[i] * h(i, j, k) * v3[k];
            }
    Eigen::Matrix3d V;
    V << v3.transpose(), (d2 * v3).transpose(), w.transpose();
    return {(d2 * d2).trace(), k10, V.determinant()};
}

struct PiezoCubicTest {
    bool at_least_cubic = false;
    bool strictly_cubic = false;
    double g_residual = 0.0;      // ||g|| / ||e||
    double d2p_residual = 0.0;    // ||d2'|| / ||h||^2
    double harmonic_ratio = 0.0;  // ||h|| / ||e||
};

inline PiezoCubicTest cubic_test_piezo(const PiezoTensor& e, double tol = 1e-6) {
    PiezoCubicTest t;
    const PiezoSplit s = piezo_harmonic_part(e);
    const double ne = e.norm(), nh = s.h.norm();
    t.g_residual = ne > 0.0 ? s.g.norm() / ne : 0.0;
    t.d2p_residual = nh > 0.0 ? d2prime_piezo(s.h).norm() / (nh * nh) : 0.0;
    t.harmonic_ratio = ne > 0.0 ? nh / ne : 0.0;
    t.at_least_cubic = t.g_residual <= tol && t.d2p_residual <= tol;
    t.strictly_cubic = t.at_least_cubic && t.harmonic_ratio > tol;
    return t;
}

inline bool is_cubic_piezo(const PiezoTensor& e, double tol = 1e-6, bool strict = false) {
    const PiezoCubicTest t = cubic_test_piezo(e, tol);
    return strict ? t.strictly_cubic : t.at_least_cubic;
}

/// min ||h0 - h(x)||^2 subject to d2'(h(x)) = 0; the closest cubic tensor is e* = h(x*).
inline DistanceProblem build_distance_problem_piezo(const PiezoTensor& e0) {
    DistanceProblem p;
    p.stratum = "cubic-piezo";
    p.variables = {"h111", "h112", "h122", "h123", "h222", "h223", "h333"};
    const PiezoSplit s0 = piezo_harmonic_part(e0);
    const Tensor3 h0 = s0.h.full();

    const auto xv = Polynomial::variables(7);
    std::array<Polynomial, 7> x;
    for (std::size_t i = 0; i < 7; ++i) x[i] = xv[i];
    const Tensor3T<Polynomial> h = h3_full(x);
    Polynomial f = Polynomial::constant(7, 0.0);
    for (std::size_t c = 0; c < 27; ++c) {
        const Polynomial r = h0.c[c] - h.c[c];
        f += r * r;
    }
    p.f = f;
    for (const auto& g : d2prime_piezo_components(x)) p.constraints.push_back(Constraint::eq(g.with_n(7)));
    const double ng = s0.g.norm();
    p.offset = ng * ng;
    p.reference_norm = e0.norm();

    // Best cubic normal form h123 = delta in the given frame, or 0.
    auto fx = [&](const Eigen::VectorXd& v) { return f.evaluate(std::span<const double>(v.data(), 7)); };
    Eigen::VectorXd e = Eigen::VectorXd::Zero(7);
    e[3] = 1.0;
    const double f0 = fx(Eigen::VectorXd::Zero(7)), fp = fx(e), fm = fx(-e);
    const double A = 0.5 * (fp + fm) - f0, B = 0.5 * (fp - fm);
    p.x_ref = Eigen::VectorXd::Zero(7);
    if (A > 0.0 && fx(-B / (2.0 * A) * e) < f0) p.x_ref = -B / (2.0 * A) * e;
    const double nh = s0.h.norm();
    p.variable_scale = nh > 0.0 ? nh / 3.0 : 1.0;
    return p;
}

}  // namespace strata::mech
