#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "strata/mech/elasticity.hpp"
#include "strata/mech/piezo.hpp"
#include "strata/moment.hpp"

namespace strata::test {

using Rng = std::mt19937_64;

inline double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// Haar-distributed rotation: QR of a Gaussian matrix with the sign fix.
inline Eigen::Matrix3d random_rotation(Rng& rng) {
    Eigen::Matrix3d g;
    for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = normal(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 3; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

inline mech::Sym2Tensor random_sym2(Rng& rng) {
    return mech::Sym2Tensor::from_components(normal(rng), normal(rng), normal(rng), normal(rng), normal(rng),
                                             normal(rng));
}

inline mech::ElasticityTensor random_elasticity(Rng& rng) {
    mech::Voigt6 m;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) m(i, j) = m(j, i) = normal(rng);
    return mech::ElasticityTensor::from_voigt(m);
}

inline mech::PiezoTensor random_piezo(Rng& rng) {
    mech::Voigt36 m;
    for (int i = 0; i < 18; ++i) m(i / 6, i % 6) = normal(rng);
    return mech::PiezoTensor::from_voigt(m);
}

inline mech::H4Params random_h4(Rng& rng) {
    mech::H4Params h;
    for (auto& v : h.x) v = normal(rng);
    return h;
}

inline mech::H3Params random_h3(Rng& rng) {
    mech::H3Params h;
    for (auto& v : h.x) v = normal(rng);
    return h;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// E[x^k] for a standard normal variable.
inline double gaussian_moment(int k) {
    if (k % 2) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 0; j -= 2) m *= j;
    return m;
}

/// Moments of the standard Gaussian on R^n up to degree 2d.
inline MomentVector gaussian_moments(std::size_t n, int d) {
    MomentVector y(n, d);
    for (std::size_t a = 0; a < y.size(); ++a) {
        double m = 1.0;
        for (std::size_t i = 0; i < n; ++i) m *= gaussian_moment(y.basis()[a][i]);
        y.values()[static_cast<Eigen::Index>(a)] = m;
    }
    return y;
}

/// Moments of sum_i w_i delta_{x_i} computed directly from the monomials.
inline MomentVector explicit_atomic_moments(std::size_t n, int d, const std::vector<Eigen::VectorXd>& pts,
                                            const std::vector<double>& w) {
    MomentVector y(n, d);
    for (std::size_t a = 0; a < y.size(); ++a) {
        double s = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double m = w[p];
            for (std::size_t i = 0; i < n; ++i)
                for (int e = 0; e < y.basis()[a][i]; ++e) m *= pts[p][static_cast<Eigen::Index>(i)];
            s += m;
        }
        y.values()[static_cast<Eigen::Index>(a)] = s;
    }
    return y;
}

inline double eval(const Polynomial& p, const Eigen::VectorXd& x) {
    return p.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

}  // namespace strata::test
