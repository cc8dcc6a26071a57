#pragma once

#include <Eigen/Dense>

#include "strata/mech/elasticity.hpp"
#include "strata/mech/piezo.hpp"

namespace strata::test {

using mech::ElasticityTensor;
using mech::PiezoTensor;
using mech::Tensor3;
using mech::Tensor4;
using Eigen::Matrix3d;
using mech::levi_civita;
using mech::symmetrize3;

inline double frob4(const ElasticityTensor& E) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s += E(i, j, k, l) * E(i, j, k, l);
    return s;
}

inline double frob3(const PiezoTensor& e) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) s += e(i, j, k) * e(i, j, k);
    return s;
}

// (x)_ijk = -(a_il eps_ljs b_sk) symmetrized over ijk, from the definition.
inline Tensor3 cross_oracle(const Matrix3d& a, const Matrix3d& b) {
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m) s -= a(i, l) * levi_civita(l, j, m) * b(m, k);
                t(i, j, k) = s;
            }
    return symmetrize3(t);
}

inline Matrix3d deviator(const Matrix3d& m) { return m - m.trace() / 3.0 * Matrix3d::Identity(); }

inline Matrix3d d2_ela_oracle(const Tensor4& H) {
    Matrix3d d = Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 3; ++p)
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) d(i, j) += H(i, p, r, s) * H(p, r, s, j);
    return d;
}

inline Matrix3d d2_piezo_oracle(const Tensor3& h) {
    Matrix3d d = Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) d(i, j) += h(i, k, l) * h(k, l, j);
    return d;
}

}  // namespace strata::test
