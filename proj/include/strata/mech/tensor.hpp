#pragma once

/**
 * @file tensor.hpp
 * @brief Small dense tensors on R^3, Voigt index maps and the symmetric
 * second-order tensor type.
 *
 * Components are taken in an orthonormal basis, with no distinction between
 * covariant and contravariant indices. Voigt pairs are ordered
 * 11, 22, 33, 23, 13, 12 and carry no shear factors.
 */

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace strata::mech {

/// Voigt position of the symmetric index pair (i, j), 0-based.
constexpr int voigt_index(int i, int j) {
    if (i == j) return i;
    const int s = i + j;  // (1,2) -> 3, (0,2) -> 2 -> 4, (0,1) -> 1 -> 5
    return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

/// Index pair of Voigt position p.
constexpr std::array<int, 2> voigt_pair(int p) {
    constexpr std::array<std::array<int, 2>, 6> pairs{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
    return pairs[static_cast<std::size_t>(p)];
}

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T>
struct Tensor3T {
    std::array<T, 27> c{};
    T& operator()(int i, int j, int k) { return c[static_cast<std::size_t>(9 * i + 3 * j + k)]; }
    const T& operator()(int i, int j, int k) const { return c[static_cast<std::size_t>(9 * i + 3 * j + k)]; }
};

template <class T>
struct Tensor4T {
    std::array<T, 81> c{};
    T& operator()(int i, int j, int k, int l) { return c[static_cast<std::size_t>(27 * i + 9 * j + 3 * k + l)]; }
    const T& operator()(int i, int j, int k, int l) const {
        return c[static_cast<std::size_t>(27 * i + 9 * j + 3 * k + l)];
    }
};

using Tensor3 = Tensor3T<double>;
using Tensor4 = Tensor4T<double>;

inline double levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

inline double kronecker(int i, int j) { return i == j ? 1.0 : 0.0; }

template <class T>
Mat3<T> matmul(const Mat3<T>& a, const Mat3<T>& b) {
    Mat3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s = a[i][0] * b[0][j];
            s += a[i][1] * b[1][j];
            s += a[i][2] * b[2][j];
            r[i][j] = s;
        }
    return r;
}

/// Total symmetrization of a third-order tensor.
template <class T>
Tensor3T<T> symmetrize3(const Tensor3T<T>& t) {
    Tensor3T<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                r(i, j, k) = (t(i, j, k) + t(i, k, j) + t(j, i, k) + t(j, k, i) + t(k, i, j) + t(k, j, i)) / 6.0;
    return r;
}

inline double norm_squared(const Tensor3& t) {
    double s = 0.0;
    for (double v : t.c) s += v * v;
    return s;
}
inline double norm_squared(const Tensor4& t) {
    double s = 0.0;
    for (double v : t.c) s += v * v;
    return s;
}

/// Symmetric second-order tensor. Symmetric by construction; matrices are
/// validated on entry.
class Sym2Tensor {
public:
    Sym2Tensor() : m_(Eigen::Matrix3d::Zero()) {}

    static Sym2Tensor from_components(double a11, double a22, double a33, double a23, double a13, double a12) {
        Sym2Tensor s;
        s.m_ << a11, a12, a13, a12, a22, a23, a13, a23, a33;
        return s;
    }
    static Sym2Tensor from_voigt(const Eigen::Matrix<double, 6, 1>& v) {
        return from_components(v[0], v[1], v[2], v[3], v[4], v[5]);
    }
    /// Throws when m is not symmetric within tol relative to its largest entry.
    static Sym2Tensor from_matrix(const Eigen::Matrix3d& m, double tol = 1e-9) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
            throw std::invalid_argument("Sym2Tensor: matrix is not symmetric");
        Sym2Tensor s;
        s.m_ = 0.5 * (m + m.transpose());
        return s;
    }
    static Sym2Tensor identity() { return from_components(1, 1, 1, 0, 0, 0); }

    const Eigen::Matrix3d& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }
    Eigen::Matrix<double, 6, 1> voigt() const {
        Eigen::Matrix<double, 6, 1> v;
        v << m_(0, 0), m_(1, 1), m_(2, 2), m_(1, 2), m_(0, 2), m_(0, 1);
        return v;
    }
    Mat3<double> array() const {
        Mat3<double> a;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] = m_(i, j);
        return a;
    }

    double trace() const { return m_.trace(); }
    double norm() const { return m_.norm(); }
    Sym2Tensor square() const { return unchecked(m_ * m_); }

    friend Sym2Tensor operator+(const Sym2Tensor& a, const Sym2Tensor& b) { return unchecked(a.m_ + b.m_); }
    friend Sym2Tensor operator-(const Sym2Tensor& a, const Sym2Tensor& b) { return unchecked(a.m_ - b.m_); }
    friend Sym2Tensor operator*(double s, const Sym2Tensor& a) { return unchecked(s * a.m_); }
    friend Sym2Tensor operator*(const Sym2Tensor& a, double s) { return unchecked(s * a.m_); }

private:
    static Sym2Tensor unchecked(const Eigen::Matrix3d& m) {
        Sym2Tensor s;
        s.m_ = 0.5 * (m + m.transpose());
        return s;
    }
    Eigen::Matrix3d m_;
};

/// a' = a - tr(a)/3 q.
inline Sym2Tensor traceless(const Sym2Tensor& a) { return a - (a.trace() / 3.0) * Sym2Tensor::identity(); }

/// Totally symmetric third-order tensor, stored as a full tensor whose
/// symmetry is enforced on construction.
class Sym3Tensor {
public:
    Sym3Tensor() = default;
    explicit Sym3Tensor(const Tensor3& t) : t_(symmetrize3(t)) {}

    const Tensor3& full() const { return t_; }
    double operator()(int i, int j, int k) const { return t_(i, j, k); }
    double norm() const { return std::sqrt(norm_squared(t_)); }
    double max_abs() const {
        double m = 0.0;
        for (double v : t_.c) m = std::max(m, std::abs(v));
        return m;
    }

    /// The ten independent components 111,112,113,122,123,133,222,223,233,333.
    std::array<double, 10> components() const {
        std::array<double, 10> r{};
        std::size_t p = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                for (int k = j; k < 3; ++k) r[p++] = t_(i, j, k);
        return r;
    }

private:
    Tensor3 t_{};
};

/// Rotation action on a fourth-order tensor: (g.T)_{ijkl} = g_ia g_jb g_kc g_ld T_abcd.
inline Tensor4 rotate(const Tensor4& t, const Eigen::Matrix3d& g) {
    Tensor4 a = t, b;
    for (int axis = 0; axis < 4; ++axis) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        std::array<int, 4> idx{i, j, k, l};
                        double s = 0.0;
                        for (int m = 0; m < 3; ++m) {
                            std::array<int, 4> src = idx;
                            src[static_cast<std::size_t>(axis)] = m;
                            s += g(idx[static_cast<std::size_t>(axis)], m) * a(src[0], src[1], src[2], src[3]);
                        }
                        b(i, j, k, l) = s;
                    }
        a = b;
    }
    return a;
}

inline Tensor3 rotate(const Tensor3& t, const Eigen::Matrix3d& g) {
    Tensor3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c) s += g(i, a) * g(j, b) * g(k, c) * t(a, b, c);
                r(i, j, k) = s;
            }
    return r;
}

inline Sym2Tensor rotate(const Sym2Tensor& a, const Eigen::Matrix3d& g) {
    return Sym2Tensor::from_matrix(g * a.matrix() * g.transpose(), 1e-6);
}

}  // namespace strata::mech
