#pragma once

/**
 * @file psd.hpp
 * @brief Positive semidefiniteness of a symmetric polynomial matrix as the
 * nonnegativity of the elementary symmetric functions of its eigenvalues.
 */

#include <stdexcept>
#include <vector>

#include "strata/poly.hpp"

namespace strata::mech {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

namespace detail {

inline Polynomial determinant(const PolyMatrix& a, const std::vector<int>& rows, std::vector<int> cols) {
    const std::size_t k = rows.size();
    if (k == 1) return a[static_cast<std::size_t>(rows[0])][static_cast<std::size_t>(cols[0])];
    Polynomial det;
    const std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < k; ++j) {
        const Polynomial& pivot = a[static_cast<std::size_t>(rows[0])][static_cast<std::size_t>(cols[j])];
        std::vector<int> sub_cols = cols;
        sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(j));
        if (pivot.is_zero()) continue;
        const Polynomial minor = pivot * determinant(a, sub_rows, sub_cols);
        if (j % 2 == 0)
            det += minor;
        else
            det -= minor;
    }
    return det;
}

}  // namespace detail

/// sigma_1..sigma_n: sigma_k is the sum of the k x k principal minors.
inline std::vector<Polynomial> psd_sigma_constraints(const PolyMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0 || n > 6) throw std::invalid_argument("psd_sigma_constraints: size must be in 1..6");
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("psd_sigma_constraints: matrix must be square");
    std::vector<Polynomial> sigma(n);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(static_cast<int>(i));
        sigma[idx.size() - 1] += detail::determinant(a, idx, idx);
    }
    return sigma;
}

}  // namespace strata::mech
