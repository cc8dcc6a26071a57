#pragma once

/**
 * @file tensor_json.hpp
 * @brief Tensor files: {"kind": "elasticity", "units": "GPa", "voigt": [[...], ...]}.
 *
 * "voigt" is row-major: 3x3 for sym2, 6x6 for elasticity, 3x6 for piezo.
 */

#include <Eigen/Dense>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "strata/io/datasets.hpp"

namespace strata::io {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty array of rows");
    const auto r = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) throw std::invalid_argument("expected a non-empty array of rows");
    const auto c = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw std::invalid_argument("rows have different lengths");
        for (Eigen::Index k = 0; k < c; ++k) {
            const auto& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) throw std::invalid_argument("non-numeric entry");
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

/// Shape for the kind, finite entries, and symmetry within 1e-9 relative for square layouts.
inline void validate_tensor(TensorKind kind, const Eigen::MatrixXd& m) {
    const auto [r, c] = voigt_shape(kind);
    if (m.rows() != r || m.cols() != c)
        throw std::invalid_argument(std::string(to_string(kind)) + " tensor must be " + std::to_string(r) + "x" +
                                    std::to_string(c) + ", got " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()));
    if (!m.allFinite()) throw std::invalid_argument("tensor has non-finite entries");
    if (r == c) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
            throw std::invalid_argument(std::string(to_string(kind)) + " matrix is not symmetric");
    }
}

inline nlohmann::json tensor_to_json(const Dataset& d) {
    nlohmann::json j;
    if (!d.id.empty()) j["id"] = d.id;
    j["kind"] = to_string(d.kind);
    j["units"] = d.units;
    j["voigt"] = matrix_to_json(d.voigt);
    if (!d.source.empty()) j["source"] = d.source;
    return j;
}

inline Dataset tensor_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("tensor file must hold a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw std::invalid_argument("missing string field 'kind'");
    if (!j.contains("voigt")) throw std::invalid_argument("missing field 'voigt'");
    Dataset d;
    d.kind = tensor_kind_from_string(j["kind"].get<std::string>());
    d.voigt = matrix_from_json(j["voigt"]);
    validate_tensor(d.kind, d.voigt);
    if (j.contains("units")) d.units = j["units"].get<std::string>();
    if (j.contains("id")) d.id = j["id"].get<std::string>();
    if (j.contains("source")) d.source = j["source"].get<std::string>();
    return d;
}

inline Dataset load_tensor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("'" + path + "': " + e.what());
    }
    Dataset d = tensor_from_json(j);
    if (d.id.empty()) d.id = path;
    return d;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace strata::io
