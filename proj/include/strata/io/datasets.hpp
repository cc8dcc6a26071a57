#pragma once

/**
 * @file datasets.hpp
 * @brief Embedded tensors: the orthotropic a0 and the reference point b, the
 * CMSX-4 elasticity tensor E0 and the raw wurtzite Cr_x Al_{1-x} N
 * piezoelectricity tensors.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata::io {

enum class TensorKind { sym2, elasticity, piezo };

inline const char* to_string(TensorKind k) {
    switch (k) {
        case TensorKind::sym2: return "sym2";
        case TensorKind::elasticity: return "elasticity";
        case TensorKind::piezo: return "piezo";
    }
    return "unknown";
}

inline TensorKind tensor_kind_from_string(const std::string& s) {
    if (s == "sym2") return TensorKind::sym2;
    if (s == "elasticity") return TensorKind::elasticity;
    if (s == "piezo") return TensorKind::piezo;
    throw std::invalid_argument("unknown tensor kind '" + s + "'");
}

inline std::pair<int, int> voigt_shape(TensorKind k) {
    switch (k) {
        case TensorKind::sym2: return {3, 3};
        case TensorKind::elasticity: return {6, 6};
        case TensorKind::piezo: return {3, 6};
    }
    return {0, 0};
}

struct Dataset {
    std::string id;
    TensorKind kind;
    Eigen::MatrixXd voigt;  // 3x3 matrix, 6x6 Voigt or 3x6 Voigt
    std::string units;
    std::string source;
};

namespace detail {

inline Eigen::MatrixXd rows(int r, int c, std::initializer_list<double> v) {
    Eigen::MatrixXd m(r, c);
    auto it = v.begin();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = *it++;
    return m;
}

inline Dataset wurtzite(const std::string& x, std::initializer_list<double> v) {
    return {"cr" + x, TensorKind::piezo, rows(3, 6, v), "C/m^2",
            "raw DFT piezoelectricity tensor of wurtzite Cr_x Al_{1-x} N, x = " + x + " (Manna et al. 2018)"};
}

}  // namespace detail

inline const std::vector<Dataset>& datasets() {
    static const std::vector<Dataset> all = [] {
        using detail::rows;
        using detail::wurtzite;
        std::vector<Dataset> d;
        d.push_back({"a0", TensorKind::sym2, rows(3, 3, {-7, 4, -4, 4, 5, -2, -4, -2, 5}), "",
                     "orthotropic symmetric second-order tensor"});
        d.push_back({"b", TensorKind::sym2, rows(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, -2}), "",
                     "transversely isotropic reference point for the ball constraint"});
        d.push_back({"E0", TensorKind::elasticity,
                     rows(6, 6, {243, 136, 135, 22,  52,  -17, 136, 239, 137, -28, 11,  16,
                                 135, 137, 233, 29,  -49, 3,   22,  -28, 29,  133, -10, -4,
                                 52,  11,  -49, -10, 119, -2,  -17, 16,  3,   -4,  -2,  130}),
                     "GPa", "Ni-based single crystal superalloy CMSX-4 (Francois et al. 1998)"});
        d.push_back({"aln", TensorKind::piezo,
                     rows(3, 6, {0, 0, -0.0505, -0.0394, -0.2854, -0.0637, -0.0637, -0.0042, 0.0332, -0.2818, -0.0058,
                                 0.0185, -0.5807, -0.5822, 1.4607, 0.0022, 0.0002, 0.0043}),
                     "C/m^2", "raw DFT piezoelectricity tensor of wurtzite AlN, x = 0 (Manna et al. 2018)"});
        d.push_back(wurtzite("0.035", {-0.0329, 0.0599, -0.0195, 0.0267, -0.2327, -0.0988, -0.0548, -0.0129, -0.0063,
                                       -0.2075, -0.0051, -0.0293, -0.5872, -0.4900, 1.5560, -0.0218, -0.0278, -0.0115}));
        d.push_back(wurtzite("0.07", {-0.0393, 0.0185, 0.0048, 0.0290, -0.2171, -0.0436, -0.07, 0.0554, 0.0137, -0.1574,
                                      0.0198, 0.0044, -0.5179, -0.5886, 1.6521, -0.0085, -0.0095, -0.0119}));
        d.push_back(wurtzite("0.10", {0.0291, -0.0141, -0.0523, -0.0016, 0.0028, 0.0138, -0.0611, 0.0819, -0.0567,
                                      -0.1841, 0.0116, 0.0270, -0.5244, -0.5918, 1.7715, -0.0018, 0.0066, -0.0145}));
        d.push_back(wurtzite("0.13", {-0.0985, 0.1138, 0.047, -0.0169, -0.0169, -0.0984, 0.0558, 0.0183, -0.0367,
                                      -0.1735, -0.0384, 0.0474, -0.5441, -0.5455, 1.8506, -0.0148, -0.0016, -0.0193}));
        d.push_back(wurtzite("0.16", {0.0315, -0.0375, 0.0273, 0.0206, 0.0206, 0.0933, -0.215, -0.0717, 0.0845, -0.2157,
                                      0.0438, -0.0332, -0.4517, -0.5587, 1.9243, 0.0447, 0.0277, -0.0482}));
        d.push_back(wurtzite("0.19", {0.4524, 0.3564, -0.0827, -0.0276, -0.0276, 0.1067, -0.0783, 0.0868, 0.0318, 0.0037,
                                      -0.1053, -0.0765, -0.5768, -0.4566, 2.0350, -0.1332, -0.1016, -0.1253}));
        d.push_back(wurtzite("0.225", {0.0428, 0.0974, -0.0429, -0.0319, -0.0363, 0.0099, -0.1399, -0.2386, -0.0253,
                                       -0.1505, 0.0143, -0.1770, -0.5800, -0.5552, 2.2197, 0.0164, 0.0048, 0.0234}));
        d.push_back(wurtzite("0.255", {-0.0914, 0.0758, 0.0000, -0.0022, -0.2835, 0.0000, 0.0000, -0.0022, 0.0000,
                                       -0.2660, 0.0002, -0.0020, -0.6063, -0.5847, 2.3709, -0.0714, -0.0738, -0.0559}));
        return d;
    }();
    return all;
}

inline const Dataset& find_dataset(const std::string& id) {
    const auto& all = datasets();
    auto it = std::find_if(all.begin(), all.end(), [&](const Dataset& d) { return d.id == id; });
    if (it == all.end()) throw std::invalid_argument("unknown dataset '" + id + "'");
    return *it;
}

}  // namespace strata::io
