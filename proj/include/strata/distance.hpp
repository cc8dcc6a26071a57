#pragma once

/**
 * @file distance.hpp
 * @brief Distance from a tensor to a symmetry stratum via the moment hierarchy.
 */

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "strata/hierarchy.hpp"
#include "strata/io/datasets.hpp"
#include "strata/mech/elasticity.hpp"
#include "strata/mech/piezo.hpp"
#include "strata/mech/sym2.hpp"

namespace strata {

using io::TensorKind;

/// Accepts the canonical names and the short alias "cubic"; returns the canonical name.
inline std::string resolve_stratum(TensorKind kind, const std::string& stratum) {
    const std::string want = kind == TensorKind::sym2 ? "O2" : kind == TensorKind::elasticity ? "cubic-ela" : "cubic-piezo";
    if (stratum.empty() || stratum == want) return want;
    if (stratum == "cubic" && kind != TensorKind::sym2) return want;
    throw std::invalid_argument("stratum '" + stratum + "' is not available for " + io::to_string(kind) +
                                " tensors (expected " + want + ")");
}

inline mech::DistanceProblem build_distance_problem(TensorKind kind, const Eigen::MatrixXd& voigt) {
    const auto [r, c] = io::voigt_shape(kind);
    if (voigt.rows() != r || voigt.cols() != c)
        throw std::invalid_argument("expected a " + std::to_string(r) + "x" + std::to_string(c) + " matrix for " +
                                    io::to_string(kind));
    switch (kind) {
        case TensorKind::sym2: return mech::build_distance_problem_sym2(mech::Sym2Tensor::from_matrix(voigt));
        case TensorKind::elasticity: return mech::build_distance_problem_ela(mech::ElasticityTensor::from_voigt(voigt));
        case TensorKind::piezo: return mech::build_distance_problem_piezo(mech::PiezoTensor::from_voigt(voigt));
    }
    throw std::logic_error("unreachable");
}

/// Ball constant used when none is given: 1.5 f(x_ref). When x_ref already lies
/// on the stratum (f(x_ref) = 0) a ball of 1% of f(0) is used instead.
inline double auto_ball_constant(const mech::DistanceProblem& p) {
    auto fx = [&](const Eigen::VectorXd& x) {
        return p.f.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    };
    const double f0 = fx(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.variables.size())));
    const double c = 1.5 * fx(p.x_ref);
    if (c > 1e-12 * std::max(1.0, f0)) return c;
    return f0 > 0.0 ? 0.01 * f0 : 1.0;
}

struct DistanceOptions {
    HierarchyOptions hierarchy;
    std::optional<double> c;               // ball constant; auto_ball_constant when empty
    std::optional<double> variable_scale;  // overrides the problem's suggestion
};

struct DistanceResult {
    TensorKind kind = TensorKind::sym2;
    std::string stratum;
    mech::DistanceProblem problem;
    HierarchyResult hierarchy;
    double c = 0.0;
    double variable_scale = 1.0;
    std::optional<double> distance;       // sqrt(offset + rho) when certified
    std::optional<double> relative;       // distance / ||T0||
    std::optional<double> distance_lower;  // sqrt(max(0, offset + bound)) whenever a bound exists
    std::optional<Eigen::VectorXd> x;      // first minimizer in the reduced variables
    std::optional<Eigen::MatrixXd> closest;  // the closest tensor, same layout as the input
    double constraint_violation = 0.0;     // stratum equations at x, absolute
    double stratum_residual = 0.0;         // scale-free membership test of the closest tensor
    double seconds = 0.0;
};

inline Eigen::MatrixXd closest_tensor(TensorKind kind, const Eigen::MatrixXd& voigt0, const Eigen::VectorXd& x) {
    switch (kind) {
        case TensorKind::sym2: return mech::sym2_from_x(x).matrix();
        case TensorKind::elasticity:
            return mech::cubic_tensor_from_solution(
                       mech::harmonic_decompose_ela(mech::ElasticityTensor::from_voigt(voigt0)), x)
                .voigt();
        case TensorKind::piezo: {
            mech::H3Params h;
            for (std::size_t i = 0; i < 7; ++i) h.x[i] = x[static_cast<Eigen::Index>(i)];
            return h.voigt();
        }
    }
    throw std::logic_error("unreachable");
}

inline double stratum_residual(TensorKind kind, const Eigen::MatrixXd& t) {
    switch (kind) {
        case TensorKind::sym2: return mech::classify_sym2(mech::Sym2Tensor::from_matrix(t, 1e-6)).transverse_residual;
        case TensorKind::elasticity: {
            const auto ct = mech::cubic_test_ela(mech::ElasticityTensor::from_voigt(t, 1e-6));
            return std::max({ct.dp_residual, ct.vp_residual, ct.d2p_residual});
        }
        case TensorKind::piezo: {
            const auto ct = mech::cubic_test_piezo(mech::PiezoTensor::from_voigt(t));
            return std::max(ct.g_residual, ct.d2p_residual);
        }
    }
    throw std::logic_error("unreachable");
}

inline DistanceResult solve_distance(TensorKind kind, const Eigen::MatrixXd& voigt, const std::string& stratum,
                                     const DistanceOptions& options = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    DistanceResult out;
    out.kind = kind;
    out.stratum = resolve_stratum(kind, stratum);
    out.problem = build_distance_problem(kind, voigt);
    const mech::DistanceProblem& p = out.problem;
    out.c = options.c ? *options.c : auto_ball_constant(p);
    const auto cons = add_ball_constraint(p.f, p.constraints, out.c, p.x_ref);

    HierarchyOptions ho = options.hierarchy;
    out.variable_scale = options.variable_scale ? *options.variable_scale : p.variable_scale;
    ho.variable_scale = out.variable_scale;
    out.hierarchy = run_hierarchy(p.f, cons, ho);

    const HierarchyResult& h = out.hierarchy;
    if (h.xi >= 0) out.distance_lower = std::sqrt(std::max(0.0, p.offset + h.bound));
    if (h.xi == 1) {
        out.distance = std::sqrt(std::max(0.0, p.offset + h.bound));
        if (p.reference_norm > 0.0) out.relative = *out.distance / p.reference_norm;
        out.x = h.minimizers.front();
        const std::span<const double> xs(out.x->data(), static_cast<std::size_t>(out.x->size()));
        out.constraint_violation = strata::constraint_violation(p.constraints, xs);
        out.closest = closest_tensor(kind, voigt, *out.x);
        out.stratum_residual = stratum_residual(kind, *out.closest);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace strata
