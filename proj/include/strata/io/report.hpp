#pragma once

/**
 * @file report.hpp
 * @brief Solver reports: JSON round-trip and a plain-text summary.
 */

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "strata/distance.hpp"

namespace strata::io {

using Matrix = std::vector<std::vector<double>>;

inline Matrix to_rows(const Eigen::MatrixXd& m) {
    Matrix r(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return r;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline SdpStatus sdp_status_from_string(const std::string& s) {
    for (SdpStatus st : {SdpStatus::optimal, SdpStatus::max_iterations, SdpStatus::numerical_failure,
                         SdpStatus::unbounded_suspected})
        if (s == to_string(st)) return st;
    throw std::invalid_argument("unknown solver status '" + s + "'");
}

struct ReportEcho {
    std::string command;
    std::string input;  // dataset id, file path or "-"
    std::string kind;
    std::string stratum;
    std::optional<double> c;
    int d_max = 0;
    double gap_tol = 0.0;
    double feas_tol = 0.0;
    double rank_eps = 0.0;
    std::uint64_t seed = 0;
    bool seed_from_env = false;
    double variable_scale = 1.0;
};

struct Report {
    ReportEcho echo;
    int xi = -1;
    std::optional<double> bound;
    double offset = 0.0;
    std::optional<double> distance;
    std::optional<double> relative;
    std::optional<double> distance_lower;
    std::vector<std::vector<double>> minimizers;
    std::vector<double> weights;
    std::optional<Matrix> closest;
    double constraint_violation = 0.0;
    double stratum_residual = 0.0;
    double seconds = 0.0;
    std::vector<OrderRecord> diagnostics;
};

template <class T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

inline nlohmann::json to_json(const OrderRecord& r) {
    return {{"d", r.d},
            {"solver_status", to_string(r.solver_status)},
            {"objective", r.objective},
            {"dual_objective", r.dual_objective},
            {"duality_gap", r.duality_gap},
            {"min_eigenvalue", r.min_eigenvalue},
            {"iterations", r.iterations},
            {"rank_low", r.rank_low},
            {"rank_high", r.rank_high},
            {"rank_condition", r.rank_condition},
            {"extraction_attempted", r.extraction_attempted},
            {"extraction_ok", r.extraction_ok},
            {"extraction_attempts", r.extraction_attempts},
            {"extraction_seed", r.extraction_seed},
            {"extraction_failure", r.extraction_failure},
            {"max_violation", r.max_violation},
            {"objective_mismatch", r.objective_mismatch},
            {"seconds", r.seconds}};
}

inline OrderRecord order_record_from_json(const nlohmann::json& j) {
    OrderRecord r;
    r.d = j.at("d").get<int>();
    r.solver_status = sdp_status_from_string(j.at("solver_status").get<std::string>());
    r.objective = j.at("objective").get<double>();
    r.dual_objective = j.at("dual_objective").get<double>();
    r.duality_gap = j.at("duality_gap").get<double>();
    r.min_eigenvalue = j.at("min_eigenvalue").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.rank_low = j.at("rank_low").get<int>();
    r.rank_high = j.at("rank_high").get<int>();
    r.rank_condition = j.at("rank_condition").get<bool>();
    r.extraction_attempted = j.at("extraction_attempted").get<bool>();
    r.extraction_ok = j.at("extraction_ok").get<bool>();
    r.extraction_attempts = j.at("extraction_attempts").get<int>();
    r.extraction_seed = j.at("extraction_seed").get<std::uint64_t>();
    r.extraction_failure = j.at("extraction_failure").get<std::string>();
    r.max_violation = j.at("max_violation").get<double>();
    r.objective_mismatch = j.at("objective_mismatch").get<double>();
    r.seconds = j.at("seconds").get<double>();
    return r;
}

inline nlohmann::json to_json(const Report& r) {
    nlohmann::json echo = {{"command", r.echo.command},   {"input", r.echo.input},       {"kind", r.echo.kind},
                           {"stratum", r.echo.stratum},   {"d_max", r.echo.d_max},       {"gap_tol", r.echo.gap_tol},
                           {"feas_tol", r.echo.feas_tol}, {"rank_eps", r.echo.rank_eps}, {"seed", r.echo.seed},
                           {"seed_from_env", r.echo.seed_from_env}, {"variable_scale", r.echo.variable_scale}};
    put_optional(echo, "c", r.echo.c);
    nlohmann::json j = {{"problem", echo},
                        {"xi", r.xi},
                        {"offset", r.offset},
                        {"minimizers", r.minimizers},
                        {"weights", r.weights},
                        {"constraint_violation", r.constraint_violation},
                        {"stratum_residual", r.stratum_residual},
                        {"seconds", r.seconds}};
    put_optional(j, "bound", r.bound);
    put_optional(j, "distance", r.distance);
    put_optional(j, "relative_distance", r.relative);
    put_optional(j, "distance_lower_bound", r.distance_lower);
    put_optional(j, "closest_voigt", r.closest);
    nlohmann::json diag = nlohmann::json::array();
    for (const auto& d : r.diagnostics) diag.push_back(to_json(d));
    j["diagnostics"] = diag;
    return j;
}

inline Report report_from_json(const nlohmann::json& j) {
    Report r;
    const auto& e = j.at("problem");
    r.echo.command = e.at("command").get<std::string>();
    r.echo.input = e.at("input").get<std::string>();
    r.echo.kind = e.at("kind").get<std::string>();
    r.echo.stratum = e.at("stratum").get<std::string>();
    r.echo.c = get_optional<double>(e, "c");
    r.echo.d_max = e.at("d_max").get<int>();
    r.echo.gap_tol = e.at("gap_tol").get<double>();
    r.echo.feas_tol = e.at("feas_tol").get<double>();
    r.echo.rank_eps = e.at("rank_eps").get<double>();
    r.echo.seed = e.at("seed").get<std::uint64_t>();
    r.echo.seed_from_env = e.at("seed_from_env").get<bool>();
    r.echo.variable_scale = e.at("variable_scale").get<double>();
    r.xi = j.at("xi").get<int>();
    r.bound = get_optional<double>(j, "bound");
    r.offset = j.at("offset").get<double>();
    r.distance = get_optional<double>(j, "distance");
    r.relative = get_optional<double>(j, "relative_distance");
    r.distance_lower = get_optional<double>(j, "distance_lower_bound");
    r.minimizers = j.at("minimizers").get<Matrix>();
    r.weights = j.at("weights").get<std::vector<double>>();
    r.closest = get_optional<Matrix>(j, "closest_voigt");
    r.constraint_violation = j.at("constraint_violation").get<double>();
    r.stratum_residual = j.at("stratum_residual").get<double>();
    r.seconds = j.at("seconds").get<double>();
    for (const auto& d : j.at("diagnostics")) r.diagnostics.push_back(order_record_from_json(d));
    return r;
}

inline void fill_from_hierarchy(Report& r, const HierarchyResult& h) {
    r.xi = h.xi;
    if (h.xi >= 0) r.bound = h.bound;
    for (const auto& x : h.minimizers) r.minimizers.push_back(to_vector(x));
    r.weights = h.weights;
    r.diagnostics = h.diagnostics;
}

inline Report make_report(const DistanceResult& d, ReportEcho echo) {
    Report r;
    echo.kind = to_string(d.kind);
    echo.stratum = d.stratum;
    echo.c = d.c;
    echo.variable_scale = d.variable_scale;
    r.echo = std::move(echo);
    fill_from_hierarchy(r, d.hierarchy);
    r.offset = d.problem.offset;
    r.distance = d.distance;
    r.relative = d.relative;
    r.distance_lower = d.distance_lower;
    if (d.closest) r.closest = to_rows(*d.closest);
    r.constraint_violation = d.constraint_violation;
    r.stratum_residual = d.stratum_residual;
    r.seconds = d.seconds;
    return r;
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline std::string format_report(const Report& r) {
    std::string s;
    s += r.echo.command + " " + r.echo.input;
    if (!r.echo.kind.empty()) s += " (" + r.echo.kind + ", stratum " + r.echo.stratum + ")";
    s += "\n";
    if (r.echo.c) s += "ball constant c = " + fixed6(*r.echo.c) + "\n";
    s += "xi = " + std::to_string(r.xi);
    s += r.xi == 1 ? "  (certified global optimum)\n" : r.xi == 0 ? "  (lower bound only)\n" : "  (no solution)\n";
    if (r.bound) s += "rho = " + fixed6(*r.bound) + "\n";
    if (r.distance) s += "distance = " + fixed6(*r.distance) + "\n";
    if (r.relative) s += "relative distance = " + fixed6(*r.relative) + "\n";
    if (!r.distance && r.distance_lower) s += "distance >= " + fixed6(*r.distance_lower) + "\n";
    for (std::size_t k = 0; k < r.minimizers.size(); ++k) {
        s += "x[" + std::to_string(k) + "] =";
        for (double v : r.minimizers[k]) s += " " + fixed6(v);
        s += "\n";
    }
    if (r.closest) {
        s += "closest tensor (Voigt):\n";
        for (const auto& row : *r.closest) {
            s += " ";
            for (double v : row) s += " " + fixed6(v);
            s += "\n";
        }
    }
    if (r.xi == 1)
        s += "constraint violation = " + sci(r.constraint_violation) + ", stratum residual = " + sci(r.stratum_residual) +
             "\n";
    for (const auto& d : r.diagnostics) {
        s += "  d=" + std::to_string(d.d) + " " + to_string(d.solver_status) + " obj " + fixed6(d.objective) + " gap " +
             sci(d.duality_gap) + " iters " + std::to_string(d.iterations) + " rank " + std::to_string(d.rank_low) +
             "/" + std::to_string(d.rank_high);
        if (d.extraction_attempted) s += d.extraction_ok ? " extracted" : " extraction failed: " + d.extraction_failure;
        s += " (" + fixed6(d.seconds) + " s)\n";
    }
    s += "time " + fixed6(r.seconds) + " s\n";
    return s;
}

}  // namespace strata::io
