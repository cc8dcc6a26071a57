// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strata/distance.hpp"
#include "strata/io/datasets.hpp"
#include "strata/mech/elasticity.hpp"
#include "strata/mech/piezo.hpp"
#include "strata/mech/sym2.hpp"
#include "strata/sdp.hpp"
#include "support.hpp"

using namespace strata;
using namespace strata::mech;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using test::Rng;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string fmt2(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

VectorXd vec(std::initializer_list<double> v) {
    VectorXd r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) r[i++] = x;
    return r;
}

double nearest(const VectorXd& p, const std::vector<VectorXd>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) best = std::min(best, (p - q).cwiseAbs().maxCoeff());
    return best;
}

// ---- 1: transverse isotropy of a0, c = 300

Outcome transverse_isotropy() {
    Outcome o;
    const auto& a0 = io::find_dataset("a0");
    const auto p = build_distance_problem_sym2(Sym2Tensor::from_matrix(a0.voigt));
    const auto cons = add_ball_constraint(p.f, p.constraints, 300.0, vec({1, 1, -2, 0, 0, 0}));
    HierarchyOptions opt;
    opt.variable_scale = p.variable_scale;
    const auto h = run_hierarchy(p.f, cons, opt);
    o.check(h.xi == 1, "xi = " + std::to_string(h.xi));
    o.check(h.order_reached == 2, "certified at d = " + std::to_string(h.order_reached));
    if (h.xi != 1) return o;
    const double d2 = p.offset + h.bound;
    o.check(std::abs(d2 - 18.0) <= 1e-3, fmt("Delta^2 = %.6f", d2));
    MatrixXd want(3, 3);
    want << -44, 20, -20, 20, 31, 5, -20, 5, 31;
    want /= 6.0;
    const Sym2Tensor a = sym2_from_x(h.minimizers.front());
    const double err = (a.matrix() - want).cwiseAbs().maxCoeff();
    o.check(err <= 1e-2, fmt("a** error %.3e", err));
    const Sym3Tensor r = cross_gen(a.square(), a);
    double res = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) res = std::max(res, std::abs(r(i, j, k)));
    res /= std::pow(a0.voigt.norm(), 3);
    o.check(res <= 1e-6, fmt("constraint residual %.3e", res));
    if (o.pass) o.detail = fmt("Delta^2 = %.6f", d2) + fmt(", a** error %.1e", err) + fmt(", residual %.1e", res);
    return o;
}

// ---- 2: cubic elasticity of CMSX-4, c = 58000

Outcome cubic_elasticity() {
    Outcome o;
    DistanceOptions opt;
    opt.c = 58000.0;
    const auto r = solve_distance(TensorKind::elasticity, io::find_dataset("E0").voigt, "cubic-ela", opt);
    const auto& h = r.hierarchy;
    o.check(h.xi == 1, "xi = " + std::to_string(h.xi));
    o.check(h.order_reached == 1, "certified at d = " + std::to_string(h.order_reached));
    if (h.xi != 1) return o;
    o.check(std::abs(h.bound - 2530.474727) <= 0.5, fmt("rho = %.6f", h.bound));
    const VectorXd xs = vec({-36.401489, -20.227012, -38.908985, -6.396664, 27.780748, -2.277546, 44.251364, -4.557344,
                             21.161507});
    const double xerr = (*r.x - xs).cwiseAbs().maxCoeff();
    o.check(xerr <= 5e-3, fmt("x* error %.3e", xerr));
    o.check(std::abs(*r.distance - 74.131148) <= 0.05, fmt("Delta = %.6f", *r.distance));
    o.check(std::abs(*r.relative - 0.103910) <= 1e-4, fmt("relative = %.6f", *r.relative));
    Voigt6 es;
    es << 240.130669, 144.442318, 125.760345, 6.39666, 41.97381, -21.161507,  //
        144.442318, 223.956191, 141.934823, -27.780748, 2.277546, 16.604162,  //
        125.760345, 141.934823, 242.638164, 21.384084, -44.251364, 4.557344,  //
        6.39666, -27.780748, 21.384084, 133.268156, 4.557344, 2.277546,       //
        41.973817, 2.277546, -44.251364, 4.557344, 117.093678, 6.39666,       //
        -21.161507, 16.604162, 4.557344, 2.277546, 6.39666, 135.775651;
    const double eerr = (*r.closest - es).cwiseAbs().maxCoeff();
    o.check(eerr <= 0.05, fmt("E* error %.3e GPa", eerr));
    H4Params H;
    for (int i = 0; i < 9; ++i) H.x[static_cast<std::size_t>(i)] = (*r.x)[i];
    const double h0 = std::pow(harmonic_decompose_ela(ElasticityTensor::from_voigt(io::find_dataset("E0").voigt)).H.norm(), 2);
    const double d2 = d2prime_ela(H).norm() / h0;
    o.check(d2 <= 1e-4, fmt("d2' residual %.3e ||H0||^2", d2));
    if (o.pass)
        o.detail = fmt("rho = %.6f", h.bound) + fmt(", Delta = %.6f", *r.distance) +
                   fmt(", relative = %.6f", *r.relative) + fmt(", x* error %.1e", xerr) + fmt(", E* error %.1e", eerr) +
                   fmt(", %.2f s", r.seconds);
    return o;
}

// ---- 3: cubic piezoelectricity of AlN

Outcome cubic_piezo_aln() {
    Outcome o;
    const auto r = solve_distance(TensorKind::piezo, io::find_dataset("aln").voigt, "cubic-piezo");
    const auto& h = r.hierarchy;
    o.check(h.xi == 1, "xi = " + std::to_string(h.xi));
    if (h.xi != 1) return o;
    o.check(std::abs(h.bound - 1.060855) <= 1e-3, fmt("rho = %.6f", h.bound));
    const VectorXd hs = vec({-0.075476, -0.426450, 0.088998, -0.005937, 0.412070, -0.308913, 0.609783});
    const double err = (*r.x - hs).cwiseAbs().maxCoeff();
    o.check(err <= 1e-3, fmt("h* error %.3e", err));
    o.check(std::abs(*r.distance - 1.214681) <= 1e-3, fmt("Delta = %.6f", *r.distance));
    o.check(std::abs(*r.relative - 0.684256) <= 1e-3, fmt("relative = %.6f", *r.relative));
    if (o.pass)
        o.detail = fmt("rho = %.6f", h.bound) + fmt(", Delta = %.6f", *r.distance) +
                   fmt(", relative = %.6f", *r.relative) + fmt(", h* error %.1e", err) + fmt(", %.2f s", r.seconds);
    return o;
}

// ---- 4: Cr_x Al_{1-x} N sweep

Outcome chromium_sweep() {
    struct Row {
        const char* id;
        double delta, relative;
    };
    const Row rows[] = {{"aln", 1.214681, 0.684256},    {"cr0.035", 1.307327, 0.715295}, {"cr0.07", 1.364909, 0.729065},
                        {"cr0.10", 1.541726, 0.785604}, {"cr0.13", 1.542293, 0.758240},  {"cr0.16", 1.665883, 0.793355},
                        {"cr0.19", 1.852505, 0.813719}, {"cr0.225", 1.877377, 0.781094}, {"cr0.255", 1.944763, 0.752770}};
    Outcome o;
    int ok = 0;
    double seconds = 0.0;
    for (const auto& row : rows) {
        const auto r = solve_distance(TensorKind::piezo, io::find_dataset(row.id).voigt, "cubic-piezo");
        seconds += r.seconds;
        if (r.hierarchy.xi != 1) {
            o.check(false, std::string(row.id) + " xi = " + std::to_string(r.hierarchy.xi));
            continue;
        }
        const bool good = std::abs(*r.distance - row.delta) <= 1e-2 && std::abs(*r.relative - row.relative) <= 1e-2;
        o.check(good, std::string(row.id) + fmt2(" Delta %.6f vs %.6f", *r.distance, row.delta) +
                          fmt2(", relative %.6f vs %.6f", *r.relative, row.relative));
        ok += good;
    }
    o.detail = std::to_string(ok) + "/9 rows within 1e-2" + (o.detail.empty() ? "" : ": " + o.detail) +
               fmt(" (%.2f s)", seconds);
    return o;
}

// ---- 5: monotone lower bounds on random ball-constrained problems

Outcome monotonicity() {
    Outcome o;
    Rng rng(20220901);
    const SdpOptions sopt;
    int solved_pairs = 0, checked = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
        const int deg = 2 + (t / 3) % 3;
        const double R = 1.0 + test::uniform(rng, 0.0, 1.0);
        const auto x = Polynomial::variables(n);
        Polynomial f = Polynomial::constant(n, 0.0);
        const IndexSet basis(n, deg);
        for (std::size_t a = 0; a < basis.size(); ++a) {
            Polynomial m = Polynomial::constant(n, test::uniform(rng, -1.0, 1.0));
            for (std::size_t i = 0; i < n; ++i) m *= pow(x[i], basis[a][i]);
            f += m;
        }
        Polynomial r2 = Polynomial::constant(n, R * R);
        for (const auto& xi : x) r2 -= xi * xi;
        const std::vector<Constraint> cons{Constraint::ge(r2)};

        double best = std::numeric_limits<double>::infinity();
        VectorXd s(static_cast<Eigen::Index>(n));
        for (int k = 0; k < 100000; ++k) {
            for (auto& v : s) v = test::normal(rng);
            s *= R * std::pow(test::uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(n)) / s.norm();
            best = std::min(best, test::eval(f, s));
        }

        const int d0 = std::max(1, (deg + 1) / 2);
        double prev = -std::numeric_limits<double>::infinity();
        bool have_prev = false;
        for (int d = d0; d <= d0 + 2; ++d) {
            const auto sol = solve_sdp(assemble_relaxation(f, cons, d), sopt);
            if (sol.status != SdpStatus::optimal) {
                have_prev = false;
                continue;
            }
            ++checked;
            const double rho = sol.objective;
            if (have_prev) {
                ++solved_pairs;
                o.check(prev <= rho + 10 * sopt.gap_tol,
                        "problem " + std::to_string(t) + " d=" + std::to_string(d) + fmt2(": %.10f > %.10f", prev, rho));
            }
            o.check(rho <= best + 10 * sopt.gap_tol,
                    "problem " + std::to_string(t) + " d=" + std::to_string(d) + fmt2(": rho %.10f > sampled %.10f", rho, best));
            prev = rho;
            have_prev = true;
        }
    }
    o.check(solved_pairs > 0, "no consecutive orders solved");
    if (o.pass)
        o.detail = std::to_string(checked) + " relaxations, " + std::to_string(solved_pairs) + " consecutive pairs";
    return o;
}

// ---- 6: property suites

Outcome properties() {
    Outcome o;
    Rng rng(6);
    double worst = 0.0;
    auto within = [&](double err, double tol, const char* what) {
        worst = std::max(worst, err / tol);
        if (err > tol) o.check(false, fmt(what, err));
    };

    for (int t = 0; t < 100; ++t) {
        const Sym2Tensor a = test::random_sym2(rng);
        const double lhs = 12.0 * std::pow(cross_gen(a.square(), a).norm(), 2);
        const Matrix3d ap = test::deviator(a.matrix());
        const double t2 = (ap * ap).trace(), t3 = (ap * ap * ap).trace();
        within(test::rel_diff(lhs, t2 * t2 * t2 - 6 * t3 * t3), 1e-9, "degree-6 identity %.3e");
    }

    for (int t = 0; t < 100; ++t) {
        const ElasticityTensor E = test::random_elasticity(rng);
        const ElaHarmonic h = harmonic_decompose_ela(E);
        within(test::rel_diff(harmonic_norm_squared(h), test::frob4(E)), 1e-10, "elasticity norm split %.3e");
        within((recompose_ela(h).voigt() - E.voigt()).cwiseAbs().maxCoeff(), 1e-12, "elasticity roundtrip %.3e");

        const PiezoTensor e = test::random_piezo(rng);
        const PiezoSplit sp = piezo_harmonic_part(e);
        within(test::rel_diff(test::frob3(sp.g) + test::frob3(sp.h.tensor()), test::frob3(e)), 1e-10,
               "piezo norm split %.3e");
        within((sp.g.voigt() + sp.h.voigt() - e.voigt()).cwiseAbs().maxCoeff(), 1e-12, "piezo roundtrip %.3e");
    }
    const ElasticityTensor e0 = ElasticityTensor::from_voigt(io::find_dataset("E0").voigt);
    within((recompose_ela(harmonic_decompose_ela(e0)).voigt() - e0.voigt()).cwiseAbs().maxCoeff() /
               e0.voigt().cwiseAbs().maxCoeff(),
           1e-12, "E0 roundtrip %.3e");

    for (int t = 0; t < 100; ++t) {
        const H4Params H = test::random_h4(rng);
        const Matrix3d want = test::deviator(test::d2_ela_oracle(H.full()));
        within((d2prime_ela(H).matrix() - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff()), 1e-10,
               "d2' elasticity contraction %.3e");
        const H3Params hp = test::random_h3(rng);
        const Matrix3d wp = test::deviator(test::d2_piezo_oracle(hp.full()));
        within((d2prime_piezo(hp).matrix() - wp).cwiseAbs().maxCoeff() / std::max(1.0, wp.cwiseAbs().maxCoeff()), 1e-10,
               "d2' piezo contraction %.3e");
    }

    const H4Params H = test::random_h4(rng);
    const H3Params hp = test::random_h3(rng);
    const Matrix3d dH = d2prime_ela(H).matrix(), dh = d2prime_piezo(hp).matrix();
    const auto I = invariants_h3(hp);
    for (int t = 0; t < 50; ++t) {
        const Matrix3d g = test::random_rotation(rng);
        within((d2prime_ela(H4Params::from_tensor(rotate(H.full(), g))).matrix() - g * dH * g.transpose())
                   .cwiseAbs()
                   .maxCoeff(),
               1e-9, "d2' elasticity equivariance %.3e");
        const H3Params hg = H3Params::from_tensor(rotate(hp.full(), g));
        within((d2prime_piezo(hg).matrix() - g * dh * g.transpose()).cwiseAbs().maxCoeff(), 1e-9,
               "d2' piezo equivariance %.3e");
        const auto R = invariants_h3(hg);
        for (auto [u, v] : {std::pair{R.I2, I.I2}, {R.I4, I.I4}, {R.I6, I.I6}, {R.I10, I.I10}, {R.I15, I.I15}})
            within(std::abs(u - v) / std::abs(v), 1e-9, "invariant rotation %.3e");
    }

    for (int t = 0; t < 100; ++t) {
        const H3Params q = test::random_h3(rng);
        const Tensor3 h = q.full();
        const Matrix3d d2 = test::d2_piezo_oracle(h);
        const Matrix3d d2p = test::deviator(d2);
        Eigen::Vector3d v3 = Eigen::Vector3d::Zero(), w = Eigen::Vector3d::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) v3[i] += h(i, j, k) * d2p(j, k);
        double K10 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    K10 += h(i, j, k) * v3[i] * v3[j] * v3[k];
                    w[j] += v3[i] * h(i, j, k) * v3[k];
                }
        Matrix3d V;
        V << v3.transpose(), (d2 * v3).transpose(), w.transpose();
        const double K4 = (d2 * d2).trace(), K15 = V.determinant();
        const auto J = invariants_h3(q);
        within(test::rel_diff(K4, J.I4 + J.I2 * J.I2 / 3.0), 1e-10, "Smith-Bao K4 %.3e");
        const double k10 = -4.0 / 3.0 * J.I10 - J.I2 * J.I2 * J.I2 * J.I4 / 27.0 + J.I2 * J.I2 * J.I6 / 9.0 +
                           2.0 / 9.0 * J.I2 * J.I4 * J.I4 + 2.0 / 3.0 * J.I4 * J.I6;
        within(std::abs(K10 - k10) / (std::abs(K10) + std::pow(J.I2, 5)), 1e-9, "Smith-Bao K10 %.3e");
        within(std::abs(K15 - 2.0 * J.I15) / (std::abs(K15) + std::pow(J.I2, 7.5)), 1e-9, "Smith-Bao K15 %.3e");
    }
    if (o.pass) o.detail = fmt("worst error / tolerance %.3f", worst);
    return o;
}

// ---- 7: extraction

Outcome extraction() {
    Outcome o;
    const std::vector<VectorXd> pts{vec({1.0, -0.5}), vec({-0.3, 0.8})};
    const auto y = test::explicit_atomic_moments(2, 3, pts, {0.4, 0.6});
    const auto rc = check_rank_condition(y, 3, 1, 1e-6);
    o.check(rc.satisfied && rc.s == 2, "rank condition on two atoms");
    const auto ex = extract_minimizers(y, 3, 2, 1e-6);
    o.check(ex.ok && ex.points.size() == 2, "two-atom extraction: " + ex.failure);
    double err = 0.0;
    if (ex.ok) {
        for (const auto& p : ex.points) err = std::max(err, nearest(p, pts));
        for (const auto& p : pts) err = std::max(err, nearest(p, ex.points));
        o.check(err <= 1e-8, fmt("two-atom error %.3e", err));
    }

    const auto x = Polynomial::variable(1, 0);
    const Polynomial f = pow(x * x - 1.0, 2);
    const auto h = run_hierarchy(f, add_ball_constraint(f, {}, 10.0, vec({0.0})));
    o.check(h.xi == 1 && h.minimizers.size() == 2, "double well: xi = " + std::to_string(h.xi) + ", " +
                                                       std::to_string(h.minimizers.size()) + " points");
    double werr = 0.0;
    for (const auto& p : h.minimizers) werr = std::max(werr, nearest(p, {vec({1.0}), vec({-1.0})}));
    if (h.minimizers.size() == 2) {
        o.check((h.minimizers[0] - h.minimizers[1]).norm() > 1.0, "double well points coincide");
        o.check(werr <= 1e-6, fmt("double well error %.3e", werr));
    }
    if (o.pass) o.detail = fmt2("two atoms %.1e, +-1 recovered to %.1e", err, werr);
    return o;
}

// ---- 8: analytic SDPs and determinism

Outcome sdp_suite() {
    Outcome o;
    const auto x = Polynomial::variable(1, 0);
    const auto box = solve_sdp(assemble_relaxation(x, {Constraint::eq(1.0 - x * x)}, 1));
    o.check(box.status == SdpStatus::optimal && std::abs(box.objective + 1.0) <= 1e-8 && std::abs(box.y[1] + 1.0) <= 1e-8,
            fmt("2x2 block objective %.10f", box.objective));
    const auto iv = solve_sdp(assemble_relaxation(x, {Constraint::ge(x), Constraint::ge(3.0 - x)}, 1));
    o.check(iv.status == SdpStatus::optimal && std::abs(iv.objective) <= 1e-8, fmt("interval objective %.3e", iv.objective));

    const auto v = Polynomial::variables(3);
    const Polynomial f = pow(v[0] * v[0] - 1.0, 2) + v[1] * v[2] + pow(v[2], 4) + v[1] * v[1];
    const auto rp = assemble_relaxation(f, {Constraint::ge(10.0 - v[0] * v[0] - v[1] * v[1] - v[2] * v[2])}, 3);
    const auto a = solve_sdp(rp), b = solve_sdp(rp);
    bool same = a.trace.size() == b.trace.size() && a.iterations == b.iterations && a.y.values() == b.y.values();
    for (std::size_t i = 0; same && i < a.trace.size(); ++i)
        same = std::memcmp(&a.trace[i].primal_objective, &b.trace[i].primal_objective, sizeof(double)) == 0 &&
               std::memcmp(&a.trace[i].dual_objective, &b.trace[i].dual_objective, sizeof(double)) == 0 &&
               std::memcmp(&a.trace[i].relative_gap, &b.trace[i].relative_gap, sizeof(double)) == 0;
    o.check(same, "two runs differ");
    if (o.pass)
        o.detail = fmt2("objectives %.1e, %.1e from exact", std::abs(box.objective + 1.0), std::abs(iv.objective)) +
                   ", " + std::to_string(a.trace.size()) + " identical iterates";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"transverse isotropy (a0, c = 300)", transverse_isotropy},
        {"cubic elasticity (CMSX-4, c = 58000)", cubic_elasticity},
        {"cubic piezoelectricity (AlN)", cubic_piezo_aln},
        {"Cr_x Al_{1-x} N sweep", chromium_sweep},
        {"hierarchy monotonicity", monotonicity},
        {"property suites", properties},
        {"extraction oracle", extraction},
        {"SDP unit suite", sdp_suite},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s  %s [%.2f s]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first,
                    o.detail.c_str(), s);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
