// strata: distances to symmetry strata and small polynomial optimization problems.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "strata/distance.hpp"
#include "strata/io/pop.hpp"
#include "strata/io/report.hpp"
#include "strata/io/tensor_json.hpp"

using namespace strata;
using nlohmann::json;

namespace {

struct SolverFlags {
    int d_max = 4;
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    double rank_eps = 1e-6;
    std::string json_path;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
    app->add_option("--dmax", f.d_max, "Highest relaxation order")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--gap-tol", f.gap_tol, "Relative duality gap tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--feas-tol", f.feas_tol, "Relative feasibility tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--rank-eps", f.rank_eps, "Relative singular value threshold for ranks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--json", f.json_path, "Write the JSON report to this path ('-' for stdout)");
}

/// STRATA_OPT_SEED overrides the extraction seed.
std::pair<std::uint64_t, bool> extraction_seed() {
    const std::uint64_t def = HierarchyOptions{}.seed;
    const char* env = std::getenv("STRATA_OPT_SEED");
    if (!env || !*env) return {def, false};
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        return {v, true};
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("STRATA_OPT_SEED is not an unsigned integer: '") + env + "'");
    }
}

HierarchyOptions hierarchy_options(const SolverFlags& f) {
    HierarchyOptions o;
    o.d_max = f.d_max;
    o.rank_eps = f.rank_eps;
    o.solver.gap_tol = f.gap_tol;
    o.solver.feas_tol = f.feas_tol;
    o.seed = extraction_seed().first;
    return o;
}

io::ReportEcho echo_for(const std::string& command, const std::string& input, const SolverFlags& f) {
    io::ReportEcho e;
    e.command = command;
    e.input = input;
    e.d_max = f.d_max;
    e.gap_tol = f.gap_tol;
    e.feas_tol = f.feas_tol;
    e.rank_eps = f.rank_eps;
    std::tie(e.seed, e.seed_from_env) = extraction_seed();
    return e;
}

int exit_code(int xi) { return xi == 1 ? 0 : xi == 0 ? 2 : 3; }

void emit(const json& j, const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << text;
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

std::vector<io::Dataset> load_inputs(const std::vector<std::string>& ids, const std::vector<std::string>& files) {
    std::vector<io::Dataset> out;
    for (const auto& id : ids) out.push_back(io::find_dataset(id));
    for (const auto& f : files) out.push_back(io::load_tensor_file(f));
    if (out.empty()) throw std::invalid_argument("give at least one --dataset or --input");
    return out;
}

json sym2_json(const mech::Sym2Tensor& a) {
    return io::matrix_to_json(a.matrix());
}

json decompose(const io::Dataset& d) {
    json j = {{"input", d.id}, {"kind", io::to_string(d.kind)}};
    switch (d.kind) {
        case io::TensorKind::sym2: {
            const auto a = mech::Sym2Tensor::from_matrix(d.voigt);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a.matrix());
            j["spherical"] = a.trace() / 3.0;
            j["deviator"] = sym2_json(mech::traceless(a));
            j["eigenvalues"] = io::to_vector(es.eigenvalues());
            j["norm"] = a.norm();
            break;
        }
        case io::TensorKind::elasticity: {
            const auto E = mech::ElasticityTensor::from_voigt(d.voigt);
            const auto h = mech::harmonic_decompose_ela(E);
            j["alpha"] = h.alpha;
            j["beta"] = h.beta;
            j["d_prime"] = sym2_json(h.dp);
            j["v_prime"] = sym2_json(h.vp);
            j["H_params"] = h.H.x;
            j["H_voigt"] = io::matrix_to_json(h.H.voigt());
            j["norm"] = E.norm();
            j["norm_from_components"] = std::sqrt(mech::harmonic_norm_squared(h));
            j["H_norm"] = h.H.norm();
            break;
        }
        case io::TensorKind::piezo: {
            const auto e = mech::PiezoTensor::from_voigt(d.voigt);
            const auto s = mech::piezo_harmonic_part(e);
            const auto inv = mech::invariants_h3(s.h);
            j["g_voigt"] = io::matrix_to_json(s.g.voigt());
            j["h_params"] = s.h.x;
            j["h_voigt"] = io::matrix_to_json(s.h.voigt());
            j["norm"] = e.norm();
            j["g_norm_squared"] = s.g.norm() * s.g.norm();
            j["h_norm_squared"] = s.h.norm() * s.h.norm();
            j["invariants"] = {{"I2", inv.I2}, {"I4", inv.I4}, {"I6", inv.I6}, {"I10", inv.I10}, {"I15", inv.I15}};
            break;
        }
    }
    return j;
}

json classify(const io::Dataset& d, double tol) {
    json j = {{"input", d.id}, {"kind", io::to_string(d.kind)}, {"tol", tol}};
    switch (d.kind) {
        case io::TensorKind::sym2: {
            const auto c = mech::classify_sym2(mech::Sym2Tensor::from_matrix(d.voigt), tol);
            j["class"] = mech::to_string(c.cls);
            j["isotropy_residual"] = c.isotropy_residual;
            j["transverse_residual"] = c.transverse_residual;
            j["near_boundary"] = c.near_boundary;
            json chain = json::array();
            for (auto s : c.chain) chain.push_back(mech::to_string(s));
            j["contained_in"] = chain;
            break;
        }
        case io::TensorKind::elasticity: {
            const auto t = mech::cubic_test_ela(mech::ElasticityTensor::from_voigt(d.voigt), tol);
            j["at_least_cubic"] = t.at_least_cubic;
            j["strictly_cubic"] = t.strictly_cubic;
            j["d_prime_residual"] = t.dp_residual;
            j["v_prime_residual"] = t.vp_residual;
            j["d2_prime_residual"] = t.d2p_residual;
            j["harmonic_ratio"] = t.harmonic_ratio;
            break;
        }
        case io::TensorKind::piezo: {
            const auto t = mech::cubic_test_piezo(mech::PiezoTensor::from_voigt(d.voigt), tol);
            j["at_least_cubic"] = t.at_least_cubic;
            j["strictly_cubic"] = t.strictly_cubic;
            j["g_residual"] = t.g_residual;
            j["d2_prime_residual"] = t.d2p_residual;
            j["harmonic_ratio"] = t.harmonic_ratio;
            break;
        }
    }
    return j;
}

void print_json_lines(std::ostream& os, const json& j, const std::string& prefix = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_object()) {
            print_json_lines(os, *it, prefix + it.key() + ".");
        } else if (it->is_number_float()) {
            os << prefix << it.key() << " = " << io::fixed6(it->get<double>()) << "\n";
        } else if (it->is_string()) {
            os << prefix << it.key() << " = " << it->get<std::string>() << "\n";
        } else if (it->is_array() && !it->empty() && it->front().is_array()) {
            os << prefix << it.key() << " =\n";
            for (const auto& row : *it) {
                os << " ";
                for (const auto& v : row) os << " " << io::fixed6(v.get<double>());
                os << "\n";
            }
        } else if (it->is_array()) {
            os << prefix << it.key() << " =";
            for (const auto& v : *it)
                os << " " << (v.is_number() ? io::fixed6(v.get<double>()) : v.dump());
            os << "\n";
        } else {
            os << prefix << it.key() << " = " << it->dump() << "\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distances of constitutive tensors to symmetry strata by the moment-SOS hierarchy"};
    app.require_subcommand(1);

    // datasets
    auto* ds = app.add_subcommand("datasets", "List or show the embedded tensors");
    ds->require_subcommand(1);
    auto* ds_list = ds->add_subcommand("list", "List dataset ids");
    auto* ds_show = ds->add_subcommand("show", "Print a dataset as a tensor JSON file");
    std::string show_id;
    ds_show->add_option("id", show_id, "Dataset id")->required();

    // distance
    auto* dist = app.add_subcommand("distance", "Distance to a symmetry stratum");
    std::vector<std::string> dataset_ids, input_files;
    std::string stratum;
    std::string c_arg = "auto";
    int jobs = 1;
    SolverFlags dist_flags;
    dist->add_option("--dataset", dataset_ids, "Embedded dataset id (repeatable)");
    dist->add_option("--input", input_files, "Tensor JSON file (repeatable)")->check(CLI::ExistingFile);
    dist->add_option("--stratum", stratum, "O2, cubic-ela, cubic-piezo or cubic (default: from the tensor kind)");
    dist->add_option("--c", c_arg, "Ball constant, or 'auto' for 1.5 f at a point of the stratum")->capture_default_str();
    dist->add_option("--jobs", jobs, "Worker threads when several tensors are given")->check(CLI::PositiveNumber);
    add_solver_flags(dist, dist_flags);

    // decompose / classify
    auto* dec = app.add_subcommand("decompose", "Harmonic decomposition");
    std::vector<std::string> dec_ids, dec_files;
    std::string dec_json;
    dec->add_option("--dataset", dec_ids, "Embedded dataset id (repeatable)");
    dec->add_option("--input", dec_files, "Tensor JSON file (repeatable)")->check(CLI::ExistingFile);
    dec->add_option("--json", dec_json, "Write JSON to this path ('-' for stdout)");

    auto* cls = app.add_subcommand("classify", "Symmetry class membership tests");
    std::vector<std::string> cls_ids, cls_files;
    std::string cls_json;
    double cls_tol = 1e-6;
    cls->add_option("--dataset", cls_ids, "Embedded dataset id (repeatable)");
    cls->add_option("--input", cls_files, "Tensor JSON file (repeatable)")->check(CLI::ExistingFile);
    cls->add_option("--tol", cls_tol, "Relative tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cls->add_option("--json", cls_json, "Write JSON to this path ('-' for stdout)");

    // pop-solve
    auto* pop = app.add_subcommand("pop-solve", "Solve a polynomial optimization problem file");
    std::string pop_file;
    SolverFlags pop_flags;
    pop->add_option("file", pop_file, "Problem file")->required()->check(CLI::ExistingFile);
    add_solver_flags(pop, pop_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (*ds_list) {
            for (const auto& d : io::datasets())
                std::cout << d.id << "\t" << io::to_string(d.kind) << "\t" << d.source << "\n";
            return 0;
        }
        if (*ds_show) {
            std::cout << io::tensor_to_json(io::find_dataset(show_id)).dump(2) << "\n";
            return 0;
        }
        if (*dec || *cls) {
            const std::string& json_path = *dec ? dec_json : cls_json;
            const auto inputs = *dec ? load_inputs(dec_ids, dec_files) : load_inputs(cls_ids, cls_files);
            json all = json::array();
            for (const auto& d : inputs) all.push_back(*dec ? decompose(d) : classify(d, cls_tol));
            std::ostringstream text;
            for (const auto& j : all) {
                print_json_lines(text, j);
                text << "\n";
            }
            emit(all.size() == 1 ? all[0] : all, text.str(), json_path);
            return 0;
        }
        if (*pop) {
            const io::PopProblem pb = io::parse_pop(io::read_text_file(pop_file));
            if (!pb.ball)
                std::cerr << "warning: no 'ball' statement; the feasible set may not satisfy the Archimedean condition\n";
            const HierarchyOptions ho = hierarchy_options(pop_flags);
            const auto t0 = std::chrono::steady_clock::now();
            const HierarchyResult h = run_hierarchy(pb.objective, pb.constraints_with_ball(), ho);
            io::Report r;
            r.echo = echo_for("pop-solve", pop_file, pop_flags);
            r.echo.c = pb.ball;
            io::fill_from_hierarchy(r, h);
            for (const auto& x : h.minimizers) {
                const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
                r.constraint_violation = std::max(r.constraint_violation, constraint_violation(pb.constraints, xs));
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit(io::to_json(r), io::format_report(r), pop_flags.json_path);
            return exit_code(r.xi);
        }
        if (*dist) {
            const auto inputs = load_inputs(dataset_ids, input_files);
            DistanceOptions opts;
            opts.hierarchy = hierarchy_options(dist_flags);
            if (c_arg != "auto") {
                std::size_t used = 0;
                double cv = 0.0;
                try {
                    cv = std::stod(c_arg, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != c_arg.size()) throw std::invalid_argument("--c must be a real number or 'auto'");
                opts.c = cv;
            }
            std::vector<std::optional<io::Report>> reports(inputs.size());
            std::vector<std::string> errors(inputs.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t i; (i = next++) < inputs.size();) {
                    try {
                        const auto res = solve_distance(inputs[i].kind, inputs[i].voigt, stratum, opts);
                        reports[i] = io::make_report(res, echo_for("distance", inputs[i].id, dist_flags));
                    } catch (const std::exception& e) {
                        errors[i] = e.what();
                    }
                }
            };
            const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(inputs.size())));
            std::vector<std::thread> pool;
            for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
            worker();
            for (auto& t : pool) t.join();

            int code = 0;
            json all = json::array();
            std::string text;
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                if (!reports[i]) {
                    std::cerr << "error: " << inputs[i].id << ": " << errors[i] << "\n";
                    code = 1;
                    continue;
                }
                all.push_back(io::to_json(*reports[i]));
                text += (text.empty() ? "" : "\n") + io::format_report(*reports[i]);
                if (code != 1) code = std::max(code, exit_code(reports[i]->xi));
            }
            if (!all.empty()) emit(all.size() == 1 ? all[0] : all, text, dist_flags.json_path);
            return code;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
