// gridqls: HHL linear solves, power flow and fusion statistics from the shell.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "gridqls/circuit/text_format.hpp"
#include "gridqls/cli/report.hpp"
#include "gridqls/error.hpp"
#include "gridqls/fusion/fusion.hpp"
#include "gridqls/hhl/pipeline.hpp"
#include "gridqls/powerflow/powerflow.hpp"
#include "gridqls/prep/matrix_market.hpp"
#include "gridqls/svsim/state_vector.hpp"

namespace fs = std::filesystem;
using namespace gridqls;
using cli::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_file(const std::string &path) {
    if (!fs::is_regular_file(path)) {
        throw std::runtime_error("cannot open '" + path + "': no such file");
    }
}

void emit_json(const json &record, const std::string &path) {
    if (path.empty()) {
        return;
    }
    if (auto problems = cli::validate_record(record); !problems.empty()) {
        throw std::logic_error("report record does not match its schema: " + problems.front());
    }
    const std::string text = record.dump(2) + "\n";
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

std::string read_text(const std::string &path) {
    require_file(path);
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct SolveLinearArgs {
    std::string matrix, rhs, name, json_out;
    bool precondition = false, table1 = false, fusion = false;
    double kappa_threshold = prep::kDefaultKappaThreshold;
    std::optional<std::size_t> n_qpe;
    std::uint64_t seed = 0;
};

int solve_linear(const SolveLinearArgs &a) {
    require_file(a.matrix);
    require_file(a.rhs);
    const CMatrix m = prep::read_matrix_market(fs::path(a.matrix));
    const CVector b = prep::read_vector_market(a.rhs);

    hhl::PipelineOptions o;
    o.prep.use_preconditioner = a.precondition;
    o.prep.kappa_threshold = a.kappa_threshold;
    o.hhl.n_qpe = a.n_qpe;
    o.hhl.table1_convention = a.table1;
    o.hhl.fuse = a.fusion;
    const auto r = hhl::solve_linear(m, b, o);

    const std::string name = a.name.empty() ? fs::path(a.matrix).stem().string() : a.name;
    const auto report = cli::make_report(name, r);
    std::cout << cli::format_table({report});
    if (report.fusion) {
        std::cout << '\n' << cli::format_fusion(*report.fusion);
    }
    auto record = cli::make_record("solve-linear", a.seed);
    record["reports"] = json::array({cli::to_json(report)});
    emit_json(record, a.json_out);
    return 0;
}

struct PowerflowArgs {
    std::string case_file, solver = "classical", variant = "newton", json_out;
    double tol = 1e-8;
    std::size_t max_iter = 30;
    std::optional<std::size_t> n_qpe;
    bool precondition = false, fusion = false, table1 = false;
};

int run_powerflow(const PowerflowArgs &a) {
    if (!(a.tol > 0.0)) {
        throw std::invalid_argument("--tol must be positive");
    }
    require_file(a.case_file);
    const auto pc = powerflow::load_case(a.case_file);

    powerflow::PowerFlowOptions o;
    o.solver = a.solver == "hhl" ? powerflow::Solver::HHL : powerflow::Solver::Classical;
    o.variant = a.variant == "fast_decoupled" ? powerflow::Variant::FastDecoupled : powerflow::Variant::Newton;
    o.tol = a.tol;
    o.max_iter = a.max_iter;
    o.hhl.prep.use_preconditioner = a.precondition;
    o.hhl.hhl.n_qpe = a.n_qpe;
    o.hhl.hhl.table1_convention = a.table1;
    o.hhl.hhl.fuse = a.fusion;

    powerflow::PowerFlowResult r;
    try {
        r = powerflow::solve_powerflow(pc, o);
    } catch (const ConvergenceError &e) {
        std::cerr << "error: " << e.what() << " (iterations " << e.iterations() << ", final mismatch "
                  << e.final_mismatch() << ")\n";
        return 3;
    }

    std::printf("%s: %s, %s\n", pc.name.c_str(), to_string(o.solver).c_str(), to_string(o.variant).c_str());
    std::printf("%4s %4s %5s %12s %12s %12s\n", "iter", "step", "dim", "kappa", "mismatch", "hhl error");
    std::vector<cli::SolveReport> reports;
    for (const auto &s : r.steps) {
        std::string err = "-";
        if (s.hhl) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", s.hhl->l2_error);
            err = buf;
            reports.push_back(cli::make_report(pc.name + " " + s.label + " it" + std::to_string(s.iteration), *s.hhl));
        }
        std::printf("%4zu %4s %5zu %12.4g %12.4e %12s\n", s.iteration, s.label.c_str(), s.dimension,
                    s.condition_number, s.mismatch_before, err.c_str());
    }
    std::printf("converged in %zu iteration(s), final mismatch %.3e\n\n", r.iterations, r.final_mismatch);
    if (!reports.empty()) {
        // The first solve of each kind stands in for the per-case table column.
        std::vector<cli::SolveReport> first;
        for (const auto &rep : reports) {
            const auto kind = rep.case_name.substr(0, rep.case_name.rfind(' '));
            bool seen = false;
            for (const auto &f : first) {
                seen |= f.case_name.substr(0, f.case_name.rfind(' ')) == kind;
            }
            if (!seen) {
                first.push_back(rep);
            }
        }
        std::cout << cli::format_table(first) << '\n';
    }
    std::printf("%6s %10s %12s\n", "bus", "vm (pu)", "va (deg)");
    json buses = json::array();
    for (std::size_t i = 0; i < pc.buses.size(); ++i) {
        const double deg = r.state.va(static_cast<Eigen::Index>(i)) * 180.0 / kPi;
        const double vm = r.state.vm(static_cast<Eigen::Index>(i));
        std::printf("%6d %10.6f %12.6f\n", pc.buses[i].id, vm, deg);
        buses.push_back({{"id", pc.buses[i].id}, {"vm", vm}, {"va_deg", deg}});
    }

    auto record = cli::make_record("powerflow", 0);
    record["reports"] = json::array();
    for (const auto &rep : reports) {
        record["reports"].push_back(cli::to_json(rep));
    }
    record["powerflow"] = {{"case", pc.name},
                           {"solver", to_string(o.solver)},
                           {"variant", to_string(o.variant)},
                           {"converged", r.converged},
                           {"iterations", r.iterations},
                           {"final_mismatch", r.final_mismatch},
                           {"buses", buses}};
    emit_json(record, a.json_out);
    return 0;
}

int estimate(const std::string &matrix, bool table1, const std::string &json_out) {
    require_file(matrix);
    const CMatrix m = prep::read_matrix_market(fs::path(matrix));
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("matrix is " + std::to_string(m.rows()) + " x " + std::to_string(m.cols()) +
                                    ", expected square");
    }
    const double kappa = prep::condition_number(m);
    const CVector zero = CVector::Zero(m.rows());
    auto expanded = prep::expand_to_power_of_2(m, zero);
    CMatrix h = expanded.matrix;
    if (!prep::is_hermitian(h)) {
        h = prep::hermitize(h, expanded.b).matrix;
    }
    const auto spectrum = hhl::spectrum_of(h);
    const auto plan = hhl::estimate_resources(static_cast<std::size_t>(h.rows()), kappa, spectrum.has_negative, table1);
    std::cout << cli::format_plan(plan);
    json rp = cli::to_json(plan);
    if (table1) {
        const std::size_t formula = hhl::formula_n_qpe(plan.n_data, kappa);
        std::cout << "note: table-1 convention, n_qpe is one above the formula value " << formula << '\n';
        rp["note"] = "n_qpe one above the formula value " + std::to_string(formula);
    }
    auto record = cli::make_record("estimate", 0);
    record["resource_plan"] = rp;
    emit_json(record, json_out);
    return 0;
}

struct FuseArgs {
    std::string circuit_file, json_out, dump;
    std::optional<std::size_t> random_system, n_qpe;
    std::uint64_t seed = 0;
};

int fuse_stats(const FuseArgs &a) {
    circuit::Circuit c(1);
    if (!a.circuit_file.empty()) {
        c = circuit::parse_circuit_text(read_text(a.circuit_file));
        if (c.name().empty()) {
            c.set_name(fs::path(a.circuit_file).stem().string());
        }
    } else if (a.random_system) {
        c = cli::transpiled_demo_circuit(*a.random_system, a.seed, a.n_qpe);
    } else {
        throw std::invalid_argument("one of --circuit or --random-system is required");
    }
    const auto fused = fusion::fuse(c);
    std::cout << c.name() << ": " << c.width() << " qubits\n" << cli::format_fusion(fused.report);
    if (c.width() <= 10) {
        const auto s0 = svsim::run(c);
        const auto s1 = svsim::run(fused.circuit);
        const double diff = (s0.to_eigen() - s1.to_eigen()).norm();
        std::printf("equivalence: statevectors differ by %.3e\n", diff);
        if (!(diff <= 1e-10)) {
            throw std::runtime_error("fused circuit is not equivalent to the input");
        }
    } else {
        std::cout << "equivalence: skipped above 10 qubits\n";
    }
    if (!a.dump.empty()) {
        std::ofstream(a.dump) << circuit::to_text(fused.circuit);
    }
    auto record = cli::make_record("fuse-stats", a.seed);
    record["fusion"] = cli::to_json(fused.report);
    record["circuit"] = c.name();
    emit_json(record, a.json_out);
    return 0;
}

int export_step(const std::string &case_file, const std::string &system, const std::string &matrix_out,
                const std::string &rhs_out) {
    require_file(case_file);
    const auto pc = powerflow::load_case(case_file);
    const auto st = powerflow::flat_start(pc);
    const auto step = system == "jacobian"  ? powerflow::jacobian(pc, st)
                      : system == "bprime" ? powerflow::bprime_system(pc, st)
                                           : powerflow::bdoubleprime_system(pc, st);
    prep::write_matrix_market(fs::path(matrix_out), step.matrix.cast<cplx>());
    prep::write_matrix_market(fs::path(rhs_out), CMatrix(step.rhs.cast<cplx>()), true);
    std::printf("%s %s at flat start: %td x %td -> %s, %s\n", pc.name.c_str(), system.c_str(), step.matrix.rows(),
                step.matrix.cols(), matrix_out.c_str(), rhs_out.c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"HHL linear solves and power flow on a statevector simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "simulator threads (default: GRIDQLS_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    SolveLinearArgs sl;
    auto *sl_cmd = app.add_subcommand("solve-linear", "solve A x = b from MatrixMarket files");
    sl_cmd->add_option("--matrix", sl.matrix, "MatrixMarket matrix")->required();
    sl_cmd->add_option("--rhs", sl.rhs, "MatrixMarket vector")->required();
    sl_cmd->add_flag("--precondition", sl.precondition, "force the Gauss-Seidel step");
    sl_cmd->add_option("--kappa-threshold", sl.kappa_threshold, "precondition automatically above this kappa");
    sl_cmd->add_option("--n-qpe", sl.n_qpe, "phase register width")->check(CLI::PositiveNumber);
    sl_cmd->add_flag("--table1-convention", sl.table1, "one extra phase qubit over the formula");
    sl_cmd->add_flag("--fusion", sl.fusion, "fuse the circuit before simulation");
    sl_cmd->add_option("--seed", sl.seed, "recorded in the report");
    sl_cmd->add_option("--name", sl.name, "case name in the report");
    sl_cmd->add_option("--json", sl.json_out, "write the report record here ('-' for stdout)");

    PowerflowArgs pf;
    auto *pf_cmd = app.add_subcommand("powerflow", "run a power flow on a MATPOWER case");
    pf_cmd->add_option("--case", pf.case_file, "case file")->required();
    pf_cmd->add_option("--solver", pf.solver, "linear solver")->check(CLI::IsMember({"classical", "hhl"}));
    pf_cmd->add_option("--variant", pf.variant, "iteration")->check(CLI::IsMember({"newton", "fast_decoupled"}));
    pf_cmd->add_option("--tol", pf.tol, "mismatch tolerance (inf-norm, pu)");
    pf_cmd->add_option("--max-iter", pf.max_iter, "iteration limit");
    pf_cmd->add_option("--n-qpe", pf.n_qpe, "phase register width for every HHL step")->check(CLI::PositiveNumber);
    pf_cmd->add_flag("--table1-convention", pf.table1, "one extra phase qubit over the formula");
    pf_cmd->add_flag("--precondition", pf.precondition, "force the Gauss-Seidel step");
    pf_cmd->add_flag("--fusion", pf.fusion, "fuse HHL circuits before simulation");
    pf_cmd->add_option("--json", pf.json_out, "write the report record here ('-' for stdout)");

    std::string est_matrix, est_json;
    bool est_table1 = false;
    auto *est_cmd = app.add_subcommand("estimate", "qubit budget for a matrix");
    est_cmd->add_option("--matrix", est_matrix, "MatrixMarket matrix")->required();
    est_cmd->add_flag("--table1-convention", est_table1, "one extra phase qubit over the formula");
    est_cmd->add_option("--json", est_json, "write the report record here ('-' for stdout)");

    FuseArgs fa;
    auto *fu_cmd = app.add_subcommand("fuse-stats", "gate fusion statistics");
    auto *fu_circuit = fu_cmd->add_option("--circuit", fa.circuit_file, "circuit text file");
    fu_cmd->add_option("--random-system", fa.random_system, "transpiled HHL circuit of a random DIM x DIM system")
        ->check(CLI::PositiveNumber)
        ->excludes(fu_circuit);
    fu_cmd->add_option("--seed", fa.seed, "seed for --random-system");
    fu_cmd->add_option("--n-qpe", fa.n_qpe, "phase register width for --random-system")->check(CLI::PositiveNumber);
    fu_cmd->add_option("--dump", fa.dump, "write the fused circuit here");
    fu_cmd->add_option("--json", fa.json_out, "write the report record here ('-' for stdout)");

    std::string ex_case, ex_system = "bprime", ex_matrix, ex_rhs;
    auto *ex_cmd = app.add_subcommand("export-step", "write a power-flow linear step at flat start");
    ex_cmd->add_option("--case", ex_case, "case file")->required();
    ex_cmd->add_option("--system", ex_system, "which system")
        ->check(CLI::IsMember({"bprime", "bdoubleprime", "jacobian"}));
    ex_cmd->add_option("--matrix-out", ex_matrix, "MatrixMarket output")->required();
    ex_cmd->add_option("--rhs-out", ex_rhs, "MatrixMarket output")->required();

    CLI11_PARSE(app, argc, argv);

    if (threads == 0) {
        if (const char *env = std::getenv("GRIDQLS_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads > 0) {
        svsim::set_thread_count(threads);
    }

    try {
        if (*sl_cmd) {
            return solve_linear(sl);
        }
        if (*pf_cmd) {
            return run_powerflow(pf);
        }
        if (*est_cmd) {
            return estimate(est_matrix, est_table1, est_json);
        }
        if (*fu_cmd) {
            return fuse_stats(fa);
        }
        return export_step(ex_case, ex_system, ex_matrix, ex_rhs);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
