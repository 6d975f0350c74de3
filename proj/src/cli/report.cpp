#include "gridqls/cli/report.hpp"

#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "gridqls/circuit/transpile.hpp"
#include "gridqls/hhl/hhl.hpp"

namespace gridqls::cli {

SolveReport make_report(const std::string &case_name, const hhl::PipelineResult &r) {
    SolveReport s;
    s.case_name = case_name;
    s.matrix_size = r.original_dimension;
    s.condition_number = r.original_condition_number;
    s.prepared_condition_number = r.prepared_condition_number;
    const auto &p = r.solution.plan;
    s.n_total = p.n_total;
    s.n_data = p.n_data;
    s.n_qpe = p.n_qpe;
    s.n_neg_val = p.n_neg_val;
    s.ancilla = p.ancilla;
    s.circuit_generation_seconds = r.solution.circuit_generation_seconds;
    s.simulation_seconds = r.solution.simulation_seconds;
    s.l2_error = r.l2_error;
    s.relative_error = r.relative_error;
    s.success_probability = r.solution.success_probability;
    s.preconditioned = r.preconditioned;
    s.fusion = r.solution.fusion;
    return s;
}

json to_json(const fusion::FusionReport &r) {
    return {{"gates_before", r.gates_before},
            {"gates_after", r.gates_after},
            {"depth_before", r.depth_before},
            {"depth_after", r.depth_after},
            {"fusions_by_strategy", r.fusions_by_strategy},
            {"barriers", r.barriers}};
}

json to_json(const hhl::ResourcePlan &p) {
    return {{"n_data", p.n_data},
            {"n_qpe", p.n_qpe},
            {"n_neg_val", p.n_neg_val},
            {"n_total", p.n_total},
            {"ancilla", p.ancilla},
            {"condition_number", p.condition_number},
            {"evolution_time", p.evolution_time},
            {"eigen_scale", p.eigen_scale},
            {"c_const", p.c_const},
            {"table1_convention", p.table1_convention}};
}

json to_json(const SolveReport &r) {
    json j{{"case_name", r.case_name},
           {"matrix_size", r.matrix_size},
           {"condition_number", r.condition_number},
           {"prepared_condition_number", r.prepared_condition_number},
           {"n_total", r.n_total},
           {"n_data", r.n_data},
           {"n_qpe", r.n_qpe},
           {"n_neg_val", r.n_neg_val},
           {"ancilla", r.ancilla},
           {"circuit_generation_seconds", r.circuit_generation_seconds},
           {"simulation_seconds", r.simulation_seconds},
           {"l2_error", r.l2_error},
           {"relative_error", r.relative_error},
           {"success_probability", r.success_probability},
           {"preconditioned", r.preconditioned}};
    j["fusion"] = r.fusion ? to_json(*r.fusion) : json(nullptr);
    return j;
}

json make_record(const std::string &command, std::uint64_t seed) {
    return {{"schema", kReportSchema}, {"command", command}, {"seed", seed}};
}

namespace {

class Checker {
  public:
    std::vector<std::string> errors;

    bool object(const json &j, const std::string &path) {
        if (!j.is_object()) {
            errors.push_back(path + ": expected an object");
            return false;
        }
        return true;
    }

    const json *field(const json &j, const std::string &path, const char *key) {
        auto it = j.find(key);
        if (it == j.end()) {
            errors.push_back(path + ": missing '" + key + "'");
            return nullptr;
        }
        return &*it;
    }

    void count(const json &j, const std::string &path, const char *key) {
        if (auto f = field(j, path, key); f && !f->is_number_unsigned()) {
            errors.push_back(path + "." + key + ": expected a non-negative integer");
        }
    }

    void number(const json &j, const std::string &path, const char *key, bool non_negative = false) {
        auto f = field(j, path, key);
        if (!f) {
            return;
        }
        if (!f->is_number()) {
            errors.push_back(path + "." + key + ": expected a number");
        } else if (non_negative && f->get<double>() < 0.0) {
            errors.push_back(path + "." + key + ": must be >= 0");
        }
    }

    void boolean(const json &j, const std::string &path, const char *key) {
        if (auto f = field(j, path, key); f && !f->is_boolean()) {
            errors.push_back(path + "." + key + ": expected a boolean");
        }
    }

    void string(const json &j, const std::string &path, const char *key) {
        if (auto f = field(j, path, key); f && !f->is_string()) {
            errors.push_back(path + "." + key + ": expected a string");
        }
    }

    void fusion(const json &j, const std::string &path) {
        if (!object(j, path)) {
            return;
        }
        for (const char *k : {"gates_before", "gates_after", "depth_before", "depth_after", "barriers"}) {
            count(j, path, k);
        }
        auto s = field(j, path, "fusions_by_strategy");
        if (!s) {
            return;
        }
        if (!s->is_array() || s->size() != 4) {
            errors.push_back(path + ".fusions_by_strategy: expected an array of 4 counts");
            return;
        }
        std::uint64_t total = 0;
        for (const auto &v : *s) {
            if (!v.is_number_unsigned()) {
                errors.push_back(path + ".fusions_by_strategy: expected non-negative integers");
                return;
            }
            total += v.get<std::uint64_t>();
        }
        if (errors.empty() && j["gates_before"].get<std::uint64_t>() - j["gates_after"].get<std::uint64_t>() != total) {
            errors.push_back(path + ": fusion counts do not add up to the gate reduction");
        }
    }

    void plan(const json &j, const std::string &path) {
        if (!object(j, path)) {
            return;
        }
        for (const char *k : {"n_data", "n_qpe", "n_neg_val", "n_total", "ancilla"}) {
            count(j, path, k);
        }
        for (const char *k : {"condition_number", "evolution_time", "eigen_scale", "c_const"}) {
            number(j, path, k, true);
        }
        boolean(j, path, "table1_convention");
    }

    void report(const json &j, const std::string &path) {
        if (!object(j, path)) {
            return;
        }
        string(j, path, "case_name");
        for (const char *k : {"matrix_size", "n_total", "n_data", "n_qpe", "n_neg_val", "ancilla"}) {
            count(j, path, k);
        }
        for (const char *k : {"condition_number", "prepared_condition_number", "circuit_generation_seconds",
                              "simulation_seconds", "l2_error", "relative_error", "success_probability"}) {
            number(j, path, k, true);
        }
        boolean(j, path, "preconditioned");
        if (auto f = field(j, path, "fusion"); f && !f->is_null()) {
            fusion(*f, path + ".fusion");
        }
    }

    void powerflow(const json &j, const std::string &path) {
        if (!object(j, path)) {
            return;
        }
        for (const char *k : {"case", "solver", "variant"}) {
            string(j, path, k);
        }
        boolean(j, path, "converged");
        count(j, path, "iterations");
        number(j, path, "final_mismatch", true);
        auto b = field(j, path, "buses");
        if (!b) {
            return;
        }
        if (!b->is_array()) {
            errors.push_back(path + ".buses: expected an array");
            return;
        }
        for (std::size_t i = 0; i < b->size(); ++i) {
            const std::string p = path + ".buses[" + std::to_string(i) + "]";
            if (object((*b)[i], p)) {
                if (auto id = field((*b)[i], p, "id"); id && !id->is_number_integer()) {
                    errors.push_back(p + ".id: expected an integer");
                }
                number((*b)[i], p, "vm", true);
                number((*b)[i], p, "va_deg");
            }
        }
    }
};

} // namespace

std::vector<std::string> validate_record(const json &record) {
    Checker c;
    if (!c.object(record, "$")) {
        return c.errors;
    }
    if (auto s = c.field(record, "$", "schema"); s && (!s->is_string() || *s != kReportSchema)) {
        c.errors.push_back(std::string("$.schema: expected \"") + kReportSchema + "\"");
    }
    c.count(record, "$", "seed");
    static const std::set<std::string> commands{"solve-linear", "powerflow", "estimate", "fuse-stats", "export-step"};
    std::string command;
    if (auto cmd = c.field(record, "$", "command"); cmd) {
        if (!cmd->is_string() || !commands.count(cmd->get<std::string>())) {
            c.errors.push_back("$.command: unknown command");
        } else {
            command = cmd->get<std::string>();
        }
    }
    auto require = [&](const char *key) { return c.field(record, "$", key); };
    if (command == "solve-linear" || command == "powerflow") {
        if (auto r = require("reports"); r) {
            if (!r->is_array()) {
                c.errors.push_back("$.reports: expected an array");
            } else {
                for (std::size_t i = 0; i < r->size(); ++i) {
                    c.report((*r)[i], "$.reports[" + std::to_string(i) + "]");
                }
            }
        }
    }
    if (command == "powerflow") {
        if (auto p = require("powerflow"); p) {
            c.powerflow(*p, "$.powerflow");
        }
    }
    if (command == "estimate") {
        if (auto p = require("resource_plan"); p) {
            c.plan(*p, "$.resource_plan");
        }
    }
    if (command == "fuse-stats") {
        if (auto f = require("fusion"); f) {
            c.fusion(*f, "$.fusion");
        }
    }
    return c.errors;
}

namespace {

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string format_table(const std::vector<SolveReport> &reports) {
    std::vector<std::pair<std::string, std::vector<std::string>>> rows{
        {"", {}},
        {"Matrix Size", {}},
        {"Condition Number", {}},
        {"n_total", {}},
        {"n_data", {}},
        {"n_QPE", {}},
        {"Circuit Generation (s)", {}},
        {"Simulation (s)", {}},
        {"Error", {}},
    };
    for (const auto &r : reports) {
        const std::string n = std::to_string(r.matrix_size);
        rows[0].second.push_back(r.case_name + (r.preconditioned ? "*" : ""));
        rows[1].second.push_back(n + " x " + n);
        rows[2].second.push_back(fmt("%.1f", r.condition_number) +
                                 (r.preconditioned ? " -> " + fmt("%.1f", r.prepared_condition_number) : ""));
        rows[3].second.push_back(std::to_string(r.n_total) + " (+" + std::to_string(r.ancilla) + ")");
        rows[4].second.push_back(std::to_string(r.n_data));
        rows[5].second.push_back(std::to_string(r.n_qpe) + (r.n_neg_val ? " (+1 sign)" : ""));
        rows[6].second.push_back(fmt("%.3f", r.circuit_generation_seconds));
        rows[7].second.push_back(fmt("%.3f", r.simulation_seconds));
        rows[8].second.push_back(fmt("%.2e", r.l2_error));
    }
    std::size_t label_w = 0;
    for (const auto &row : rows) {
        label_w = std::max(label_w, row.first.size());
    }
    std::vector<std::size_t> col_w(reports.size(), 0);
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.second.size(); ++i) {
            col_w[i] = std::max(col_w[i], row.second[i].size());
        }
    }
    std::ostringstream out;
    for (const auto &row : rows) {
        out << row.first << std::string(label_w - row.first.size(), ' ');
        for (std::size_t i = 0; i < row.second.size(); ++i) {
            out << "  " << std::string(col_w[i] - row.second[i].size(), ' ') << row.second[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string format_fusion(const fusion::FusionReport &r) {
    std::ostringstream out;
    out << "gates   " << r.gates_before << " -> " << r.gates_after << " (" << fmt("%.1f", 100.0 * r.reduction())
        << "% fewer)\n";
    out << "depth   " << r.depth_before << " -> " << r.depth_after << '\n';
    out << "fusions 1q+1q " << r.fusions_by_strategy[0] << ", 1q->next 2q " << r.fusions_by_strategy[1]
        << ", 1q->prev 2q " << r.fusions_by_strategy[2] << ", 2q+2q " << r.fusions_by_strategy[3] << '\n';
    if (r.barriers) {
        out << "barriers " << r.barriers << " gate(s) on more than two qubits passed through\n";
    }
    return out.str();
}

std::string format_plan(const hhl::ResourcePlan &p) {
    std::ostringstream out;
    out << "condition number " << fmt("%.4g", p.condition_number) << '\n'
        << "n_data    " << p.n_data << '\n'
        << "n_qpe     " << p.n_qpe << '\n'
        << "n_neg_val " << p.n_neg_val << '\n'
        << "n_total   " << p.n_total << " (+" << p.ancilla << " rotation ancilla)\n";
    return out.str();
}

std::pair<CMatrix, CVector> random_hermitian_system(std::size_t dim, std::uint64_t seed, double kappa_max) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> eig(1.0, kappa_max);
    RMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        g.data()[i] = normal(rng);
    }
    const RMatrix q = Eigen::HouseholderQR<RMatrix>(g).householderQ();
    RVector d(dim);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        d(i) = eig(rng);
    }
    const RMatrix a = q * d.asDiagonal() * q.transpose();
    RVector b(dim);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        b(i) = normal(rng);
    }
    b.normalize();
    return {((a + a.transpose()) / 2.0).cast<cplx>(), b.cast<cplx>()};
}

circuit::Circuit transpiled_demo_circuit(std::size_t dim, std::uint64_t seed, std::optional<std::size_t> n_qpe) {
    auto [a, b] = random_hermitian_system(dim, seed);
    const auto ps = prep::prepare(a, b);
    hhl::HHLOptions o;
    o.n_qpe = n_qpe;
    o.decompose_inversion = true;
    auto built = hhl::build_hhl_circuit(ps, o);
    circuit::Circuit t = circuit::transpile(built.circuit);
    t.set_name("hhl_" + std::to_string(dim) + "x" + std::to_string(dim) + "_seed" + std::to_string(seed));
    return t;
}

} // namespace gridqls::cli
