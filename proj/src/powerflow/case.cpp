#include "gridqls/powerflow/case.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gridqls/error.hpp"

namespace gridqls::powerflow {

namespace {

constexpr double kDeg = kPi / 180.0;

// Columns in the standard layout, including OPF result columns.
constexpr std::size_t kBusCols = 17;
constexpr std::size_t kGenCols = 25;
constexpr std::size_t kBranchCols = 21;

std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_comment = false;
    bool in_string = false;
    for (char ch : text) {
        if (ch == '\n') {
            in_comment = false;
            in_string = false;
            out.push_back(ch);
            continue;
        }
        if (in_comment) {
            continue;
        }
        if (ch == '\'') {
            in_string = !in_string;
        } else if (ch == '%' && !in_string) {
            in_comment = true;
            continue;
        }
        out.push_back(ch);
    }
    return out;
}

using Table = std::vector<std::vector<double>>;

// Returns false when the block is absent.
bool extract_block(const std::string &text, const std::string &name, Table &rows) {
    const std::regex start("mpc\\." + name + "\\s*=\\s*\\[");
    std::smatch m;
    if (!std::regex_search(text, m, start)) {
        return false;
    }
    const auto begin = static_cast<std::size_t>(m.position(0) + m.length(0));
    const auto end = text.find(']', begin);
    if (end == std::string::npos) {
        throw ParseError("mpc." + name + ": missing closing ']'");
    }
    const std::string body = text.substr(begin, end - begin);
    std::size_t row_no = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto stop = body.find_first_of(";\n", pos);
        std::string row = body.substr(pos, stop == std::string::npos ? std::string::npos : stop - pos);
        pos = stop == std::string::npos ? body.size() + 1 : stop + 1;
        for (char &ch : row) {
            if (ch == ',' || ch == '\t' || ch == '\r') {
                ch = ' ';
            }
        }
        if (row.find_first_not_of(' ') == std::string::npos) {
            continue;
        }
        ++row_no;
        std::istringstream ss(row);
        std::vector<double> vals;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
                vals.push_back(v);
            } catch (const std::exception &) {
                throw ParseError("mpc." + name + " row " + std::to_string(row_no) + ": bad number '" + tok + "'");
            }
        }
        rows.push_back(std::move(vals));
    }
    return true;
}

void check_width(const Table &rows, const std::string &name, std::size_t min_cols, std::size_t known_cols,
                 std::vector<std::string> &warnings) {
    std::size_t widest = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() < min_cols) {
            throw ParseError("mpc." + name + " row " + std::to_string(i + 1) + ": " + std::to_string(rows[i].size()) +
                             " columns, need at least " + std::to_string(min_cols));
        }
        widest = std::max(widest, rows[i].size());
    }
    if (widest > known_cols) {
        warnings.push_back("mpc." + name + ": ignoring " + std::to_string(widest - known_cols) +
                           " column(s) past the standard layout");
    }
}

int as_int(double v, const std::string &what) {
    if (v != std::floor(v)) {
        throw ParseError(what + ": expected an integer, got " + std::to_string(v));
    }
    return static_cast<int>(v);
}

} // namespace

std::size_t PowerFlowCase::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) {
            return i;
        }
    }
    throw std::out_of_range("no bus with id " + std::to_string(id));
}

std::size_t PowerFlowCase::slack_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].type == BusType::Slack) {
            return i;
        }
    }
    throw std::logic_error("case has no slack bus");
}

PowerFlowCase parse_case(std::string_view raw) {
    const std::string text = strip_comments(raw);
    PowerFlowCase c;

    std::smatch m;
    if (std::regex_search(text, m, std::regex("function\\s+mpc\\s*=\\s*(\\w+)"))) {
        c.name = m[1];
    }
    if (!std::regex_search(text, m, std::regex("mpc\\.baseMVA\\s*=\\s*([^;\\s]+)"))) {
        throw ParseError("missing mpc.baseMVA");
    }
    try {
        c.base_mva = std::stod(m[1]);
    } catch (const std::exception &) {
        throw ParseError("mpc.baseMVA: bad number '" + std::string(m[1]) + "'");
    }
    if (!(c.base_mva > 0.0)) {
        throw ParseError("mpc.baseMVA must be positive");
    }
    const double base = c.base_mva;

    Table bus, gen, branch;
    if (!extract_block(text, "bus", bus)) {
        throw ParseError("missing block mpc.bus");
    }
    if (!extract_block(text, "gen", gen)) {
        throw ParseError("missing block mpc.gen");
    }
    if (!extract_block(text, "branch", branch)) {
        throw ParseError("missing block mpc.branch");
    }
    check_width(bus, "bus", 13, kBusCols, c.warnings);
    check_width(gen, "gen", 10, kGenCols, c.warnings);
    check_width(branch, "branch", 11, kBranchCols, c.warnings);

    std::set<int> ids;
    std::size_t slack = 0;
    for (std::size_t i = 0; i < bus.size(); ++i) {
        const auto &r = bus[i];
        const std::string where = "mpc.bus row " + std::to_string(i + 1);
        Bus b;
        b.id = as_int(r[0], where);
        const int type = as_int(r[1], where);
        if (type < 1 || type > 4) {
            throw ParseError(where + ": bus type must be 1..4");
        }
        b.type = static_cast<BusType>(type);
        b.pd = r[2] / base;
        b.qd = r[3] / base;
        b.gs = r[4] / base;
        b.bs = r[5] / base;
        b.area = as_int(r[6], where);
        b.vm = r[7];
        b.va = r[8] * kDeg;
        b.base_kv = r[9];
        b.zone = as_int(r[10], where);
        b.vmax = r[11];
        b.vmin = r[12];
        if (!ids.insert(b.id).second) {
            throw ParseError(where + ": duplicate bus id " + std::to_string(b.id));
        }
        slack += b.type == BusType::Slack;
        c.buses.push_back(b);
    }
    if (slack != 1) {
        throw ParseError("case needs exactly one slack bus, found " + std::to_string(slack));
    }

    for (std::size_t i = 0; i < gen.size(); ++i) {
        const auto &r = gen[i];
        const std::string where = "mpc.gen row " + std::to_string(i + 1);
        Generator g;
        g.bus = as_int(r[0], where);
        if (!ids.count(g.bus)) {
            throw ParseError(where + ": unknown bus " + std::to_string(g.bus));
        }
        g.pg = r[1] / base;
        g.qg = r[2] / base;
        g.qmax = r[3] / base;
        g.qmin = r[4] / base;
        g.vg = r[5];
        g.mbase = r[6];
        g.in_service = r[7] > 0.0;
        g.pmax = r[8] / base;
        g.pmin = r[9] / base;
        c.generators.push_back(g);
    }

    for (std::size_t i = 0; i < branch.size(); ++i) {
        const auto &r = branch[i];
        const std::string where = "mpc.branch row " + std::to_string(i + 1);
        Branch br;
        br.from = as_int(r[0], where);
        br.to = as_int(r[1], where);
        if (!ids.count(br.from) || !ids.count(br.to)) {
            throw ParseError(where + ": branch references an unknown bus");
        }
        br.r = r[2];
        br.x = r[3];
        br.b = r[4];
        br.rate_a = r[5];
        br.rate_b = r[6];
        br.rate_c = r[7];
        br.ratio = r[8];
        br.angle = r[9] * kDeg;
        br.in_service = r[10] > 0.0;
        if (r.size() >= 13) {
            br.angmin = r[11] * kDeg;
            br.angmax = r[12] * kDeg;
        }
        c.branches.push_back(br);
    }
    return c;
}

PowerFlowCase load_case(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open case file " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        PowerFlowCase c = parse_case(ss.str());
        if (c.name.empty()) {
            c.name = path.stem().string();
        }
        return c;
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_case(const PowerFlowCase &c) {
    const double base = c.base_mva;
    std::string out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "\t%.17g", v);
        out += buf;
    };
    out += "function mpc = " + (c.name.empty() ? std::string("case") : c.name) + "\n";
    out += "mpc.version = '2';\n";
    std::snprintf(buf, sizeof buf, "mpc.baseMVA = %.17g;\n", base);
    out += buf;
    out += "\n%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin\nmpc.bus = [\n";
    for (const auto &b : c.buses) {
        for (double v : {double(b.id), double(static_cast<int>(b.type)), b.pd * base, b.qd * base, b.gs * base,
                         b.bs * base, double(b.area), b.vm, b.va / kDeg, b.base_kv, double(b.zone), b.vmax, b.vmin}) {
            num(v);
        }
        out += ";\n";
    }
    out += "];\n\n%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin\nmpc.gen = [\n";
    for (const auto &g : c.generators) {
        for (double v : {double(g.bus), g.pg * base, g.qg * base, g.qmax * base, g.qmin * base, g.vg, g.mbase,
                         g.in_service ? 1.0 : 0.0, g.pmax * base, g.pmin * base}) {
            num(v);
        }
        out += ";\n";
    }
    out += "];\n\n%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\tangmin\tangmax\nmpc.branch = [\n";
    for (const auto &br : c.branches) {
        for (double v : {double(br.from), double(br.to), br.r, br.x, br.b, br.rate_a, br.rate_b, br.rate_c, br.ratio,
                         br.angle / kDeg, br.in_service ? 1.0 : 0.0, br.angmin / kDeg, br.angmax / kDeg}) {
            num(v);
        }
        out += ";\n";
    }
    out += "];\n";
    return out;
}

bool same_case(const PowerFlowCase &a, const PowerFlowCase &b, double tol) {
    auto eq = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)}); };
    if (a.name != b.name || !eq(a.base_mva, b.base_mva) || a.buses.size() != b.buses.size() ||
        a.generators.size() != b.generators.size() || a.branches.size() != b.branches.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.buses.size(); ++i) {
        const auto &x = a.buses[i];
        const auto &y = b.buses[i];
        if (x.id != y.id || x.type != y.type || x.area != y.area || x.zone != y.zone || !eq(x.pd, y.pd) ||
            !eq(x.qd, y.qd) || !eq(x.gs, y.gs) || !eq(x.bs, y.bs) || !eq(x.vm, y.vm) || !eq(x.va, y.va) ||
            !eq(x.base_kv, y.base_kv) || !eq(x.vmax, y.vmax) || !eq(x.vmin, y.vmin)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.generators.size(); ++i) {
        const auto &x = a.generators[i];
        const auto &y = b.generators[i];
        if (x.bus != y.bus || x.in_service != y.in_service || !eq(x.pg, y.pg) || !eq(x.qg, y.qg) ||
            !eq(x.qmax, y.qmax) || !eq(x.qmin, y.qmin) || !eq(x.vg, y.vg) || !eq(x.mbase, y.mbase) ||
            !eq(x.pmax, y.pmax) || !eq(x.pmin, y.pmin)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.branches.size(); ++i) {
        const auto &x = a.branches[i];
        const auto &y = b.branches[i];
        if (x.from != y.from || x.to != y.to || x.in_service != y.in_service || !eq(x.r, y.r) || !eq(x.x, y.x) ||
            !eq(x.b, y.b) || !eq(x.rate_a, y.rate_a) || !eq(x.rate_b, y.rate_b) || !eq(x.rate_c, y.rate_c) ||
            !eq(x.ratio, y.ratio) || !eq(x.angle, y.angle) || !eq(x.angmin, y.angmin) || !eq(x.angmax, y.angmax)) {
            return false;
        }
    }
    return true;
}

} // namespace gridqls::powerflow
