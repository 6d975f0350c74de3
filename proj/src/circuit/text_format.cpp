#include "gridqls/circuit/text_format.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

#include "gridqls/error.hpp"

namespace gridqls::circuit {

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_ws(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) {
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string &msg) {
    throw ParseError("circuit text line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string &tok, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) {
            fail(line, "bad number '" + tok + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        fail(line, "bad number '" + tok + "'");
    }
}

std::size_t parse_index(const std::string &tok, std::size_t line) {
    std::size_t v = 0;
    const auto *end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        fail(line, "bad qubit index '" + tok + "'");
    }
    return v;
}

std::vector<double> parse_params(const std::string &tok, std::size_t line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= tok.size()) {
        const auto comma = tok.find(',', start);
        const auto piece = tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_real(piece, line));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

std::string to_text(const Circuit &circuit) {
    std::ostringstream out;
    out << "circuit " << circuit.width();
    if (!circuit.name().empty()) {
        out << ' ' << circuit.name();
    }
    out << '\n';
    for (const auto &g : circuit.gates()) {
        out << kind_name(g.kind());
        std::vector<double> params = g.params();
        if (g.is_dense()) {
            const auto &m = g.dense();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    params.push_back(m(r, c).real());
                    params.push_back(m(r, c).imag());
                }
            }
        }
        if (!params.empty()) {
            out << ' ';
            for (std::size_t i = 0; i < params.size(); ++i) {
                out << (i ? "," : "") << fmt_real(params[i]);
            }
        }
        for (auto q : g.qubits()) {
            out << ' ' << q;
        }
        out << '\n';
    }
    return out.str();
}

Circuit parse_circuit_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<Circuit> circuit;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        if (!circuit) {
            if (toks[0] != "circuit" || toks.size() < 2 || toks.size() > 3) {
                fail(lineno, "expected header 'circuit <width> [name]'");
            }
            const auto width = parse_index(toks[1], lineno);
            if (width == 0) {
                fail(lineno, "width must be positive");
            }
            circuit.emplace(width, toks.size() == 3 ? toks[2] : std::string{});
            continue;
        }
        const auto kind = kind_from_name(toks[0]);
        if (!kind) {
            fail(lineno, "unknown gate kind '" + toks[0] + "'");
        }
        const bool has_params = *kind == GateKind::Unitary || kind_param_count(*kind) > 0;
        std::size_t pos = 1;
        std::vector<double> params;
        if (has_params) {
            if (toks.size() < 2) {
                fail(lineno, "missing parameters");
            }
            params = parse_params(toks[pos++], lineno);
        }
        std::vector<Qubit> qubits;
        for (; pos < toks.size(); ++pos) {
            qubits.push_back(parse_index(toks[pos], lineno));
        }
        try {
            if (*kind == GateKind::Unitary) {
                if (qubits.empty() || qubits.size() > 16) {
                    fail(lineno, "UNITARY needs between 1 and 16 qubits");
                }
                const auto dim = Eigen::Index{1} << qubits.size();
                if (params.size() != static_cast<std::size_t>(2 * dim * dim)) {
                    fail(lineno, "UNITARY on " + std::to_string(qubits.size()) + " qubit(s) needs " +
                                     std::to_string(2 * dim * dim) + " reals");
                }
                CMatrix m(dim, dim);
                for (Eigen::Index r = 0; r < dim; ++r) {
                    for (Eigen::Index c = 0; c < dim; ++c) {
                        const auto k = static_cast<std::size_t>(2 * (r * dim + c));
                        m(r, c) = cplx{params[k], params[k + 1]};
                    }
                }
                circuit->append(Gate::unitary(std::move(qubits), std::move(m)));
            } else {
                circuit->append(Gate(*kind, std::move(qubits), std::move(params)));
            }
        } catch (const ParseError &) {
            throw;
        } catch (const std::exception &e) {
            fail(lineno, e.what());
        }
    }
    if (!circuit) {
        throw ParseError("circuit text: missing 'circuit <width>' header");
    }
    return std::move(*circuit);
}

} // namespace gridqls::circuit
