#include "gridqls/circuit/transpile.hpp"

#include "gridqls/circuit/synthesis.hpp"

namespace gridqls::circuit {

namespace {

void lower(Circuit &out, const Gate &g, const TranspileOptions &options) {
    const auto &q = g.qubits();
    switch (g.kind()) {
    case GateKind::CZ:
        out.append(Gate::h(q[1]));
        out.append(Gate::cx(q[0], q[1]));
        out.append(Gate::h(q[1]));
        return;
    case GateKind::CPhase: {
        const double half = g.params()[0] / 2;
        out.append(Gate::phase(q[0], half));
        out.append(Gate::cx(q[0], q[1]));
        out.append(Gate::phase(q[1], -half));
        out.append(Gate::cx(q[0], q[1]));
        out.append(Gate::phase(q[1], half));
        return;
    }
    case GateKind::SWAP:
        out.append(Gate::cx(q[0], q[1]));
        out.append(Gate::cx(q[1], q[0]));
        out.append(Gate::cx(q[0], q[1]));
        return;
    case GateKind::Unitary:
        if (options.keep_dense_wider_than && g.arity() > *options.keep_dense_wider_than) {
            out.append(g);
        } else if (g.arity() == 1) {
            out.append(u3_from_matrix(q[0], g.dense()));
        } else {
            append_two_level_decomposition(out, q, g.dense());
        }
        return;
    default:
        out.append(g);
        return;
    }
}

} // namespace

Circuit transpile(const Circuit &circuit, const TranspileOptions &options) {
    Circuit out(circuit.width(), circuit.name());
    for (const auto &t : circuit.tags()) {
        out.add_tag(t);
    }
    out.add_tag("transpiled");
    for (const auto &g : circuit.gates()) {
        lower(out, g, options);
    }
    return out;
}

bool is_basis_circuit(const Circuit &circuit) {
    for (const auto &g : circuit.gates()) {
        if (g.kind() == GateKind::CX) {
            continue;
        }
        if (g.arity() != 1 || g.is_dense()) {
            return false;
        }
    }
    return true;
}

} // namespace gridqls::circuit
