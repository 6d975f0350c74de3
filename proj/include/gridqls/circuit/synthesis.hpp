#pragma once

#include <span>
#include <vector>

#include "gridqls/circuit/circuit.hpp"

namespace gridqls::circuit {

/// u = e^{i alpha} RZ(beta) RY(gamma) RZ(delta)
struct ZYZ {
    double alpha;
    double beta;
    double gamma;
    double delta;
};

ZYZ zyz_decompose(const CMatrix &u);

/// U3 gate equal to `u` up to global phase.
Gate u3_from_matrix(Qubit q, const CMatrix &u);

/// Principal square root of a 2x2 unitary (V*V = u).
CMatrix unitary_sqrt(const CMatrix &u);

/// A control line; the gate fires when the qubit equals `value`.
struct Control {
    Qubit qubit;
    bool value = true;
};

/**
 * Append an exact (global phase included) decomposition of the
 * multi-controlled 2x2 unitary `u` on `target` into CX and one-qubit gates.
 * One control uses the A-X-B-X-C construction; more controls recurse through
 * the ancilla-free square-root construction, so cost grows as 3^k.
 */
void append_multi_controlled(Circuit &out, std::span<const Control> controls, Qubit target, const CMatrix &u);

/**
 * Append a uniformly controlled RY: for control register value j (bit i of j
 * is controls[i]) the target receives RY(angles[j]). Emits 2^k RY and 2^k CX
 * in Gray-code order (2^k = angles.size()).
 */
void append_uniformly_controlled_ry(Circuit &out, std::span<const Qubit> controls, Qubit target,
                                    std::span<const double> angles);

/// Dense block-diagonal matrix of the uniformly controlled RY on
/// qubits [target, controls...] (target is gate-local bit 0).
CMatrix uniformly_controlled_ry_matrix(std::span<const double> angles);

/**
 * Append an exact decomposition of an arbitrary dense unitary on `qubits`
 * into CX and one-qubit gates: Givens-style two-level factors, each realised
 * with Gray-code multi-controlled X moves and one multi-controlled 2x2 gate.
 */
void append_two_level_decomposition(Circuit &out, const std::vector<Qubit> &qubits, const CMatrix &u);

} // namespace gridqls::circuit
