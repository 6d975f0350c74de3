#pragma once

#include <optional>

#include "gridqls/circuit/circuit.hpp"

namespace gridqls::circuit {

struct TranspileOptions {
    /// Dense gates on more than this many qubits are passed through unchanged.
    /// Unset: every gate is lowered.
    std::optional<std::size_t> keep_dense_wider_than;
};

/**
 * Lower a circuit to the basis {H, X, Y, Z, S, SDG, T, TDG, RX, RY, RZ, P, U3, CX}.
 *
 * CZ, CP and SWAP are rewritten with CX; one-qubit dense gates become U3;
 * wider dense gates go through `append_two_level_decomposition`. The result
 * equals the input up to global phase.
 */
Circuit transpile(const Circuit &circuit, const TranspileOptions &options = {});

/// True when every gate is a one-qubit named gate or CX.
bool is_basis_circuit(const Circuit &circuit);

} // namespace gridqls::circuit
