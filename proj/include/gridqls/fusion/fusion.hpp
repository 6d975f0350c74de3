#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gridqls/circuit/circuit.hpp"

namespace gridqls::fusion {

using circuit::Circuit;

/// Fusion strategies in priority order.
enum class Strategy : std::size_t {
    OneQubitPair = 0,       ///< 1q followed by 1q on the same qubit
    OneQubitIntoNext = 1,   ///< 1q absorbed into the following 2q gate
    OneQubitIntoPrev = 2,   ///< 1q absorbed into the preceding 2q gate
    TwoQubitPair = 3,       ///< 2q followed by 2q on the same qubit pair
};

struct FusionReport {
    std::size_t gates_before = 0;
    std::size_t gates_after = 0;
    std::size_t depth_before = 0;
    std::size_t depth_after = 0;
    std::array<std::size_t, 4> fusions_by_strategy{0, 0, 0, 0};
    /// Strategy of every fusion, in the order they fired.
    std::vector<Strategy> trace;
    /// Gates on more than two qubits, passed through unfused.
    std::size_t barriers = 0;

    std::size_t total_fusions() const {
        return fusions_by_strategy[0] + fusions_by_strategy[1] + fusions_by_strategy[2] + fusions_by_strategy[3];
    }
    double reduction() const {
        return gates_before ? 1.0 - static_cast<double>(gates_after) / static_cast<double>(gates_before) : 0.0;
    }
};

struct FusionResult {
    Circuit circuit;
    FusionReport report;
};

/**
 * Merge adjacent gates until nothing more applies.
 *
 * Each round sweeps the circuit once per strategy, highest priority first;
 * rounds repeat until a round changes nothing. Two gates are adjacent when no
 * gate between them touches the qubit(s) that the merge moves across. Merged
 * gates are dense `Unitary` gates; gates on more than two qubits are never
 * merged and block merges across them.
 */
FusionResult fuse(const Circuit &circuit);

/// Longest chain of gates linked by shared qubits.
std::size_t depth(const Circuit &circuit);

} // namespace gridqls::fusion
