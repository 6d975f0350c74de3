#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "gridqls/types.hpp"

namespace gridqls::circuit {

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    Phase,
    U3,
    CX,
    CZ,
    CPhase,
    SWAP,
    Unitary,
};

std::string_view kind_name(GateKind kind);
std::optional<GateKind> kind_from_name(std::string_view name);

/// Number of qubits a named kind acts on; 0 for `Unitary` (variable).
std::size_t kind_arity(GateKind kind);
/// Number of real angle parameters a kind takes.
std::size_t kind_param_count(GateKind kind);

/**
 * @brief One gate instance: kind, angles, target qubits and (for `Unitary`)
 * a dense matrix.
 *
 * Matrix convention: for a gate on qubits {q_0, ..., q_{k-1}} the matrix
 * row/column index is sum_i b_i 2^i where b_i is the value of q_i. For CX the
 * control is q_0 and the target q_1.
 *
 * Gates are immutable; the dense matrix is shared between copies.
 */
class Gate {
  public:
    /// Named gate. Throws std::invalid_argument on arity/parameter mismatch,
    /// repeated qubits, or `GateKind::Unitary` (use `unitary()`).
    Gate(GateKind kind, std::vector<Qubit> qubits, std::vector<double> params = {});

    /// Dense k-qubit gate. Throws std::invalid_argument when the matrix is not
    /// 2^k x 2^k or not unitary within 1e-10.
    static Gate unitary(std::vector<Qubit> qubits, CMatrix matrix);

    static Gate h(Qubit q) { return {GateKind::H, {q}}; }
    static Gate x(Qubit q) { return {GateKind::X, {q}}; }
    static Gate y(Qubit q) { return {GateKind::Y, {q}}; }
    static Gate z(Qubit q) { return {GateKind::Z, {q}}; }
    static Gate s(Qubit q) { return {GateKind::S, {q}}; }
    static Gate sdg(Qubit q) { return {GateKind::Sdg, {q}}; }
    static Gate t(Qubit q) { return {GateKind::T, {q}}; }
    static Gate tdg(Qubit q) { return {GateKind::Tdg, {q}}; }
    static Gate rx(Qubit q, double theta) { return {GateKind::RX, {q}, {theta}}; }
    static Gate ry(Qubit q, double theta) { return {GateKind::RY, {q}, {theta}}; }
    static Gate rz(Qubit q, double theta) { return {GateKind::RZ, {q}, {theta}}; }
    static Gate phase(Qubit q, double lambda) { return {GateKind::Phase, {q}, {lambda}}; }
    static Gate u3(Qubit q, double theta, double phi, double lambda) {
        return {GateKind::U3, {q}, {theta, phi, lambda}};
    }
    static Gate cx(Qubit control, Qubit target) { return {GateKind::CX, {control, target}}; }
    static Gate cz(Qubit a, Qubit b) { return {GateKind::CZ, {a, b}}; }
    static Gate cphase(Qubit a, Qubit b, double lambda) { return {GateKind::CPhase, {a, b}, {lambda}}; }
    static Gate swap(Qubit a, Qubit b) { return {GateKind::SWAP, {a, b}}; }

    GateKind kind() const noexcept { return kind_; }
    const std::vector<Qubit> &qubits() const noexcept { return qubits_; }
    const std::vector<double> &params() const noexcept { return params_; }
    std::size_t arity() const noexcept { return qubits_.size(); }
    bool is_dense() const noexcept { return kind_ == GateKind::Unitary; }

    /// Dense matrix of a `Unitary` gate. Throws std::logic_error for named kinds.
    const CMatrix &dense() const;

    /// Same gate acting on relabelled qubits (q -> mapping[q]).
    Gate remapped(const std::vector<Qubit> &mapping) const;

    friend bool operator==(const Gate &a, const Gate &b);

  private:
    Gate() = default;

    GateKind kind_{GateKind::H};
    std::vector<Qubit> qubits_;
    std::vector<double> params_;
    std::shared_ptr<const CMatrix> matrix_;
};

/// The 2^k x 2^k unitary of a gate (standard definitions, index convention above).
CMatrix gate_matrix(const Gate &gate);

/// Inverse gate; named kinds map to named kinds.
Gate adjoint(const Gate &gate);

/// max_ij |(U U^dagger - I)_ij|
double unitarity_defect(const CMatrix &u);

} // namespace gridqls::circuit
