#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridqls/circuit/circuit.hpp"

namespace gridqls::svsim {

using circuit::Circuit;
using circuit::Gate;

/// Default upper bound on simulated qubits (2^26 amplitudes = 1 GiB).
inline constexpr std::size_t kDefaultMaxQubits = 26;

/**
 * @brief Dense statevector of n qubits.
 *
 * Index convention is little-endian: bit q of an amplitude index is the value
 * of qubit q, so amplitude 0b10 on two qubits is |q1=1, q0=0>.
 */
class StateVector {
  public:
    /// |0...0> on n qubits. Throws std::invalid_argument unless 1 <= n <= max_qubits.
    explicit StateVector(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits);

    /// Takes ownership of 2^n amplitudes (not renormalised).
    static StateVector from_amplitudes(std::vector<cplx> amps);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }

    CVector to_eigen() const;
    double norm_squared() const;

  private:
    StateVector() = default;

    std::size_t n_qubits_ = 0;
    std::vector<cplx> amps_;
};

inline StateVector init_state(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits) {
    return StateVector(n_qubits, max_qubits);
}

/// Apply one gate in place using the kernel specialised for its kind.
void apply_gate(StateVector &state, const Gate &gate);

/// Generic dense kernel: apply a 2^k x 2^k matrix on `qubits` (gate-local
/// bit i is qubits[i]). Matrices that are at least half zeros are applied
/// row-sparse.
void apply_matrix(StateVector &state, const std::vector<Qubit> &qubits, const CMatrix &matrix);

/// Run a circuit from |0...0>.
StateVector run(const Circuit &circuit, std::size_t max_qubits = kDefaultMaxQubits);

/// Apply every gate of a circuit to an existing state.
void run_on(StateVector &state, const Circuit &circuit);

/**
 * Marginal distribution over `qubits`: entry v is the probability that
 * qubits[i] reads bit i of v.
 */
std::vector<double> marginal_probabilities(const StateVector &state, std::span<const Qubit> qubits);

/**
 * Same distribution keyed by bitstring; character 0 is qubits.back() and the
 * last character is qubits.front(). Zero-probability outcomes are omitted.
 */
std::map<std::string, double> probabilities(const StateVector &state, std::span<const Qubit> qubits);

/// Bitstring of `value` over `width` bits, most significant first.
std::string to_bitstring(std::uint64_t value, std::size_t width);

/// Project onto qubit == outcome and renormalise. Returns the pre-selection
/// probability. Throws gridqls::PrecisionError when it is <= 1e-12.
std::pair<StateVector, double> postselect(const StateVector &state, Qubit qubit, bool outcome);

struct MeasurementResult {
    std::map<std::string, std::size_t> counts; ///< full-register bitstrings
    std::size_t shots = 0;
    std::uint64_t seed = 0;
};

/// i.i.d. samples of the full register from |amp|^2, reproducible by seed.
MeasurementResult sample(const StateVector &state, std::size_t shots, std::uint64_t seed);

// Binary layout (all little-endian): uint64 amplitude count N, then N pairs
// of IEEE-754 doubles (re, im) in index order.
void write_binary(const StateVector &state, std::ostream &out);
StateVector read_binary(std::istream &in);

/// Worker threads for the gate kernels (no-op without OpenMP).
void set_thread_count(int threads);
int thread_count();

} // namespace gridqls::svsim
