#pragma once

#include <optional>

#include "gridqls/circuit/circuit.hpp"
#include "gridqls/fusion/fusion.hpp"
#include "gridqls/hhl/resources.hpp"
#include "gridqls/prep/prep.hpp"
#include "gridqls/svsim/state_vector.hpp"

namespace gridqls::hhl {

using circuit::Circuit;

/// Amplitude encoding of a unit vector on log2(b.size()) qubits: a tree of
/// uniformly controlled RY gates (most significant qubit first), plus one
/// diagonal phase gate when b has non-real entries.
/// Throws std::invalid_argument unless ||b|| = 1 within 1e-10 and the length
/// is a power of two.
Circuit build_state_prep(const CVector &b);

/// QFT on qubits [0, n): |x> -> 2^{-n/2} sum_k exp(2 pi i x k / 2^n) |k>.
Circuit build_qft(std::size_t n);
Circuit build_iqft(std::size_t n);

/**
 * Phase estimation of U = exp(i * matrix * eigen_scale * evolution_time) on a
 * circuit of plan.n_data + plan.phase_width() qubits. Phase qubit j controls
 * U^(2^j), emitted as one dense gate from the exact eigendecomposition.
 * Throws std::invalid_argument when the matrix is not Hermitian or its size
 * does not match plan.n_data.
 */
Circuit build_qpe(const CMatrix &matrix, const ResourcePlan &plan);

/// Ancilla angle for every phase-register value k: 2 asin(C / lambda~(k)),
/// lambda~ read in two's complement when plan.n_neg_val = 1; 0 for k = 0.
/// With C equal to the scaled smallest eigenvalue the ratio is clipped to
/// +-1, so readings below the spectrum (pure estimation leakage) get a full
/// rotation rather than an unbounded inverse.
std::vector<double> inversion_angles(const ResourcePlan &plan);

/// Eigenvalue-inversion rotation on a plan.width() circuit, as one dense
/// multiplexed RY or decomposed into RY and CX gates.
Circuit build_inversion(const ResourcePlan &plan, bool decomposed = false);

/// Widest inversion (phase register + ancilla) emitted as one dense gate by
/// default; a dense gate on k qubits holds 4^k amplitudes.
inline constexpr std::size_t kMaxDenseInversionQubits = 10;

struct HHLOptions {
    std::optional<std::size_t> n_qpe;
    bool table1_convention = false;
    /// Unset: dense up to kMaxDenseInversionQubits, decomposed above.
    std::optional<bool> decompose_inversion;
    bool fuse = false;
    std::size_t max_qubits = svsim::kDefaultMaxQubits;
};

struct HHLCircuit {
    Circuit circuit;
    ResourcePlan plan;
};

/// State prep, QPE, inversion, inverse QPE for a prepared system.
HHLCircuit build_hhl_circuit(const prep::PreparedSystem &system, const HHLOptions &options = {});

/// Same pieces for a bare Hermitian matrix, unit rhs and an explicit plan.
Circuit build_hhl_circuit(const CMatrix &matrix, const CVector &b_unit, const ResourcePlan &plan,
                          bool decompose_inversion = false);

struct HHLSolution {
    CVector x;               ///< original units, original dimension
    CVector data_state;      ///< normalised data register on the success branch
    double success_probability = 0.0;  ///< P(ancilla = 1)
    double solution_probability = 0.0; ///< P(ancilla = 1 and phase register = 0)
    double x_norm = 0.0;               ///< norm of the prepared-system solution
    ResourcePlan plan;
    std::size_t gate_count = 0; ///< of the circuit actually simulated
    std::optional<fusion::FusionReport> fusion;
    double circuit_generation_seconds = 0.0;
    double fusion_seconds = 0.0;
    double simulation_seconds = 0.0;
};

/// Read the success branch (ancilla 1, phase register 0) out of a final HHL
/// state. Returns (normalised data state, branch probability).
std::pair<CVector, double> success_branch(const svsim::StateVector &state, const ResourcePlan &plan);

/**
 * Build, optionally fuse, simulate, and map the result back to the original
 * system. Throws PrecisionError when the success branch is empty.
 */
HHLSolution solve(const prep::PreparedSystem &system, const HHLOptions &options = {});

} // namespace gridqls::hhl
