#pragma once

#include <optional>
#include <vector>

#include "gridqls/types.hpp"

namespace gridqls::hhl {

/**
 * @brief Qubit budget and eigenvalue scaling of one HHL circuit.
 *
 * Register layout (little-endian qubit indices):
 *   [0, n_data)                         data register
 *   [n_data, n_data + phase_width())    phase register, bit i = qubit n_data + i
 *   n_data + phase_width()              rotation ancilla
 *
 * The phase register holds n_qpe magnitude bits plus, when the spectrum has
 * negative eigenvalues, one sign bit (two's complement). n_total follows the
 * textbook count n_data + n_qpe + n_neg_val; the rotation ancilla is on top.
 */
struct ResourcePlan {
    std::size_t n_data = 0;
    std::size_t n_qpe = 0;
    std::size_t n_neg_val = 0;
    std::size_t n_total = 0;
    std::size_t ancilla = 1;
    double condition_number = 1.0;
    /// Phase register counts in units of exp(i * 2pi * k / 2^phase_width()).
    double evolution_time = 2.0 * kPi;
    /// Eigenvalue lambda of the matrix is read as phase lambda * eigen_scale (turns).
    double eigen_scale = 0.0;
    /// Rotation constant C in phase units; the ancilla amplitude is C / lambda~.
    double c_const = 0.0;
    /// Smallest and largest |eigenvalue| in phase-register steps; min_grid is
    /// an integer by construction.
    std::size_t min_grid = 1;
    double max_grid = 1.0;
    /// n_qpe carries the +1 used by the published resource table.
    bool table1_convention = false;

    std::size_t phase_width() const { return n_qpe + n_neg_val; }
    std::size_t width() const { return n_total + ancilla; }
    std::size_t dimension() const { return std::size_t{1} << n_data; }

    std::vector<Qubit> data_qubits() const;
    std::vector<Qubit> phase_qubits() const;
    Qubit ancilla_qubit() const { return n_data + phase_width(); }

    /// C in the matrix's own eigenvalue units (C / eigen_scale).
    double rotation_constant() const { return c_const / eigen_scale; }
};

/// max(n_data + 1, ceil(log2(kappa + 1))).
std::size_t formula_n_qpe(std::size_t n_data, double kappa);

/**
 * Qubit counts for a dimension/kappa pair. With table1_convention, n_qpe is
 * one above the formula. The scaling fields assume a spectrum normalised to
 * |lambda|_min = 1, |lambda|_max = kappa.
 *
 * Throws std::invalid_argument if dimension is not a power of two or kappa < 1.
 */
ResourcePlan estimate_resources(std::size_t dimension, double condition_number, bool has_negative_eigenvalues,
                                bool table1_convention = false);

/// Steps kept free below the top of the magnitude window (at most 1/8 of it).
/// Estimation leakage from the largest eigenvalue otherwise wraps around to
/// readings near zero, or across the sign boundary.
inline constexpr std::size_t kPhaseGuardSteps = 32;

/**
 * Set eigen_scale, c_const, min_grid and max_grid for a spectrum with the
 * given extreme magnitudes. The smallest magnitude lands exactly on grid point
 * m = floor(min/max * (2^n_qpe - 1 - guard)) and everything else scales with
 * it, so the largest stays below the guard band. When the guard would leave
 * m = 0 it is dropped. c_const is m grid steps, i.e. the scaled smallest
 * eigenvalue.
 *
 * Throws gridqls::PrecisionError when m == 0 (register too narrow for kappa).
 */
void apply_scaling(ResourcePlan &plan, double min_abs_eigenvalue, double max_abs_eigenvalue);

struct Spectrum {
    RVector eigenvalues;
    double min_abs = 0.0;
    double max_abs = 0.0;
    bool has_negative = false;

    double condition_number() const { return max_abs / min_abs; }
};

/// Eigenvalues of a Hermitian matrix. Throws SingularMatrixError if one is
/// zero to 1e-12 relative.
Spectrum spectrum_of(const CMatrix &hermitian);

struct PlanOptions {
    std::optional<std::size_t> n_qpe; ///< overrides the formula
    bool table1_convention = false;
};

/// Plan for a concrete Hermitian matrix: counts from its spectrum's kappa,
/// scaling from its extreme eigenvalues.
ResourcePlan plan_for_matrix(const CMatrix &hermitian, const PlanOptions &options = {});

} // namespace gridqls::hhl
