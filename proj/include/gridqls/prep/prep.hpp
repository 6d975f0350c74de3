#pragma once

#include <utility>

#include "gridqls/types.hpp"

namespace gridqls::prep {

/// Default condition number above which `prepare` preconditions on its own.
inline constexpr double kDefaultKappaThreshold = 200.0;

/// Returns (b / ||b||, ||b||). Throws std::invalid_argument for a zero vector.
std::pair<CVector, double> normalize_rhs(const CVector &b);

/// sigma_max / sigma_min from a full SVD. Throws SingularMatrixError when
/// sigma_min <= 1e-12 * sigma_max.
double condition_number(const CMatrix &matrix);

bool is_hermitian(const CMatrix &matrix, double tol = 1e-10);

struct Expanded {
    CMatrix matrix;
    CVector b;
    std::size_t padding = 0;
};

/// Pad to the next power of two: ones on the new diagonal, zeros elsewhere
/// and in b.
Expanded expand_to_power_of_2(const CMatrix &matrix, const CVector &b);

struct Hermitized {
    CMatrix matrix;
    CVector b;
    bool hermitized = false;
};

/// Hermitian input comes back unchanged. Otherwise returns [[0, A], [A^H, 0]]
/// with rhs [b; 0]; the solution of the original system is the lower half of
/// the embedded solution.
Hermitized hermitize(const CMatrix &matrix, const CVector &b);

struct Preconditioned {
    CMatrix matrix;
    CVector b;
    CMatrix factor; ///< M = D + L
};

/// Left Gauss-Seidel preconditioning: returns (M^-1 A, M^-1 b, M) with M the
/// lower triangle of A including the diagonal. Throws SingularMatrixError on a
/// zero diagonal entry.
Preconditioned gauss_seidel_precondition(const CMatrix &matrix, const CVector &b);

struct PrepareOptions {
    bool use_preconditioner = false;
    double kappa_threshold = kDefaultKappaThreshold;
};

/// A system ready for HHL plus what is needed to map the answer back.
struct PreparedSystem {
    CMatrix matrix;       ///< Hermitian, power-of-two dimension
    CVector b_normalized; ///< unit vector
    double b_norm = 0.0;
    std::size_t original_dimension = 0;
    std::size_t padding = 0;
    bool hermitized = false;
    bool preconditioned = false;
    CMatrix precondition_factor; ///< empty unless preconditioned
    double original_condition_number = 0.0;
    double condition_number = 0.0; ///< of `matrix`

    std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Condition check, optional Gauss-Seidel step (flag set or kappa above the
/// threshold), power-of-two padding, Hermitization if needed, then rhs
/// normalisation. Throws std::invalid_argument on shape mismatch.
PreparedSystem prepare(const CMatrix &matrix, const CVector &b, const PrepareOptions &options = {});

struct SolutionRecovery {
    CVector x;
    double rotation_constant = 0.0;
    double success_probability = 0.0;
    double x_norm = 0.0; ///< norm of the prepared-system solution
    double b_norm = 0.0;
};

/**
 * Undo the preparation given the normalised solution state of the prepared
 * system. The HHL branch amplitude of eigenvalue lambda is C / lambda, so the
 * prepared solution norm is sqrt(P) / C, where P is the probability of the
 * success branch and C the rotation constant in the matrix's own eigenvalue
 * units.
 */
SolutionRecovery recover_solution(const PreparedSystem &prepared, const CVector &data_state,
                                  double success_probability, double rotation_constant);

/// Same bookkeeping when the prepared-system solution norm is already known.
CVector recover_from_state(const PreparedSystem &prepared, const CVector &data_state, double x_norm);

/// Dense direct solve of the prepared system, mapped back to original units.
CVector solve_prepared_classically(const PreparedSystem &prepared);

/// Dense LU solve. Throws SingularMatrixError when the matrix is singular.
CVector solve_dense(const CMatrix &matrix, const CVector &b);

} // namespace gridqls::prep
