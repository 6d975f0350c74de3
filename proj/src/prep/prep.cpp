#include "gridqls/prep/prep.hpp"

#include <stdexcept>
#include <string>

#include "gridqls/error.hpp"

namespace gridqls::prep {

std::pair<CVector, double> normalize_rhs(const CVector &b) {
    const double n = b.norm();
    if (b.size() == 0 || n == 0.0) {
        throw std::invalid_argument("right-hand side is the zero vector");
    }
    return {b / n, n};
}

double condition_number(const CMatrix &matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw std::invalid_argument("condition number needs a non-empty square matrix");
    }
    Eigen::JacobiSVD<CMatrix> svd(matrix);
    const auto &s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (smax == 0.0 || smin <= 1e-12 * smax) {
        throw SingularMatrixError("matrix is singular (sigma_min/sigma_max = " + std::to_string(smin / smax) + ")");
    }
    return smax / smin;
}

bool is_hermitian(const CMatrix &matrix, double tol) {
    if (matrix.rows() != matrix.cols()) {
        return false;
    }
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Expanded expand_to_power_of_2(const CMatrix &matrix, const CVector &b) {
    const auto n = static_cast<std::size_t>(matrix.rows());
    const auto p = next_power_of_two(n);
    Expanded out{CMatrix::Identity(p, p), CVector::Zero(p), p - n};
    out.matrix.topLeftCorner(n, n) = matrix;
    out.b.head(n) = b;
    return out;
}

Hermitized hermitize(const CMatrix &matrix, const CVector &b) {
    if (is_hermitian(matrix)) {
        return {matrix, b, false};
    }
    const auto n = matrix.rows();
    Hermitized out{CMatrix::Zero(2 * n, 2 * n), CVector::Zero(2 * n), true};
    out.matrix.topRightCorner(n, n) = matrix;
    out.matrix.bottomLeftCorner(n, n) = matrix.adjoint();
    out.b.head(n) = b;
    return out;
}

Preconditioned gauss_seidel_precondition(const CMatrix &matrix, const CVector &b) {
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        if (matrix(i, i) == cplx{0.0, 0.0}) {
            throw SingularMatrixError("Gauss-Seidel needs a nonzero diagonal (row " + std::to_string(i) + ")");
        }
    }
    CMatrix m = matrix.triangularView<Eigen::Lower>();
    const auto tri = m.triangularView<Eigen::Lower>();
    return {tri.solve(matrix), tri.solve(b), m};
}

PreparedSystem prepare(const CMatrix &matrix, const CVector &b, const PrepareOptions &options) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw std::invalid_argument("system matrix must be square and non-empty");
    }
    if (b.size() != matrix.rows()) {
        throw std::invalid_argument("rhs length " + std::to_string(b.size()) + " does not match matrix dimension " +
                                    std::to_string(matrix.rows()));
    }
    PreparedSystem ps;
    ps.original_dimension = static_cast<std::size_t>(matrix.rows());
    ps.original_condition_number = condition_number(matrix);

    CMatrix a = matrix;
    CVector rhs = b;
    if (options.use_preconditioner || ps.original_condition_number > options.kappa_threshold) {
        auto pc = gauss_seidel_precondition(a, rhs);
        a = std::move(pc.matrix);
        rhs = std::move(pc.b);
        ps.precondition_factor = std::move(pc.factor);
        ps.preconditioned = true;
    }
    auto ex = expand_to_power_of_2(a, rhs);
    ps.padding = ex.padding;
    auto h = hermitize(ex.matrix, ex.b);
    ps.hermitized = h.hermitized;
    // Exact Hermitian symmetry keeps the eigensolver honest downstream.
    ps.matrix = (h.matrix + h.matrix.adjoint()) / 2.0;
    auto [unit, norm] = normalize_rhs(h.b);
    ps.b_normalized = std::move(unit);
    ps.b_norm = norm;
    ps.condition_number = condition_number(ps.matrix);
    return ps;
}

CVector recover_from_state(const PreparedSystem &prepared, const CVector &data_state, double x_norm) {
    if (static_cast<std::size_t>(data_state.size()) != prepared.dimension()) {
        throw std::invalid_argument("solution state length does not match the prepared system");
    }
    CVector full = data_state * (x_norm * prepared.b_norm);
    const auto half = prepared.hermitized ? full.size() / 2 : 0;
    return full.segment(half, static_cast<Eigen::Index>(prepared.original_dimension));
}

SolutionRecovery recover_solution(const PreparedSystem &prepared, const CVector &data_state,
                                  double success_probability, double rotation_constant) {
    if (!(success_probability > 0.0)) {
        throw PrecisionError("success probability is zero; nothing to recover");
    }
    if (!(rotation_constant > 0.0)) {
        throw std::invalid_argument("rotation constant must be positive");
    }
    SolutionRecovery r;
    r.rotation_constant = rotation_constant;
    r.success_probability = success_probability;
    r.x_norm = std::sqrt(success_probability) / rotation_constant;
    r.b_norm = prepared.b_norm;
    r.x = recover_from_state(prepared, data_state, r.x_norm);
    return r;
}

CVector solve_dense(const CMatrix &matrix, const CVector &b) {
    Eigen::FullPivLU<CMatrix> lu(matrix);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("matrix is singular");
    }
    return lu.solve(b);
}

CVector solve_prepared_classically(const PreparedSystem &prepared) {
    const CVector y = solve_dense(prepared.matrix, prepared.b_normalized);
    const double n = y.norm();
    return recover_from_state(prepared, y / n, n);
}

} // namespace gridqls::prep
