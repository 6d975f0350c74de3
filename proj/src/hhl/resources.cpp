#include "gridqls/hhl/resources.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gridqls/error.hpp"

namespace gridqls::hhl {

std::vector<Qubit> ResourcePlan::data_qubits() const {
    std::vector<Qubit> q(n_data);
    for (std::size_t i = 0; i < n_data; ++i) {
        q[i] = i;
    }
    return q;
}

std::vector<Qubit> ResourcePlan::phase_qubits() const {
    std::vector<Qubit> q(phase_width());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = n_data + i;
    }
    return q;
}

std::size_t formula_n_qpe(std::size_t n_data, double kappa) {
    const auto by_kappa = static_cast<std::size_t>(std::ceil(std::log2(kappa + 1.0)));
    return std::max(n_data + 1, by_kappa);
}

void apply_scaling(ResourcePlan &plan, double min_abs, double max_abs) {
    if (!(min_abs > 0.0) || max_abs < min_abs) {
        throw std::invalid_argument("eigenvalue magnitudes must satisfy 0 < min <= max");
    }
    const double window = std::ldexp(1.0, static_cast<int>(plan.n_qpe));
    const double guard = std::min(static_cast<double>(kPhaseGuardSteps), std::floor(window / 8.0));
    // Tiny slack so that kappa exactly equal to an integer ratio is not
    // floored one step short by rounding.
    auto grid = [&](double top) { return std::floor(min_abs / max_abs * top * (1.0 + 1e-12)); };
    double m = grid(window - 1.0 - guard);
    if (m < 1.0) {
        m = grid(window - 1.0);
    }
    if (m < 1.0) {
        throw PrecisionError("phase register of " + std::to_string(plan.n_qpe) +
                             " bits cannot resolve condition number " + std::to_string(max_abs / min_abs));
    }
    const double steps = std::ldexp(1.0, static_cast<int>(plan.phase_width()));
    plan.eigen_scale = m / (steps * min_abs);
    plan.c_const = m / steps;
    plan.min_grid = static_cast<std::size_t>(m);
    plan.max_grid = m * max_abs / min_abs;
    plan.evolution_time = 2.0 * kPi;
}

ResourcePlan estimate_resources(std::size_t dimension, double kappa, bool negatives, bool table1_convention) {
    if (!is_power_of_two(dimension)) {
        throw std::invalid_argument("dimension " + std::to_string(dimension) + " is not a power of two");
    }
    if (!(kappa >= 1.0)) {
        throw std::invalid_argument("condition number must be >= 1");
    }
    ResourcePlan p;
    p.n_data = log2_floor(dimension);
    p.n_qpe = formula_n_qpe(p.n_data, kappa) + (table1_convention ? 1 : 0);
    p.n_neg_val = negatives ? 1 : 0;
    p.n_total = p.n_data + p.n_qpe + p.n_neg_val;
    p.condition_number = kappa;
    p.table1_convention = table1_convention;
    apply_scaling(p, 1.0, kappa);
    return p;
}

Spectrum spectrum_of(const CMatrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    const RVector mags = s.eigenvalues.cwiseAbs();
    s.min_abs = mags.minCoeff();
    s.max_abs = mags.maxCoeff();
    s.has_negative = s.eigenvalues.minCoeff() < 0.0;
    if (s.max_abs == 0.0 || s.min_abs <= 1e-12 * s.max_abs) {
        throw SingularMatrixError("matrix has a zero eigenvalue");
    }
    return s;
}

ResourcePlan plan_for_matrix(const CMatrix &hermitian, const PlanOptions &options) {
    const auto dim = static_cast<std::size_t>(hermitian.rows());
    const Spectrum s = spectrum_of(hermitian);
    ResourcePlan p;
    p.n_data = log2_floor(dim);
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    p.n_qpe = options.n_qpe ? *options.n_qpe
                            : formula_n_qpe(p.n_data, s.condition_number()) + (options.table1_convention ? 1 : 0);
    if (p.n_qpe == 0) {
        throw std::invalid_argument("n_qpe must be positive");
    }
    p.n_neg_val = s.has_negative ? 1 : 0;
    p.n_total = p.n_data + p.n_qpe + p.n_neg_val;
    p.condition_number = s.condition_number();
    p.table1_convention = options.table1_convention;
    apply_scaling(p, s.min_abs, s.max_abs);
    return p;
}

} // namespace gridqls::hhl
