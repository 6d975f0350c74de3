#include "gridqls/hhl/hhl.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gridqls/circuit/synthesis.hpp"
#include "gridqls/error.hpp"

namespace gridqls::hhl {

using circuit::Gate;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

Circuit build_state_prep(const CVector &b) {
    const auto dim = static_cast<std::size_t>(b.size());
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("state length " + std::to_string(dim) + " is not a power of two");
    }
    if (std::abs(b.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("state to prepare is not normalised (norm " + std::to_string(b.norm()) + ")");
    }
    const std::size_t n = log2_floor(dim);
    Circuit c(std::max<std::size_t>(n, 1), "state_prep");
    if (n == 0) {
        if (std::arg(b(0)) != 0.0) {
            c.append(Gate::unitary({0}, CMatrix{{b(0), 0.0}, {0.0, std::conj(b(0))}}));
        }
        return c;
    }

    const bool real = b.imag().cwiseAbs().maxCoeff() == 0.0;
    // Signed magnitudes on the last level; plain norms above it.
    RVector leaf(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        leaf(i) = real ? b(i).real() : std::abs(b(i));
    }
    // norms[t][j]: norm of the block of amplitudes whose index >> t == j.
    std::vector<RVector> norms(n + 1);
    norms[0] = leaf.cwiseAbs();
    for (std::size_t t = 1; t <= n; ++t) {
        const std::size_t blocks = dim >> t;
        norms[t].resize(blocks);
        for (std::size_t j = 0; j < blocks; ++j) {
            norms[t](j) = std::hypot(norms[t - 1](2 * j), norms[t - 1](2 * j + 1));
        }
    }

    for (std::size_t t = n; t-- > 0;) {
        const std::size_t blocks = dim >> (t + 1);
        std::vector<double> angles(blocks);
        for (std::size_t j = 0; j < blocks; ++j) {
            const double a0 = t == 0 ? leaf(2 * j) : norms[t](2 * j);
            const double a1 = t == 0 ? leaf(2 * j + 1) : norms[t](2 * j + 1);
            angles[j] = (a0 == 0.0 && a1 == 0.0) ? 0.0 : 2.0 * std::atan2(a1, a0);
        }
        std::vector<Qubit> controls;
        for (std::size_t q = t + 1; q < n; ++q) {
            controls.push_back(q);
        }
        if (controls.empty()) {
            c.append(Gate::ry(t, angles[0]));
        } else {
            circuit::append_uniformly_controlled_ry(c, controls, t, angles);
        }
    }

    if (!real) {
        CMatrix d = CMatrix::Zero(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            d(i, i) = std::abs(b(i)) == 0.0 ? cplx{1.0, 0.0} : b(i) / std::abs(b(i));
        }
        std::vector<Qubit> all(n);
        for (std::size_t q = 0; q < n; ++q) {
            all[q] = q;
        }
        c.append(Gate::unitary(all, d));
    }
    return c;
}

Circuit build_qft(std::size_t n) {
    Circuit c(n, "qft");
    for (std::size_t j = n; j-- > 0;) {
        c.append(Gate::h(j));
        for (std::size_t m = j; m-- > 0;) {
            c.append(Gate::cphase(m, j, kPi / std::ldexp(1.0, static_cast<int>(j - m))));
        }
    }
    for (std::size_t i = 0; i < n / 2; ++i) {
        c.append(Gate::swap(i, n - 1 - i));
    }
    return c;
}

Circuit build_iqft(std::size_t n) {
    Circuit c = build_qft(n).inverse();
    c.set_name("iqft");
    return c;
}

Circuit build_qpe(const CMatrix &matrix, const ResourcePlan &plan) {
    const auto dim = static_cast<std::size_t>(matrix.rows());
    if (matrix.rows() != matrix.cols() || dim != plan.dimension()) {
        throw std::invalid_argument("matrix dimension does not match the plan's data register");
    }
    if (!prep::is_hermitian(matrix)) {
        throw std::invalid_argument("phase estimation needs a Hermitian matrix");
    }
    const std::size_t pw = plan.phase_width();
    Circuit c(plan.n_data + pw, "qpe");
    const auto phase = plan.phase_qubits();
    for (auto q : phase) {
        c.append(Gate::h(q));
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix);
    const CMatrix &v = es.eigenvectors();
    const RVector &lam = es.eigenvalues();
    std::vector<Qubit> targets = plan.data_qubits();
    for (std::size_t j = 0; j < pw; ++j) {
        // Phase of U^(2^j) per eigenvalue, reduced to one turn first so the
        // large powers do not lose digits.
        CVector diag(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            double turns = lam(i) * plan.eigen_scale * plan.evolution_time / (2.0 * kPi) * std::ldexp(1.0, int(j));
            turns -= std::floor(turns);
            diag(i) = std::polar(1.0, 2.0 * kPi * turns);
        }
        const CMatrix u = v * diag.asDiagonal() * v.adjoint();
        CMatrix cu = CMatrix::Identity(2 * dim, 2 * dim);
        cu.bottomRightCorner(dim, dim) = u;
        std::vector<Qubit> qs = targets;
        qs.push_back(phase[j]);
        c.append(Gate::unitary(qs, cu));
    }

    const Circuit iqft = build_iqft(pw);
    c.append(iqft, phase);
    return c;
}

std::vector<double> inversion_angles(const ResourcePlan &plan) {
    const std::size_t steps = std::size_t{1} << plan.phase_width();
    std::vector<double> angles(steps, 0.0);
    for (std::size_t k = 1; k < steps; ++k) {
        double lt = static_cast<double>(k) / static_cast<double>(steps);
        if (plan.n_neg_val && k >= steps / 2) {
            lt -= 1.0;
        }
        angles[k] = 2.0 * std::asin(std::clamp(plan.c_const / lt, -1.0, 1.0));
    }
    return angles;
}

Circuit build_inversion(const ResourcePlan &plan, bool decomposed) {
    Circuit c(plan.width(), "inversion");
    const auto angles = inversion_angles(plan);
    const auto phase = plan.phase_qubits();
    const Qubit anc = plan.ancilla_qubit();
    if (decomposed) {
        circuit::append_uniformly_controlled_ry(c, phase, anc, angles);
    } else {
        std::vector<Qubit> qs{anc};
        qs.insert(qs.end(), phase.begin(), phase.end());
        c.append(Gate::unitary(qs, circuit::uniformly_controlled_ry_matrix(angles)));
    }
    return c;
}

Circuit build_hhl_circuit(const CMatrix &matrix, const CVector &b_unit, const ResourcePlan &plan,
                          bool decompose_inversion) {
    if (static_cast<std::size_t>(b_unit.size()) != plan.dimension()) {
        throw std::invalid_argument("rhs length does not match the plan's data register");
    }
    Circuit c(plan.width(), "hhl");
    const auto data = plan.data_qubits();
    if (plan.n_data > 0) {
        c.append(build_state_prep(b_unit), data);
    }
    const Circuit qpe = build_qpe(matrix, plan);
    c.append(qpe);
    c.append(build_inversion(plan, decompose_inversion));
    c.append(qpe.inverse());
    return c;
}

HHLCircuit build_hhl_circuit(const prep::PreparedSystem &system, const HHLOptions &options) {
    PlanOptions po;
    po.n_qpe = options.n_qpe;
    po.table1_convention = options.table1_convention;
    ResourcePlan plan = plan_for_matrix(system.matrix, po);
    if (plan.width() > options.max_qubits) {
        throw std::invalid_argument("HHL circuit needs " + std::to_string(plan.width()) + " qubits, limit is " +
                                    std::to_string(options.max_qubits));
    }
    const bool decompose =
        options.decompose_inversion.value_or(plan.phase_width() + plan.ancilla > kMaxDenseInversionQubits);
    Circuit c = build_hhl_circuit(system.matrix, system.b_normalized, plan, decompose);
    return {std::move(c), plan};
}

std::pair<CVector, double> success_branch(const svsim::StateVector &state, const ResourcePlan &plan) {
    const std::size_t dim = plan.dimension();
    const std::size_t offset = std::size_t{1} << plan.ancilla_qubit();
    CVector d(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        d(i) = state[offset + i];
    }
    const double p = d.squaredNorm();
    if (p <= 1e-24) {
        throw PrecisionError("HHL success branch has vanishing probability");
    }
    return {d / std::sqrt(p), p};
}

HHLSolution solve(const prep::PreparedSystem &system, const HHLOptions &options) {
    HHLSolution sol;
    auto t0 = std::chrono::steady_clock::now();
    HHLCircuit built = build_hhl_circuit(system, options);
    sol.circuit_generation_seconds = seconds_since(t0);
    sol.plan = built.plan;

    Circuit to_run = std::move(built.circuit);
    if (options.fuse) {
        t0 = std::chrono::steady_clock::now();
        auto fused = fusion::fuse(to_run);
        sol.fusion_seconds = seconds_since(t0);
        sol.fusion = fused.report;
        to_run = std::move(fused.circuit);
    }
    sol.gate_count = to_run.size();

    t0 = std::chrono::steady_clock::now();
    const svsim::StateVector state = svsim::run(to_run, options.max_qubits);
    sol.simulation_seconds = seconds_since(t0);

    const std::array<Qubit, 1> anc{sol.plan.ancilla_qubit()};
    sol.success_probability = svsim::marginal_probabilities(state, anc)[1];
    auto [data, p] = success_branch(state, sol.plan);
    sol.data_state = std::move(data);
    sol.solution_probability = p;
    const auto rec = prep::recover_solution(system, sol.data_state, p, sol.plan.rotation_constant());
    sol.x = rec.x;
    sol.x_norm = rec.x_norm;
    return sol;
}

} // namespace gridqls::hhl
