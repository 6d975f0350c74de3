#include "gridqls/circuit/synthesis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace gridqls::circuit {

namespace {

constexpr double kEps = 1e-14;

bool is_zero_angle(double a) { return std::abs(a) < kEps; }

void emit_rz(Circuit &out, Qubit q, double a) {
    if (!is_zero_angle(a)) {
        out.append(Gate::rz(q, a));
    }
}

void emit_ry(Circuit &out, Qubit q, double a) {
    if (!is_zero_angle(a)) {
        out.append(Gate::ry(q, a));
    }
}

bool is_pauli_x(const CMatrix &u) {
    return std::abs(u(0, 0)) < kEps && std::abs(u(1, 1)) < kEps && std::abs(u(0, 1) - 1.0) < kEps &&
           std::abs(u(1, 0) - 1.0) < kEps;
}

bool is_identity(const CMatrix &u, double tol = 1e-13) {
    return (u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < tol;
}

// controlled-u with one positive control, exact including phase
void append_controlled(Circuit &out, Qubit control, Qubit target, const CMatrix &u) {
    if (is_pauli_x(u)) {
        out.append(Gate::cx(control, target));
        return;
    }
    const auto [alpha, beta, gamma, delta] = zyz_decompose(u);
    emit_rz(out, target, (delta - beta) / 2);                  // C
    out.append(Gate::cx(control, target));
    emit_rz(out, target, -(delta + beta) / 2);                 // B
    emit_ry(out, target, -gamma / 2);
    out.append(Gate::cx(control, target));
    emit_ry(out, target, gamma / 2);                           // A
    emit_rz(out, target, beta);
    if (!is_zero_angle(alpha)) {
        out.append(Gate::phase(control, alpha));
    }
}

void append_positive_controlled(Circuit &out, std::span<const Qubit> controls, Qubit target, const CMatrix &u) {
    if (controls.empty()) {
        if (!is_identity(u)) {
            // top-level one-qubit gate: only a global phase is dropped
            out.append(u3_from_matrix(target, u));
        }
        return;
    }
    if (controls.size() == 1) {
        append_controlled(out, controls[0], target, u);
        return;
    }
    const CMatrix v = unitary_sqrt(u);
    const Qubit last = controls.back();
    const auto rest = controls.first(controls.size() - 1);
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    append_controlled(out, last, target, v);
    append_positive_controlled(out, rest, last, x);
    append_controlled(out, last, target, v.adjoint());
    append_positive_controlled(out, rest, last, x);
    append_positive_controlled(out, rest, target, v);
}

} // namespace

ZYZ zyz_decompose(const CMatrix &u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw std::invalid_argument("zyz_decompose needs a 2x2 matrix");
    }
    const double alpha = std::arg(u.determinant()) / 2;
    const CMatrix w = std::polar(1.0, -alpha) * u;
    const double gamma = 2 * std::atan2(std::abs(w(1, 0)), std::abs(w(0, 0)));
    const double sum = std::abs(w(1, 1)) > kEps ? 2 * std::arg(w(1, 1)) : 0.0;
    const double diff = std::abs(w(1, 0)) > kEps ? 2 * std::arg(w(1, 0)) : 0.0;
    return {alpha, (sum + diff) / 2, gamma, (sum - diff) / 2};
}

Gate u3_from_matrix(Qubit q, const CMatrix &u) {
    const auto z = zyz_decompose(u);
    return Gate::u3(q, z.gamma, z.beta, z.delta);
}

CMatrix unitary_sqrt(const CMatrix &u) {
    Eigen::ComplexSchur<CMatrix> schur(u);
    const CMatrix &t = schur.matrixT();
    CMatrix d = CMatrix::Zero(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        d(i, i) = std::sqrt(t(i, i));
    }
    return schur.matrixU() * d * schur.matrixU().adjoint();
}

void append_multi_controlled(Circuit &out, std::span<const Control> controls, Qubit target, const CMatrix &u) {
    std::vector<Qubit> positive;
    positive.reserve(controls.size());
    for (const auto &c : controls) {
        if (!c.value) {
            out.append(Gate::x(c.qubit));
        }
        positive.push_back(c.qubit);
    }
    append_positive_controlled(out, positive, target, u);
    for (const auto &c : controls) {
        if (!c.value) {
            out.append(Gate::x(c.qubit));
        }
    }
}

void append_uniformly_controlled_ry(Circuit &out, std::span<const Qubit> controls, Qubit target,
                                    std::span<const double> angles) {
    const std::size_t k = controls.size();
    const std::size_t m = std::size_t{1} << k;
    if (angles.size() != m) {
        throw std::invalid_argument("uniformly controlled RY needs 2^k angles");
    }
    if (k == 0) {
        emit_ry(out, target, angles[0]);
        return;
    }
    auto gray = [](std::size_t i) { return i ^ (i >> 1); };
    for (std::size_t i = 0; i < m; ++i) {
        double theta = 0.0;
        const auto g = gray(i);
        for (std::size_t j = 0; j < m; ++j) {
            theta += (std::popcount(j & g) % 2 ? -1.0 : 1.0) * angles[j];
        }
        theta /= static_cast<double>(m);
        emit_ry(out, target, theta);
        const auto changed = g ^ gray((i + 1) % m);
        out.append(Gate::cx(controls[std::countr_zero(changed)], target));
    }
}

CMatrix uniformly_controlled_ry_matrix(std::span<const double> angles) {
    const auto m = static_cast<Eigen::Index>(angles.size());
    CMatrix u = CMatrix::Zero(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double c = std::cos(angles[j] / 2), s = std::sin(angles[j] / 2);
        u(2 * j, 2 * j) = c;
        u(2 * j, 2 * j + 1) = -s;
        u(2 * j + 1, 2 * j) = s;
        u(2 * j + 1, 2 * j + 1) = c;
    }
    return u;
}

namespace {

struct TwoLevel {
    std::size_t i;
    std::size_t j;
    CMatrix g; // acts on basis (|i>, |j>)
};

void apply_rows(CMatrix &w, const TwoLevel &op) {
    const Eigen::RowVectorXcd ri = w.row(op.i);
    const Eigen::RowVectorXcd rj = w.row(op.j);
    w.row(op.i) = op.g(0, 0) * ri + op.g(0, 1) * rj;
    w.row(op.j) = op.g(1, 0) * ri + op.g(1, 1) * rj;
}

std::vector<Control> controls_except(const std::vector<Qubit> &qubits, std::size_t reference, std::size_t bit) {
    std::vector<Control> cs;
    for (std::size_t b = 0; b < qubits.size(); ++b) {
        if (b != bit) {
            cs.push_back({qubits[b], ((reference >> b) & 1U) != 0});
        }
    }
    return cs;
}

void emit_two_level(Circuit &out, const std::vector<Qubit> &qubits, std::size_t i, std::size_t j, const CMatrix &v) {
    std::vector<std::size_t> path{i};
    std::size_t cur = i;
    for (std::size_t b = 0; b < qubits.size(); ++b) {
        const std::size_t mask = std::size_t{1} << b;
        if ((cur ^ j) & mask) {
            cur ^= mask;
            path.push_back(cur);
        }
    }
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const std::size_t last = path.size() - 1;
    auto swap_step = [&](std::size_t k) {
        const std::size_t bit = static_cast<std::size_t>(std::countr_zero(path[k] ^ path[k + 1]));
        const auto cs = controls_except(qubits, path[k], bit);
        append_multi_controlled(out, cs, qubits[bit], x);
    };
    for (std::size_t k = 0; k + 1 < last; ++k) {
        swap_step(k);
    }
    const std::size_t from = path[last - 1];
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(from ^ j));
    const auto cs = controls_except(qubits, j, bit);
    const CMatrix gate = ((from >> bit) & 1U) == 0 ? v : CMatrix(x * v * x);
    append_multi_controlled(out, cs, qubits[bit], gate);
    for (std::size_t k = last - 1; k-- > 0;) {
        swap_step(k);
    }
}

} // namespace

void append_two_level_decomposition(Circuit &out, const std::vector<Qubit> &qubits, const CMatrix &u) {
    const std::size_t d = std::size_t{1} << qubits.size();
    if (static_cast<std::size_t>(u.rows()) != d || static_cast<std::size_t>(u.cols()) != d) {
        throw std::invalid_argument("matrix size does not match qubit count");
    }
    if (qubits.size() == 1) {
        if (is_identity(u)) {
            return;
        }
        const Qubit q = qubits[0];
        const ZYZ e = zyz_decompose(u);
        out.append(Gate::rz(q, e.delta)).append(Gate::ry(q, e.gamma)).append(Gate::rz(q, e.beta));
        if (std::abs(e.alpha) > kEps) {
            // P(a) X P(a) X = e^{ia} I
            out.append(Gate::phase(q, e.alpha)).append(Gate::x(q)).append(Gate::phase(q, e.alpha)).append(Gate::x(q));
        }
        return;
    }
    CMatrix w = u;
    std::vector<TwoLevel> ops;
    auto push = [&](TwoLevel op) {
        apply_rows(w, op);
        ops.push_back(std::move(op));
    };
    for (std::size_t c = 0; c + 1 < d; ++c) {
        for (std::size_t r = d - 1; r > c; --r) {
            const cplx b = w(r, c);
            if (std::abs(b) < kEps) {
                continue;
            }
            const cplx a = w(c, c);
            const double nrm = std::sqrt(std::norm(a) + std::norm(b));
            CMatrix g(2, 2);
            g << std::conj(a) / nrm, std::conj(b) / nrm, -b / nrm, a / nrm;
            push({c, r, g});
        }
        const cplx a = w(c, c);
        if (std::abs(a - 1.0) > kEps) {
            CMatrix g = CMatrix::Zero(2, 2);
            g(0, 0) = std::conj(a);
            g(1, 1) = a;
            push({c, c + 1, g});
        }
    }
    const cplx a = w(d - 1, d - 1);
    if (std::abs(a - 1.0) > kEps) {
        CMatrix g = CMatrix::Identity(2, 2);
        g(1, 1) = std::conj(a);
        push({d - 2, d - 1, g});
    }
    // G_m ... G_1 U = I, so U = G_1^dag ... G_m^dag: emit G_m^dag first.
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        emit_two_level(out, qubits, it->i, it->j, it->g.adjoint());
    }
}

} // namespace gridqls::circuit
