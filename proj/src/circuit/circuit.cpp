#include "gridqls/circuit/circuit.hpp"

#include <stdexcept>

namespace gridqls::circuit {

Circuit::Circuit(std::size_t width, std::string name) : width_(width), name_(std::move(name)) {
    if (width == 0) {
        throw std::invalid_argument("circuit width must be at least 1");
    }
}

Circuit &Circuit::append(Gate gate) {
    for (auto q : gate.qubits()) {
        if (q >= width_) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for width " +
                                    std::to_string(width_));
        }
    }
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit &Circuit::append(const Circuit &other, const std::vector<Qubit> &mapping) {
    if (mapping.size() != other.width()) {
        throw std::invalid_argument("qubit mapping must cover the appended circuit's width");
    }
    for (const auto &g : other.gates()) {
        append(g.remapped(mapping));
    }
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.width() > width_) {
        throw std::invalid_argument("appended circuit is wider than the target");
    }
    for (const auto &g : other.gates()) {
        append(g);
    }
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit out(width_, name_.empty() ? std::string{} : name_ + "_dg");
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        out.gates_.push_back(adjoint(*it));
    }
    return out;
}

std::array<std::size_t, 3> Circuit::arity_histogram() const {
    std::array<std::size_t, 3> h{0, 0, 0};
    for (const auto &g : gates_) {
        ++h[std::min<std::size_t>(g.arity(), 3) - 1];
    }
    return h;
}

namespace {

// Replace, in every row index r, the bits at `qubits` by the local index l.
struct LocalIndexer {
    std::vector<std::size_t> masks;
    std::size_t clear_mask = 0;

    explicit LocalIndexer(const std::vector<Qubit> &qubits) {
        for (auto q : qubits) {
            masks.push_back(std::size_t{1} << q);
            clear_mask |= std::size_t{1} << q;
        }
    }
    std::size_t local(std::size_t r) const {
        std::size_t l = 0;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            if (r & masks[i]) {
                l |= std::size_t{1} << i;
            }
        }
        return l;
    }
    std::size_t with_local(std::size_t r, std::size_t l) const {
        std::size_t out = r & ~clear_mask;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            if (l & (std::size_t{1} << i)) {
                out |= masks[i];
            }
        }
        return out;
    }
};

} // namespace

CMatrix embed(const CMatrix &gate, const std::vector<Qubit> &qubits, std::size_t width) {
    const std::size_t dim = std::size_t{1} << width;
    const LocalIndexer idx(qubits);
    CMatrix full = CMatrix::Zero(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const auto lr = idx.local(r);
        for (Eigen::Index lc = 0; lc < gate.cols(); ++lc) {
            full(r, idx.with_local(r, lc)) = gate(lr, lc);
        }
    }
    return full;
}

CMatrix circuit_unitary(const Circuit &circuit) {
    if (circuit.width() > kMaxUnitaryWidth) {
        throw std::invalid_argument("circuit_unitary supports width <= " + std::to_string(kMaxUnitaryWidth));
    }
    const std::size_t dim = std::size_t{1} << circuit.width();
    CMatrix u = CMatrix::Identity(dim, dim);
    CMatrix next(dim, dim);
    for (const auto &g : circuit.gates()) {
        const CMatrix m = gate_matrix(g);
        const LocalIndexer idx(g.qubits());
        for (std::size_t r = 0; r < dim; ++r) {
            const auto lr = idx.local(r);
            next.row(r).setZero();
            for (Eigen::Index lc = 0; lc < m.cols(); ++lc) {
                const cplx v = m(lr, lc);
                if (v != cplx{0.0, 0.0}) {
                    next.row(r) += v * u.row(idx.with_local(r, lc));
                }
            }
        }
        u.swap(next);
    }
    return u;
}

double distance_up_to_phase(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shapes differ");
    }
    const cplx overlap = (b.adjoint() * a).trace();
    const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    const CMatrix d = a - phase * b;
    if (d.rows() <= 256) {
        Eigen::JacobiSVD<CMatrix> svd(d);
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    return d.norm();
}

double distance_up_to_phase(const CVector &a, const CVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector sizes differ");
    }
    const cplx overlap = b.dot(a);
    const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    return (a - phase * b).norm();
}

} // namespace gridqls::circuit
