#include "gridqls/circuit/gate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gridqls::circuit {

namespace {

struct KindInfo {
    GateKind kind;
    std::string_view name;
    std::size_t arity;
    std::size_t params;
};

constexpr std::array<KindInfo, 18> kKinds{{
    {GateKind::H, "H", 1, 0},
    {GateKind::X, "X", 1, 0},
    {GateKind::Y, "Y", 1, 0},
    {GateKind::Z, "Z", 1, 0},
    {GateKind::S, "S", 1, 0},
    {GateKind::Sdg, "SDG", 1, 0},
    {GateKind::T, "T", 1, 0},
    {GateKind::Tdg, "TDG", 1, 0},
    {GateKind::RX, "RX", 1, 1},
    {GateKind::RY, "RY", 1, 1},
    {GateKind::RZ, "RZ", 1, 1},
    {GateKind::Phase, "P", 1, 1},
    {GateKind::U3, "U3", 1, 3},
    {GateKind::CX, "CX", 2, 0},
    {GateKind::CZ, "CZ", 2, 0},
    {GateKind::CPhase, "CP", 2, 1},
    {GateKind::SWAP, "SWAP", 2, 0},
    {GateKind::Unitary, "UNITARY", 0, 0},
}};

const KindInfo &info(GateKind kind) {
    return kKinds[static_cast<std::size_t>(kind)];
}

void check_distinct(const std::vector<Qubit> &qubits) {
    auto sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("gate qubit indices must be distinct");
    }
}

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

std::string_view kind_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> kind_from_name(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (const auto &k : kKinds) {
        if (k.name == upper) {
            return k.kind;
        }
    }
    return std::nullopt;
}

std::size_t kind_arity(GateKind kind) { return info(kind).arity; }
std::size_t kind_param_count(GateKind kind) { return info(kind).params; }

Gate::Gate(GateKind kind, std::vector<Qubit> qubits, std::vector<double> params)
    : kind_(kind), qubits_(std::move(qubits)), params_(std::move(params)) {
    if (kind == GateKind::Unitary) {
        throw std::invalid_argument("dense gates must be built with Gate::unitary");
    }
    if (qubits_.size() != kind_arity(kind)) {
        throw std::invalid_argument(std::string(kind_name(kind)) + " acts on " +
                                    std::to_string(kind_arity(kind)) + " qubit(s), got " +
                                    std::to_string(qubits_.size()));
    }
    if (params_.size() != kind_param_count(kind)) {
        throw std::invalid_argument(std::string(kind_name(kind)) + " takes " +
                                    std::to_string(kind_param_count(kind)) + " parameter(s), got " +
                                    std::to_string(params_.size()));
    }
    check_distinct(qubits_);
}

Gate Gate::unitary(std::vector<Qubit> qubits, CMatrix matrix) {
    if (qubits.empty()) {
        throw std::invalid_argument("dense gate needs at least one qubit");
    }
    check_distinct(qubits);
    const auto dim = std::size_t{1} << qubits.size();
    if (static_cast<std::size_t>(matrix.rows()) != dim || static_cast<std::size_t>(matrix.cols()) != dim) {
        throw std::invalid_argument("dense gate on " + std::to_string(qubits.size()) + " qubit(s) needs a " +
                                    std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    }
    if (unitarity_defect(matrix) > 1e-10) {
        throw std::invalid_argument("dense gate matrix is not unitary within 1e-10");
    }
    Gate g;
    g.kind_ = GateKind::Unitary;
    g.qubits_ = std::move(qubits);
    g.matrix_ = std::make_shared<const CMatrix>(std::move(matrix));
    return g;
}

const CMatrix &Gate::dense() const {
    if (!matrix_) {
        throw std::logic_error("gate has no dense matrix");
    }
    return *matrix_;
}

Gate Gate::remapped(const std::vector<Qubit> &mapping) const {
    Gate g = *this;
    for (auto &q : g.qubits_) {
        if (q >= mapping.size()) {
            throw std::out_of_range("qubit mapping too short");
        }
        q = mapping[q];
    }
    check_distinct(g.qubits_);
    return g;
}

bool operator==(const Gate &a, const Gate &b) {
    if (a.kind_ != b.kind_ || a.qubits_ != b.qubits_ || a.params_ != b.params_) {
        return false;
    }
    if (a.matrix_ == b.matrix_) {
        return true;
    }
    return a.matrix_ && b.matrix_ && *a.matrix_ == *b.matrix_;
}

double unitarity_defect(const CMatrix &u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    const CMatrix d = u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

CMatrix gate_matrix(const Gate &gate) {
    const cplx i{0.0, 1.0};
    const double r2 = 1.0 / std::sqrt(2.0);
    const auto &p = gate.params();
    switch (gate.kind()) {
    case GateKind::H:
        return mat2(r2, r2, r2, -r2);
    case GateKind::X:
        return mat2(0, 1, 1, 0);
    case GateKind::Y:
        return mat2(0, -i, i, 0);
    case GateKind::Z:
        return mat2(1, 0, 0, -1);
    case GateKind::S:
        return mat2(1, 0, 0, i);
    case GateKind::Sdg:
        return mat2(1, 0, 0, -i);
    case GateKind::T:
        return mat2(1, 0, 0, std::polar(1.0, kPi / 4));
    case GateKind::Tdg:
        return mat2(1, 0, 0, std::polar(1.0, -kPi / 4));
    case GateKind::RX: {
        const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
        return mat2(c, -i * s, -i * s, c);
    }
    case GateKind::RY: {
        const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
        return mat2(c, -s, s, c);
    }
    case GateKind::RZ:
        return mat2(std::polar(1.0, -p[0] / 2), 0, 0, std::polar(1.0, p[0] / 2));
    case GateKind::Phase:
        return mat2(1, 0, 0, std::polar(1.0, p[0]));
    case GateKind::U3: {
        const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
        return mat2(c, -std::polar(s, p[2]), std::polar(s, p[1]), std::polar(c, p[1] + p[2]));
    }
    case GateKind::CX: {
        // control is bit 0: swap |c=1,t=0> (index 1) with |c=1,t=1> (index 3)
        CMatrix m = CMatrix::Zero(4, 4);
        m(0, 0) = 1;
        m(2, 2) = 1;
        m(3, 1) = 1;
        m(1, 3) = 1;
        return m;
    }
    case GateKind::CZ: {
        CMatrix m = CMatrix::Identity(4, 4);
        m(3, 3) = -1;
        return m;
    }
    case GateKind::CPhase: {
        CMatrix m = CMatrix::Identity(4, 4);
        m(3, 3) = std::polar(1.0, p[0]);
        return m;
    }
    case GateKind::SWAP: {
        CMatrix m = CMatrix::Zero(4, 4);
        m(0, 0) = 1;
        m(3, 3) = 1;
        m(1, 2) = 1;
        m(2, 1) = 1;
        return m;
    }
    case GateKind::Unitary:
        return gate.dense();
    }
    throw std::logic_error("unknown gate kind");
}

Gate adjoint(const Gate &gate) {
    const auto &q = gate.qubits();
    const auto &p = gate.params();
    switch (gate.kind()) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::SWAP:
        return gate;
    case GateKind::S:
        return {GateKind::Sdg, q};
    case GateKind::Sdg:
        return {GateKind::S, q};
    case GateKind::T:
        return {GateKind::Tdg, q};
    case GateKind::Tdg:
        return {GateKind::T, q};
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Phase:
    case GateKind::CPhase:
        return {gate.kind(), q, {-p[0]}};
    case GateKind::U3:
        return {GateKind::U3, q, {-p[0], -p[2], -p[1]}};
    case GateKind::Unitary:
        return Gate::unitary(q, gate.dense().adjoint());
    }
    throw std::logic_error("unknown gate kind");
}

} // namespace gridqls::circuit
